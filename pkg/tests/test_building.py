import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twinbuild.building import (
    apartment_check,
    foundation,
    project_to_residue,
    residue_of,
    residues,
    thickness_check,
    validate_building,
    weyl_distance,
)
from twinbuild.coxeter import CoxeterMatrix
from twinbuild.errors import AxiomViolation, InconsistentDistance, InvalidInput, PanelTooSmall

A1 = CoxeterMatrix(((1,),))
A2 = CoxeterMatrix.type_a(2)


def polygon(k):
    """k chambers in a cycle, edges alternately of type 0 and 1."""
    panels = [[], []]
    for i in range(k):
        panels[i % 2].append([i, (i + 1) % k])
    return panels


def test_single_panel():
    b = validate_building(A1, 3, [[[0, 1, 2]]])
    s = b.group.generator(0)
    for x, y in itertools.permutations(range(3), 2):
        assert weyl_distance(b, x, y) == s
    assert weyl_distance(b, 1, 1) == 0
    assert thickness_check(b)


def test_thin_hexagon_is_the_a2_apartment():
    b = validate_building(A2, 6, polygon(6))
    assert not thickness_check(b)
    assert apartment_check(b, range(6))
    assert sorted(b.dist[0]) == list(range(6))


@pytest.mark.parametrize("k", [4, 8, 12])
def test_wrong_polygons_fail(k):
    with pytest.raises(AxiomViolation):
        validate_building(A2, k, polygon(k))


def test_square_with_a2_matrix_is_inconsistent():
    with pytest.raises(InconsistentDistance) as e:
        validate_building(A2, 4, polygon(4))
    assert e.value.axiom == "Bu2"


def test_disconnected_chambers_fail_bu3():
    with pytest.raises(AxiomViolation) as e:
        validate_building(A1, 4, [[[0, 1], [2, 3]]])
    assert e.value.axiom == "Bu3"


def test_removed_panel_edge_fails_bu3(fano):
    panels = [[list(p) for p in parts] for parts in fano.panels]
    panels[0][0].remove(panels[0][0][0])
    with pytest.raises(PanelTooSmall) as e:
        validate_building(fano.group, fano.n, panels)
    assert e.value.axiom == "Bu3"
    assert e.value.witness is not None


def test_malformed_panels():
    with pytest.raises(InvalidInput):
        validate_building(A1, 3, [[[0, 1], [1, 2]]])
    with pytest.raises(InvalidInput):
        validate_building(A1, 3, [[[0, 1, 5]]])
    with pytest.raises(InvalidInput):
        validate_building(A1, 3, [[[0, 1, 2]], [[0, 1, 2]]])
    with pytest.raises(InvalidInput):
        validate_building(A1, 0, [[]])


def test_fano_distance_classes(fano):
    g = fano.group
    # flags sharing exactly one element are at length 1; the counts per length are 1, 4, 8, 8
    lengths = g.length[fano.dist[0]]
    assert np.bincount(lengths).tolist() == [1, 4, 8, 8]
    assert np.all(fano.dist.T == g.inverse[fano.dist])


def test_residues(pg32):
    x = 0
    assert residue_of(pg32, x, []).chambers == (x,)
    assert len(residue_of(pg32, x, [0, 1, 2]).chambers) == pg32.n
    assert len(residue_of(pg32, x, [0, 1]).chambers) == 21
    assert len(residue_of(pg32, x, [0, 2]).chambers) == 9
    assert sum(len(R.chambers) for R in residues(pg32, [1])) == pg32.n
    assert len(residues(pg32, [1])) == 105


def test_residues_are_buildings(fano, pg32):
    for b in (fano, pg32):
        for J in ([0], [0, 1], [1, 2] if b.rank > 2 else [1]):
            R = residue_of(b, 5, J)
            sub = R.as_building()
            assert sub.n == len(R.chambers)
            assert sub.rank == len(J)


def test_foundations(cube, pg32):
    assert foundation(cube, 0, 0) == (0,)
    assert len(foundation(cube, 0, 2)) == 19
    assert len(foundation(pg32, 0, 2)) == 43
    assert len(foundation(pg32, 0, 3)) == 315


def test_foundation_determines_its_centre(cube, fano):
    for b in (cube, fano):
        k = b.rank - 1
        seen = {foundation(b, x, k) for x in range(b.n)}
        assert len(seen) == b.n


def test_apartments(cube):
    thin = [x for x in range(cube.n) if all(v < 2 for v in np.unravel_index(x, (3, 3, 3)))]
    assert len(thin) == 8
    assert apartment_check(cube, thin)
    assert not apartment_check(cube, range(cube.n))
    assert not apartment_check(cube, thin[:-1])


def test_projection_onto_panels_is_a_gate(fano):
    g = fano.group
    mul = g.mul_table
    for s in range(fano.rank):
        for P in fano.panels[s]:
            R = residue_of(fano, P[0], [s])
            for x in range(fano.n):
                z = project_to_residue(fano, x, R)
                if x in P:
                    assert z == x
                for y in P:
                    assert fano.dist[x, y] == mul[fano.dist[x, z], fano.dist[z, y]]


@given(st.integers(0, 314), st.integers(0, 314), st.sampled_from([(0, 1), (1, 2), (0, 2)]))
def test_projection_onto_rank2_residues_brute_force(pg32, x, y, J):
    R = residue_of(pg32, y, J)
    z = project_to_residue(pg32, x, R)
    lens = pg32.group.length[pg32.dist[x, list(R.chambers)]]
    assert pg32.group.length[pg32.dist[x, z]] == lens.min()
    for u in R.chambers:
        assert pg32.group.length[pg32.dist[x, u]] == pg32.group.length[pg32.dist[x, z]] + pg32.group.length[pg32.dist[z, u]]
