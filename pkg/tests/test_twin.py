import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twinbuild.building import residue_of
from twinbuild.errors import AxiomViolation, InvalidInput, NotOpposite, TypeMismatch
from twinbuild.twin import (
    MINUS,
    PLUS,
    SPHERICAL_DOUBLE,
    codistance,
    cross_project,
    minus_half,
    opposite_residue_pairs,
    project,
    residue_opposition_check,
    twin_apartment_of,
    twin_axiom_scan,
    validate_twin,
)


def test_doubles_validate(panel3_double, fano_double, cube_double, pg32_double):
    for t in (panel3_double, fano_double, cube_double, pg32_double):
        assert twin_axiom_scan(t.plus, t.minus, t.pm, t.mp) is None
        assert t.rule == SPHERICAL_DOUBLE


def test_opposite_counts(panel3_double, fano_double, cube_double, pg32_double):
    assert all(t.opposites(x).size == 2 for t in [panel3_double] for x in range(3))
    assert all(fano_double.opposites(x).size == 8 for x in range(21))
    assert all(cube_double.opposites(x).size == 8 for x in range(27))
    assert pg32_double.opposites(0).size == 64


def test_codistance_examples(fano_double, pg32_double, rng):
    t = fano_double
    g = t.group
    w0 = g.w0
    for x in range(t.n_plus):
        assert codistance(t, x, t.glob(MINUS, x)) == w0
    x = 0
    y = int(t.opposites(x)[0])
    assert codistance(t, x, y) == 0
    assert codistance(t, y, x) == 0
    # a chamber is opposite its own copy exactly when the building distance is w0
    for a, b in itertools.product(range(21), repeat=2):
        assert (t.pm[a, b] == 0) == (t.plus.dist[a, b] == w0)
    t = pg32_double
    g = t.group
    for _ in range(50):
        a, b = (int(v) for v in rng.integers(315, size=2))
        # the minus half carries the panels twisted by w0, so the codistance is delta(a, b) w0 read in
        # the plus half's labelling
        assert t.pm[a, b] == g.multiply(int(t.plus.dist[a, b]), g.w0)


def test_tw1_and_opposition_symmetry(pg32_double):
    t = pg32_double
    g = t.group
    assert np.array_equal(t.mp, g.inverse[t.pm].T)
    opp = t.pm == 0
    assert np.array_equal(opp, (t.mp == 0).T)


def test_corrupted_costar_fails_tw1(fano_double):
    t = fano_double
    pm = t.pm.copy()
    pm[3, 5] = (pm[3, 5] + 1) % t.group.order
    with pytest.raises(AxiomViolation) as e:
        validate_twin(t.plus, t.minus, (pm, t.mp))
    assert e.value.axiom == "Tw1"
    assert e.value.witness == (3, t.n_plus + 5)


def test_untwisted_double_fails_tw2(fano):
    """Pairing a building with an identical copy by delta * w0 breaks (Tw2) unless w0 is central."""
    g = fano.group
    pm = g.mul_table[fano.dist, g.w0]
    mp = g.inverse[pm].T
    hit = twin_axiom_scan(fano, fano, pm, mp)
    assert hit is not None and hit[0] == "Tw2"


def test_rule_requires_twisted_minus(fano):
    with pytest.raises(InvalidInput):
        validate_twin(fano, fano, SPHERICAL_DOUBLE)
    t = validate_twin(fano, minus_half(fano), SPHERICAL_DOUBLE)
    assert t.n == 42


def test_merged_distance(cube_double):
    t = cube_double
    assert t.delta.shape == (54, 54)
    assert np.array_equal(t.delta[:27, :27], t.plus.dist)
    assert np.array_equal(t.delta[27:, 27:], t.minus.dist)
    assert np.array_equal(t.delta[:27, 27:], t.pm)


def test_cross_projection_onto_panels(fano_double):
    t = fano_double
    g = t.group
    for x in range(t.n_plus):
        for s in range(2):
            for P in t.minus.panels[s]:
                R = residue_of(t.minus, P[0], [s])
                z = cross_project(t, x, R)
                lens = g.length[t.pm[x, list(P)]]
                assert g.length[t.delta[x, z]] == lens.max()
                if (lens == 0).any():
                    assert t.delta[x, z] == g.generator(s)
    R = residue_of(t.minus, 4, [])
    assert cross_project(t, 0, R) == t.glob(MINUS, 4)
    with pytest.raises(InvalidInput):
        cross_project(t, 0, residue_of(t.plus, 4, [0]))


def test_twin_apartment_sizes(panel3_double, cube_double, pg32_double):
    for t, w in ((panel3_double, 2), (cube_double, 8), (pg32_double, 24)):
        x = 0
        y = int(t.opposites(x)[0])
        A = twin_apartment_of(t, x, y)
        assert len(A.plus) == len(A.minus) == w
        assert x in A.chambers and y in A.chambers
        sub = t.delta[np.ix_(A.chambers, A.chambers)]
        assert np.all((sub == 0).sum(axis=1) == 2)  # itself and its unique opposite
    with pytest.raises(NotOpposite):
        twin_apartment_of(cube_double, 0, cube_double.n_plus)


def test_opposite_panels_in_fano_double(fano_double):
    t = fano_double
    pairs = opposite_residue_pairs(t, [0])
    assert pairs
    for R, T in pairs:
        rep = residue_opposition_check(t, R, T)
        assert rep.passed, rep.failures
        assert len(rep.matching) == 3
    R, T = pairs[0]
    with pytest.raises(TypeMismatch):
        residue_opposition_check(t, R, residue_of(t.minus, T.chambers[0], [1]))


def test_singleton_residues(fano_double):
    t = fano_double
    y = int(t.opposites(0)[0]) - t.n_plus
    rep = residue_opposition_check(t, residue_of(t.plus, 0, []), residue_of(t.minus, y, []))
    assert rep.passed


def test_rank2_residues_in_pg32(pg32_double):
    t = pg32_double
    pairs = opposite_residue_pairs(t, [0, 1])
    assert len(pairs) == 15 * 8
    R, T = pairs[0]
    rep = residue_opposition_check(t, R, T)
    assert rep.passed and len(rep.matching) == 21
    # the matching realises codistance r_J
    rJ = t.group.longest([0, 1])
    assert all(t.delta[u, v] == rJ for u, v in rep.matching if t.sign(u) == PLUS)


def test_swapped(cube_double):
    s = cube_double.swapped()
    assert s.n_plus == cube_double.n_minus
    assert np.array_equal(s.pm, cube_double.mp)


@given(st.data())
def test_apartment_projection_closure(cube_double, data):
    """Projections of chambers of a twin apartment onto residues meeting it stay in it."""
    t = cube_double
    u = data.draw(st.integers(0, len(t.opp_pairs) - 1))
    a, b = t.opp_pairs[u]
    A = twin_apartment_of(t, int(a), int(b) + t.n_plus)
    z = data.draw(st.sampled_from(A.chambers))
    v = data.draw(st.sampled_from(A.chambers))
    J = data.draw(st.sampled_from([(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]))
    assert project(t, z, t.residue(v, J)) in A.chambers


@given(st.integers(0, 314), st.integers(0, 314), st.sampled_from([(0,), (1, 2), (0, 2)]))
def test_cross_projection_identity(pg32_double, x, y, J):
    """delta*(x, v) = delta*(x, proj x) delta(proj x, v) for every v of the residue."""
    t = pg32_double
    R = residue_of(t.minus, y, J)
    z = cross_project(t, x, R)
    ch = t.globals_of(R)
    g = t.group
    for v in ch:
        assert t.delta[x, v] == g.multiply(int(t.delta[x, z]), int(t.delta[z, v]))
