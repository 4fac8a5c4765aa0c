import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import base_pair, identity_local, identity_seed
from twinbuild.chamsys import find_gallery
from twinbuild.errors import (
    AdmissibilityFailure,
    DistanceViolation,
    DomainOverlap,
    HypothesisViolation,
    InvalidInput,
    NotInjective,
    NotOpposite,
    NotOppositeResidues,
    SignViolation,
)
from twinbuild.isom import (
    ExtensionStats,
    Transporter,
    admissible_check,
    build_phi_plus,
    check_isometry,
    cross_transport,
    enumerate_seeds,
    extend_foundation_pair,
    gallery_transport,
    identity_isometry,
    main_extension,
    make_isometry,
    pair_foundation,
    permutation_isometry,
    random_seed,
    seed_domain,
    step_extend,
    transport_family,
    union_isometries,
)
from twinbuild.retract import omega_retraction, pi_retraction, retraction_graph
from twinbuild.twin import project, twin_apartment_of
from twinbuild.workbench.catalog import collineation, random_invertible


@pytest.fixture(scope="module")
def cube_extension(cube_double):
    t = cube_double
    cbar = base_pair(t)
    rng = np.random.default_rng(7)
    a, b = t.opp_pairs[rng.integers(len(t.opp_pairs))]
    phi = random_seed(t, t, cbar, (int(a), int(b) + t.n_plus), rng)
    return main_extension(phi, cbar)


def test_make_isometry_errors(cube_double):
    t = cube_double
    assert len(make_isometry(t, t, {0: 0, 30: 30})) == 2
    with pytest.raises(NotInjective):
        make_isometry(t, t, [(0, 0), (0, 1)])
    with pytest.raises(NotInjective):
        make_isometry(t, t, [(0, 0), (1, 0)])
    with pytest.raises(SignViolation):
        make_isometry(t, t, [(0, 30)])
    with pytest.raises(DistanceViolation):
        # 0 and 1 are adjacent, 0 and 26 are not
        make_isometry(t, t, [(0, 0), (1, 26)])
    with pytest.raises(InvalidInput):
        make_isometry(t, t, [(0, 99)])


def test_admissibility(cube_double):
    t = cube_double
    phi = identity_isometry(t, [0, 1])
    assert admissible_check(phi, 2, 2)
    assert admissible_check(phi, 0, 0)
    assert not admissible_check(phi, 0, 2)
    assert not admissible_check(phi, 2, 29)
    assert not admissible_check(phi, 2, 26)


def test_union(cube_double):
    t = cube_double
    a = identity_isometry(t, [0, 1])
    b = identity_isometry(t, [2, 28])
    u = union_isometries(a, b)
    assert u.pairs() == [(0, 0), (1, 1), (2, 2), (28, 28)]
    with pytest.raises(DomainOverlap):
        union_isometries(a, identity_isometry(t, [1]))
    with pytest.raises(AdmissibilityFailure):
        union_isometries(a, make_isometry(t, t, [(2, 26)]))


def test_restrict_and_values(cube_double):
    t = cube_double
    phi = identity_isometry(t, range(10))
    assert len(phi.restrict([3, 4, 50])) == 2
    assert phi.values([4, 2]).tolist() == [4, 2]
    with pytest.raises(InvalidInput):
        phi.values([11])


def test_cross_transport_through_opposite_panels(cube_double):
    t = cube_double
    cbar = base_pair(t)
    phi = identity_local(t, cbar)
    cp, cm = cbar
    for s in range(3):
        R, T = t.residue(cp, [s]), t.residue(cm, [s])
        for x in t.globals_of(R):
            assert cross_transport(phi, int(x), R, T) == x
        with pytest.raises(NotOppositeResidues):
            cross_transport(phi, cp, R, t.residue(cp, [s]))


def test_extend_foundation_pair_of_identity(pg32_double):
    t = pg32_double
    cbar = base_pair(t)
    stats = ExtensionStats()
    out = extend_foundation_pair(identity_seed(t, cbar), cbar, stats)
    assert np.array_equal(out.dom, pair_foundation(t, cbar))
    assert np.array_equal(out.dom, out.img)
    assert stats.foundation_pair_solutions == 1
    with pytest.raises(InvalidInput):
        extend_foundation_pair(identity_isometry(t, [0]), cbar)
    with pytest.raises(NotOpposite):
        extend_foundation_pair(identity_seed(t, cbar), (0, t.n_plus))


def test_step_extend(cube_double):
    t = cube_double
    cbar = base_pair(t)
    phi = identity_local(t, cbar)
    u = t.opp_index[cbar[0], cbar[1] - t.n_plus]
    v = int(t.opp.neighbours(u)[0])
    a, b = t.opp_pairs[v]
    dbar = (int(a), int(b) + t.n_plus)
    psi = step_extend(phi, cbar, dbar)
    assert np.array_equal(psi.dom, pair_foundation(t, dbar))
    assert np.array_equal(psi.dom, psi.img)
    assert step_extend(phi, cbar, cbar) is phi
    far = next(w for w in range(t.opp.n) if w != u and not t.opp.is_adjacent(u, w))
    a, b = t.opp_pairs[far]
    with pytest.raises(InvalidInput):
        step_extend(phi, cbar, (int(a), int(b) + t.n_plus))


def test_gallery_transport(cube_double, rng):
    t = cube_double
    cbar = base_pair(t)
    phi = identity_local(t, cbar)
    root = int(t.opp_index[cbar[0], cbar[1] - t.n_plus])
    end, same = gallery_transport(phi, cbar, [])
    assert end == root and same == phi
    tr = Transporter(t, t)
    for _ in range(10):
        v = int(rng.integers(t.opp.n))
        G = find_gallery(t.opp, root, v)
        end, psi = gallery_transport(phi, cbar, G, tr)
        assert end == v
        back = G + G.inverse()
        end, psi = gallery_transport(phi, cbar, back, tr)
        assert end == root and psi == phi


def test_transport_is_path_independent_on_the_cube(cube_double, rng):
    t = cube_double
    cbar = base_pair(t)
    seed = random_seed(t, t, cbar, cbar, rng)
    phi = extend_foundation_pair(seed, cbar)
    root = int(t.opp_index[cbar[0], cbar[1] - t.n_plus])
    tr = Transporter(t, t)
    for _ in range(10):
        mid, v = (int(a) for a in rng.integers(t.opp.n, size=2))
        direct = find_gallery(t.opp, root, v)
        detour = find_gallery(t.opp, root, mid) + find_gallery(t.opp, mid, v)
        assert gallery_transport(phi, cbar, direct, tr)[1] == gallery_transport(phi, cbar, detour, tr)[1]


def test_transport_family_sizes(cube_double):
    t = cube_double
    cbar = base_pair(t)
    phi = identity_local(t, cbar)
    root = int(t.opp_index[cbar[0], cbar[1] - t.n_plus])
    fam = transport_family(phi, cbar, [root])
    assert len(fam) == 1 and fam.tree_edges == 0 and fam.non_tree_edges == 0
    sigma = twin_apartment_of(t, *cbar).minus
    G = retraction_graph(t, pi_retraction(t, cbar[1] - t.n_plus, sigma))
    fam = transport_family(phi, cbar, G.members)
    assert len(fam) == 27
    assert fam.tree_edges == 26
    # Pi is a copy of the plus half: 27 * 3 panels of three chambers give 81 edges
    assert fam.non_tree_edges == 81 - 26 == 55
    assert all(np.array_equal(fam.transporter.domain(u), im) for u, im in fam.images.items())
    phi_plus = build_phi_plus(fam, G.opp_ids)
    assert np.array_equal(phi_plus.img, np.arange(27))


def test_omega_family_of_a_collineation(fano_double):
    t = fano_double
    perm = collineation(3, 2, random_invertible(3, 2, np.random.default_rng(3)))
    full = np.concatenate([perm, perm + t.n_plus])
    cbar = base_pair(t)
    phi = permutation_isometry(t, t, full, pair_foundation(t, cbar))
    G = retraction_graph(t, omega_retraction(t, cbar[0], cbar[1] - t.n_plus))
    fam = transport_family(phi, cbar, G.members)
    for u in fam.images:
        iso = fam.isometry(u)
        assert np.array_equal(iso.img, full[iso.dom])


def test_main_extension_of_identity(cube_double):
    t = cube_double
    cbar = base_pair(t)
    res = main_extension(identity_seed(t, cbar), cbar)
    expect = np.union1d(np.arange(27), pair_foundation(t, cbar)[pair_foundation(t, cbar) >= 27])
    assert np.array_equal(res.isometry.dom, expect)
    assert np.array_equal(res.isometry.dom, res.isometry.img)
    r = res.report
    assert r["foundation_pair_solutions"] == 1 and r["step_solutions_max"] == 1
    assert r["validated_pairs"] == len(res.isometry) ** 2
    assert r["opposite_chambers_checked"] == 8
    assert set(r["timings"]) == {
        "hypotheses",
        "foundation-pair",
        "retraction",
        "transport-family",
        "glue-plus",
        "minus-agreement",
        "opposition-inclusion",
        "glue",
    }


def test_main_extension_of_a_random_seed(cube_double, cube_extension):
    t = cube_double
    res = cube_extension
    check_isometry(res.isometry)
    assert len(res.phi_plus) == 27
    assert len(res.isometry) == 27 + len(res.phi_minus)
    # opposition is preserved between the halves
    for z, zi in res.phi_minus.pairs():
        assert np.all(t.delta[res.phi_plus.values(t.opposites(z)), zi] == 0)


@settings(max_examples=40)
@given(st.integers(0, 26), st.integers(0, 26), st.sampled_from([(0,), (1,), (2,), (0, 1), (1, 2)]))
def test_isometries_commute_with_projections(cube_double, cube_extension, x, y, J):
    t = cube_double
    phi = cube_extension.phi_plus
    R = t.residue(y, J)
    Rp = t.residue(phi(y), J)
    assert phi(project(t, x, R)) == project(t, phi(x), Rp)


def test_isometry_fixing_a_seed_is_the_identity(pg32_double):
    """Agreement with the identity on E2(c+) and c- pins the whole map."""
    t = pg32_double
    cbar = base_pair(t, plus=17)
    seeds = enumerate_seeds(t, t, cbar, cbar)
    ident = identity_seed(t, cbar)
    assert ident in seeds
    out = extend_foundation_pair(ident, cbar)
    assert np.array_equal(out.dom, out.img)


def test_seeds_with_given_base_images(cube_double):
    t = cube_double
    cbar = base_pair(t)
    seeds = enumerate_seeds(t, t, cbar, cbar)
    # swapping the two far chambers of a panel of c+ would move c-, whose codistance tells them apart
    assert seeds == [identity_seed(t, cbar)]
    other = tuple(int(v) for v in t.opp_pairs[100])
    seeds = enumerate_seeds(t, t, cbar, (other[0], other[1] + t.n_plus))
    assert len(seeds) == 1
    for phi in seeds:
        check_isometry(phi)
        assert np.array_equal(phi.dom, seed_domain(t, cbar))


def test_hypotheses_are_enforced(fano_double):
    t = fano_double
    cbar = base_pair(t)
    with pytest.raises(HypothesisViolation) as e:
        main_extension(identity_seed(t, cbar), cbar)
    assert e.value.stage == "hypotheses"


def test_seed_must_sit_on_the_foundation(cube_double):
    t = cube_double
    cbar = base_pair(t)
    with pytest.raises(InvalidInput) as e:
        main_extension(identity_isometry(t, [0, cbar[1]]), cbar)
    assert e.value.stage == "foundation-pair"
