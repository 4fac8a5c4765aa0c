import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twinbuild.coxeter import (
    CoxeterMatrix,
    build_group,
    canonical_word,
    length_of,
    longest_element,
    multiply,
    spherical_check,
)
from twinbuild.errors import GroupTooLarge, InfiniteOrderEntry, InvalidInput, NotSpherical


def dihedral(m):
    return CoxeterMatrix(((1, m), (m, 1)))


def type_b(n):
    m = CoxeterMatrix.type_a(n).m
    m = [list(r) for r in m]
    m[n - 2][n - 1] = m[n - 1][n - 2] = 4
    return CoxeterMatrix(tuple(map(tuple, m)))


H3 = CoxeterMatrix(((1, 5, 2), (5, 1, 3), (2, 3, 1)))


def inversions(p):
    return sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])


def perm_of_word(word, n):
    """Symmetric group oracle: s_i swaps positions i and i+1."""
    p = list(range(n + 1))
    for s in word:
        p[s], p[s + 1] = p[s + 1], p[s]
    return tuple(p)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_type_a_matches_symmetric_group(n):
    g = build_group(CoxeterMatrix.type_a(n))
    assert g.order == math.factorial(n + 1)
    perms = [perm_of_word(w, n) for w in g.words]
    assert len(set(perms)) == g.order
    for w, p in enumerate(perms):
        assert g.length[w] == inversions(p)
        for s in range(n):
            assert perms[g.right_mul[w, s]] == perm_of_word(g.words[w] + (s,), n)


@pytest.mark.parametrize(
    "matrix, order, top",
    [
        (dihedral(2), 4, 2),
        (dihedral(5), 10, 5),
        (dihedral(6), 12, 6),
        (type_b(3), 48, 9),
        (H3, 120, 15),
        (CoxeterMatrix.product(CoxeterMatrix.type_a(2), CoxeterMatrix.type_a(1)), 12, 4),
    ],
)
def test_orders_and_longest_lengths(matrix, order, top):
    g = build_group(matrix)
    assert g.order == order
    assert g.length[g.w0] == top
    assert g.length.max() == top


def test_identity_and_generators_come_first():
    g = build_group(CoxeterMatrix.type_a(3))
    assert g.words[0] == ()
    assert [g.words[i] for i in (1, 2, 3)] == [(0,), (1,), (2,)]
    assert all(len(a) <= len(b) for a, b in zip(g.words, g.words[1:]))


def test_a2_examples():
    g = build_group(CoxeterMatrix.type_a(2))
    s, t = g.generator(0), g.generator(1)
    st_ = multiply(g, s, t)
    assert multiply(g, s, s) == 0
    assert multiply(g, st_, st_) == multiply(g, t, s)
    sts = g.from_word([0, 1, 0])
    assert length_of(g, sts) == 3
    assert canonical_word(g, g.from_word([1, 0, 1])) == (0, 1, 0)
    assert multiply(g, 5, 0) == 5
    assert longest_element(g, [0, 1]).canonical_word == (0, 1, 0)
    assert longest_element(g, [1]).id == t


def test_a3_longest():
    g = build_group(CoxeterMatrix.type_a(3))
    w0 = longest_element(g, range(3))
    assert len(w0.canonical_word) == 6
    assert spherical_check(CoxeterMatrix.type_a(3), [0, 1, 2])


def test_spherical_check():
    m = CoxeterMatrix(((1, 0), (0, 1)))
    assert spherical_check(m, [])
    assert spherical_check(m, [0])
    assert not spherical_check(m, [0, 1])
    affine = CoxeterMatrix(((1, 3, 3), (3, 1, 3), (3, 3, 1)))
    with pytest.raises(GroupTooLarge):
        spherical_check(affine, [0, 1, 2], cap=1000)
    assert spherical_check(affine, [0, 1], cap=1000)


def test_errors():
    with pytest.raises(InfiniteOrderEntry):
        build_group(CoxeterMatrix(((1, 0), (0, 1))))
    with pytest.raises(GroupTooLarge):
        build_group(CoxeterMatrix.type_a(5), cap=100)
    with pytest.raises(InvalidInput):
        CoxeterMatrix(((1, 3), (2, 1)))
    with pytest.raises(InvalidInput):
        CoxeterMatrix(((2, 3), (3, 1)))
    with pytest.raises(InvalidInput):
        CoxeterMatrix(((1, 1), (1, 1)))
    with pytest.raises(NotSpherical):
        longest_element(CoxeterMatrix.type_a(2), [0])


def test_mul_table_agrees_with_multiply():
    g = build_group(type_b(3))
    table = g.mul_table
    for w in range(g.order):
        for v in range(0, g.order, 7):
            x = w
            for s in g.words[v]:
                x = g.right_mul[x, s]
            assert table[w, v] == x
    assert np.all(table[np.arange(g.order), g.inverse] == 0)


def test_opposition():
    assert build_group(CoxeterMatrix.type_a(2)).opposition() == (1, 0)
    assert build_group(CoxeterMatrix.type_a(3)).opposition() == (2, 1, 0)
    assert build_group(type_b(3)).opposition() == (0, 1, 2)


GROUPS = {
    "A3": build_group(CoxeterMatrix.type_a(3)),
    "B3": build_group(type_b(3)),
    "H3": build_group(H3),
    "A1xA2": build_group(CoxeterMatrix.product(CoxeterMatrix.type_a(1), CoxeterMatrix.type_a(2))),
}


@st.composite
def group_and_word(draw):
    g = GROUPS[draw(st.sampled_from(sorted(GROUPS)))]
    word = draw(st.lists(st.integers(0, g.rank - 1), max_size=20))
    return g, word


@given(group_and_word(), st.integers(0, 2))
def test_length_changes_by_one(gw, s):
    g, word = gw
    s = s % g.rank
    w = g.from_word(word)
    assert abs(int(g.length[g.right_mul[w, s]]) - int(g.length[w])) == 1


@given(group_and_word())
def test_canonical_word_round_trip(gw):
    g, word = gw
    w = g.from_word(word)
    assert g.from_word(canonical_word(g, w)) == w
    assert len(canonical_word(g, w)) <= len(word)
    assert len(canonical_word(g, w)) % 2 == len(word) % 2


@given(group_and_word(), group_and_word())
def test_multiplication_is_associative_with_inverses(a, b):
    g, wa = a
    g2, wb = b
    if g2 is not g:
        return
    x, y = g.from_word(wa), g.from_word(wb)
    assert g.multiply(x, y) == g.from_word(wa + wb)
    assert g.multiply(x, int(g.inverse[x])) == 0
    assert g.inverse[g.multiply(x, y)] == g.multiply(int(g.inverse[y]), int(g.inverse[x]))


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_longest_elements_of_all_subsets(name):
    g = GROUPS[name]
    for k in range(g.rank + 1):
        for J in itertools.combinations(range(g.rank), k):
            r = g.longest(J)
            assert g.multiply(r, r) == 0
            assert all(g.length[g.right_mul[r, s]] < g.length[r] for s in J)
            assert g.in_parabolic(r, J)


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_descent_characterisation(name):
    """If every s in J is a right descent of w then l(w r_J) = l(w) - l(r_J)."""
    g = GROUPS[name]
    for k in (1, 2):
        for J in itertools.combinations(range(g.rank), k):
            r = g.longest(J)
            for w in range(g.order):
                if all(g.length[g.right_mul[w, s]] < g.length[w] for s in J):
                    assert g.length[g.multiply(w, r)] == g.length[w] - g.length[r]
