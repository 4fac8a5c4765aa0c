"""Desk-scale buildings: thick panels, projective flag complexes, products.

Catalog ids::

    rank1(n)                 one panel of n chambers (type A1)
    fano                     point-line flags of PG(2,2)   (A2, 21 chambers)
    pg23                     point-line flags of PG(2,3)   (A2, 52 chambers)
    pg32                     point-line-plane flags of PG(3,2)  (A3, 315 chambers)
    prod(a, b, ...)          direct product, at least two factors
    a^k                      shorthand for prod(a, ..., a) with k factors

Flag complexes use generator i for "change the (i+1)-dimensional subspace";
flags are numbered in lexicographic order of their subspace indices, and
subspaces in lexicographic order of their sorted vector lists, so every
object is reproducible bit for bit.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache

import numpy as np

from ..building import BuildingSpace, validate_building
from ..coxeter import CoxeterMatrix
from ..errors import UnknownCatalogId


def rank1(n: int) -> BuildingSpace:
    if n < 2:
        raise UnknownCatalogId(f"rank1({n}) needs at least 2 chambers")
    return validate_building(CoxeterMatrix(((1,),)), n, [[list(range(n))]], labels=tuple(range(n)))


@lru_cache(maxsize=None)
def subspaces(dim: int, q: int) -> tuple[tuple[frozenset, ...], ...]:
    """Subspaces of F_q^dim grouped by dimension 1..dim-1, canonically sorted.

    A subspace is stored as the frozenset of all its vectors (tuples mod q).
    """
    zero = (0,) * dim
    vectors = [v for v in itertools.product(range(q), repeat=dim) if v != zero]

    def span(gens):
        out = {zero}
        for g in gens:
            out |= {tuple((a + c * b) % q for a, b in zip(u, g)) for u in out for c in range(q)}
        return frozenset(out)

    levels = [{span([v]) for v in vectors}]
    for _ in range(dim - 2):
        nxt = set()
        for U in levels[-1]:
            for v in vectors:
                if v not in U:
                    nxt.add(span(list(U) + [v]))
        levels.append(nxt)
    return tuple(tuple(sorted(lvl, key=lambda U: sorted(U))) for lvl in levels)


def projective_flags(dim: int, q: int) -> tuple[tuple[int, ...], ...]:
    """Maximal flags of PG(dim-1, q) as tuples of subspace indices."""
    subs = subspaces(dim, q)
    flags = [(i,) for i in range(len(subs[0]))]
    for k in range(1, len(subs)):
        flags = [f + (j,) for f in flags for j, U in enumerate(subs[k]) if subs[k - 1][f[-1]] < U]
    return tuple(sorted(flags))


def flag_building(dim: int, q: int) -> BuildingSpace:
    flags = projective_flags(dim, q)
    r = dim - 1
    panels = []
    for s in range(r):
        groups: dict[tuple, list[int]] = {}
        for i, f in enumerate(flags):
            groups.setdefault(f[:s] + f[s + 1 :], []).append(i)
        panels.append(sorted(groups.values()))
    return validate_building(CoxeterMatrix.type_a(r), len(flags), panels, labels=flags)


def fano() -> BuildingSpace:
    return flag_building(3, 2)


def pg23() -> BuildingSpace:
    return flag_building(3, 3)


def pg32() -> BuildingSpace:
    return flag_building(4, 2)


def product_building(a: BuildingSpace, b: BuildingSpace) -> BuildingSpace:
    """Direct product; chamber (i, j) gets id ``i * |b| + j``."""
    nb = b.n
    panels = []
    for parts in a.panels:
        panels.append([[i * nb + j for i in p] for p in parts for j in range(nb)])
    for parts in b.panels:
        panels.append([[i * nb + j for j in p] for i in range(a.n) for p in parts])
    la = a.labels if a.labels is not None else tuple(range(a.n))
    lb = b.labels if b.labels is not None else tuple(range(b.n))
    labels = tuple((x, y) for x in la for y in lb)
    matrix = CoxeterMatrix.product(a.group.matrix, b.group.matrix)
    return validate_building(matrix, a.n * b.n, panels, labels=labels)


# ---------------------------------------------------------------------------
# automorphisms of flag complexes


def _apply(matrix, v, q):
    return tuple(int(x) % q for x in np.asarray(matrix) @ np.asarray(v))


def collineation(dim: int, q: int, matrix) -> np.ndarray:
    """Chamber permutation induced by an invertible matrix over F_q."""
    subs = subspaces(dim, q)
    index = [{U: i for i, U in enumerate(lvl)} for lvl in subs]
    flags = projective_flags(dim, q)
    fidx = {f: i for i, f in enumerate(flags)}
    perm = np.empty(len(flags), dtype=np.int64)
    for i, f in enumerate(flags):
        img = tuple(index[k][frozenset(_apply(matrix, v, q) for v in subs[k][j])] for k, j in enumerate(f))
        perm[i] = fidx[img]
    return perm


def correlation(dim: int, q: int) -> np.ndarray:
    """Chamber map U -> U^perp for the standard dot product (type reversing)."""
    subs = subspaces(dim, q)
    index = [{U: i for i, U in enumerate(lvl)} for lvl in subs]
    vectors = list(itertools.product(range(q), repeat=dim))

    def perp(U):
        return frozenset(v for v in vectors if all(sum(a * b for a, b in zip(u, v)) % q == 0 for u in U))

    flags = projective_flags(dim, q)
    fidx = {f: i for i, f in enumerate(flags)}
    r = dim - 1
    perm = np.empty(len(flags), dtype=np.int64)
    for i, f in enumerate(flags):
        comps = [perp(subs[k][j]) for k, j in enumerate(f)][::-1]
        perm[i] = fidx[tuple(index[k][comps[k]] for k in range(r))]
    return perm


def random_invertible(dim: int, q: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        m = rng.integers(0, q, size=(dim, dim))
        if _rank_mod(m, q) == dim:
            return m


def _rank_mod(m, q) -> int:
    m = [list(map(int, row)) for row in np.asarray(m) % q]
    rank = 0
    cols = len(m[0])
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] % q), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, q)
        m[rank] = [(v * inv) % q for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % q for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# catalog ids

_FLAG_IDS = {"fano": (3, 2), "pg23": (3, 3), "pg32": (4, 2)}


def flag_parameters(cid: str) -> tuple[int, int] | None:
    """(vector-space dimension, q) for flag-complex ids, else None."""
    return _FLAG_IDS.get(cid.strip())


def parse_catalog_id(text: str):
    """Parse a catalog id into a nested tuple: ('rank1', n), ('fano',), ('prod', [...])."""
    text = text.replace(" ", "")
    pos = 0

    def parse():
        nonlocal pos
        m = re.match(r"[a-z0-9]+", text[pos:])
        if not m:
            raise UnknownCatalogId(f"cannot parse catalog id {text!r}")
        name = m.group(0)
        pos += len(name)
        if name == "rank1":
            m = re.match(r"\((\d+)\)", text[pos:])
            if not m:
                raise UnknownCatalogId("rank1 needs a chamber count, e.g. rank1(3)")
            pos += len(m.group(0))
            node = ("rank1", int(m.group(1)))
            if node[1] < 3:
                raise UnknownCatalogId("catalog panels need at least 3 chambers (thickness)")
        elif name in _FLAG_IDS:
            node = (name,)
        elif name == "prod":
            if text[pos : pos + 1] != "(":
                raise UnknownCatalogId("prod needs a factor list")
            pos += 1
            factors = [parse()]
            while text[pos : pos + 1] == ",":
                pos += 1
                factors.append(parse())
            if text[pos : pos + 1] != ")":
                raise UnknownCatalogId(f"unbalanced parentheses in {text!r}")
            pos += 1
            if len(factors) < 2:
                raise UnknownCatalogId("prod needs at least two factors")
            node = ("prod", tuple(factors))
        else:
            raise UnknownCatalogId(f"unknown catalog id {name!r}")
        m = re.match(r"\^(\d+)", text[pos:])
        if m:
            pos += len(m.group(0))
            k = int(m.group(1))
            if k < 2:
                raise UnknownCatalogId("powers need an exponent >= 2")
            node = ("prod", (node,) * k)
        return node

    node = parse()
    if pos != len(text):
        raise UnknownCatalogId(f"trailing characters in catalog id {text!r}")
    return node


def _build(node) -> BuildingSpace:
    kind = node[0]
    if kind == "rank1":
        return rank1(node[1])
    if kind in _FLAG_IDS:
        return flag_building(*_FLAG_IDS[kind])
    factors = [_build(f) for f in node[1]]
    out = factors[0]
    for f in factors[1:]:
        out = product_building(out, f)
    return out


def generate_building(cid: str) -> BuildingSpace:
    return _build(parse_catalog_id(cid))
