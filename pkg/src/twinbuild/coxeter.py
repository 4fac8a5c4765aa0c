"""Finite Coxeter groups enumerated as integer tables.

Elements are dense integer ids assigned in ShortLex order of their canonical
reduced words, so id 0 is the identity and ids 1..r are the generators.
Enumeration proceeds one length level at a time.  When ``v = w*s`` is created,
its complete right descent set is read off from the tables of shorter
elements: a second generator ``t`` is a right descent of ``v`` exactly when
``w`` ends in the alternating word of length ``m_st - 1`` that finishes in
``t``, i.e. when ``v`` has a reduced suffix equal to the longest element of
the dihedral subgroup ``<s, t>``.  No floating point is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import GroupTooLarge, InfiniteOrderEntry, InvalidInput, NotSpherical

INF = 0
"""Matrix entry encoding m_st = infinity (same convention as building files)."""

DEFAULT_CAP = 10**6
_FULL_TABLE_LIMIT = 4096


@dataclass(frozen=True)
class CoxeterMatrix:
    m: tuple[tuple[int, ...], ...]
    generators: tuple[str, ...] = ()

    def __post_init__(self):
        m = tuple(tuple(int(v) for v in row) for row in self.m)
        object.__setattr__(self, "m", m)
        r = len(m)
        if not self.generators:
            object.__setattr__(self, "generators", tuple(f"s{i + 1}" for i in range(r)))
        if len(self.generators) != r or len(set(self.generators)) != r:
            raise InvalidInput("generator labels must be distinct, one per row")
        for i, row in enumerate(m):
            if len(row) != r:
                raise InvalidInput("Coxeter matrix must be square")
            for j, v in enumerate(row):
                if i == j and v != 1:
                    raise InvalidInput(f"diagonal entry m[{i}][{i}] must be 1")
                if i != j:
                    if v != m[j][i]:
                        raise InvalidInput(f"Coxeter matrix not symmetric at ({i}, {j})")
                    if v != INF and v < 2:
                        raise InvalidInput(f"off-diagonal entry m[{i}][{j}] must be >= 2")

    @property
    def rank(self) -> int:
        return len(self.m)

    def entry(self, s: int, t: int) -> float:
        v = self.m[s][t]
        return float("inf") if v == INF else v

    def is_two_spherical(self) -> bool:
        return all(v != INF for row in self.m for v in row)

    def sub(self, J: Iterable[int]) -> "CoxeterMatrix":
        J = sorted(J)
        return CoxeterMatrix(
            tuple(tuple(self.m[a][b] for b in J) for a in J),
            tuple(self.generators[a] for a in J),
        )

    @classmethod
    def type_a(cls, n: int) -> "CoxeterMatrix":
        m = [[1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(n)] for i in range(n)]
        return cls(tuple(map(tuple, m)))

    @classmethod
    def product(cls, a: "CoxeterMatrix", b: "CoxeterMatrix") -> "CoxeterMatrix":
        r = a.rank + b.rank
        m = [[2] * r for _ in range(r)]
        for i in range(r):
            m[i][i] = 1
        for i in range(a.rank):
            for j in range(a.rank):
                m[i][j] = a.m[i][j]
        for i in range(b.rank):
            for j in range(b.rank):
                m[a.rank + i][a.rank + j] = b.m[i][j]
        return cls(tuple(map(tuple, m)))


class WeylElem(NamedTuple):
    id: int
    canonical_word: tuple[int, ...]


class CoxeterGroup:
    """A fully enumerated finite Coxeter group.

    Attributes are numpy tables indexed by element id: ``right_mul[w, s]``,
    ``length[w]``, ``inverse[w]`` and ``support[w]`` (bitmask of generators
    occurring in any reduced word of ``w``).
    """

    def __init__(self, matrix: CoxeterMatrix, words, right_mul):
        self.matrix = matrix
        self.rank = matrix.rank
        self.words: tuple[tuple[int, ...], ...] = tuple(words)
        self.order = len(self.words)
        self.right_mul = np.asarray(right_mul, dtype=np.int32)
        self.right_mul.setflags(write=False)
        self.length = np.array([len(w) for w in self.words], dtype=np.int32)
        self.length.setflags(write=False)
        self._index = {w: i for i, w in enumerate(self.words)}

        support = np.zeros(self.order, dtype=np.int64)
        inverse = np.zeros(self.order, dtype=np.int32)
        for v in range(1, self.order):
            word = self.words[v]
            prefix = self.right_mul[v, word[-1]]
            support[v] = support[prefix] | (1 << word[-1])
            x = 0
            for s in reversed(word):
                x = self.right_mul[x, s]
            inverse[v] = x
        self.support = support
        self.inverse = inverse
        self.support.setflags(write=False)
        self.inverse.setflags(write=False)
        self._mul = None
        self._longest: dict[frozenset, int] = {}

    identity = 0

    def __repr__(self):
        return f"CoxeterGroup(rank={self.rank}, order={self.order})"

    def __len__(self):
        return self.order

    def generator(self, s: int) -> int:
        return int(self.right_mul[0, s])

    def elem(self, w: int) -> WeylElem:
        return WeylElem(int(w), self.words[w])

    def from_word(self, word: Sequence[int]) -> int:
        x = 0
        for s in word:
            x = int(self.right_mul[x, s])
        return x

    def lookup_word(self, word: Sequence[int]) -> int:
        """Element id of an arbitrary (not necessarily reduced) word."""
        return self.from_word(word)

    @property
    def mul_table(self) -> np.ndarray:
        """Full ``order x order`` product table (built on first use)."""
        if self._mul is None:
            if self.order > _FULL_TABLE_LIMIT:
                raise GroupTooLarge(f"full product table refused for order {self.order}")
            t = np.empty((self.order, self.order), dtype=np.int32)
            t[:, 0] = np.arange(self.order)
            for v in range(1, self.order):
                s = self.words[v][-1]
                prefix = self.right_mul[v, s]
                t[:, v] = self.right_mul[t[:, prefix], s]
            t.setflags(write=False)
            self._mul = t
        return self._mul

    def multiply(self, w: int, v: int) -> int:
        if self._mul is not None:
            return int(self._mul[w, v])
        x = int(w)
        for s in self.words[v]:
            x = int(self.right_mul[x, s])
        return x

    def mask(self, J: Iterable[int]) -> int:
        out = 0
        for s in J:
            out |= 1 << int(s)
        return out

    def in_parabolic(self, w, J: Iterable[int]):
        """True where ``w`` lies in the parabolic subgroup <J> (vectorised)."""
        return (self.support[w] & ~self.mask(J)) == 0

    def parabolic(self, J: Iterable[int]) -> np.ndarray:
        return np.flatnonzero(self.in_parabolic(np.arange(self.order), J))

    def longest(self, J: Iterable[int] | None = None) -> int:
        J = frozenset(range(self.rank)) if J is None else frozenset(int(s) for s in J)
        if J not in self._longest:
            elems = self.parabolic(J)
            # ids are ShortLex ordered, so the last one has maximal length
            self._longest[J] = int(elems[-1])
        return self._longest[J]

    @property
    def w0(self) -> int:
        return self.longest()

    def opposition(self) -> tuple[int, ...]:
        """Generator permutation s -> w0 s w0."""
        w0 = self.w0
        out = []
        for s in range(self.rank):
            g = self.multiply(self.multiply(w0, self.generator(s)), w0)
            out.append(self.words[g][0])
        return tuple(out)


def build_group(matrix: CoxeterMatrix, cap: int = DEFAULT_CAP) -> CoxeterGroup:
    if cap < 1:
        raise InvalidInput("cap must be >= 1")
    if not matrix.is_two_spherical():
        raise InfiniteOrderEntry("cannot enumerate a Coxeter group with an infinite entry")
    r = matrix.rank
    m = matrix.m
    words: list[tuple[int, ...]] = [()]
    length = [0]
    R: list[list[int]] = [[-1] * r]
    level = [0]
    while level:
        nxt = []
        for w in level:
            for s in range(r):
                if R[w][s] != -1:
                    continue
                v = len(words)
                if v >= cap:
                    raise GroupTooLarge(f"more than {cap} elements")
                words.append(words[w] + (s,))
                length.append(length[w] + 1)
                R.append([-1] * r)
                R[w][s] = v
                R[v][s] = w
                nxt.append(v)
                for t in range(r):
                    if t == s:
                        continue
                    mst = m[s][t]
                    # peel t, s, t, ... (m-1 letters) off w as right descents
                    x = w
                    ok = True
                    for i in range(mst - 1):
                        a = t if i % 2 == 0 else s
                        y = R[x][a]
                        if y == -1 or length[y] != length[x] - 1:
                            ok = False
                            break
                        x = y
                    if not ok:
                        continue
                    # v*t = x * (alternating word of length m-1 ending in s)
                    tail = [s if i % 2 == 0 else t for i in range(mst - 1)][::-1]
                    for a in tail:
                        x = R[x][a]
                    if R[x][t] != -1 and R[x][t] != v:
                        raise AssertionError("inconsistent Coxeter enumeration")
                    R[v][t] = x
                    R[x][t] = v
        level = nxt
    return CoxeterGroup(matrix, words, R)


def multiply(g: CoxeterGroup, w: int, v: int) -> int:
    return g.multiply(w, v)


def length_of(g: CoxeterGroup, w: int) -> int:
    return int(g.length[w])


def canonical_word(g: CoxeterGroup, w: int) -> tuple[int, ...]:
    return g.words[w]


def spherical_check(g_or_matrix, J: Iterable[int], cap: int = DEFAULT_CAP) -> bool:
    if isinstance(g_or_matrix, CoxeterGroup):
        return True
    J = sorted(J)
    if not J:
        return True
    try:
        build_group(g_or_matrix.sub(J), cap)
    except InfiniteOrderEntry:
        return False
    return True


def longest_element(g: CoxeterGroup, J: Iterable[int]) -> WeylElem:
    if not isinstance(g, CoxeterGroup):
        raise NotSpherical("longest element needs an enumerated group")
    return g.elem(g.longest(J))
