"""Chamber systems, galleries and 2-homotopy.

A chamber system over an index set ``I = {0..r-1}`` is stored as an
``(r, n)`` array of class ids: chambers ``x`` and ``y`` are ``i``-adjacent
iff ``cls[i, x] == cls[i, y]``.  Storing partitions makes every relation an
equivalence relation by construction (in particular reflexive).

Galleries are chamber sequences; concatenation ``G H`` identifies the last
chamber of ``G`` with the first chamber of ``H``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidInput, NotConnected

DEFAULT_BUDGET = 10**5


class OppChamber(NamedTuple):
    """A pair of opposite chambers (plus-half id, minus-half id)."""

    plus: int
    minus: int


class ChamberSystem:
    def __init__(self, cls: np.ndarray, labels=None):
        cls = np.asarray(cls, dtype=np.int64)
        if cls.ndim != 2:
            raise InvalidInput("class table must be (rank, n)")
        # relabel classes densely per index so members() can use offsets
        dense = np.empty_like(cls)
        self._order = []
        self._ptr = []
        for i in range(cls.shape[0]):
            _, dense[i] = np.unique(cls[i], return_inverse=True)
            order = np.argsort(dense[i], kind="stable")
            counts = np.bincount(dense[i])
            self._order.append(order)
            self._ptr.append(np.concatenate(([0], np.cumsum(counts))))
        self.cls = dense
        self.cls.setflags(write=False)
        self.rank = int(cls.shape[0])
        self.n = int(cls.shape[1])
        self.labels = labels

    def __repr__(self):
        return f"ChamberSystem(rank={self.rank}, chambers={self.n})"

    def __len__(self):
        return self.n

    def members(self, i: int, x: int) -> np.ndarray:
        """Sorted chambers i-adjacent to x (x included)."""
        k = self.cls[i, x]
        return self._order[i][self._ptr[i][k] : self._ptr[i][k + 1]]

    def adjacency_types(self, x: int, y: int) -> frozenset:
        return frozenset(int(i) for i in np.flatnonzero(self.cls[:, x] == self.cls[:, y]))

    def neighbours(self, x: int, J: Iterable[int] | None = None) -> list[int]:
        J = range(self.rank) if J is None else J
        out = set()
        for i in J:
            out.update(int(y) for y in self.members(i, x))
        out.discard(x)
        return sorted(out)

    def is_adjacent(self, x: int, y: int, J: Iterable[int] | None = None) -> bool:
        J = range(self.rank) if J is None else J
        return any(self.cls[i, x] == self.cls[i, y] for i in J)

    def class_count(self, i: int) -> int:
        return len(self._ptr[i]) - 1

    def gallery(self, chambers: Sequence[int]) -> "Gallery":
        chambers = tuple(int(c) for c in chambers)
        if not chambers:
            raise InvalidInput("a gallery has at least one chamber")
        types = []
        for a, b in zip(chambers, chambers[1:]):
            t = self.adjacency_types(a, b)
            if not t:
                raise InvalidInput(f"chambers {a} and {b} are not adjacent")
            types.append(t)
        return Gallery(chambers, tuple(types))


@dataclass(frozen=True)
class Gallery:
    chambers: tuple[int, ...]
    step_types: tuple[frozenset, ...]

    @property
    def beta(self) -> int:
        return self.chambers[0]

    @property
    def epsilon(self) -> int:
        return self.chambers[-1]

    def __len__(self):
        """Gallery length: the number of steps."""
        return len(self.chambers) - 1

    @property
    def is_closed(self) -> bool:
        return self.chambers[0] == self.chambers[-1]

    def inverse(self) -> "Gallery":
        return Gallery(self.chambers[::-1], self.step_types[::-1])

    def __add__(self, other: "Gallery") -> "Gallery":
        if self.epsilon != other.beta:
            raise InvalidInput("galleries do not meet")
        return Gallery(self.chambers + other.chambers[1:], self.step_types + other.step_types)

    def is_j_gallery(self, J: Iterable[int]) -> bool:
        J = frozenset(J)
        return all(t & J for t in self.step_types)


def from_building(b) -> ChamberSystem:
    """The chamber system of a building: s-classes are the s-panels."""
    return ChamberSystem(b.panel_of, labels=None)


def opp_system(t) -> ChamberSystem:
    """Opp of a twin: opposite pairs with componentwise adjacency."""
    pairs = t.opp_pairs
    plus, minus = pairs[:, 0], pairs[:, 1]
    nm = t.minus.panel_of.shape[1]
    cls = t.plus.panel_of[:, plus] * (nm + 1) + t.minus.panel_of[:, minus]
    return ChamberSystem(cls, labels=[OppChamber(int(a), int(b)) for a, b in pairs])


def _bfs(cs: ChamberSystem, source: int, J=None, allowed: np.ndarray | None = None) -> np.ndarray:
    dist = np.full(cs.n, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in cs.neighbours(u, J):
            if dist[v] < 0 and (allowed is None or allowed[v]):
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def find_gallery(cs: ChamberSystem, c: int, d: int, J: Iterable[int] | None = None) -> Gallery:
    """Lexicographically least shortest gallery from c to d (J-steps only if J given)."""
    J = None if J is None else sorted(set(J))
    dist = _bfs(cs, d, J)
    if dist[c] < 0:
        raise NotConnected(f"no gallery from {c} to {d}", witness=(c, d))
    path = [c]
    u = c
    while u != d:
        u = next(v for v in cs.neighbours(u, J) if dist[v] == dist[u] - 1)
        path.append(u)
    return cs.gallery(path)


def _hitting_types(types: Iterable[frozenset], rank: int) -> list[frozenset]:
    """Index sets J with |J| <= 2 meeting every step type."""
    types = list(types)
    out = []
    for k in (0, 1, 2):
        for J in itertools.combinations(range(rank), k):
            J = frozenset(J)
            if all(t & J for t in types):
                out.append(J)
    return out


def elementary_homotopy_check(cs: ChamberSystem, G: Gallery, H: Gallery) -> bool:
    """True iff G = X G0 Y and H = X H0 Y with G0, H0 J-galleries, |J| <= 2."""
    if G.chambers == H.chambers:
        return True
    if G.beta != H.beta or G.epsilon != H.epsilon:
        return False
    g, h = G.chambers, H.chambers
    for a in range(min(len(g), len(h))):
        if g[a] != h[a]:
            break
        for bg in range(a, len(g)):
            bh = len(h) - (len(g) - bg)
            if bh < a or g[bg:] != h[bh:]:
                continue
            types = G.step_types[a:bg] + H.step_types[a:bh]
            if _hitting_types(types, cs.rank):
                return True
    return False


class NullHomotopyResult(NamedTuple):
    status: str  # "yes", "no-within-budget" or "exhausted"
    steps: tuple[Gallery, ...]  # galleries from G down to (beta(G)) when status == "yes"
    expansions: int


def shortest_galleries(cs: ChamberSystem, c: int, d: int, J: Iterable[int] | None = None):
    """Every shortest gallery from c to d (J-steps only if J given), as chamber tuples."""
    J = None if J is None else sorted(set(J))
    dist = _bfs(cs, d, J)
    if dist[c] < 0:
        return

    def walk(u, path):
        if u == d:
            yield tuple(path)
            return
        for v in cs.neighbours(u, J):
            if dist[v] == dist[u] - 1:
                path.append(v)
                yield from walk(v, path)
                path.pop()

    yield from walk(c, [c])


def _moves(cs: ChamberSystem, G: Gallery):
    """Galleries obtained by replacing a J-subgallery (|J| <= 2) with a shortest
    J-gallery between the same chambers that is no longer than the original."""
    ch = G.chambers
    seen = {ch}
    for a in range(len(ch)):
        for b in range(a + 1, len(ch)):
            for J in _hitting_types(G.step_types[a:b], cs.rank):
                if not J:
                    continue
                for repl in shortest_galleries(cs, ch[a], ch[b], J):
                    if len(repl) - 1 > b - a:
                        break
                    new = ch[:a] + repl + ch[b + 1 :]
                    if new not in seen:
                        seen.add(new)
                        yield new


def null_homotopy_search(cs: ChamberSystem, G: Gallery, budget: int = DEFAULT_BUDGET) -> NullHomotopyResult:
    """Breadth-first search for a contraction of a closed gallery.

    A move replaces a subgallery that stays in one residue of rank at most 2
    with a shortest gallery of that residue joining the same chambers, never
    increasing the length, so the search space is finite.  "exhausted" means
    every gallery reachable by such moves was explored without reaching the
    trivial one; "no-within-budget" means the budget ran out first.
    """
    if not G.is_closed:
        raise InvalidInput("null-homotopy needs a closed gallery")
    target = (G.beta,)
    start = G.chambers
    parent = {start: None}
    queue = deque([start])
    expansions = 0
    while queue:
        cur = queue.popleft()
        if cur == target:
            chain = []
            while cur is not None:
                chain.append(cs.gallery(cur))
                cur = parent[cur]
            return NullHomotopyResult("yes", tuple(reversed(chain)), expansions)
        if expansions >= budget:
            return NullHomotopyResult("no-within-budget", (), expansions)
        expansions += 1
        for nxt in _moves(cs, cs.gallery(cur)):
            if nxt not in parent:
                parent[nxt] = cur
                queue.append(nxt)
    return NullHomotopyResult("exhausted", (), expansions)


class SpanningTree(NamedTuple):
    root: int
    parent: dict  # chamber -> parent chamber (root maps to None)
    order: tuple[int, ...]  # BFS visiting order
    tree_edges: tuple[tuple[int, int], ...]  # (parent, child)
    non_tree_edges: tuple[tuple[int, int], ...]  # (u, v) with u < v


def spanning_tree(cs: ChamberSystem, root: int, subset: Iterable[int] | None = None) -> SpanningTree:
    """BFS tree of the (induced) chamber system, children in ascending id order."""
    if subset is None:
        allowed = np.ones(cs.n, dtype=bool)
    else:
        allowed = np.zeros(cs.n, dtype=bool)
        allowed[list(subset)] = True
        if not allowed[root]:
            raise InvalidInput("root is not in the subset")
    parent = {root: None}
    order = [root]
    queue = deque([root])
    tree = []
    while queue:
        u = queue.popleft()
        for v in cs.neighbours(u):
            if allowed[v] and v not in parent:
                parent[v] = u
                tree.append((u, v))
                order.append(v)
                queue.append(v)
    members = np.flatnonzero(allowed)
    if len(parent) != members.size:
        missing = next(int(x) for x in members if x not in parent)
        raise NotConnected("subset is not connected", witness=(root, missing))
    tree_set = {frozenset(e) for e in tree}
    non_tree = []
    for u in order:
        for v in cs.neighbours(u):
            if u < v and allowed[v] and frozenset((u, v)) not in tree_set:
                non_tree.append((u, v))
    non_tree.sort()
    return SpanningTree(root, parent, tuple(order), tuple(tree), tuple(non_tree))
