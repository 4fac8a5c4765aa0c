"""Buildings as chamber sets with a Weyl-distance table.

A building is described by a Coxeter matrix, a chamber count and, for each
generator ``s``, a partition of the chambers into s-panels.  The Weyl
distance is reconstructed by breadth-first search over panel adjacency and
then the three building axioms are checked exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels as K
from .coxeter import CoxeterGroup, CoxeterMatrix, build_group
from .errors import (
    AxiomViolation,
    GateNotUnique,
    InconsistentDistance,
    InvalidInput,
    InvariantBroken,
    PanelTooSmall,
)

MAX_CHAMBERS = 20000


class BuildingSpace:
    """A validated building.  Construct through :func:`validate_building`."""

    def __init__(self, group: CoxeterGroup, panels, panel_of: np.ndarray, dist: np.ndarray, labels=None):
        self.group = group
        self.n = int(panel_of.shape[1])
        self.panels: tuple[tuple[tuple[int, ...], ...], ...] = panels
        self.panel_of = panel_of
        self.dist = dist
        self.labels = labels
        panel_of.setflags(write=False)
        dist.setflags(write=False)
        self._residue_cache: dict = {}

    @property
    def n_chambers(self) -> int:
        return self.n

    @property
    def rank(self) -> int:
        return self.group.rank

    def __repr__(self):
        return f"BuildingSpace(rank={self.rank}, chambers={self.n})"

    def delta(self, x: int, y: int) -> int:
        return int(self.dist[x, y])

    def length(self, x: int, y: int) -> int:
        return int(self.group.length[self.dist[x, y]])

    def panel(self, s: int, x: int) -> tuple[int, ...]:
        return self.panels[s][self.panel_of[s, x]]

    def adjacent(self, s: int, x: int, y: int) -> bool:
        """s-adjacency in the chamber-system sense (reflexive)."""
        return self.panel_of[s, x] == self.panel_of[s, y]

    def neighbours(self, x: int):
        for s in range(self.rank):
            for y in self.panel(s, x):
                if y != x:
                    yield y, s

    def edges(self):
        """Ordered pairs (y, z, s) of distinct s-adjacent chambers, as arrays."""
        return _edges(self.panels)

    @property
    def chamber_system(self):
        cs = self._residue_cache.get("chamber_system")
        if cs is None:
            from .chamsys import from_building

            cs = self._residue_cache["chamber_system"] = from_building(self)
        return cs

    def support_size(self, x: int) -> np.ndarray:
        sup = self.group.support[self.dist[x]]
        return _popcount(sup)


def _popcount(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    out = np.zeros(a.shape, dtype=np.int64)
    while np.any(a):
        out += a & 1
        a = a >> 1
    return out


@dataclass(frozen=True)
class Residue:
    space: BuildingSpace = field(repr=False, compare=False)
    jtype: frozenset
    chambers: tuple[int, ...]

    def __contains__(self, x) -> bool:
        return x in self._set

    @property
    def _set(self):
        return frozenset(self.chambers)

    def __len__(self):
        return len(self.chambers)

    def __hash__(self):
        return hash((id(self.space), self.jtype, self.chambers))

    def __eq__(self, other):
        return (
            isinstance(other, Residue)
            and other.space is self.space
            and other.jtype == self.jtype
            and other.chambers == self.chambers
        )

    @property
    def rank(self) -> int:
        return len(self.jtype)

    def as_building(self) -> BuildingSpace:
        """The residue as a building of type (<J>, J), chambers renumbered."""
        J = sorted(self.jtype)
        if not J:
            raise InvalidInput("a rank-0 residue is not a building")
        index = {x: i for i, x in enumerate(self.chambers)}
        panels = []
        for s in J:
            seen = set()
            parts = []
            for x in self.chambers:
                p = self.space.panel(s, x)
                if p not in seen:
                    seen.add(p)
                    parts.append([index[y] for y in p])
            panels.append(parts)
        return validate_building(self.space.group.matrix.sub(J), len(self.chambers), panels)


def _normalise_panels(n: int, rank: int, panels) -> tuple[tuple, np.ndarray]:
    if isinstance(panels, Mapping):
        panels = [panels.get(s, panels.get(str(s), [])) for s in range(rank)]
    if len(panels) != rank:
        raise InvalidInput(f"expected panel partitions for {rank} generators, got {len(panels)}")
    panel_of = np.full((rank, n), -1, dtype=np.int64)
    out = []
    for s, parts in enumerate(panels):
        clean = []
        seen = np.zeros(n, dtype=bool)
        for p in parts:
            p = tuple(sorted(int(x) for x in p))
            if not p:
                continue
            for x in p:
                if not 0 <= x < n:
                    raise InvalidInput(f"chamber {x} out of range in a {s}-panel")
                if seen[x]:
                    raise InvalidInput(f"chamber {x} lies in two {s}-panels")
                seen[x] = True
            clean.append(p)
        # chambers not listed form singleton panels (reported later as too small)
        clean.extend((int(x),) for x in np.flatnonzero(~seen))
        clean.sort()
        for i, p in enumerate(clean):
            panel_of[s, list(p)] = i
        out.append(tuple(clean))
    return tuple(out), panel_of


def _adjacency(n: int, panels) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for s, parts in enumerate(panels):
        for p in parts:
            for y in p:
                for z in p:
                    if y != z:
                        nbrs[y].append((z, s))
    ptr = np.zeros(n + 1, dtype=np.int64)
    idx, gen = [], []
    for x in range(n):
        lst = sorted(nbrs[x])
        ptr[x + 1] = ptr[x] + len(lst)
        idx.extend(z for z, _ in lst)
        gen.extend(s for _, s in lst)
    return ptr, np.array(idx, dtype=np.int64), np.array(gen, dtype=np.int64)


def panel_groups(panels, n: int):
    """Group data for the existence scan: one group per (chamber, generator)."""
    grp_y, grp_s, ptr, zs = [], [], [0], []
    for y in range(n):
        for s, parts in enumerate(panels):
            grp_y.append(y)
            grp_s.append(s)
    panel_index = {}
    for s, parts in enumerate(panels):
        for p in parts:
            for y in p:
                panel_index[(y, s)] = p
    for y, s in zip(grp_y, grp_s):
        zs.extend(z for z in panel_index[(y, s)] if z != y)
        ptr.append(len(zs))
    return (
        np.array(grp_y, dtype=np.int64),
        np.array(grp_s, dtype=np.int64),
        np.array(ptr, dtype=np.int64),
        np.array(zs, dtype=np.int64),
    )


def validate_building(
    matrix: CoxeterMatrix | CoxeterGroup,
    n_chambers: int,
    panels: Sequence[Sequence[Iterable[int]]] | Mapping,
    labels=None,
) -> BuildingSpace:
    """Reconstruct the Weyl distance and check the building axioms.

    ``matrix`` may be an already enumerated group, which is then shared.
    Raises :class:`AxiomViolation` (``Bu1``/``Bu2``/``Bu3``) with a witness;
    :class:`PanelTooSmall` and :class:`InconsistentDistance` are subclasses.
    """
    group = matrix if isinstance(matrix, CoxeterGroup) else build_group(matrix)
    n = int(n_chambers)
    if n < 1:
        raise InvalidInput("a building needs at least one chamber")
    if group.rank == 0:
        raise InvalidInput("rank-0 buildings are not supported")
    if n > MAX_CHAMBERS:
        raise InvalidInput(f"more than {MAX_CHAMBERS} chambers")
    panels, panel_of = _normalise_panels(n, group.rank, panels)

    for s, parts in enumerate(panels):
        for p in parts:
            if len(p) < 2:
                raise PanelTooSmall(witness=(p[0], p[0], s))

    ptr, idx, gen = _adjacency(n, panels)
    D, err = K.bfs_distances(ptr, idx, gen, group.right_mul, group.length, n)
    if err[0] >= 0:
        x, y, code = (int(v) for v in err)
        if code == 3:
            raise AxiomViolation("Bu3", (x, y), "no gallery joins the chambers")
        raise InconsistentDistance(witness=(x, y))

    diag = np.arange(n)
    off = D == 0
    off[diag, diag] = False
    if off.any() or np.any(D[diag, diag] != 0):
        x, y = np.argwhere(off)[0]
        raise AxiomViolation("Bu1", (int(x), int(y)))

    U, V, S = _edges(panels)
    bad = K.pair_scan(D, group.right_mul, group.length, U, V, S, 0)
    if bad[0] >= 0:
        x, y, z, s = (int(v) for v in bad)
        raise AxiomViolation("Bu2", (x, y, z), f"generator {s}")

    gy, gs, gptr, gz = panel_groups(panels, n)
    bad = K.exists_scan(D, group.right_mul, gy, gs, gptr, gz)
    if bad[0] >= 0:
        x, y, s = (int(v) for v in bad)
        raise AxiomViolation("Bu3", (x, y, s))

    if np.any(D.T != group.inverse[D]):
        x, y = np.argwhere(D.T != group.inverse[D])[0]
        raise InconsistentDistance(witness=(int(y), int(x)), detail="distance is not inverse-symmetric")

    return BuildingSpace(group, panels, panel_of.astype(np.int64), D, labels)


def _edges(panels):
    U, V, S = [], [], []
    for s, parts in enumerate(panels):
        for p in parts:
            for y in p:
                for z in p:
                    if y != z:
                        U.append(y)
                        V.append(z)
                        S.append(s)
    return (np.array(U, dtype=np.int64), np.array(V, dtype=np.int64), np.array(S, dtype=np.int64))


def weyl_distance(b: BuildingSpace, x: int, y: int) -> int:
    return int(b.dist[x, y])


def residue_of(b: BuildingSpace, x: int, J: Iterable[int]) -> Residue:
    J = frozenset(int(s) for s in J)
    key = (x, J)
    res = b._residue_cache.get(key)
    if res is None:
        mask = b.group.in_parabolic(b.dist[x], J)
        res = Residue(b, J, tuple(int(y) for y in np.flatnonzero(mask)))
        b._residue_cache[key] = res
    return res


def residues(b: BuildingSpace, J: Iterable[int]) -> list[Residue]:
    """All J-residues, ordered by their least chamber."""
    J = frozenset(J)
    seen = np.zeros(b.n, dtype=bool)
    out = []
    for x in range(b.n):
        if not seen[x]:
            R = residue_of(b, x, J)
            seen[list(R.chambers)] = True
            out.append(R)
    return out


def project_to_residue(b: BuildingSpace, x: int, R: Residue) -> int:
    """The gate of ``x`` in ``R``: the unique chamber nearest to ``x``."""
    ch = np.asarray(R.chambers)
    lens = b.group.length[b.dist[x, ch]]
    best = lens.min()
    hits = ch[lens == best]
    if hits.size != 1:
        raise GateNotUnique(f"{hits.size} chambers at minimal distance", witness=(x, tuple(hits)))
    z = int(hits[0])
    mul = b.group.mul_table
    if np.any(mul[b.dist[x, z], b.dist[z, ch]] != b.dist[x, ch]):
        raise GateNotUnique("gate identity fails", witness=(x, z))
    return z


def foundation(b: BuildingSpace, x: int, k: int) -> tuple[int, ...]:
    """Union of all residues of rank at most ``k`` containing ``x``."""
    return tuple(int(y) for y in np.flatnonzero(b.support_size(x) <= k))


def apartment_check(b: BuildingSpace, sigma: Iterable[int]) -> bool:
    """True iff ``sigma`` is thin and convex (hence an apartment)."""
    sigma = sorted(set(int(x) for x in sigma))
    if not sigma:
        return False
    inside = np.zeros(b.n, dtype=bool)
    inside[sigma] = True
    panels_hit = [(s, int(pi)) for s in range(b.rank) for pi in np.unique(b.panel_of[s, sigma])]
    width = max(len(b.panels[s][pi]) for s, pi in panels_hit)
    members = np.full((len(panels_hit), width), -1, dtype=np.int64)
    for i, (s, pi) in enumerate(panels_hit):
        P = b.panels[s][pi]
        members[i, : len(P)] = P
    valid = members >= 0
    if np.any((inside[members] & valid).sum(axis=1) != 2):
        return False
    # convexity: every projection of a chamber of sigma onto a panel it meets stays inside
    lens = b.group.length[b.dist[np.ix_(sigma, members.ravel())]].reshape(len(sigma), *members.shape)
    lens = np.where(valid[None], lens, np.iinfo(np.int32).max)
    gates = np.take_along_axis(members[None], lens.argmin(axis=2)[..., None], axis=2)[..., 0]
    if not inside[gates].all():
        return False
    c = sigma[0]
    image = np.sort(b.dist[c, sigma])
    if image.size != b.group.order or np.any(image != np.arange(b.group.order)):
        raise InvariantBroken("thin convex set is not in bijection with W", witness=tuple(sigma))
    return True


def thickness_check(b: BuildingSpace) -> bool:
    return all(len(p) >= 3 for parts in b.panels for p in parts)
