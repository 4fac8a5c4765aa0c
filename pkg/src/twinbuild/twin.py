"""Twin buildings: codistance, opposition, projections and twin apartments.

Chambers of a twin are addressed by *global* ids: the plus half occupies
``0 .. n_plus-1`` and the minus half ``n_plus .. n_plus+n_minus-1``.  The
codistance is stored in both directions (``pm`` for plus-to-minus and ``mp``
for minus-to-plus) so that a broken inversion law can be detected rather than
assumed away.  Residues are :class:`~twinbuild.building.Residue` objects of
one half and therefore use local ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels as K
from .building import (
    BuildingSpace,
    Residue,
    _edges,
    apartment_check,
    panel_groups,
    project_to_residue,
    residue_of,
    validate_building,
)
from .errors import (
    AxiomViolation,
    GateNotUnique,
    InvalidInput,
    InvariantBroken,
    NotOpposite,
    TypeMismatch,
)

PLUS = 1
MINUS = -1

SPHERICAL_DOUBLE = "spherical-double"


def right_multiply(group, W: np.ndarray, v: int) -> np.ndarray:
    """Elementwise ``W * v`` for an array of element ids."""
    out = np.asarray(W)
    for s in group.words[v]:
        out = group.right_mul[out, s]
    return out


def left_multiply(group, v: int, W: np.ndarray) -> np.ndarray:
    """Elementwise ``v * W``."""
    inv = group.inverse
    return inv[right_multiply(group, inv[np.asarray(W)], int(inv[v]))]


class TwinSpace:
    """A validated twin building.  Construct through :func:`validate_twin`."""

    def __init__(self, plus: BuildingSpace, minus: BuildingSpace, pm: np.ndarray, mp: np.ndarray, rule=None):
        self.plus = plus
        self.minus = minus
        self.group = plus.group
        self.pm = pm
        self.mp = mp
        self.rule = rule
        pm.setflags(write=False)
        mp.setflags(write=False)
        self.n_plus = plus.n
        self.n_minus = minus.n
        self.n = self.n_plus + self.n_minus
        self._delta = None
        self._opp = None
        pairs = np.argwhere(pm == 0)
        self.opp_pairs = pairs.astype(np.int64)
        self.opp_pairs.setflags(write=False)
        index = np.full(pm.shape, -1, dtype=np.int64)
        index[pairs[:, 0], pairs[:, 1]] = np.arange(len(pairs))
        index.setflags(write=False)
        self.opp_index = index

    def __repr__(self):
        return f"TwinSpace(rank={self.group.rank}, plus={self.n_plus}, minus={self.n_minus})"

    # -- addressing -------------------------------------------------------
    def sign(self, g: int) -> int:
        return PLUS if g < self.n_plus else MINUS

    def local(self, g: int) -> int:
        return int(g) if g < self.n_plus else int(g) - self.n_plus

    def glob(self, sign: int, x: int) -> int:
        return int(x) if sign == PLUS else int(x) + self.n_plus

    def half(self, sign: int) -> BuildingSpace:
        return self.plus if sign == PLUS else self.minus

    def space_sign(self, space: BuildingSpace) -> int:
        if space is self.plus:
            return PLUS
        if space is self.minus:
            return MINUS
        raise InvalidInput("residue does not belong to this twin")

    def globals_of(self, R: Residue) -> np.ndarray:
        off = 0 if self.space_sign(R.space) == PLUS else self.n_plus
        return np.asarray(R.chambers, dtype=np.int64) + off

    # -- distances --------------------------------------------------------
    @property
    def delta(self) -> np.ndarray:
        """Merged distance table on all chambers (plus block, codistance blocks, minus block)."""
        if self._delta is None:
            d = np.block([[self.plus.dist, self.pm], [self.mp, self.minus.dist]]).astype(np.int32)
            d.setflags(write=False)
            self._delta = d
        return self._delta

    def dist(self, x: int, y: int) -> int:
        return int(self.delta[x, y])

    def length(self, x: int, y: int) -> int:
        return int(self.group.length[self.delta[x, y]])

    def opposites(self, g: int) -> np.ndarray:
        """Global ids of the chambers opposite ``g``."""
        if g < self.n_plus:
            return np.flatnonzero(self.pm[g] == 0) + self.n_plus
        return np.flatnonzero(self.mp[g - self.n_plus] == 0)

    def is_opposite(self, x: int, y: int) -> bool:
        return self.sign(x) != self.sign(y) and self.delta[x, y] == 0

    def residue(self, g: int, J: Iterable[int]) -> Residue:
        return residue_of(self.half(self.sign(g)), self.local(g), J)

    def foundation(self, g: int, k: int = 2) -> np.ndarray:
        """Global ids of E_k(g)."""
        b = self.half(self.sign(g))
        x = self.local(g)
        mask = b.support_size(x) <= k
        off = 0 if self.sign(g) == PLUS else self.n_plus
        return np.flatnonzero(mask) + off

    @property
    def opp(self):
        """Opp as a chamber system; chamber i is the pair ``opp_pairs[i]``."""
        if self._opp is None:
            from .chamsys import opp_system

            self._opp = opp_system(self)
        return self._opp

    def swapped(self) -> "TwinSpace":
        """The same twin with the roles of the halves exchanged."""
        return TwinSpace(self.minus, self.plus, self.mp.copy(), self.pm.copy(), rule=self.rule)


def _check_tables(plus: BuildingSpace, minus: BuildingSpace, pm, mp):
    g = plus.group
    if minus.group is not g and minus.group.matrix != g.matrix:
        raise TypeMismatch("the two halves have different Coxeter matrices")
    pm = np.asarray(pm, dtype=np.int32)
    mp = np.asarray(mp, dtype=np.int32)
    if pm.shape != (plus.n, minus.n) or mp.shape != (minus.n, plus.n):
        raise InvalidInput("codistance table has the wrong shape")
    if pm.size and (pm.min() < 0 or pm.max() >= g.order or mp.min() < 0 or mp.max() >= g.order):
        raise InvalidInput("codistance entry is not a group element")
    return pm, mp


def twin_axiom_scan(plus: BuildingSpace, minus: BuildingSpace, pm: np.ndarray, mp: np.ndarray):
    """First violated twin axiom as ``(axiom, witness)`` or None.

    Witnesses use global chamber ids: ``(x, y)`` for Tw1, ``(x, y, z)`` for
    Tw2 and ``(x, y, s)`` for Tw3.
    """
    g = plus.group
    npl = plus.n
    bad = mp.T != g.inverse[pm]
    if bad.any():
        x, y = (int(v) for v in np.argwhere(bad)[0])
        return "Tw1", (x, y + npl)
    for T, other, row_off, col_off in ((pm, minus, 0, npl), (mp, plus, npl, 0)):
        U, V, S = _edges(other.panels)
        hit = K.pair_scan(T, g.right_mul, g.length, U, V, S, 1)
        if hit[0] >= 0:
            x, y, z, _ = (int(v) for v in hit)
            return "Tw2", (x + row_off, y + col_off, z + col_off)
        gy, gs, gptr, gz = panel_groups(other.panels, other.n)
        hit = K.exists_scan(T, g.right_mul, gy, gs, gptr, gz)
        if hit[0] >= 0:
            x, y, s = (int(v) for v in hit)
            return "Tw3", (x + row_off, y + col_off, s)
    return None


def validate_twin(plus: BuildingSpace, minus: BuildingSpace, costar) -> TwinSpace:
    """Check (Tw1)-(Tw3) exhaustively and return the twin.

    ``costar`` is ``"spherical-double"`` or a pair of tables
    ``(plus_to_minus, minus_to_plus)`` of element ids.
    """
    if isinstance(costar, str):
        if costar != SPHERICAL_DOUBLE:
            raise InvalidInput(f"unknown codistance rule {costar!r}")
        pm, mp = _double_tables(plus)
        if minus.panels != _opposite_panels(plus):
            raise InvalidInput("the spherical-double rule needs the minus half to be the opposition twist of the plus half")
        rule = SPHERICAL_DOUBLE
    else:
        pm, mp = costar
        rule = None
    pm, mp = _check_tables(plus, minus, pm, mp)
    if minus.group is not plus.group:
        minus = validate_building(plus.group, minus.n, minus.panels, minus.labels)
    found = twin_axiom_scan(plus, minus, pm, mp)
    if found:
        axiom, witness = found
        raise AxiomViolation(axiom, witness)
    return TwinSpace(plus, minus, pm, mp, rule)


def _opposite_panels(b: BuildingSpace):
    opp = b.group.opposition()
    return tuple(b.panels[opp[s]] for s in range(b.rank))


def _double_tables(b: BuildingSpace):
    g = b.group
    pm = right_multiply(g, b.dist, g.w0).astype(np.int32)
    mp = np.ascontiguousarray(g.inverse[pm].T)
    return pm, mp


def minus_half(b: BuildingSpace) -> BuildingSpace:
    """The minus half of the spherical double: same chambers, s-panels taken from w0 s w0."""
    return validate_building(b.group, b.n, _opposite_panels(b), b.labels)


def spherical_double(b: BuildingSpace) -> TwinSpace:
    """Twin a spherical building with itself; x and y are opposite iff delta(x, y) = w0.

    The minus half carries the panels of type ``w0 s w0`` as its s-panels,
    so that its distance is ``w0 delta w0``; with this twist the codistance
    ``delta(x, y) w0`` satisfies all three twin axioms for every type.
    """
    return validate_twin(b, minus_half(b), SPHERICAL_DOUBLE)


def codistance(t: TwinSpace, x: int, y: int) -> int:
    """delta*(x, y) for global ids of opposite sign; same-sign pairs give the building distance."""
    return t.dist(x, y)


def cross_project(t: TwinSpace, x: int, R: Residue) -> int:
    """Projection of chamber ``x`` onto a residue ``R`` of the other half (global id)."""
    if t.space_sign(R.space) == t.sign(x):
        raise InvalidInput("cross projection needs a residue of the opposite sign")
    ch = t.globals_of(R)
    g = t.group
    lens = g.length[t.delta[x, ch]]
    best = lens.max()
    hits = ch[lens == best]
    if hits.size != 1:
        raise GateNotUnique(f"{hits.size} chambers at maximal codistance", witness=(x, tuple(int(h) for h in hits)))
    z = int(hits[0])
    if np.any(left_multiply(g, int(t.delta[x, z]), t.delta[z, ch]) != t.delta[x, ch]):
        raise GateNotUnique("codistance does not factor through the gate", witness=(x, z))
    return z


def project(t: TwinSpace, x: int, R: Residue) -> int:
    """Projection of any chamber onto any residue, as a global id."""
    sign = t.space_sign(R.space)
    if sign == t.sign(x):
        z = project_to_residue(R.space, t.local(x), R)
        return t.glob(sign, z)
    return cross_project(t, x, R)


@dataclass(frozen=True)
class TwinApartment:
    plus: tuple[int, ...]  # local ids in the plus half
    minus: tuple[int, ...]  # local ids in the minus half
    chambers: tuple[int, ...]  # global ids


def twin_apartment_of(t: TwinSpace, x: int, y: int) -> TwinApartment:
    """A(x, y) = {z : delta(z, x) = delta(z, y)} for an opposite pair."""
    if not t.is_opposite(x, y):
        raise NotOpposite(f"{x} and {y} are not opposite", witness=(x, y))
    d = t.delta
    sigma = np.flatnonzero(d[:, x] == d[:, y])
    plus = tuple(int(z) for z in sigma[sigma < t.n_plus])
    minus = tuple(int(z) - t.n_plus for z in sigma[sigma >= t.n_plus])
    order = t.group.order
    if len(plus) != order or len(minus) != order:
        raise InvariantBroken("twin apartment halves do not have |W| chambers", witness=(x, y))
    if not apartment_check(t.plus, plus) or not apartment_check(t.minus, minus):
        raise InvariantBroken("twin apartment half is not an apartment", witness=(x, y))
    sub = d[np.ix_(sigma, sigma)]
    counts = (sub == 0).sum(axis=1) - 1  # the diagonal is identity as well
    if np.any(counts != 1):
        z = int(sigma[np.flatnonzero(counts != 1)[0]])
        raise InvariantBroken("chamber without a unique opposite in the twin apartment", witness=(x, y, z))
    return TwinApartment(plus, minus, tuple(int(z) for z in sigma))


class OppositionReport(NamedTuple):
    passed: bool
    failures: tuple  # (check name, witness)
    matching: tuple  # pairs (u, proj_T u) as global ids


def opposite_residue_pairs(t: TwinSpace, J: Iterable[int]):
    """All pairs (R, T) of opposite J-residues, R in the plus half."""
    from .building import residues

    J = frozenset(J)
    out = []
    minus_res = residues(t.minus, J)
    rep = np.empty(t.n_minus, dtype=np.int64)
    for i, T in enumerate(minus_res):
        rep[list(T.chambers)] = i
    for R in residues(t.plus, J):
        hit = np.unique(rep[np.flatnonzero((t.pm[list(R.chambers)] == 0).any(axis=0))])
        out.extend((R, minus_res[i]) for i in hit)
    return out


def residue_opposition_check(t: TwinSpace, R: Residue, T: Residue) -> OppositionReport:
    """Laws of a pair of opposite spherical residues R (plus) and T (minus).

    Checks: every chamber has an opposite in the other residue; all cross
    codistances lie in <J>; proj_T x = y iff delta*(x, y) = r_J iff
    proj_R y = x; the two projections are mutually inverse bijections.
    """
    if R.jtype != T.jtype:
        raise TypeMismatch("residues have different types")
    if t.space_sign(R.space) != PLUS or t.space_sign(T.space) != MINUS:
        raise InvalidInput("expected R in the plus half and T in the minus half")
    g = t.group
    J = R.jtype
    r, s = t.globals_of(R), t.globals_of(T)
    block = t.delta[np.ix_(r, s)]
    if not (block == 0).any():
        raise NotOpposite("residues contain no opposite pair", witness=(R.chambers[0], T.chambers[0]))
    failures = []
    for i in np.flatnonzero(~(block == 0).any(axis=1)):
        failures.append(("opposite-exists", (int(r[i]),)))
    for j in np.flatnonzero(~(block == 0).any(axis=0)):
        failures.append(("opposite-exists", (int(s[j]),)))
    outside = ~g.in_parabolic(block, J)
    for i, j in np.argwhere(outside)[:1]:
        failures.append(("codistance-in-parabolic", (int(r[i]), int(s[j]))))
    rJ = g.longest(J)
    to_T = {int(u): project(t, int(u), T) for u in r}
    to_R = {int(v): project(t, int(v), R) for v in s}
    for i, u in enumerate(r):
        for j, v in enumerate(s):
            a = to_T[int(u)] == v
            b = block[i, j] == rJ
            c = to_R[int(v)] == u
            if not (a == b == c):
                failures.append(("gate-equivalence", (int(u), int(v))))
    for u in r:
        if to_R[to_T[int(u)]] != u:
            failures.append(("projection-inverse", (int(u),)))
    for v in s:
        if to_T[to_R[int(v)]] != v:
            failures.append(("projection-inverse", (int(v),)))
    matching = tuple(sorted((int(u), to_T[int(u)]) for u in r))
    return OppositionReport(not failures, tuple(failures), matching)
