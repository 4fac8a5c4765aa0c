"""Retractions of the plus half onto a minus apartment, and the gallery constructions.

Retractions work with *local* ids: they take a plus chamber and return a
minus chamber.  The gallery constructions (:func:`descent_step`,
:func:`connecting_sequence`, :func:`omega_gallery_join`) take global ids
because they apply to either sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .chamsys import Gallery, find_gallery
from .errors import InvalidInput, InvariantBroken, NotOpposite, PreconditionViolated
from .building import residue_of
from .twin import MINUS, PLUS, TwinSpace, cross_project, project, twin_apartment_of


def _inverse_index(group, dist_row: np.ndarray, sigma: Sequence[int]) -> np.ndarray:
    inv = np.full(group.order, -1, dtype=np.int64)
    inv[dist_row[list(sigma)]] = sigma
    if np.any(inv < 0):
        raise InvariantBroken("apartment does not cover W", witness=tuple(sigma))
    return inv


@dataclass(frozen=True)
class PiRetraction:
    """x -> the chamber of Sigma at minus-distance delta*(c, x) from c."""

    twin: TwinSpace = field(repr=False)
    c: int  # local minus id
    sigma: tuple[int, ...]  # local minus ids
    image: np.ndarray = field(repr=False)

    def __call__(self, x: int) -> int:
        return int(self.image[x])


@dataclass(frozen=True)
class OmegaRetraction:
    """x -> the chamber of A_-(c+, c-) at minus-distance delta+(c+, x) from c-."""

    twin: TwinSpace = field(repr=False)
    c_plus: int
    c_minus: int
    sigma: tuple[int, ...]
    image: np.ndarray = field(repr=False)

    def __call__(self, x: int) -> int:
        return int(self.image[x])


def pi_retraction(t: TwinSpace, c: int, sigma: Sequence[int] | None = None) -> PiRetraction:
    """π for base chamber ``c`` (local minus id) and an apartment of the minus half.

    Without ``sigma`` the apartment A_-(x, c) for the least x opposite c is used.
    """
    if sigma is None:
        x = int(np.flatnonzero(t.mp[c] == 0)[0])
        sigma = twin_apartment_of(t, x, t.glob(MINUS, c)).minus
    sigma = tuple(sorted(int(y) for y in sigma))
    if c not in sigma:
        raise InvalidInput("the apartment must contain the base chamber")
    inv = _inverse_index(t.group, t.minus.dist[c], sigma)
    image = inv[t.mp[c]]
    image.setflags(write=False)
    return PiRetraction(t, int(c), sigma, image)


def omega_retraction(t: TwinSpace, c_plus: int, c_minus: int) -> OmegaRetraction:
    if t.pm[c_plus, c_minus] != 0:
        raise NotOpposite("base chambers are not opposite", witness=(c_plus, c_minus))
    sigma = twin_apartment_of(t, c_plus, t.glob(MINUS, c_minus)).minus
    inv = _inverse_index(t.group, t.minus.dist[c_minus], sigma)
    image = inv[t.plus.dist[c_plus]]
    image.setflags(write=False)
    return OmegaRetraction(t, int(c_plus), int(c_minus), sigma, image)


def pi_retract(t: TwinSpace, gamma: PiRetraction, x: int) -> int:
    return gamma(x)


def omega_retract(t: TwinSpace, cbar: tuple[int, int], x: int) -> int:
    return omega_retraction(t, *cbar)(x)


class RetractionGraph(NamedTuple):
    opp_ids: np.ndarray  # Opp chamber id of (x, r(x)) for every plus chamber x
    members: frozenset

    def __len__(self):
        return len(self.members)


def retraction_graph(t: TwinSpace, r: PiRetraction | OmegaRetraction) -> RetractionGraph:
    """The set {(x, r(x))} in Opp, checked to be an adjacency-preserving copy of C+."""
    image = r.image
    x = np.arange(t.n_plus)
    if np.any(t.pm[x, image] != 0):
        bad = int(np.flatnonzero(t.pm[x, image] != 0)[0])
        raise InvariantBroken("retraction image is not opposite", witness=(bad, int(image[bad])))
    ids = t.opp_index[x, image]
    if np.unique(ids).size != t.n_plus:
        raise InvariantBroken("retraction graph is not a bijective copy of the plus half")
    pl, mi = t.plus.panel_of, t.minus.panel_of
    for s in range(t.group.rank):
        target = mi[s, image]
        ref = np.empty(len(t.plus.panels[s]), dtype=target.dtype)
        ref[pl[s]] = target
        bad = np.flatnonzero(target != ref[pl[s]])
        if bad.size:
            P = t.plus.panels[s][pl[s, bad[0]]]
            raise InvariantBroken("retraction does not preserve s-adjacency", witness=(s, tuple(P)))
    return RetractionGraph(ids, frozenset(ids.tolist()))


# -- law checks (return lists of failures, empty when the law holds) ----------


def pi_law_failures(t: TwinSpace, gamma: PiRetraction, xs: Sequence[int] | None = None) -> list:
    """Adjacency preservation (π1), opposition (π2) and c in A(x, π(x)) (π3)."""
    return _law_failures(t, gamma, xs, lambda x: (t.glob(MINUS, gamma.c), x), "pi")


def omega_law_failures(t: TwinSpace, omega: OmegaRetraction, xs: Sequence[int] | None = None) -> list:
    """Adjacency preservation (ω1), opposition (ω2) and c+ in A(x, ω(x)) (ω3)."""
    return _law_failures(t, omega, xs, lambda x: (omega.c_plus, x), "omega")


def _law_failures(t, r, xs, base, tag):
    xs = range(t.n_plus) if xs is None else xs
    d = t.delta
    out = []
    for x in xs:
        x = int(x)
        img = t.glob(MINUS, r(x))
        for s in range(t.group.rank):
            Q = t.minus.panel_of[s, r(x)]
            for y in t.plus.panel(s, x):
                if t.minus.panel_of[s, r(y)] != Q:
                    out.append((f"{tag}1", (x, int(y), s)))
        if d[x, img] != 0:
            out.append((f"{tag}2", (x, img)))
        c, _ = base(x)
        if d[c, x] != d[c, img]:
            out.append((f"{tag}3", (x, img)))
    return out


def panel_projection_failures(t: TwinSpace, omega: OmegaRetraction, panels=None) -> list:
    """For each panel P and x, y in P with y one step further from c+ than x:
    proj_P c+ = x, proj_Q c+ = ω(y), proj_P ω(y) = x and proj_Q x = ω(y),
    where Q is the minus panel holding ω(x) and ω(y)."""
    out = []
    cp = omega.c_plus
    g = t.group
    if panels is None:
        panels = [(s, P) for s in range(g.rank) for P in t.plus.panels[s]]
    for s, P in panels:
        lens = g.length[t.plus.dist[cp, list(P)]]
        x = P[int(np.argmin(lens))]
        for y in P:
            if g.length[t.plus.dist[cp, y]] != g.length[t.plus.dist[cp, x]] + 1:
                continue
            wy = omega(y)
            RP = residue_of(t.plus, x, [s])
            RQ = residue_of(t.minus, wy, [s])
            if omega(x) not in RQ:
                out.append(("panel-image", (s, x, y)))
                continue
            gx, gy_m = t.glob(PLUS, x), t.glob(MINUS, wy)
            checks = (
                project(t, cp, RP) == gx,
                project(t, cp, RQ) == gy_m,
                project(t, gy_m, RP) == gx,
                project(t, gx, RQ) == gy_m,
            )
            for i, ok in enumerate(checks):
                if not ok:
                    out.append((f"panel-projection-{i + 1}", (s, x, y)))
    return out


# -- gallery constructions --------------------------------------------------------


class DescentStep(NamedTuple):
    x_prime: int
    z: int


def _least_at_distance(t: TwinSpace, d: int, w: int) -> int:
    """Least-id chamber x' of d's half with delta(x', d) = w (global ids)."""
    off = 0 if t.sign(d) == PLUS else t.n_plus
    b = t.half(t.sign(d))
    hits = np.flatnonzero(b.dist[:, t.local(d)] == w)
    if hits.size == 0:
        raise InvariantBroken("no chamber at the required distance", witness=(d, w))
    return int(hits[0]) + off


def descent_step(t: TwinSpace, c: int, gallery: Sequence[int]) -> DescentStep:
    """One descent move towards d.

    ``gallery`` is ``(x = d_0, ..., d_k, d_{k+1} = d)`` with x opposite c,
    l*(c, d_i) = i for i <= k and l*(c, d) <= k.  Returns x' opposite c and
    z with delta*(c, z) = delta(x, z) = delta(x', z) and l(x', d) < k + 1.
    """
    gallery = [int(v) for v in gallery]
    g = t.group
    if len(gallery) < 2:
        raise PreconditionViolated("the gallery needs at least one step")
    k = len(gallery) - 2
    x, dk, d = gallery[0], gallery[k], gallery[k + 1]
    if len({t.sign(v) for v in gallery}) != 1 or t.sign(c) == t.sign(x):
        raise PreconditionViolated("gallery must lie in the half opposite to c")
    star = g.length[t.delta[c, gallery]]
    if star[0] != 0 or np.any(star[: k + 1] != np.arange(k + 1)) or star[k + 1] > k:
        raise PreconditionViolated("codistance profile along the gallery is wrong", witness=tuple(int(v) for v in star))
    w = t.dist(x, dk)
    s_elem = t.dist(dk, d)
    if g.length[s_elem] != 1:
        raise PreconditionViolated("last step of the gallery is not a panel step", witness=(dk, d))
    s = g.words[s_elem][0]
    ws = int(g.right_mul[w, s])
    if g.length[ws] < g.length[w]:
        z = dk
        x_prime = _least_at_distance(t, d, ws)
    else:
        z = cross_project(t, c, t.residue(dk, [s]))
        x_prime = _least_at_distance(t, d, w)
    dl = t.delta
    if not (dl[c, x_prime] == 0 and dl[c, z] == dl[x, z] == dl[x_prime, z] and g.length[dl[x_prime, d]] < k + 1):
        raise InvariantBroken("descent step postcondition fails", witness=(c, tuple(gallery), x_prime, z))
    return DescentStep(x_prime, int(z))


class ConnectingSequence(NamedTuple):
    xs: tuple[int, ...]  # x = x_0, ..., x_k = y
    zs: tuple[int, ...]  # z_1, ..., z_k

    @property
    def k(self) -> int:
        return len(self.zs)


def half_gallery(t: TwinSpace, x: int, y: int) -> Gallery:
    """Least shortest gallery between two chambers of one half, in global ids."""
    sign = t.sign(x)
    if t.sign(y) != sign:
        raise InvalidInput("chambers lie in different halves")
    b = t.half(sign)
    G = find_gallery(b.chamber_system, t.local(x), t.local(y))
    off = 0 if sign == PLUS else t.n_plus
    return Gallery(tuple(v + off for v in G.chambers), G.step_types)


def connecting_sequence(t: TwinSpace, c: int, x: int, y: int) -> ConnectingSequence:
    """Chambers x = x_0, ..., x_k = y opposite c and z_1..z_k with
    delta*(c, z_i) = delta(x_{i-1}, z_i) = delta(x_i, z_i)."""
    if not (t.is_opposite(c, x) and t.is_opposite(c, y)):
        raise NotOpposite("x and y must both be opposite c", witness=(c, x, y))
    g = t.group
    xs, zs = [int(x)], []
    cur = int(x)
    while cur != y:
        m = t.length(cur, y)
        G = half_gallery(t, cur, y).chambers
        star = g.length[t.delta[c, list(G)]]
        k = 0
        while k + 1 <= m and star[k + 1] == k + 1:
            k += 1
        step = descent_step(t, c, G[: k + 2])
        if t.length(step.x_prime, y) >= m:
            raise InvariantBroken("connecting sequence does not descend", witness=(c, cur, y))
        zs.append(step.z)
        xs.append(step.x_prime)
        cur = step.x_prime
    dl = t.delta
    for i, z in enumerate(zs):
        if not (dl[c, z] == dl[xs[i], z] == dl[xs[i + 1], z]):
            raise InvariantBroken("connecting sequence postcondition fails", witness=(c, xs[i], xs[i + 1], z))
    return ConnectingSequence(tuple(xs), tuple(zs))


def omega_gallery_join(t: TwinSpace, gamma: PiRetraction, x: int, y: int, z: int) -> Gallery:
    """Gallery in Opp from (x, c) to (y, c) staying in both Π and Ω_(z, π(z)).

    ``x``, ``y``, ``z`` are global plus ids with x, y opposite c and
    delta(x, z) = delta*(c, z) = delta(y, z).  The returned gallery is in Opp
    chamber ids.
    """
    c = t.glob(MINUS, gamma.c)
    dl = t.delta
    if not (t.sign(x) == t.sign(y) == t.sign(z) == PLUS):
        raise PreconditionViolated("x, y and z must be plus chambers")
    if not (dl[c, x] == 0 and dl[c, y] == 0 and dl[x, z] == dl[c, z] == dl[y, z]):
        raise PreconditionViolated("distance equalities fail", witness=(x, y, z))
    path = half_gallery(t, x, z).chambers + half_gallery(t, z, y).chambers[1:]
    cache = t.__dict__.setdefault("_omega_cache", {})
    key = (z, gamma(z))
    omega = cache.get(key)
    if omega is None:
        omega = cache[key] = omega_retraction(t, *key)
    ids = []
    for u in path:
        if omega(u) != gamma(u):
            raise InvariantBroken("chamber leaves the ω-graph", witness=(x, y, z, u))
        ids.append(int(t.opp_index[u, gamma(u)]))
    G = t.opp.gallery(ids)
    if t.opp_pairs[G.beta][1] != gamma.c or t.opp_pairs[G.epsilon][1] != gamma.c:
        raise InvariantBroken("ω-gallery endpoints are wrong", witness=(x, y, z))
    return G
