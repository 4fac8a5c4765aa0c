"""Partial isometries between twins, local extension by search, and transport.

An isometry is stored as two aligned arrays of global chamber ids, ``dom``
(sorted) and ``img``.  Local extensions are computed by the constrained
backtracking kernel in :mod:`twinbuild._kernels`; every search runs until it
has either proven uniqueness or found a second solution, so the existence and
uniqueness of each extension is checked rather than assumed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels as K
from .chamsys import Gallery, spanning_tree
from .errors import (
    AdmissibilityFailure,
    DistanceViolation,
    DomainOverlap,
    HypothesisViolation,
    InconsistentTransport,
    InvalidInput,
    MultipleExtensions,
    NoExtension,
    NotInjective,
    NotOpposite,
    NotOppositeResidues,
    SignViolation,
    TwinBuildError,
)
from .retract import (
    connecting_sequence,
    omega_gallery_join,
    pi_retraction,
    retraction_graph,
)
from .twin import MINUS, PLUS, TwinSpace, project, twin_apartment_of


def _signs(t: TwinSpace, ids: np.ndarray) -> np.ndarray:
    return np.where(np.asarray(ids) < t.n_plus, 1, -1).astype(np.int64)


class PartialIsometry:
    """A validated partial isometry; build with :func:`make_isometry`."""

    __slots__ = ("source", "target", "dom", "img", "_map")

    def __init__(self, source: TwinSpace, target: TwinSpace, dom: np.ndarray, img: np.ndarray):
        order = np.argsort(dom, kind="stable")
        self.source = source
        self.target = target
        self.dom = np.asarray(dom, dtype=np.int64)[order]
        self.img = np.asarray(img, dtype=np.int64)[order]
        self.dom.setflags(write=False)
        self.img.setflags(write=False)
        self._map = None

    def __len__(self):
        return int(self.dom.size)

    def __repr__(self):
        return f"PartialIsometry({len(self)} chambers)"

    @property
    def mapping(self) -> dict:
        if self._map is None:
            self._map = dict(zip(self.dom.tolist(), self.img.tolist()))
        return self._map

    def __call__(self, x: int) -> int:
        return self.mapping[int(x)]

    def __contains__(self, x) -> bool:
        return int(x) in self.mapping

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PartialIsometry)
            and np.array_equal(self.dom, other.dom)
            and np.array_equal(self.img, other.img)
        )

    def __hash__(self):
        return hash((self.dom.tobytes(), self.img.tobytes()))

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.dom.tolist(), self.img.tolist()))

    def restrict(self, subset: Iterable[int]) -> "PartialIsometry":
        keep = np.isin(self.dom, np.fromiter(subset, dtype=np.int64))
        return PartialIsometry(self.source, self.target, self.dom[keep], self.img[keep])

    def values(self, xs) -> np.ndarray:
        """Images of a sorted-or-not array of domain chambers."""
        xs = np.asarray(xs, dtype=np.int64)
        pos = np.searchsorted(self.dom, xs)
        if np.any(pos >= self.dom.size) or np.any(self.dom[np.minimum(pos, self.dom.size - 1)] != xs):
            raise InvalidInput("chamber outside the domain")
        return self.img[pos]


def check_isometry(phi: PartialIsometry) -> None:
    """Raise unless (Iso1)-(Iso3) hold over all domain pairs."""
    src, tgt = phi.source, phi.target
    dom, img = phi.dom, phi.img
    if np.unique(dom).size != dom.size:
        raise NotInjective("a chamber is listed twice in the domain")
    if np.unique(img).size != img.size:
        vals, counts = np.unique(img, return_counts=True)
        raise NotInjective("two chambers have the same image", witness=int(vals[counts > 1][0]))
    if dom.size and (dom.min() < 0 or dom.max() >= src.n or img.min() < 0 or img.max() >= tgt.n):
        raise InvalidInput("chamber id out of range")
    bad = np.flatnonzero(_signs(src, dom) != _signs(tgt, img))
    if bad.size:
        raise SignViolation("image has the wrong sign", witness=(int(dom[bad[0]]), int(img[bad[0]])))
    hit = K.isometry_scan(src.delta, tgt.delta, dom, img)
    if hit[0] >= 0:
        i, j = int(hit[0]), int(hit[1])
        raise DistanceViolation("distance not preserved", witness=(int(dom[i]), int(dom[j])))


def make_isometry(src: TwinSpace, tgt: TwinSpace, pairs) -> PartialIsometry:
    """Validated partial isometry from (x, x') pairs of global ids (or a dict)."""
    if isinstance(pairs, Mapping):
        pairs = pairs.items()
    pairs = list(pairs)
    dom = np.array([int(a) for a, _ in pairs], dtype=np.int64)
    img = np.array([int(b) for _, b in pairs], dtype=np.int64)
    if np.unique(dom).size != dom.size:
        vals, counts = np.unique(dom, return_counts=True)
        raise NotInjective("a chamber is listed twice", witness=int(vals[counts > 1][0]))
    phi = PartialIsometry(src, tgt, dom, img)
    check_isometry(phi)
    return phi


def identity_isometry(t: TwinSpace, chambers: Iterable[int]) -> PartialIsometry:
    ch = np.fromiter(chambers, dtype=np.int64)
    return PartialIsometry(t, t, ch, ch.copy())


def permutation_isometry(src: TwinSpace, tgt: TwinSpace, perm: np.ndarray, chambers: Iterable[int]) -> PartialIsometry:
    """Restriction of a global chamber map (array over all source ids) to ``chambers``."""
    ch = np.fromiter(chambers, dtype=np.int64)
    return make_isometry(src, tgt, zip(ch.tolist(), np.asarray(perm)[ch].tolist()))


def admissible_check(phi: PartialIsometry, y: int, y_img: int) -> bool:
    src, tgt = phi.source, phi.target
    if src.sign(y) != tgt.sign(y_img):
        return False
    if y in phi:
        return phi(y) == y_img
    return bool(np.all(src.delta[phi.dom, y] == tgt.delta[phi.img, y_img]))


def admissibility_failures(phi: PartialIsometry, ys: np.ndarray, ys_img: np.ndarray) -> np.ndarray:
    """Indices i for which (ys[i], ys_img[i]) is not phi-admissible (vectorised)."""
    src, tgt = phi.source, phi.target
    ok = _signs(src, ys) == _signs(tgt, ys_img)
    ok &= np.all(src.delta[np.ix_(phi.dom, ys)] == tgt.delta[np.ix_(phi.img, ys_img)], axis=0)
    return np.flatnonzero(~ok)


def union_isometries(phi: PartialIsometry, psi: PartialIsometry) -> PartialIsometry:
    if phi.source is not psi.source or phi.target is not psi.target:
        raise InvalidInput("isometries live between different twins")
    if np.intersect1d(phi.dom, psi.dom).size or np.intersect1d(phi.img, psi.img).size:
        raise DomainOverlap("domains or images intersect")
    bad = admissibility_failures(phi, psi.dom, psi.img)
    if bad.size:
        z = int(psi.dom[bad[0]])
        raise AdmissibilityFailure(f"pair ({z}, {int(psi.img[bad[0]])}) is not admissible", witness=z)
    out = PartialIsometry(phi.source, phi.target, np.concatenate([phi.dom, psi.dom]), np.concatenate([phi.img, psi.img]))
    check_isometry(out)
    return out


def _image_residue(phi: PartialIsometry, R):
    """Residue of the target containing the image of R (R must meet the domain)."""
    t, tgt = phi.source, phi.target
    for g in t.globals_of(R):
        if int(g) in phi:
            return tgt.residue(phi(int(g)), R.jtype)
    raise InvalidInput("residue does not meet the domain")


def cross_transport(phi: PartialIsometry, x: int, R, T) -> int:
    """proj_{R'} phi(proj_T x) for x in R, where R and T are opposite residues
    in the domain of phi and R' is the image residue of R."""
    t = phi.source
    if R.jtype != T.jtype or t.space_sign(R.space) == t.space_sign(T.space):
        raise NotOppositeResidues("residues have different types or the same sign")
    r, s = t.globals_of(R), t.globals_of(T)
    if not (t.delta[np.ix_(r, s)] == 0).any():
        raise NotOppositeResidues("residues contain no opposite pair")
    Rp = _image_residue(phi, R)
    out = project(phi.target, phi(project(t, x, T)), Rp)
    if x in phi and phi(x) != out:
        raise DistanceViolation("transport through the opposite residue disagrees with the map", witness=x)
    return out


# ---------------------------------------------------------------------------
# search


class ExtensionStats:
    """Counters for every uniqueness search run through one transporter."""

    def __init__(self):
        self.searches = 0
        self.max_solutions = 0
        self.foundation_pair_solutions = None

    def record(self, count: int):
        self.searches += 1
        self.max_solutions = max(self.max_solutions, int(count))

    def as_dict(self) -> dict:
        return {
            "searches": self.searches,
            "step_solutions_max": self.max_solutions,
            "foundation_pair_solutions": self.foundation_pair_solutions,
        }


def search_extensions(
    src: TwinSpace,
    tgt: TwinSpace,
    dom: np.ndarray,
    img: np.ndarray,
    todo: np.ndarray,
    pool: np.ndarray,
    max_solutions: int = 2,
) -> tuple[int, np.ndarray]:
    """Extend dom -> img to ``todo`` using values from ``pool`` (tried in the given order)."""
    dom = np.ascontiguousarray(dom, dtype=np.int64)
    img = np.ascontiguousarray(img, dtype=np.int64)
    todo = np.ascontiguousarray(todo, dtype=np.int64)
    pool = np.ascontiguousarray(pool, dtype=np.int64)
    count, sols = K.extend_search(
        src.delta, tgt.delta, dom, img, todo, _signs(src, todo), pool, _signs(tgt, pool), int(max_solutions)
    )
    return int(count), sols


def _foundation(t: TwinSpace, g: int) -> np.ndarray:
    cache = t.__dict__.setdefault("_e2_cache", {})
    out = cache.get(g)
    if out is None:
        out = cache[g] = t.foundation(g, 2)
        out.setflags(write=False)
    return out


def pair_foundation(t: TwinSpace, cbar: tuple[int, int]) -> np.ndarray:
    """E2 of an opposite pair (global ids), sorted."""
    return np.union1d(_foundation(t, cbar[0]), _foundation(t, cbar[1]))


def _as_pair(t: TwinSpace, cbar) -> tuple[int, int]:
    a, b = (int(v) for v in cbar)
    if t.sign(a) != PLUS or t.sign(b) != MINUS:
        raise InvalidInput("an opposite pair is (plus chamber, minus chamber) in global ids")
    if t.delta[a, b] != 0:
        raise NotOpposite("pair is not opposite", witness=(a, b))
    return a, b


def extend_foundation_pair(
    phi: PartialIsometry, cbar, stats: ExtensionStats | None = None
) -> PartialIsometry:
    """Extend phi on E2(c+) + {c-} to the unique isometry on E2(c+) + E2(c-)."""
    src, tgt = phi.source, phi.target
    cp, cm = _as_pair(src, cbar)
    expect = np.union1d(_foundation(src, cp), [cm])
    if not np.array_equal(phi.dom, expect):
        raise InvalidInput("seed domain must be E2(c+) together with c-")
    cpp, cmp_ = _as_pair(tgt, (phi(cp), phi(cm)))
    if not np.array_equal(np.sort(phi.img), np.union1d(_foundation(tgt, cpp), [cmp_])):
        raise InvalidInput("seed image must be E2(c+') together with c-'")
    todo = np.setdiff1d(_foundation(src, cm), [cm])
    pool = np.setdiff1d(_foundation(tgt, cmp_), [cmp_])
    count, sols = search_extensions(src, tgt, phi.dom, phi.img, todo, pool)
    if stats is not None:
        stats.foundation_pair_solutions = count
        stats.record(count)
    if count == 0:
        raise NoExtension("seed does not extend to E2(c-)", witness=(cp, cm))
    if count > 1:
        raise MultipleExtensions("seed extends in more than one way", witness=(cp, cm, sols[0].tolist(), sols[1].tolist()))
    return PartialIsometry(src, tgt, np.concatenate([phi.dom, todo]), np.concatenate([phi.img, sols[0]]))


def _step_arrays(src, tgt, dom_c, img_c, dbar, stats):
    """Core of the one-step extension; returns (dom_d, img_d, image pair)."""
    dp, dm = dbar
    pos = np.searchsorted(dom_c, [dp, dm])
    if np.any(pos >= dom_c.size) or dom_c[pos[0]] != dp or dom_c[pos[1]] != dm:
        raise InvalidInput("the new opposite pair must lie in the current domain")
    dpp, dmp = int(img_c[pos[0]]), int(img_c[pos[1]])
    dom_d = pair_foundation(src, (dp, dm))
    seed_mask = np.isin(dom_d, dom_c)
    seed = dom_d[seed_mask]
    seed_img = img_c[np.searchsorted(dom_c, seed)]
    todo = dom_d[~seed_mask]
    pool = np.setdiff1d(pair_foundation(tgt, (dpp, dmp)), seed_img)
    count, sols = search_extensions(src, tgt, seed, seed_img, todo, pool)
    if stats is not None:
        stats.record(count)
    if count == 0:
        raise NoExtension("no isometry on the neighbouring foundation", witness=(dp, dm))
    if count > 1:
        raise MultipleExtensions("neighbouring foundation admits two isometries", witness=(dp, dm))
    img_d = np.empty(dom_d.size, dtype=np.int64)
    img_d[seed_mask] = seed_img
    img_d[~seed_mask] = sols[0]
    return dom_d, img_d, (dpp, dmp)


def step_extend(phi: PartialIsometry, cbar, dbar, stats: ExtensionStats | None = None) -> PartialIsometry:
    """The unique isometry on E2(d) agreeing with phi (on E2(c)) where they overlap."""
    src, tgt = phi.source, phi.target
    cbar = _as_pair(src, cbar)
    dbar = _as_pair(src, dbar)
    if cbar == dbar:
        return phi
    if not np.array_equal(phi.dom, pair_foundation(src, cbar)):
        raise InvalidInput("phi must be defined exactly on E2 of the base pair")
    a = src.opp_index[cbar[0], cbar[1] - src.n_plus]
    b = src.opp_index[dbar[0], dbar[1] - src.n_plus]
    if not src.opp.is_adjacent(a, b):
        raise InvalidInput("pairs are not adjacent in Opp")
    dom_d, img_d, _ = _step_arrays(src, tgt, phi.dom, phi.img, dbar, stats)
    return PartialIsometry(src, tgt, dom_d, img_d)


class Transporter:
    """Memoised transport of local isometries along galleries of Opp.

    States are (Opp chamber id, image array on its E2); a step from ``u`` to
    an adjacent ``v`` is cached by (u, v, image bytes).
    """

    def __init__(self, src: TwinSpace, tgt: TwinSpace):
        self.src = src
        self.tgt = tgt
        self.stats = ExtensionStats()
        self._memo: dict = {}
        self._dom: dict = {}

    def pair(self, u: int) -> tuple[int, int]:
        a, b = self.src.opp_pairs[u]
        return int(a), int(b) + self.src.n_plus

    def domain(self, u: int) -> np.ndarray:
        d = self._dom.get(u)
        if d is None:
            d = self._dom[u] = pair_foundation(self.src, self.pair(u))
        return d

    def start(self, phi: PartialIsometry, cbar) -> tuple[int, np.ndarray]:
        cbar = _as_pair(self.src, cbar)
        u = int(self.src.opp_index[cbar[0], cbar[1] - self.src.n_plus])
        if not np.array_equal(phi.dom, self.domain(u)):
            raise InvalidInput("phi must be defined exactly on E2 of the base pair")
        return u, phi.img

    def step(self, u: int, img: np.ndarray, v: int) -> np.ndarray:
        if u == v:
            return img
        key = (u, v, img.tobytes())
        out = self._memo.get(key)
        if out is None:
            dom_d, img_d, _ = _step_arrays(self.src, self.tgt, self.domain(u), img, self.pair(v), self.stats)
            img_d.setflags(write=False)
            out = self._memo[key] = img_d
        return out

    def along(self, u: int, img: np.ndarray, path: Sequence[int]) -> np.ndarray:
        if path and path[0] != u:
            raise InvalidInput("gallery does not start at the current chamber")
        for a, b in zip(path, path[1:]):
            img = self.step(a, img, b)
        return img

    def image_pair(self, u: int, img: np.ndarray) -> int:
        """Opp id in the target of the image of chamber u."""
        dom = self.domain(u)
        a, b = self.pair(u)
        ia, ib = (int(img[np.searchsorted(dom, v)]) for v in (a, b))
        return int(self.tgt.opp_index[ia, ib - self.tgt.n_plus])

    def isometry(self, u: int, img: np.ndarray) -> PartialIsometry:
        return PartialIsometry(self.src, self.tgt, self.domain(u), img)


def gallery_transport(phi: PartialIsometry, cbar, gallery: Gallery | Sequence[int], transporter: Transporter | None = None):
    """Fold the one-step extension along an Opp gallery starting at cbar.

    Returns (target Opp id of the end chamber's image, transported isometry).
    """
    tr = transporter or Transporter(phi.source, phi.target)
    u, img = tr.start(phi, cbar)
    path = list(gallery.chambers if isinstance(gallery, Gallery) else gallery)
    if not path:
        path = [u]
    img = tr.along(u, img, path)
    return tr.image_pair(path[-1], img), tr.isometry(path[-1], img)


def agree_on_overlap(dom_a, img_a, dom_b, img_b) -> int | None:
    """First chamber in both domains with different images, or None."""
    common, ia, ib = np.intersect1d(dom_a, dom_b, assume_unique=True, return_indices=True)
    bad = np.flatnonzero(img_a[ia] != img_b[ib])
    return int(common[bad[0]]) if bad.size else None


@dataclass
class IsometryFamily:
    root: int
    images: dict  # Opp id -> image array on E2 of that pair
    base_map: dict  # Opp id -> target Opp id
    tree_edges: int
    non_tree_edges: int
    transporter: Transporter = field(repr=False)

    def isometry(self, u: int) -> PartialIsometry:
        return self.transporter.isometry(u, self.images[u])

    def __len__(self):
        return len(self.images)


def transport_family(
    phi: PartialIsometry, cbar, subset: Iterable[int], transporter: Transporter | None = None
) -> IsometryFamily:
    """Transport phi over a connected subset of Opp along a BFS tree, then
    require agreement across every remaining edge of the subset."""
    tr = transporter or Transporter(phi.source, phi.target)
    root, img = tr.start(phi, cbar)
    tree = spanning_tree(phi.source.opp, root, subset)
    images = {root: img}
    for parent, child in tree.tree_edges:
        images[child] = tr.step(parent, images[parent], child)
    for u, v in tree.non_tree_edges:
        bad = agree_on_overlap(tr.domain(u), images[u], tr.domain(v), images[v])
        if bad is not None:
            raise InconsistentTransport("transport is path dependent", witness=(u, v, bad))
    base = {u: tr.image_pair(u, im) for u, im in images.items()}
    return IsometryFamily(root, images, base, len(tree.tree_edges), len(tree.non_tree_edges), tr)


def build_phi_plus(family: IsometryFamily, opp_ids: np.ndarray) -> PartialIsometry:
    """phi+(x) := phi_x(x), where opp_ids[x] is the family index of the pair over x."""
    tr = family.transporter
    src, tgt = tr.src, tr.tgt
    xs = np.arange(src.n_plus)
    img = np.empty(src.n_plus, dtype=np.int64)
    for x in xs:
        u = int(opp_ids[x])
        dom = tr.domain(u)
        img[x] = family.images[u][np.searchsorted(dom, x)]
    phi_plus = PartialIsometry(src, tgt, xs, img)
    check_isometry(phi_plus)
    for x in xs:
        u = int(opp_ids[x])
        e2 = _foundation(src, int(x))
        local = family.images[u][np.searchsorted(tr.domain(u), e2)]
        if np.any(local != img[e2]):
            raise DistanceViolation("local isometry differs from the glued map", witness=int(x))
    return phi_plus


# ---------------------------------------------------------------------------
# the main pipeline


def check_hypotheses(t: TwinSpace, name: str = "twin") -> None:
    g = t.group
    if not g.matrix.is_two_spherical():
        raise HypothesisViolation(f"{name} is not 2-spherical")
    if g.rank < 3:
        raise HypothesisViolation(f"{name} has rank {g.rank} < 3")
    for b in (t.plus, t.minus):
        if any(len(p) < 3 for parts in b.panels for p in parts):
            raise HypothesisViolation(f"{name} is not thick")


@dataclass
class ExtensionResult:
    isometry: PartialIsometry
    phi_plus: PartialIsometry
    phi_minus: PartialIsometry
    report: dict


class _Stage:
    def __init__(self, report: dict, name: str):
        self.report = report
        self.name = name

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.report.setdefault("timings", {})[self.name] = round(time.perf_counter() - self.t0, 4)
        if exc is not None and isinstance(exc, TwinBuildError) and not hasattr(exc, "stage"):
            exc.stage = self.name
        return False


def main_extension(phi: PartialIsometry, cbar, check_minus_agreement: bool = True) -> ExtensionResult:
    """Extend an isometry on E2(c+) + {c-} to one on C+ + E2(c-).

    Stages: extend to E2 of the pair; transport over the graph of a
    retraction onto A_-(c+, c-); glue the plus half; confirm that every
    chamber opposite c- yields the same map on E2(c-); glue the two halves
    after checking admissibility.  A failing stage raises with ``stage`` set.
    """
    src, tgt = phi.source, phi.target
    report: dict = {}
    with _Stage(report, "hypotheses"):
        check_hypotheses(src, "source")
        check_hypotheses(tgt, "target")
        cp, cm = _as_pair(src, cbar)
    tr = Transporter(src, tgt)

    with _Stage(report, "foundation-pair"):
        phi2 = extend_foundation_pair(phi, (cp, cm), tr.stats)

    with _Stage(report, "retraction"):
        sigma = twin_apartment_of(src, cp, cm).minus
        gamma = pi_retraction(src, cm - src.n_plus, sigma)
        graph = retraction_graph(src, gamma)

    with _Stage(report, "transport-family"):
        family = transport_family(phi2, (cp, cm), graph.members, tr)
        report["family_size"] = len(family)
        report["non_tree_edges_checked"] = family.non_tree_edges

    with _Stage(report, "glue-plus"):
        phi_plus = build_phi_plus(family, graph.opp_ids)

    with _Stage(report, "minus-agreement"):
        e2m = _foundation(src, cm)
        phi_minus = phi2.restrict(e2m.tolist())
        root = family.root
        opposite = src.opposites(cm)
        segments = 0
        if check_minus_agreement:
            for x in opposite:
                x = int(x)
                seq = connecting_sequence(src, cm, cp, x)
                u, img = root, phi2.img
                for i, z in enumerate(seq.zs):
                    G = omega_gallery_join(src, gamma, seq.xs[i], seq.xs[i + 1], z)
                    img = tr.along(u, img, list(G.chambers))
                    u = G.epsilon
                    segments += 1
                    bad = agree_on_overlap(phi_minus.dom, phi_minus.img, tr.domain(u), img)
                    if bad is not None:
                        raise InconsistentTransport("ω-gallery transport moves E2(c-)", witness=(x, z, bad))
                v = int(src.opp_index[x, cm - src.n_plus])
                if u != v:
                    raise InconsistentTransport("ω-chain ends at the wrong pair", witness=(x, u, v))
                bad = agree_on_overlap(phi_minus.dom, phi_minus.img, tr.domain(v), family.images[v])
                if bad is not None:
                    raise InconsistentTransport("family member disagrees on E2(c-)", witness=(x, bad))
        report["opposite_chambers_checked"] = int(opposite.size) if check_minus_agreement else 0
        report["omega_segments"] = segments

    with _Stage(report, "opposition-inclusion"):
        for z, zi in zip(phi_minus.dom.tolist(), phi_minus.img.tolist()):
            ops = src.opposites(z)
            if np.any(tgt.delta[phi_plus.values(ops), zi] != 0):
                raise AdmissibilityFailure("phi+ does not map z^op into z'^op", witness=z)
        bad = admissibility_failures(phi_plus, phi_minus.dom, phi_minus.img)
        if bad.size:
            raise AdmissibilityFailure("pair is not admissible", witness=int(phi_minus.dom[bad[0]]))

    with _Stage(report, "glue"):
        total = union_isometries(phi_plus, phi_minus)
        report["validated_pairs"] = len(total) ** 2

    report.update(tr.stats.as_dict())
    return ExtensionResult(total, phi_plus, phi_minus, report)


# ---------------------------------------------------------------------------
# seeds


def seed_domain(t: TwinSpace, cbar) -> np.ndarray:
    cp, cm = _as_pair(t, cbar)
    return np.union1d(_foundation(t, cp), [cm])


def enumerate_seeds(src: TwinSpace, tgt: TwinSpace, cbar, cbar_img, limit: int = 10**6) -> list[PartialIsometry]:
    """All isometries E2(c+) + {c-} -> E2(c+') + {c-'} sending c+ to c+' and c- to c-'."""
    cp, cm = _as_pair(src, cbar)
    cpp, cmp_ = _as_pair(tgt, cbar_img)
    todo = np.setdiff1d(_foundation(src, cp), [cp])
    pool = np.setdiff1d(_foundation(tgt, cpp), [cpp])
    count, sols = search_extensions(src, tgt, np.array([cp, cm]), np.array([cpp, cmp_]), todo, pool, limit)
    dom = np.concatenate([[cp, cm], todo])
    return [PartialIsometry(src, tgt, dom, np.concatenate([[cpp, cmp_], s])) for s in sols]


def random_seed(src: TwinSpace, tgt: TwinSpace, cbar, cbar_img, rng: np.random.Generator) -> PartialIsometry:
    """First seed found when candidate images are tried in a shuffled order."""
    cp, cm = _as_pair(src, cbar)
    cpp, cmp_ = _as_pair(tgt, cbar_img)
    todo = np.setdiff1d(_foundation(src, cp), [cp])
    pool = rng.permutation(np.setdiff1d(_foundation(tgt, cpp), [cpp]))
    count, sols = search_extensions(src, tgt, np.array([cp, cm]), np.array([cpp, cmp_]), todo, pool, 1)
    if count == 0:
        raise NoExtension("no seed isometry between the chosen pairs", witness=(cbar, cbar_img))
    dom = np.concatenate([[cp, cm], todo])
    return PartialIsometry(src, tgt, dom, np.concatenate([[cpp, cmp_], sols[0]]))
