"""Property-by-property verification of a twin building.

Every check returns a :class:`CheckRecord`; failures are report entries,
never exceptions.  ``exhaustive`` runs each quantified law over its whole
scope, ``sampled`` draws ``SAMPLES`` witnesses from a seeded generator.
Checks that need the extension hypotheses (2-spherical, rank >= 3, thick)
are skipped on twins that do not satisfy them.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..building import validate_building
from ..errors import AxiomViolation, HypothesisViolation, TwinBuildError
from ..isom import (
    Transporter,
    check_hypotheses,
    check_isometry,
    identity_isometry,
    main_extension,
    pair_foundation,
    random_seed,
    seed_domain,
    transport_family,
)
from ..retract import (
    connecting_sequence,
    descent_step,
    omega_law_failures,
    omega_retraction,
    panel_projection_failures,
    pi_law_failures,
    pi_retraction,
    retraction_graph,
)
from ..twin import MINUS, PLUS, TwinSpace, opposite_residue_pairs, project, residue_opposition_check, twin_apartment_of, twin_axiom_scan

SAMPLES = 10**4
RANDOM_INSTANCES = 100
BACKTRACK_GALLERIES = 50
HOLONOMY_LENGTH = 6
FAULTS_PER_KIND = 3
EXHAUSTIVE_RESIDUE_PAIRS = 50_000

CHECKS = (
    "building-axioms",
    "twin-axioms",
    "apartment-projection",
    "opposite-residues",
    "pi-retraction",
    "omega-retraction",
    "omega-panel-projections",
    "descent-step",
    "connecting-sequence",
    "transport-backtrack",
    "rank2-holonomy",
    "transport-family",
    "main-extension",
    "local-uniqueness",
    "fault-injection",
)


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


@dataclass
class CheckRecord:
    name: str
    status: str  # pass, fail or skip
    scope: str  # exhaustive or sampled
    witness: object = None
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return jsonable(
            {
                "check": self.name,
                "status": self.status,
                "scope": self.scope,
                "witness": self.witness,
                "seconds": round(self.seconds, 4),
                "details": self.details,
            }
        )


@dataclass
class SuiteReport:
    level: str
    rng_seed: int
    twin: dict
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def check(self, name: str) -> CheckRecord:
        return next(c for c in self.checks if c.name == name)

    def failures(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "rng_seed": self.rng_seed,
            "twin": self.twin,
            "passed": self.passed,
            "checks": [c.as_dict() for c in sorted(self.checks, key=lambda c: c.name)],
        }


class _Fail(Exception):
    def __init__(self, witness, **details):
        self.witness = witness
        self.details = details


class _Skip(Exception):
    pass


class _Context:
    def __init__(self, t: TwinSpace, level: str, rng_seed: int):
        self.t = t
        self.level = level
        self.exhaustive = level == "exhaustive"
        self.rng_seed = rng_seed
        self.cp = 0
        self.cm = int(t.opposites(0)[0])
        self._extension = None
        self._hyp = None

    def rng(self, name: str) -> np.random.Generator:
        # one stream per check so that the checks do not depend on each other's draws
        return np.random.default_rng([self.rng_seed, CHECKS.index(name)])

    @property
    def scope(self) -> str:
        return "exhaustive" if self.exhaustive else "sampled"

    def require_hypotheses(self):
        if self._hyp is None:
            try:
                check_hypotheses(self.t)
                self._hyp = ""
            except HypothesisViolation as e:
                self._hyp = str(e)
        if self._hyp:
            raise _Skip(self._hyp)

    def seed(self):
        return identity_isometry(self.t, seed_domain(self.t, (self.cp, self.cm)))

    def foundation_identity(self):
        t = self.t
        return identity_isometry(t, pair_foundation(t, (self.cp, self.cm)))


def _pairs(t: TwinSpace) -> np.ndarray:
    return t.opp_pairs


# -- individual checks ------------------------------------------------------------


def _building_axioms(ctx):
    t = ctx.t
    for name, b in (("plus", t.plus), ("minus", t.minus)):
        try:
            validate_building(b.group, b.n, b.panels)
        except AxiomViolation as e:
            raise _Fail(e.witness, half=name, axiom=e.axiom, message=str(e))
    return "exhaustive", {"chambers": [t.n_plus, t.n_minus]}


def _twin_axioms(ctx):
    t = ctx.t
    hit = twin_axiom_scan(t.plus, t.minus, t.pm, t.mp)
    if hit is not None:
        raise _Fail(hit[1], axiom=hit[0])
    return "exhaustive", {"pairs": 2 * t.n_plus * t.n_minus}


def _apartments(ctx, rng, count):
    t = ctx.t
    pairs = _pairs(t)
    if count is None:
        seen, out = set(), []
        for a, b in pairs:
            A = twin_apartment_of(t, int(a), int(b) + t.n_plus)
            if A.chambers not in seen:
                seen.add(A.chambers)
                out.append(A)
        return out
    idx = rng.integers(len(pairs), size=count)
    return [twin_apartment_of(t, int(pairs[i, 0]), int(pairs[i, 1]) + t.n_plus) for i in idx]


def _small_types(rank):
    return [J for k in (1, 2) for J in itertools.combinations(range(rank), k)]


def _apartment_projection(ctx):
    """Projections of apartment chambers onto residues meeting the apartment stay inside."""
    t, rng = ctx.t, ctx.rng("apartment-projection")
    types = _small_types(t.group.rank)
    n = 0
    if ctx.exhaustive:
        for A in _apartments(ctx, rng, None):
            inside = set(A.chambers)
            seen = set()
            for u in A.chambers:
                for J in types:
                    R = t.residue(u, J)
                    key = (t.sign(u), J, R.chambers[0])
                    if key in seen:
                        continue
                    seen.add(key)
                    for z in A.chambers:
                        n += 1
                        p = project(t, z, R)
                        if p not in inside:
                            raise _Fail((A.chambers[0], z, u, J), projection=p)
        return "exhaustive", {"witnesses": n}
    pairs = _pairs(t)
    for _ in range(SAMPLES):
        a, b = pairs[rng.integers(len(pairs))]
        A = twin_apartment_of(t, int(a), int(b) + t.n_plus)
        u, z = (int(v) for v in rng.choice(A.chambers, size=2))
        J = types[rng.integers(len(types))]
        p = project(t, z, t.residue(u, J))
        n += 1
        if p not in A.chambers:
            raise _Fail((int(a), int(b) + t.n_plus, z, u, J), projection=p)
    return "sampled", {"witnesses": n}


def _opposite_residues(ctx):
    t = ctx.t
    work = [(J, R, T) for J in _small_types(t.group.rank) for R, T in opposite_residue_pairs(t, J)]
    scope = "exhaustive"
    if not ctx.exhaustive and len(work) > EXHAUSTIVE_RESIDUE_PAIRS:
        rng = ctx.rng("opposite-residues")
        work = [work[i] for i in sorted(rng.choice(len(work), SAMPLES, replace=False))]
        scope = "sampled"
    per_type = Counter()
    for J, R, T in work:
        rep = residue_opposition_check(t, R, T)
        per_type[str(list(J))] += 1
        if not rep.passed:
            raise _Fail(rep.failures[0][1], law=rep.failures[0][0], jtype=list(J))
    return scope, {"pairs": sum(per_type.values()), "per_type": dict(per_type)}


def _law_check(ctx, name, build, failures):
    t, rng = ctx.t, ctx.rng(name)
    pairs = _pairs(t)
    n = 0
    if ctx.exhaustive:
        for a, b in pairs:
            r = build(int(a), int(b))
            bad = failures(t, r, None)
            n += t.n_plus
            if bad:
                raise _Fail(bad[0][1], law=bad[0][0], base=(int(a), int(b)))
        return "exhaustive", {"bases": len(pairs), "witnesses": n}
    cache = {}
    for i, x in zip(rng.integers(len(pairs), size=SAMPLES), rng.integers(t.n_plus, size=SAMPLES)):
        a, b = (int(v) for v in pairs[i])
        r = cache.get((a, b))
        if r is None:
            r = cache[(a, b)] = build(a, b)
        bad = failures(t, r, [int(x)])
        n += 1
        if bad:
            raise _Fail(bad[0][1], law=bad[0][0], base=(a, b))
    return "sampled", {"witnesses": n}


def _pi(ctx):
    t = ctx.t

    def build(a, b):
        # base chamber b (minus) with the apartment A_-(a, b)
        r = pi_retraction(t, b, twin_apartment_of(t, a, b + t.n_plus).minus)
        retraction_graph(t, r)
        return r

    return _law_check(ctx, "pi-retraction", build, pi_law_failures)


def _omega(ctx):
    t = ctx.t

    def build(a, b):
        r = omega_retraction(t, a, b)
        retraction_graph(t, r)
        return r

    return _law_check(ctx, "omega-retraction", build, omega_law_failures)


def _omega_panels(ctx):
    t, rng = ctx.t, ctx.rng("omega-panel-projections")
    pairs = _pairs(t)
    panels = [(s, P) for s in range(t.group.rank) for P in t.plus.panels[s]]
    n = 0
    if ctx.exhaustive:
        for a, b in pairs:
            bad = panel_projection_failures(t, omega_retraction(t, int(a), int(b)))
            n += len(panels)
            if bad:
                raise _Fail(bad[0][1], law=bad[0][0], base=(int(a), int(b)))
        return "exhaustive", {"bases": len(pairs), "witnesses": n}
    cache = {}
    for i, j in zip(rng.integers(len(pairs), size=SAMPLES), rng.integers(len(panels), size=SAMPLES)):
        a, b = (int(v) for v in pairs[i])
        om = cache.get((a, b))
        if om is None:
            om = cache[(a, b)] = omega_retraction(t, a, b)
        bad = panel_projection_failures(t, om, [panels[j]])
        n += 1
        if bad:
            raise _Fail(bad[0][1], law=bad[0][0], base=(a, b))
    return "sampled", {"witnesses": n}


def _random_descent_instance(t: TwinSpace, rng):
    """(c, gallery) meeting the descent preconditions, all global ids."""
    g = t.group
    top = int(g.length[g.w0])
    sign = PLUS if rng.random() < 0.5 else MINUS
    half = t.half(-sign)
    c = t.glob(sign, int(rng.integers(t.half(sign).n)))
    ops = t.opposites(c)
    x = int(ops[rng.integers(ops.size)])
    want = int(rng.integers(top))
    path = [x]
    star = lambda v: int(g.length[t.delta[c, v]])
    for i in range(1, want + 1):
        nxt = [v for v in _half_neighbours(t, half, path[-1]) if star(v) == i]
        if not nxt:
            break
        path.append(nxt[rng.integers(len(nxt))])
    k = len(path) - 1
    last = [v for v in _half_neighbours(t, half, path[-1]) if star(v) <= k]
    path.append(last[rng.integers(len(last))])
    return c, path


def _half_neighbours(t, half, g):
    off = 0 if t.sign(g) == PLUS else t.n_plus
    return sorted({int(v) + off for v, _ in half.neighbours(t.local(g))})


def _descent(ctx):
    t, rng = ctx.t, ctx.rng("descent-step")
    ks = Counter()
    for _ in range(RANDOM_INSTANCES):
        c, path = _random_descent_instance(t, rng)
        try:
            descent_step(t, c, path)
        except TwinBuildError as e:
            raise _Fail((c, tuple(path)), message=str(e))
        ks[len(path) - 2] += 1
    return "sampled", {"instances": RANDOM_INSTANCES, "k_histogram": dict(sorted(ks.items()))}


def _connecting(ctx):
    t, rng = ctx.t, ctx.rng("connecting-sequence")
    worst = 0
    for _ in range(RANDOM_INSTANCES):
        sign = PLUS if rng.random() < 0.5 else MINUS
        c = t.glob(sign, int(rng.integers(t.half(sign).n)))
        x, y = (int(v) for v in rng.choice(t.opposites(c), size=2))
        try:
            seq = connecting_sequence(t, c, x, y)
        except TwinBuildError as e:
            raise _Fail((c, x, y), message=str(e))
        if seq.k > t.length(x, y):
            raise _Fail((c, x, y), k=seq.k, distance=t.length(x, y))
        worst = max(worst, seq.k - t.length(x, y))
    return "sampled", {"instances": RANDOM_INSTANCES, "max_k_minus_length": worst}


def _transport_backtrack(ctx):
    ctx.require_hypotheses()
    t, rng = ctx.t, ctx.rng("transport-backtrack")
    tr = Transporter(t, t)
    root, img0 = tr.start(ctx.foundation_identity(), (ctx.cp, ctx.cm))
    opp = t.opp
    lengths = Counter()
    for _ in range(BACKTRACK_GALLERIES):
        L = int(rng.integers(1, HOLONOMY_LENGTH + 1))
        path = [root]
        for _ in range(L):
            nb = opp.neighbours(path[-1])
            path.append(int(nb[rng.integers(len(nb))]))
        there = tr.along(root, img0, path)
        back = tr.along(path[-1], there, path[::-1])
        lengths[L] += 1
        if not np.array_equal(back, img0):
            raise _Fail(tuple(path))
    return "sampled", {"galleries": BACKTRACK_GALLERIES, "length_histogram": dict(sorted(lengths.items()))}


def _holonomy(ctx):
    """Every closed gallery of length <= 6 inside a rank-2 residue of Opp
    transports the local isometry back to itself.

    Transport is a function of (chamber, current image), so the set of
    states reached after i steps is the image of the states after i - 1
    steps; a closed gallery has trivial holonomy iff its final state at the
    base is the starting state.  Walk counts are tracked alongside.
    """
    ctx.require_hypotheses()
    t = ctx.t
    opp = t.opp
    tr = Transporter(t, t)
    root, img0 = tr.start(ctx.foundation_identity(), (ctx.cp, ctx.cm))
    bases = {root: img0}
    if ctx.exhaustive:
        family = transport_family(ctx.foundation_identity(), (ctx.cp, ctx.cm), range(opp.n), tr)
        bases = family.images
        scope = "exhaustive"
    else:
        scope = "sampled"
    galleries = 0
    for u, img_u in bases.items():
        for J in itertools.combinations(range(t.group.rank), 2):
            states = {(u, img_u.tobytes()): (img_u, 1)}
            for step in range(HOLONOMY_LENGTH):
                nxt = {}
                for (v, key), (img, walks) in states.items():
                    for w in opp.neighbours(v, J):
                        out = tr.step(v, img, w)
                        k2 = (w, out.tobytes())
                        if k2 in nxt:
                            nxt[k2] = (out, nxt[k2][1] + walks)
                        else:
                            nxt[k2] = (out, walks)
                states = nxt
                for (v, key), (img, walks) in states.items():
                    if v == u:
                        galleries += walks
                        if key != img_u.tobytes():
                            raise _Fail((u, list(J), step + 1))
    return scope, {"bases": len(bases), "closed_galleries": galleries, "transport_steps": tr.stats.searches}


def _family(ctx):
    ctx.require_hypotheses()
    t = ctx.t
    cp, cm = ctx.cp, ctx.cm
    phi = ctx.foundation_identity()
    sigma = twin_apartment_of(t, cp, cm).minus
    graphs = {
        "pi": retraction_graph(t, pi_retraction(t, cm - t.n_plus, sigma)),
        "omega": retraction_graph(t, omega_retraction(t, cp, cm - t.n_plus)),
    }
    details = {}
    for name, G in graphs.items():
        try:
            fam = transport_family(phi, (cp, cm), G.members)
        except TwinBuildError as e:
            raise _Fail(e.witness, graph=name, message=str(e))
        details[name] = {"chambers": len(fam), "non_tree_edges": fam.non_tree_edges, "inconsistent": 0}
    return "exhaustive", details


def _extensions(ctx):
    if ctx._extension is None:
        t = ctx.t
        rng = ctx.rng("main-extension")
        pairs = _pairs(t)
        a, b = pairs[rng.integers(len(pairs))]
        seeds = {
            "identity": ctx.seed(),
            "search": random_seed(t, t, (ctx.cp, ctx.cm), (int(a), int(b) + t.n_plus), rng),
        }
        out = {}
        for name, phi in seeds.items():
            try:
                res = main_extension(phi, (ctx.cp, ctx.cm))
                check_isometry(res.isometry)
                out[name] = (None, res)
            except TwinBuildError as e:
                out[name] = (e, None)
        ctx._extension = out
    return ctx._extension


def _main_extension(ctx):
    ctx.require_hypotheses()
    details = {}
    for name, (err, res) in _extensions(ctx).items():
        if err is not None:
            raise _Fail(err.witness, seed=name, stage=getattr(err, "stage", None), message=str(err))
        details[name] = {"chambers": len(res.isometry), "validated_pairs": res.report["validated_pairs"]}
    return "exhaustive", details


def _uniqueness(ctx):
    ctx.require_hypotheses()
    details = {}
    for name, (err, res) in _extensions(ctx).items():
        if err is not None:
            raise _Fail(err.witness, seed=name, message=str(err))
        r = res.report
        details[name] = {k: r[k] for k in ("searches", "step_solutions_max", "foundation_pair_solutions")}
        if r["foundation_pair_solutions"] != 1 or r["step_solutions_max"] != 1:
            raise _Fail(name, **details[name])
    return "exhaustive", details


def corrupt_costar(t: TwinSpace, rng):
    """Tables of t with one plus-to-minus codistance entry replaced."""
    pm = t.pm.copy()
    x, y = int(rng.integers(t.n_plus)), int(rng.integers(t.n_minus))
    choices = [w for w in range(t.group.order) if w != pm[x, y]]
    pm[x, y] = choices[rng.integers(len(choices))]
    return pm, t.mp.copy(), (x, y)


def delete_panel_edge(b, rng):
    """Panels of b with one chamber detached from one of its panels."""
    s = int(rng.integers(b.rank))
    x = int(rng.integers(b.n))
    panels = [[list(p) for p in parts] for parts in b.panels]
    P = panels[s][int(b.panel_of[s, x])]
    P.remove(x)
    return panels, (s, x)


def _faults(ctx):
    t, rng = ctx.t, ctx.rng("fault-injection")
    cases = []
    for _ in range(FAULTS_PER_KIND):
        pm, mp, where = corrupt_costar(t, rng)
        hit = twin_axiom_scan(t.plus, t.minus, pm, mp)
        cases.append({"fault": "costar", "at": where, "axiom": hit and hit[0], "witness": hit and hit[1]})
        if hit is None or hit[0] != "Tw1":
            raise _Fail(where, cases=cases)
    for _ in range(FAULTS_PER_KIND):
        panels, where = delete_panel_edge(t.plus, rng)
        try:
            validate_building(t.group, t.n_plus, panels)
            cases.append({"fault": "panel", "at": where, "axiom": None, "witness": None})
            raise _Fail(where, cases=cases)
        except AxiomViolation as e:
            cases.append({"fault": "panel", "at": where, "axiom": e.axiom, "witness": e.witness})
            if e.axiom != "Bu3":
                raise _Fail(where, cases=cases)
    return "sampled", {"cases": cases}


_RUNNERS = {
    "building-axioms": _building_axioms,
    "twin-axioms": _twin_axioms,
    "apartment-projection": _apartment_projection,
    "opposite-residues": _opposite_residues,
    "pi-retraction": _pi,
    "omega-retraction": _omega,
    "omega-panel-projections": _omega_panels,
    "descent-step": _descent,
    "connecting-sequence": _connecting,
    "transport-backtrack": _transport_backtrack,
    "rank2-holonomy": _holonomy,
    "transport-family": _family,
    "main-extension": _main_extension,
    "local-uniqueness": _uniqueness,
    "fault-injection": _faults,
}


def run_check(ctx: _Context, name: str) -> CheckRecord:
    t0 = time.perf_counter()
    try:
        scope, details = _RUNNERS[name](ctx)
        rec = CheckRecord(name, "pass", scope, None, details=details)
    except _Fail as f:
        rec = CheckRecord(name, "fail", ctx.scope, f.witness, details=f.details)
    except _Skip as s:
        rec = CheckRecord(name, "skip", ctx.scope, None, details={"reason": str(s)})
    except TwinBuildError as e:
        rec = CheckRecord(name, "fail", ctx.scope, e.witness, details={"error": type(e).__name__, "message": str(e)})
    rec.seconds = time.perf_counter() - t0
    return rec


def twin_summary(t: TwinSpace) -> dict:
    return {
        "rank": t.group.rank,
        "weyl_order": t.group.order,
        "plus_chambers": t.n_plus,
        "minus_chambers": t.n_minus,
        "rule": t.rule,
    }


def run_verification(t: TwinSpace, level: str = "exhaustive", rng_seed: int = 0, checks=None) -> SuiteReport:
    if level not in ("exhaustive", "sampled"):
        raise ValueError("level must be 'exhaustive' or 'sampled'")
    ctx = _Context(t, level, int(rng_seed))
    names = CHECKS if checks is None else [c for c in CHECKS if c in set(checks)]
    return SuiteReport(level, int(rng_seed), twin_summary(t), [run_check(ctx, n) for n in names])


def failed_input_report(error: AxiomViolation, level: str, rng_seed: int, twin: dict | None = None) -> SuiteReport:
    """Report for a twin document that fails validation while loading."""
    failing = "building-axioms" if error.axiom.startswith("Bu") else "twin-axioms"
    records = []
    for name in CHECKS:
        if name == failing:
            records.append(
                CheckRecord(name, "fail", "exhaustive", error.witness, details={"axiom": error.axiom, "message": str(error)})
            )
        elif name == "building-axioms":
            records.append(CheckRecord(name, "pass", "exhaustive"))
        else:
            records.append(CheckRecord(name, "skip", level, details={"reason": f"input fails {error.axiom}"}))
    return SuiteReport(level, int(rng_seed), twin or {}, records)
