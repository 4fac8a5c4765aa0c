"""Command line front end.

Exit status: 0 when everything checked passes, 1 on a verification
failure, 2 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from ..building import validate_building
from ..errors import AxiomViolation, InvalidInput, ParseError, SchemaError, TwinBuildError, UnknownCatalogId
from ..isom import _foundation, identity_isometry, main_extension, random_seed, seed_domain
from ..twin import spherical_double, validate_twin
from . import io
from .catalog import generate_building
from .suite import failed_input_report, jsonable, run_verification, twin_summary

OK, FAILED, BAD_INPUT = 0, 1, 2
INPUT_ERRORS = (ParseError, SchemaError, InvalidInput, UnknownCatalogId)


def _emit(doc, path=None):
    text = json.dumps(jsonable(doc), indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_twin(path):
    plus, minus, costar = io.decode_twin_parts(io.read_document(path))
    return validate_twin(plus, minus, costar)


def cmd_gen(args):
    b = generate_building(args.id)
    io.write_document(args.out, io.encode_building(b))
    print(f"{args.id}: {b.n} chambers, rank {b.rank}, |W| = {b.group.order}")
    return OK


def cmd_check(args):
    doc = io.read_document(args.file)
    try:
        if args.kind == "building":
            matrix, n, panels = io.decode_building_parts(doc)
            obj = validate_building(matrix, n, panels)
            summary = {"chambers": obj.n, "rank": obj.rank, "weyl_order": obj.group.order}
        else:
            obj = _load_twin(args.file)
            summary = twin_summary(obj)
    except AxiomViolation as e:
        _emit({"kind": args.kind, "passed": False, "axiom": e.axiom, "witness": e.witness, "message": str(e)})
        return FAILED
    _emit({"kind": args.kind, "passed": True, **summary})
    return OK


def cmd_double(args):
    b = io.decode_building(io.read_document(args.input))
    t = spherical_double(b)
    io.write_document(args.out, io.encode_twin(t, explicit=args.explicit))
    print(f"spherical double: {t.n_plus} + {t.n_minus} chambers")
    return OK


def base_pair(phi):
    """The opposite pair (c+, c-) a seed is built around, from its domain."""
    t = phi.source
    dom = phi.dom
    minus = dom[dom >= t.n_plus]
    if minus.size != 1:
        raise InvalidInput("a seed has exactly one minus chamber")
    cm = int(minus[0])
    plus = dom[dom < t.n_plus]
    for x in plus:
        x = int(x)
        if t.delta[x, cm] == 0 and np.array_equal(_foundation(t, x), plus):
            return x, cm
    raise InvalidInput("seed domain is not E2(c+) together with an opposite c-")


def cmd_extend(args):
    src = _load_twin(args.twin)
    tgt = _load_twin(args.twin_prime) if args.twin_prime else src
    phi = io.decode_isometry(io.read_document(args.seed), src, tgt)
    cbar = base_pair(phi)
    report = {"base_pair": {"plus": cbar[0], "minus": cbar[1] - src.n_plus}, "seed_size": len(phi)}
    t0 = time.perf_counter()
    try:
        res = main_extension(phi, cbar)
    except TwinBuildError as e:
        report.update(
            passed=False, stage=getattr(e, "stage", None), error=type(e).__name__, message=str(e), witness=e.witness
        )
        _emit(report, args.report)
        return FAILED
    report.update(res.report, passed=True, output_size=len(res.isometry), seconds=round(time.perf_counter() - t0, 3))
    io.write_document(args.out, io.encode_isometry(res.isometry))
    _emit(report, args.report)
    return OK


def cmd_seed(args):
    src = _load_twin(args.twin)
    tgt = _load_twin(args.twin_prime) if args.twin_prime else src
    cp = args.plus
    ops = src.opposites(cp)
    cm = int(ops[0])
    if args.kind == "identity":
        if tgt is not src:
            raise InvalidInput("the identity seed needs a single twin")
        phi = identity_isometry(src, seed_domain(src, (cp, cm)))
    else:
        rng = np.random.default_rng(args.rng)
        a, b = tgt.opp_pairs[rng.integers(len(tgt.opp_pairs))]
        phi = random_seed(src, tgt, (cp, cm), (int(a), int(b) + tgt.n_plus), rng)
    io.write_document(args.out, io.encode_isometry(phi))
    print(f"seed on {len(phi)} chambers around ({cp}, {cm - src.n_plus})")
    return OK


def cmd_suite(args):
    try:
        t = _load_twin(args.twin)
    except AxiomViolation as e:
        report = failed_input_report(e, args.level, args.rng)
    else:
        report = run_verification(t, args.level, args.rng)
    doc = report.as_dict()
    _emit(doc, args.report)
    for c in doc["checks"]:
        print(f"{c['status'].upper():4s}  {c['check']:26s} {c['scope']:10s} {c['seconds']:8.2f}s", file=sys.stderr)
    return OK if report.passed else FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="workbench", description="Twin building workbench")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a catalog building")
    g.add_argument("--id", required=True, help="rank1(n), fano, pg23, pg32, prod(a,b,...) or a^k")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="validate a building or twin file")
    c.add_argument("kind", choices=["building", "twin"])
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("double", help="spherical double of a building file")
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--out", required=True)
    d.add_argument("--explicit", action="store_true", help="write the codistance tables instead of the rule")
    d.set_defaults(func=cmd_double)

    s = sub.add_parser("seed", help="write a seed isometry on E2(c+) plus c-")
    s.add_argument("--twin", required=True)
    s.add_argument("--twin-prime")
    s.add_argument("--kind", choices=["identity", "search"], default="identity")
    s.add_argument("--plus", type=int, default=0, help="plus chamber c+; c- is its least opposite")
    s.add_argument("--rng", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_seed)

    e = sub.add_parser("extend", help="extend a seed to the plus half and E2(c-)")
    e.add_argument("--twin", required=True)
    e.add_argument("--twin-prime")
    e.add_argument("--seed", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--report")
    e.set_defaults(func=cmd_extend)

    v = sub.add_parser("suite", help="run the verification suite")
    v.add_argument("--twin", required=True)
    v.add_argument("--level", choices=["exhaustive", "sampled"], default="exhaustive")
    v.add_argument("--rng", type=int, default=0)
    v.add_argument("--report")
    v.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as e:
        print(f"input error: {e}", file=sys.stderr)
        return BAD_INPUT
    except AxiomViolation as e:
        print(f"verification failure: {e}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
