"""Command line interface: ``taut list | run | run-all | rep | critical``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import certify, kernel
from .models import MODELS, get_model
from .morse import ACCEPT_RESIDUAL, HeightSpec, find_critical_set
from .reduction import reduce_at
from .repbuilder import dump_json


def _summary_line(c: certify.TautnessCertificate) -> str:
    ineq = c.evidence.get("inequality")
    tail = f"  {ineq['lhs']} > {ineq['rhs']}" if ineq else ""
    flag = "ok" if c.matches else "MISMATCH"
    line = f"{c.case_id:22s} {c.verdict:18s} expected {c.expected['verdict']:18s} {flag}{tail}"
    if c.diagnostics:
        line += "\n    " + "\n    ".join(c.diagnostics)
    return line


def _cmd_list(args) -> int:
    for cid, spec in certify.load_registry().items():
        print(f"{cid:22s} {spec.op:22s} {spec.expected_verdict:18s} {spec.title}")
    return 0


def _finish(certs, out) -> int:
    for c in certs:
        print(_summary_line(c))
    if out:
        path = certify.emit_report(certs, out)
        print(f"report written to {path}")
    code = certify.exit_code(certs)
    print(f"exit {code} ({kernel.BACKEND} kernel)")
    return code


def _cmd_run(args) -> int:
    try:
        cert = certify.run_case(args.case, seed=args.seed, starts=args.starts, tol=args.tol)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 1
    return _finish([cert], args.out)


def _cmd_run_all(args) -> int:
    certs = certify.run_all(seed=args.seed, jobs=args.jobs, starts=args.starts, tol=args.tol)
    code = _finish(certs, args.out)
    if args.csv:
        certify.emit_report(certs, args.csv, fmt="csv")
        print(f"csv written to {args.csv}")
    return code


def _model_for(name: str):
    reg = certify.load_registry()
    if name in reg:
        return reg[name], get_model(reg[name].model)
    if name in MODELS:
        return None, get_model(name)
    raise KeyError(f"{name!r} is neither a case nor a representation id")


def _cmd_rep(args) -> int:
    try:
        _, model = _model_for(args.dump)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 1
    print(dump_json(model.rep))
    return 0


def _cmd_critical(args) -> int:
    try:
        spec, model = _model_for(args.case)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 1
    point = args.point if args.point is not None else (spec.point if spec else None)
    if point is None or isinstance(point, dict):
        print("give a base point with --point", file=sys.stderr)
        return 1
    p = model.point(point)
    q = model.point(args.q)
    rep, x = model.rep, p
    if args.reduced:
        red = reduce_at(rep, p)
        if red.reduced_rep is None:
            print("fixed subspace of the isotropy is zero", file=sys.stderr)
            return 1
        rep, x, q = red.reduced_rep, red.to_coords(p), red.to_coords(q)
    rules = {int(k): v for k, v in (spec.params.get("tag_rules", {}) if spec else {}).items()}
    seed = certify.master_seed(args.seed)
    inv = find_critical_set(rep, x, HeightSpec(q, args.kind), starts=args.starts, seed=seed, tag_rules=rules, tol=args.tol)
    out = inv.to_dict()
    out["count_by_dim"] = {str(k): v for k, v in inv.count_by_dim().items()}
    print(json.dumps(out, indent=2, default=lambda o: o.tolist() if isinstance(o, np.ndarray) else str(o)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="taut", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="print the case registry").set_defaults(func=_cmd_list)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="master seed (default: $TAUT_SEED or built-in)")
        p.add_argument("--starts", type=int, default=None, help="multistart count override")
        p.add_argument("--tol", type=float, default=ACCEPT_RESIDUAL, help="residual accepted as critical")

    p = sub.add_parser("run", help="certify one case")
    p.add_argument("--case", required=True)
    common(p)
    p.add_argument("--out", help="report path (.json or .csv)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("run-all", help="certify every registered case")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.add_argument("--out", help="report path (.json or .csv)")
    p.add_argument("--csv", help="additional CSV report path")
    p.set_defaults(func=_cmd_run_all)

    p = sub.add_parser("rep", help="serialize a representation")
    p.add_argument("--dump", required=True, metavar="ID", help="case or representation id")
    p.set_defaults(func=_cmd_rep)

    p = sub.add_parser("critical", help="critical inventory of one height function")
    p.add_argument("--case", required=True, help="case or representation id")
    p.add_argument("--q", required=True, help="direction literal, e.g. '1;1;1' or '[1,0,...]'")
    p.add_argument("--point", help="base point literal (default: the case's point)")
    p.add_argument("--kind", choices=["height", "squared-distance"], default="height")
    p.add_argument("--reduced", action="store_true", help="search on the reduced action of V^H")
    common(p)
    p.set_defaults(func=_cmd_critical)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
