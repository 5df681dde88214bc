"""Command-line front end: ``verify``, ``search``, ``sweep`` and ``selftest``.

Exit codes: 0 all hard checks passed, 1 an explicit-constant violation,
2 usage or configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import lemmas
from .errors import MazurlabError, NumericalError
from .funccalc import QuadratureScheme
from .matcore import AlgebraShape
from .mazur import MazurParams
from .oracles import battery
from .search import CONES, Budget, maximize, sweep

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

RECORD_COLUMNS = ["lemma_id", "status", "lhs", "rhs_structural", "constant", "ratio", "pass",
                  "trial", "seed", "cell"]
SWEEP_COLUMNS = ["p", "q", "best_ratio", "seed", "iters"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_grid(text: str, kind=float) -> tuple:
    """``1,1.5,2`` or (integers only) ``1..4``."""
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            a, b = int(lo), int(hi)
        except ValueError:
            raise UsageError(f"ranges take integers only: {text!r}")
        if b < a:
            raise UsageError(f"empty range {text!r}")
        return tuple(kind(v) for v in range(a, b + 1))
    try:
        vals = tuple(kind(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}")
    if not vals:
        raise UsageError("empty grid")
    return vals


def fmt(v) -> str:
    """17 significant digits for floats, round-trippable."""
    if isinstance(v, float):
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o).__name__}")


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, indent=1, default=_json_default) + "\n")


def _fmt_format(args, path: Path) -> str:
    if args.format:
        return args.format
    return "csv" if path.suffix.lower() == ".csv" else "json"


# ---------------------------------------------------------------------------
# verify

CONFIG_KEYS = {f.name for f in fields(lemmas.SuiteConfig)}


def load_config(path: str) -> dict:
    """Suite config from a JSON file; a full report is accepted too (its ``config`` key)."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    if isinstance(data, dict) and "config" in data and "records" in data:
        data = data["config"]
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def _suite_config(args) -> lemmas.SuiteConfig:
    cfg = load_config(args.config) if args.config else {}
    if args.lemma:
        cfg["lemmas"] = tuple(v for item in args.lemma for v in item.split(",") if v)
    for flag, key, kind in (("dims", "dims", int), ("theta", "thetas", float),
                            ("p", "ps", float), ("q", "qs", float), ("alpha", "alphas", float)):
        val = getattr(args, flag)
        if val is not None:
            cfg[key] = parse_grid(val, kind)
    for key in ("trials", "seed", "cap", "slack", "algebra"):
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    try:
        return lemmas.SuiteConfig(**cfg)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))


def _cell_line(c: lemmas.CellSummary) -> str:
    cell = " ".join(f"{k}={v:g}" for k, v in c.cell.items())
    ratio = "n/a" if c.max_ratio is None else f"{c.max_ratio:.6g}"
    const = c.constant if isinstance(c.constant, str) else f"{c.constant:.6g}"
    return (f"{c.lemma:<22s} {cell:<28s} trials={c.trials} fail={c.failures} "
            f"skip={c.skipped} err={c.errors} max_ratio={ratio} constant={const}")


def cmd_verify(args) -> int:
    cfg = _suite_config(args)
    out = Path(args.out)
    report = lemmas.run_suite(cfg, progress=lambda c: print(_cell_line(c)))
    if _fmt_format(args, out) == "csv":
        with out.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(RECORD_COLUMNS)
            for r in report.records:
                d = r.inputs_digest
                w.writerow([r.lemma_id, r.status, fmt(r.lhs), fmt(r.rhs_structural),
                            fmt(r.constant), fmt(r.ratio), fmt(r.passed), d.get("trial"),
                            d.get("seed"), json.dumps(d.get("cell"), sort_keys=True)])
    else:
        _write_json(out, report.to_dict())
    print(f"summary: cells={len(report.cells)} records={sum(c.trials for c in report.cells)} "
          f"violations={report.failures} errors={report.errors}")
    if report.errors:
        return EXIT_NUMERICAL
    return EXIT_VIOLATION if report.failures else EXIT_OK


# ---------------------------------------------------------------------------
# search and sweep


def _pair_json(x):
    return [[[float(z.real), float(z.imag)] for z in row] for b in x.blocks for row in b]


def cmd_search(args) -> int:
    try:
        params = MazurParams(args.p, args.q)
        budget = Budget(args.restarts, args.iters)
    except ValueError as exc:
        raise UsageError(str(exc))
    res = maximize(params, AlgebraShape.single(args.dim), budget, args.seed, args.cone)
    out = Path(args.out)
    if _fmt_format(args, out) == "csv":
        with out.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(SWEEP_COLUMNS)
            w.writerow([fmt(args.p), fmt(args.q), fmt(res.best_ratio), res.seed, res.iterations])
    else:
        _write_json(out, {
            "config": {"p": args.p, "q": args.q, "dim": args.dim, "restarts": args.restarts,
                       "iters": args.iters, "seed": args.seed, "cone": args.cone},
            "best_ratio": res.best_ratio, "iterations": res.iterations,
            "restarts": res.restarts, "seed": res.seed,
            "best_pair": [_pair_json(x) for x in res.best_pair],
            "history": res.history, "restart_marks": res.restart_marks,
        })
    print(f"p={args.p:g} q={args.q:g} dim={args.dim} best_ratio={res.best_ratio:.12g} "
          f"iters={res.iterations}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    ps, qs = parse_grid(args.p), parse_grid(args.q)
    try:
        budget = Budget(args.restarts, args.iters)
        rows = sweep(ps, qs, AlgebraShape.single(args.dim), budget, args.seed, args.cone)
    except ValueError as exc:
        raise UsageError(str(exc))
    out = Path(args.out)
    if _fmt_format(args, out) == "csv":
        with out.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(SWEEP_COLUMNS)
            for r in rows:
                w.writerow([fmt(r.p), fmt(r.q), fmt(r.best_ratio), r.seed, r.iters])
    else:
        _write_json(out, {"config": {"p": ps, "q": qs, "dim": args.dim,
                                     "restarts": args.restarts, "iters": args.iters,
                                     "seed": args.seed, "cone": args.cone},
                          "rows": [dict(zip(SWEEP_COLUMNS, (r.p, r.q, r.best_ratio, r.seed,
                                                            r.iters))) for r in rows]})
    for r in rows:
        print(f"p={r.p:g} q={r.q:g} best_ratio={r.best_ratio:.12g} iters={r.iters}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# selftest


def cmd_selftest(args) -> int:
    scheme = QuadratureScheme(N=args.debug_quadrature_nodes)
    results = battery(scheme)
    for r in results:
        print(r.line())
    bad = sum(not r.passed for r in results)
    print(f"selftest: {len(results) - bad}/{len(results)} oracles passed")
    return EXIT_NUMERICAL if bad else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mazurlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run the randomized inequality suite")
    v.add_argument("--lemma", action="append",
                   help=f"lemma id(s), repeatable or comma separated; one of {', '.join(lemmas.LEMMAS)}")
    v.add_argument("--dims", help="dimension grid, e.g. 1..6 or 2,4")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--theta", help="theta grid (comma list)")
    v.add_argument("--p", help="p grid (comma list)")
    v.add_argument("--q", help="q grid (comma list)")
    v.add_argument("--alpha", help="alpha grid (comma list)")
    v.add_argument("--cap", type=float, help="cap for empirical ratios")
    v.add_argument("--slack", type=float, help="relative slack of the pass rule")
    v.add_argument("--algebra", choices=lemmas.ALGEBRAS)
    v.add_argument("--config", help="JSON config (or a previous report) to start from")
    v.add_argument("--out", required=True)
    v.add_argument("--format", choices=("json", "csv"))
    v.set_defaults(func=cmd_verify)

    for name, fn, helptext in (("search", cmd_search, "maximize the Hölder ratio for one (p, q)"),
                               ("sweep", cmd_sweep, "maximize over a (p, q) grid")):
        s = sub.add_parser(name, help=helptext)
        if name == "search":
            s.add_argument("--p", type=float, required=True)
            s.add_argument("--q", type=float, required=True)
        else:
            s.add_argument("--p", required=True, help="p grid (comma list)")
            s.add_argument("--q", required=True, help="q grid (comma list)")
        s.add_argument("--dim", type=int, default=2)
        s.add_argument("--restarts", type=int, default=8)
        s.add_argument("--iters", type=int, default=2000)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--cone", choices=CONES, default="general")
        s.add_argument("--out", required=True)
        s.add_argument("--format", choices=("json", "csv"))
        s.set_defaults(func=fn)

    t = sub.add_parser("selftest", help="run the cross-route oracle battery")
    t.add_argument("--debug-quadrature-nodes", type=int, default=QuadratureScheme().N,
                   help=argparse.SUPPRESS)
    t.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "dim", 1) < 1:
            raise UsageError("--dim must be positive")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except MazurlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
