"""Command-line front end: ``eibounds analyze|simulate|evaluate``.

Exit status: 0 success, 1 invalid input or options, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import glob
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

from .data import dump_dataset, read_csv
from .district import DEFAULT_X_GRID, AnalysisConfig, analyze
from .selection import EvalConfig, aggregate_report, apply_heuristics, evaluate_dataset
from .simulation import GeneratorSpec, generate

WORKERS_ENV = "EIBOUNDS_WORKERS"


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _lu(text: str):
    if text == "auto":
        return None
    try:
        l, u = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or 'l,u', got {text!r}") from None
    return (l, u)


def _param(text: str):
    key, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key, float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter {key!r} needs a numeric value") from None


def _analysis_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("analysis")
    g.add_argument("--lambda", dest="lam", type=float, default=1.0, help="residual weight in [0, 1] (default 1)")
    g.add_argument("--prop", choices=("2", "3", "nonparam"), default="2", help="w1 bound: endpoints of [l,u], all of (0,1), or binned")
    g.add_argument("--lu", type=_lu, default=None, metavar="auto|L,U", help="domain for the w1 bound (default: data range)")
    g.add_argument("--weights", choices=("unit", "population"), default="unit")
    g.add_argument("--cov", dest="cov_type", choices=("HC0", "HC1"), default="HC1")
    g.add_argument("--bins", type=int, default=25, help="bins for --prop nonparam")
    g.add_argument("--x", dest="x_grid", type=float, nargs="+", default=list(DEFAULT_X_GRID), help="standard-error multipliers")
    g.add_argument("--white", action="store_true", help="analyse the other group (x -> 1-x)")
    g.add_argument("--dd-threshold", type=float, default=0.7)
    g.add_argument("--heuristic2", action="store_true", help="also reject datasets with |DD| >= threshold")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eibounds", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _analysis_options()

    a = sub.add_parser("analyze", parents=[common], help="bounds and CI_x for one or more datasets")
    a.add_argument("--input", nargs="+", required=True)
    a.add_argument("--output", default="-")
    a.add_argument("--format", choices=("json", "csv"), default="json")

    s = sub.add_parser("simulate", help="write a synthetic dataset with ground truth")
    s.add_argument("--example", required=True, help="1-6, ex1-ex6 or custom")
    s.add_argument("--p", type=int, default=1000)
    s.add_argument("--n", type=int, default=150)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--param", type=_param, action="append", default=[], metavar="KEY=VALUE")
    s.add_argument("--output", default="-")

    e = sub.add_parser("evaluate", parents=[common], help="capture / width-ratio table over datasets with ground truth")
    e.add_argument("--glob", action="append", default=[], dest="globs")
    e.add_argument("--input", nargs="+", default=[])
    e.add_argument("--workers", type=int, default=None, help=f"parallel datasets (default ${WORKERS_ENV} or 1)")
    e.add_argument("--output", default="-")
    e.add_argument("--format", choices=("json", "csv"), default="json")
    e.add_argument("--records", action="store_true", help="include per-dataset records in JSON output")
    return parser


def _analysis_config(args) -> AnalysisConfig:
    return AnalysisConfig(
        lam=args.lam,
        prop=args.prop,
        lu=args.lu,
        weights=args.weights,
        cov_type=args.cov_type,
        bins=args.bins,
        x_grid=tuple(args.x_grid),
    )


def _emit(text: str, output: str) -> None:
    if output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(path: str, white: bool):
    ds = read_csv(path)
    return ds.swap_groups() if white else ds


def _effective(args, config: AnalysisConfig) -> dict:
    return {
        "command": args.command,
        **config.to_dict(),
        "white": args.white,
        "dd_threshold": args.dd_threshold,
        "heuristic2": args.heuristic2,
    }


def cmd_analyze(args) -> int:
    config = _analysis_config(args)
    reports = []
    for path in args.input:
        a = analyze(_load(path, args.white), config)
        d = a.to_dict()
        dec = apply_heuristics(a, args.dd_threshold, args.heuristic2)
        d["selection"] = {"selected": dec.selected, "reasons": sorted(dec.reasons), "dd_width": dec.dd_width}
        reports.append(d)
    if args.format == "json":
        body = {"config": _effective(args, config) | {"inputs": args.input}, "reports": reports}
        _emit(json.dumps(body, indent=2) + "\n", args.output)
    else:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["dataset", "x", "lo", "hi", "raw_lo", "raw_hi", "dd_lo", "dd_hi", "selected"])
        for d in reports:
            for key, iv in d["ci"].items():
                raw = d["ci_raw"][key]
                w.writerow([d["name"], key, *(iv or ["", ""]), *(raw or ["", ""]), *d["dd"], d["selection"]["selected"]])
        _emit(out.getvalue(), args.output)
    return 0


def cmd_simulate(args) -> int:
    ex = args.example if args.example.startswith(("ex", "custom")) else f"ex{args.example}"
    spec = GeneratorSpec(ex, p=args.p, n=args.n, seed=args.seed, params=dict(args.param))
    ds = generate(spec)
    header = f"# example={ex} p={args.p} n={args.n} seed={args.seed} params={json.dumps(spec.resolved(), sort_keys=True)}\n"
    _emit(header + dump_dataset(ds), args.output)
    return 0


def _eval_one(path: str, white: bool, config: EvalConfig):
    return evaluate_dataset(_load(path, white), config)


def cmd_evaluate(args) -> int:
    paths: List[str] = list(args.input)
    for pattern in args.globs:
        matched = sorted(glob.glob(pattern))
        if not matched:
            raise FileNotFoundError(f"no files match {pattern!r}")
        paths.extend(matched)
    if not paths:
        raise UsageError("evaluate needs --glob or --input")
    workers = args.workers if args.workers is not None else int(os.environ.get(WORKERS_ENV, "1"))
    if workers < 1:
        raise UsageError("workers must be >= 1")
    config = EvalConfig(_analysis_config(args), args.dd_threshold, args.heuristic2)
    if workers > 1 and len(paths) > 1:
        with ProcessPoolExecutor(workers) as ex:
            records = list(ex.map(_eval_one, paths, [args.white] * len(paths), [config] * len(paths)))
    else:
        records = [_eval_one(p, args.white, config) for p in paths]
    report = aggregate_report(records, config.analysis.x_grid)
    if args.format == "csv":
        _emit(report.to_csv(), args.output)
    else:
        body = {"config": _effective(args, config.analysis) | {"inputs": paths, "workers": workers}, **report.to_dict()}
        if args.records:
            body["records"] = [r.to_dict() for r in records]
        _emit(json.dumps(body, indent=2) + "\n", args.output)
    return 0


COMMANDS = {"analyze": cmd_analyze, "simulate": cmd_simulate, "evaluate": cmd_evaluate}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"eibounds: I/O error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"eibounds: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
