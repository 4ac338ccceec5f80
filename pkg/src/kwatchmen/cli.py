"""Command line: solve, verify, render and bench.

Exit status: 0 solved and verified, 2 verification failed, 3 infeasible or
too large, 4 bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from decimal import Decimal
from fractions import Fraction

from .errors import InputError, ParseError, WatchmenError
from .io import FACTOR_MODES, MODES, Instance, dumps, load_corpus, load_instance, parse_result, reverify, run
from .svg import render_svg

EXIT_OK = 0
EXIT_VERIFY_FAILED = 2


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(Decimal(text)) if "/" not in text else Fraction(text)
    except Exception as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _overrides(args) -> dict:
    return {
        "mode": args.mode,
        "k": args.k,
        "epsilon": args.epsilon,
        "quota_fraction": args.quota,
        "factor_mode": args.factor_mode,
    }


def _instance(args) -> Instance:
    inst = load_instance(args.instance)
    changes = _overrides(args)
    if any(v is not None for v in changes.values()):
        inst = inst.with_overrides(**changes)
    return inst


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_solve(args) -> int:
    inst = _instance(args)
    result = run(inst, threads=args.threads)
    _write(result.to_json(), args.output)
    if args.svg:
        _write(render_svg(inst, result, grid=args.grid_debug), args.svg)
    return EXIT_OK if result.passed else EXIT_VERIFY_FAILED


def cmd_verify(args) -> int:
    inst = _instance(args)
    with open(args.result, "rb") as fh:
        result = parse_result(fh.read())
    report = reverify(inst, result)
    _write(dumps(json.loads(json.dumps(report, default=float))), args.output)
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def cmd_render(args) -> int:
    inst = _instance(args)
    if args.result:
        with open(args.result, "rb") as fh:
            result = parse_result(fh.read())
    elif args.no_solve:
        result = None
    else:
        result = run(inst, threads=args.threads)
    _write(render_svg(inst, result, grid=args.grid_debug), args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    instances = load_corpus(args.seed_corpus)
    modes = [args.mode] if args.mode else ["exact", "fptas"]
    ks = [args.k] if args.k else [1, 2, 3]
    eps = args.epsilon if args.epsilon is not None else Fraction(1, 2)
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output not in (None, "-") else sys.stdout
    status = EXIT_OK
    try:
        writer = csv.writer(out)
        writer.writerow(["instance", "mode", "k", "epsilon", "max_length", "time"])
        for base in instances:
            for mode in modes:
                for k in ks:
                    changes = {"mode": mode, "k": k}
                    if mode in ("fptas", "l2", "quota"):
                        changes["epsilon"] = eps
                    if mode == "quota":
                        changes["quota_fraction"] = args.quota if args.quota is not None else Fraction(1)
                        changes["factor_mode"] = args.factor_mode
                    inst = base.with_overrides(**changes)
                    t0 = time.perf_counter()
                    try:
                        result = run(inst, threads=args.threads)
                        value = float(result.max_length)
                        if not result.passed:
                            status = EXIT_VERIFY_FAILED
                    except WatchmenError as exc:
                        value = exc.code
                    writer.writerow([
                        inst.name or "?", mode, k,
                        float(eps) if mode in ("fptas", "l2", "quota") else "",
                        value, f"{time.perf_counter() - t0:.4f}",
                    ])
    finally:
        if out is not sys.stdout:
            out.close()
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kwatchmen", description="Anchored k-watchmen routes in polygons.")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p, instance=True):
        if instance:
            p.add_argument("instance", help="instance JSON file")
        p.add_argument("--mode", choices=MODES)
        p.add_argument("--k", type=int)
        p.add_argument("--epsilon", type=_fraction)
        p.add_argument("--quota", type=_fraction, help="required fraction of the polygon area")
        p.add_argument("--factor-mode", choices=FACTOR_MODES)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--grid-debug", action="store_true", help="draw the Hanan grid")
        p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("solve", help="solve an instance and print a result record")
    solver_flags(p)
    p.add_argument("--svg", help="also write a drawing here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="re-check a result record against its instance")
    solver_flags(p)
    p.add_argument("result", help="result JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw an instance and its solution as SVG")
    solver_flags(p)
    p.add_argument("--result", help="result JSON file; solved on the fly when absent")
    p.add_argument("--no-solve", action="store_true", help="draw the instance only")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="time the solvers over a directory of instances, CSV out")
    solver_flags(p, instance=False)
    p.add_argument("--seed-corpus", help="directory of instance JSON files (default: bundled fixtures)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WatchmenError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return exc.exit_status
    except OSError as exc:
        print(json.dumps({"error": ParseError.code, "message": str(exc)}), file=sys.stderr)
        return InputError.exit_status


if __name__ == "__main__":
    sys.exit(main())
