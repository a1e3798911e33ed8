"""Command line entry point.

verify <suite>  runs a verification suite and writes a JSON or CSV report;
study <kind>    runs a convergence sweep over a list of sizes.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage or
configuration error.
"""

import argparse
import sys

from .harness import (STUDY_KINDS, SUITES, SuiteConfig, convergence_study,
                      report_to_csv, report_to_json, run_suite, study_to_csv)

import json


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="povmlab",
        description="numerical verification of POVM and modular-flow identities")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--d", type=int, default=12, help="matrix dimension")
    v.add_argument("--n", type=int, default=256, help="circle grid size")
    v.add_argument("--m", type=int, default=64, help="Mellin lattice size")
    v.add_argument("--beta", type=float, nargs="+", default=[0.5, 1.0],
                   help="inverse temperatures for the thermal checks")
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--tol", type=float, default=None,
                   help="override every per-case tolerance")
    v.add_argument("--out", default=None, help="write the report here "
                   "(default: stdout)")
    v.add_argument("--format", dest="fmt", choices=["json", "csv"],
                   default="json")

    s = sub.add_parser("study", help="run a convergence study")
    s.add_argument("kind", choices=STUDY_KINDS)
    s.add_argument("--sizes", type=int, nargs="+", required=True)
    s.add_argument("--out", default=None)
    s.add_argument("--format", dest="fmt", choices=["json", "csv"],
                   default="json")
    return parser


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize --help to 0
        return int(exc.code or 0)

    if args.command == "verify":
        try:
            cfg = SuiteConfig(suite=args.suite, d=args.d, n=args.n, m=args.m,
                              betas=tuple(args.beta), seed=args.seed,
                              tol=args.tol, out=args.out, fmt=args.fmt)
            report = run_suite(cfg)
        except (ValueError, RuntimeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        text = report_to_csv(report) if args.fmt == "csv" else report_to_json(report)
        _emit(text, args.out)
        return 0 if report["summary"]["failed"] == 0 else 1

    try:
        study = convergence_study(args.kind, args.sizes)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = study_to_csv(study) if args.fmt == "csv" else json.dumps(
        study, sort_keys=True, indent=2)
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
