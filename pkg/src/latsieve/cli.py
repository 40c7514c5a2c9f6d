"""Command line interface.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .arith import Poly, roots_mod_p
from .config import ConfigError, load_config
from .runner import run_bench, run_sieve, run_verify


def _load(path):
    try:
        return load_config(path)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="latsieve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sieve = sub.add_parser("sieve", help="run relation collection")
    p_sieve.add_argument("--config", required=True)
    p_sieve.add_argument("--workers", type=int, default=None)
    p_sieve.add_argument("--quiet", action="store_true")

    p_verify = sub.add_parser("verify", help="re-check a relation file")
    p_verify.add_argument("--config", required=True)
    p_verify.add_argument("--relations", required=True)

    p_bench = sub.add_parser("bench", help="compare enumeration strategies")
    p_bench.add_argument("--config", required=True)
    p_bench.add_argument("--sample", type=int, default=20)
    p_bench.add_argument("--csv", default=None, help="also write rows as CSV")

    p_roots = sub.add_parser("roots", help="roots of a polynomial mod p")
    p_roots.add_argument("--poly", required=True, help="coefficients, constant first")
    p_roots.add_argument("--p", required=True, type=int)

    args = parser.parse_args(argv)
    try:
        if args.command == "sieve":
            cfg = _load(args.config)
            run_sieve(cfg, workers=args.workers, quiet=args.quiet)
            return 0
        if args.command == "verify":
            cfg = _load(args.config)
            report = run_verify(cfg, args.relations)
            print(f"checked={report.checked} failed={report.failed}")
            if report.incomplete_tail:
                print("note: trailing partial line ignored")
            for lineno, msg in report.errors[:20]:
                print(f"line {lineno}: {msg}", file=sys.stderr)
            return 0 if report.ok else 1
        if args.command == "bench":
            cfg = _load(args.config)
            report = run_bench(cfg, sample=args.sample)
            print(report.text())
            if args.csv:
                with open(args.csv, "w", encoding="utf-8") as fh:
                    fh.write(report.csv())
            else:
                print(report.csv(), end="")
            return 0
        if args.command == "roots":
            poly = Poly.parse(args.poly)
            for r in roots_mod_p(poly, args.p):
                print(r)
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
