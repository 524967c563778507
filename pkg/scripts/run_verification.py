#!/usr/bin/env python3
"""Run the verification suites and print an aggregated summary.

Where the CLI's verify command emits one JSONL line per check, this script
groups the results by check family and reports the worst observed metric
against its tolerance, which is the quickest way to see how much margin
each identity has left.

Usage:
    python3 scripts/run_verification.py
    python3 scripts/run_verification.py --suite equivalence --report out.jsonl
"""

import argparse
import collections
import sys
import time

from landen_kdv import run_suite
from landen_kdv.verify import SUITES


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--suite", default="all", choices=["all", *SUITES])
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--report", help="also write the raw JSONL lines here")
    args = parser.parse_args(argv)

    start = time.perf_counter()
    results = run_suite(args.suite, jobs=args.jobs)
    elapsed = time.perf_counter() - start

    if args.report:
        with open(args.report, "w", newline="\n") as handle:
            for result in results:
                handle.write(result.json_line() + "\n")

    by_family = collections.defaultdict(list)
    for result in results:
        by_family[result.check].append(result)

    width = max(len(name) for name in by_family)
    print(f"{'check':<{width}}  {'n':>4}  {'worst metric':>13}  {'tol':>8}  status")
    failures = 0
    for name in sorted(by_family):
        group = by_family[name]
        worst = max(group, key=lambda r: r.metric)
        failed = [r for r in group if not r.passed]
        failures += len(failed)
        status = "ok" if not failed else f"{len(failed)} FAILED"
        print(f"{name:<{width}}  {len(group):>4}  {worst.metric:>13.3e}  "
              f"{worst.tol:>8.0e}  {status}")

    print(f"\n{len(results)} checks in {elapsed:.2f} s; "
          f"{len(results) - failures} passed, {failures} failed")
    if args.report:
        print(f"raw report written to {args.report}")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
