"""Run the full verification for both bundled cases and print a one-line summary per section.

    python3 scripts/verify_cases.py [--precision 60] [--seed 0] [--json out.json]
"""

import argparse
import json
import time

from conncalc.fusion import verify_case
from conncalc.scalar import fast_context, make_context


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--precision", type=int, default=60)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="write both reports here")
    args = ap.parse_args()

    reports = {}
    for case in ("sqrt13", "sqrt17"):
        ctx = fast_context(case) if args.precision <= 16 else make_context(case, args.precision)
        t = time.perf_counter()
        rep = verify_case(ctx, args.seed)
        reports[case] = rep
        print(f"{case}: {'PASS' if rep['passed'] else 'FAIL'} in {time.perf_counter() - t:.1f}s")
        for s in rep["sections"]:
            print(f"  [{'ok' if s['passed'] else '!!'}] {s['title']}")
            for c in s.get("conditions", []):
                print(f"      [{'ok' if c['passed'] else '!!'}] {c['name']}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=1)


if __name__ == "__main__":
    main()
