"""Run the pipeline on seeded random triangular derivations and tally outcomes.

    python scripts/fuzz_triangular.py --cases 500 --seed 1
"""

import argparse
import collections
import json
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from generators import random_triangular  # noqa: E402

from nonrigid.pipeline import DerivationSpec, Options, report_to_dict, run_pipeline, verify_report  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cases", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--strategy", default="auto")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    statuses = collections.Counter()
    branches = collections.Counter()
    max_index = 0
    slowest = (0.0, "")
    failures = 0
    start = time.perf_counter()
    for _ in range(args.cases):
        d, _ = random_triangular(rng, rng.randint(2, args.max_n), rng.randint(0, 1))
        t = d.table
        spec = DerivationSpec(t.constants, t.variables, {x: str(f) for x, f in zip(t.variables, d.images)})
        tic = time.perf_counter()
        report = run_pipeline(spec, Options(strategy=args.strategy, seed=rng.randrange(2**16)))
        doc = json.loads(json.dumps(report_to_dict(report)))
        if not all(ok for _, ok in verify_report(doc)):
            failures += 1
        elapsed = time.perf_counter() - tic
        if elapsed > slowest[0]:
            slowest = (elapsed, str(d))
        statuses[report.status.value] += 1
        for c in doc["certificates"]:
            branches[c["branch"]["kind"]] += 1
        if report.lnd:
            max_index = max(max_index, max(report.lnd.indices))

    print(f"cases: {args.cases}  time: {time.perf_counter() - start:.1f}s  verify failures: {failures}")
    print("status:", dict(statuses))
    print("branch:", dict(branches))
    print(f"largest nilpotency index: {max_index}")
    print(f"slowest ({slowest[0]:.2f}s): {slowest[1]}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
