"""Run a what-if study over every scenario in a model document.

For each citizen the script solves the base frontier, then each named
scenario, and prints the three deprivation measures plus the pairwise
citizen comparison under each scenario. Meant as a worked example of the
library API and as a quick smoke test on real documents.

Usage:
    python scripts/what_if_report.py                 # bundled two_citizens
    python scripts/what_if_report.py path/to.model --method exhaustive
"""

from __future__ import annotations

import argparse
import itertools
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from capscope.compare import classify
from capscope.documents import load_fixture, load_model
from capscope.scenarios import ScenarioEvaluator, deprivation
from capscope.solver import FrontierOptions


def fmt_rat(value) -> str:
    return str(value)


def fmt_points(rep) -> str:
    return " ".join("(" + ",".join(fmt_rat(v) for v in p) + ")" for p in rep.value_tuples())


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("model", nargs="?", default=None, help="model document path (default: bundled two_citizens)")
    parser.add_argument("--method", choices=("eps", "exhaustive"), default="eps")
    parser.add_argument("--node-limit", type=int, default=2_000_000)
    args = parser.parse_args()

    document = load_model(args.model) if args.model else load_fixture("two_citizens")
    options = FrontierOptions(method=args.method, node_limit=args.node_limit)
    evaluator = ScenarioEvaluator(
        document.city,
        document.commons,
        document.citizens,
        document.dimensions,
        document.scenario_registry(),
        options,
    )
    citizen_ids = [c.citizen_id for c in document.citizens]
    scenario_ids = [s.scenario_id for s in document.scenarios]
    dims = ", ".join(document.dimensions)

    print(f"model: {args.model or 'two_citizens (bundled)'}")
    print(f"dimensions: {dims}")
    print(f"citizens: {', '.join(citizen_ids)}")
    print(f"scenarios: {', '.join(scenario_ids) or '(none)'}")
    print()

    base = {}
    for cid in citizen_ids:
        start = time.perf_counter()
        rep = evaluator.evaluate(cid)
        elapsed = time.perf_counter() - start
        base[cid] = rep
        print(f"[base] {cid}: {len(rep.points)} point(s) in {elapsed:.2f}s")
        print(f"       {fmt_points(rep)}")
    print()

    for sid in scenario_ids:
        print(f"--- scenario {sid} ---")
        for cid in citizen_ids:
            after = evaluator.evaluate(cid, sid)
            report = deprivation(base[cid], after)
            drop = "(" + ",".join(fmt_rat(v) for v in report.ideal_point_drop) + ")"
            shrink = report.dominated_region_shrink_2d
            print(f"  {cid}: {len(after.points)} point(s)  {fmt_points(after)}")
            lost = " ".join(
                "(" + ",".join(fmt_rat(v) for v in p.values) + ")"
                for p in report.lost_points
            )
            print(f"      lost: {lost or '(none)'}  ideal drop: {drop}", end="")
            if shrink is not None:
                print(f"  area shrink: {fmt_rat(shrink)}")
            else:
                print()
        for left, right in itertools.combinations(citizen_ids, 2):
            outcome = classify(
                evaluator.evaluate(left, sid), evaluator.evaluate(right, sid)
            )
            print(f"  {left} vs {right}: {outcome.relation.value}")
        print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
