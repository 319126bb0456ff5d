"""JSON trees for solver and comparison outputs.

Shared by the command line and the HTTP service so both emit identical
canonical bytes for the same result.
"""

from __future__ import annotations

from typing import Any

from .compare import ComparisonOutcome
from .model import FrontierPoint, WelfareRepresentation
from .rationals import rat_to_json
from .scenarios import DeprivationReport


def point_to_tree(point: FrontierPoint) -> dict[str, Any]:
    return {
        "values": [rat_to_json(v) for v in point.beings.values],
        "witness": {a: n for a, n in sorted(point.witness.counts.items())},
        "alternates_count": point.alternates_count,
    }


def representation_to_tree(rep: WelfareRepresentation) -> dict[str, Any]:
    return {
        "dimensions": list(rep.dimensions),
        "points": [point_to_tree(p) for p in rep.points],
    }


def deprivation_to_tree(report: DeprivationReport) -> dict[str, Any]:
    shrink = report.dominated_region_shrink_2d
    return {
        "dimensions": list(report.before.dimensions),
        "before": [[rat_to_json(v) for v in p] for p in report.before.value_tuples()],
        "after": [[rat_to_json(v) for v in p] for p in report.after.value_tuples()],
        "lost_points": [[rat_to_json(v) for v in p.values] for p in report.lost_points],
        "ideal_point_drop": [rat_to_json(v) for v in report.ideal_point_drop],
        "dominated_region_shrink_2d": None if shrink is None else rat_to_json(shrink),
    }


def outcome_to_tree(outcome: ComparisonOutcome) -> dict[str, Any]:
    return {
        "relation": outcome.relation.value,
        "certificates": [
            {
                "dominated": [rat_to_json(v) for v in dominated.values],
                "dominating": [rat_to_json(v) for v in dominating.values],
            }
            for dominated, dominating in outcome.certificates.items()
        ],
    }


__all__ = [
    "deprivation_to_tree",
    "outcome_to_tree",
    "point_to_tree",
    "representation_to_tree",
]
