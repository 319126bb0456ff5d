"""Capability-set comparison: when is one welfare representation better?

A set succeeds another when every point of the other is strictly
dominated by some point of the set. With both directions checked this
yields a four-way partial order over representations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import BeingsPoint, WelfareRepresentation
from .rationals import Rat, as_rat
from .scenarios import DimensionMismatch


class Relation(enum.Enum):
    STRICTLY_BETTER = "strictly_better"
    STRICTLY_WORSE = "strictly_worse"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class ComparisonOutcome:
    relation: Relation
    # dominated point of the losing side -> dominating point of the winner,
    # empty unless the relation is strict.
    certificates: Mapping[BeingsPoint, BeingsPoint]


def dominates_point(a: Sequence[Rat], b: Sequence[Rat]) -> bool:
    """Weak dominance with at least one strict coordinate."""
    if len(a) != len(b):
        raise DimensionMismatch(f"point widths differ: {len(a)} vs {len(b)}")
    strict = False
    for x, y in zip(a, b):
        x, y = as_rat(x), as_rat(y)
        if x < y:
            return False
        if x > y:
            strict = True
    return strict


def set_succeeds(
    winner: WelfareRepresentation, loser: WelfareRepresentation
) -> bool:
    """Every loser point must be strictly dominated by some winner point."""
    winner_values = winner.value_tuples()
    return all(
        any(dominates_point(w, point) for w in winner_values)
        for point in loser.value_tuples()
    )


def covers_point(a: Sequence[Rat], b: Sequence[Rat]) -> bool:
    """Weak componentwise dominance, equality allowed."""
    if len(a) != len(b):
        raise DimensionMismatch(f"point widths differ: {len(a)} vs {len(b)}")
    return all(as_rat(x) >= as_rat(y) for x, y in zip(a, b))


def set_covers(winner: WelfareRepresentation, loser: WelfareRepresentation) -> bool:
    """Weak variant of set_succeeds: equality counts as covering."""
    winner_values = winner.value_tuples()
    return all(
        any(covers_point(w, point) for w in winner_values)
        for point in loser.value_tuples()
    )


def _certificates(
    winner: WelfareRepresentation, loser: WelfareRepresentation
) -> dict[BeingsPoint, BeingsPoint]:
    # First dominating point in canonical order keeps the output deterministic.
    out: dict[BeingsPoint, BeingsPoint] = {}
    winner_values = winner.value_tuples()
    for point in loser.value_tuples():
        for w in winner_values:
            if dominates_point(w, point):
                out[BeingsPoint(point)] = BeingsPoint(w)
                break
    return out


def classify(
    left: WelfareRepresentation, right: WelfareRepresentation
) -> ComparisonOutcome:
    """Relation of left to right with dominance certificates when strict."""
    if left.dimensions != right.dimensions:
        raise DimensionMismatch(
            f"dimensions differ: {left.dimensions} vs {right.dimensions}"
        )
    if left.value_tuples() == right.value_tuples():
        return ComparisonOutcome(Relation.EQUIVALENT, {})
    left_wins = set_succeeds(left, right)
    right_wins = set_succeeds(right, left)
    if left_wins and not right_wins:
        return ComparisonOutcome(
            Relation.STRICTLY_BETTER, _certificates(left, right)
        )
    if right_wins and not left_wins:
        return ComparisonOutcome(
            Relation.STRICTLY_WORSE, _certificates(right, left)
        )
    return ComparisonOutcome(Relation.INCOMPARABLE, {})


__all__ = [
    "ComparisonOutcome",
    "Relation",
    "classify",
    "covers_point",
    "dominates_point",
    "set_covers",
    "set_succeeds",
]
