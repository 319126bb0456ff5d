"""What-if scenarios: declarative overrides applied to a model state.

A scenario is a named list of overrides, optionally extending another
scenario. Applying one yields a new (city, commons, citizens) state;
nothing is mutated in place. Evaluation composes application with the
frontier solver and caches results by content, and deprivation metrics
quantify what a citizen loses between two welfare representations.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass, replace
from typing import Mapping, Sequence, Union

from .ilp import build_ilp_for_dimensions
from .model import (
    BeingsPoint,
    CitizenState,
    CityModel,
    CommonKind,
    CommonSpec,
    CommonsState,
    ConversionMatrix,
    ResourceQuantity,
    ResourceVector,
    TransformationMatrix,
    WelfareRepresentation,
)
from .rationals import ZERO, Rat, as_rat, format_rational
from .solver import FrontierOptions, pareto_frontier

BASE_SCENARIO_ID = "base"


class ScenarioError(Exception):
    pass


class UnresolvableScenario(ScenarioError):
    """Unknown id, unknown target, or a cycle in the extends chain."""


class InvariantViolated(ScenarioError):
    """Overrides would leave the commons state inconsistent."""


class UnknownCitizen(KeyError):
    pass


class DimensionMismatch(ValueError):
    pass


# --------------------------------------------------------------------------
# Override targets. One frozen dataclass per overridable quantity; the
# value semantics live in _apply_override below.


@dataclass(frozen=True)
class CommonCapacity:
    common_id: str


@dataclass(frozen=True)
class CommonDelta:
    common_id: str


@dataclass(frozen=True)
class Resource:
    citizen_id: str
    resource_id: str


@dataclass(frozen=True)
class ConversionEntry:
    citizen_id: str
    action_id: str
    column: str


@dataclass(frozen=True)
class TransformationEntry:
    citizen_id: str
    action_id: str
    dimension: str


@dataclass(frozen=True)
class ForbidAction:
    citizen_id: str
    action_id: str


OverrideTarget = Union[
    CommonCapacity, CommonDelta, Resource, ConversionEntry, TransformationEntry, ForbidAction
]


@dataclass(frozen=True)
class Override:
    target: OverrideTarget
    value: Rat | None = None  # None only for ForbidAction


@dataclass(frozen=True)
class Scenario:
    scenario_id: str
    label: str = ""
    extends: str | None = None
    overrides: tuple[Override, ...] = ()


def base_scenario() -> Scenario:
    return Scenario(BASE_SCENARIO_ID)


def resolve_overrides(
    scenario: Scenario, registry: Mapping[str, Scenario] | None = None
) -> tuple[Override, ...]:
    """Flatten the extends chain, ancestors first so children win."""
    chain: list[Scenario] = []
    seen: set[str] = set()
    current: Scenario | None = scenario
    while current is not None:
        if current.scenario_id in seen:
            raise UnresolvableScenario(
                f"extends cycle through scenario {current.scenario_id!r}"
            )
        seen.add(current.scenario_id)
        chain.append(current)
        parent_id = current.extends
        if parent_id is None or parent_id == BASE_SCENARIO_ID:
            current = None
        else:
            if registry is None or parent_id not in registry:
                raise UnresolvableScenario(f"unknown scenario {parent_id!r}")
            current = registry[parent_id]
    out: list[Override] = []
    for member in reversed(chain):
        out.extend(member.overrides)
    return tuple(out)


# --------------------------------------------------------------------------
# Application. Internal mutable mirrors of the frozen model pieces keep
# the override loop simple; frozen objects are rebuilt once at the end.


class _CommonsDraft:
    def __init__(self, commons: CommonsState):
        self.order = [c.common_id for c in commons.commons]
        self.entries = {
            c.common_id: [c.kind, as_rat(c.capacity), as_rat(c.delta)]
            for c in commons.commons
        }
        self.touched = False

    def freeze(self) -> CommonsState:
        return CommonsState(
            tuple(
                CommonSpec(cid, *self.entries[cid]) for cid in self.order
            )
        )


class _CitizenDraft:
    def __init__(self, citizen: CitizenState):
        self.base = citizen
        self.resources = {
            r.resource_id: [as_rat(r.quantity), r.unit]
            for r in citizen.resources.entries
        }
        self.resource_order = [r.resource_id for r in citizen.resources.entries]
        self.conversion = {a: dict(row) for a, row in citizen.conversion.rows.items()}
        self.transformation = {
            a: dict(row) for a, row in citizen.transformation.rows.items()
        }
        self.forbidden = set(citizen.forbidden_actions)
        self.touched = False

    def freeze(self) -> CitizenState:
        if not self.touched:
            return self.base
        return replace(
            self.base,
            resources=ResourceVector(
                tuple(
                    ResourceQuantity(rid, *self.resources[rid])
                    for rid in self.resource_order
                )
            ),
            conversion=ConversionMatrix(
                {a: dict(row) for a, row in self.conversion.items()}
            ),
            transformation=TransformationMatrix(
                {a: dict(row) for a, row in self.transformation.items()}
            ),
            forbidden_actions=tuple(sorted(self.forbidden)),
        )


def apply_scenario(
    base: tuple[CityModel, CommonsState, CitizenState | Sequence[CitizenState]],
    scenario: Scenario,
    *,
    registry: Mapping[str, Scenario] | None = None,
    known_citizen_ids: Sequence[str] | None = None,
) -> tuple[CityModel, CommonsState, CitizenState | tuple[CitizenState, ...]]:
    """Return the overridden state; the input triple is left untouched.

    known_citizen_ids widens the set of citizen ids considered valid, so a
    scenario touching citizens outside the given slice still applies (its
    foreign overrides are skipped) instead of failing as unresolvable.
    """
    city, commons, citizens_in = base
    single = isinstance(citizens_in, CitizenState)
    citizens: tuple[CitizenState, ...] = (
        (citizens_in,) if single else tuple(citizens_in)
    )

    overrides = resolve_overrides(scenario, registry)
    if not overrides:
        return (city, commons, citizens_in)

    action_ids = set(city.action_ids())
    commons_draft = _CommonsDraft(commons)
    drafts = {cz.citizen_id: _CitizenDraft(cz) for cz in citizens}
    known = set(drafts) | set(known_citizen_ids or ())

    for position, override in enumerate(overrides):
        _apply_override(
            override,
            commons_draft,
            drafts,
            known,
            action_ids,
            f"overrides[{position}]",
        )

    for cid in commons_draft.order:
        kind, capacity, delta = commons_draft.entries[cid]
        if capacity < 0:
            raise InvariantViolated(f"common {cid!r}: capacity {capacity} is negative")
        if delta < 0:
            raise InvariantViolated(f"common {cid!r}: delta {delta} is negative")
        if delta > capacity:
            raise InvariantViolated(
                f"common {cid!r}: delta {delta} exceeds capacity {capacity}"
            )

    new_commons = commons_draft.freeze() if commons_draft.touched else commons
    new_citizens = tuple(drafts[cz.citizen_id].freeze() for cz in citizens)
    out_citizens: CitizenState | tuple[CitizenState, ...] = (
        new_citizens[0] if single else new_citizens
    )
    return (city, new_commons, out_citizens)


def _apply_override(
    override: Override,
    commons: _CommonsDraft,
    drafts: Mapping[str, _CitizenDraft],
    known_citizens: set[str],
    action_ids: set[str],
    where: str,
) -> None:
    target = override.target
    value = override.value

    def need_value() -> Rat:
        if value is None:
            raise UnresolvableScenario(f"{where}: missing value")
        return as_rat(value)

    def citizen_draft(citizen_id: str) -> _CitizenDraft | None:
        draft = drafts.get(citizen_id)
        if draft is None:
            if citizen_id in known_citizens:
                return None  # applies to a citizen outside this slice
            raise UnresolvableScenario(f"{where}: unknown citizen {citizen_id!r}")
        return draft

    if isinstance(target, CommonCapacity):
        entry = commons.entries.get(target.common_id)
        if entry is None:
            raise UnresolvableScenario(f"{where}: unknown common {target.common_id!r}")
        capacity = need_value()
        if entry[0] is CommonKind.UTILISED and capacity not in (0, 1):
            raise InvariantViolated(
                f"{where}: utilised common capacity must be 0 or 1, got {capacity}"
            )
        entry[1] = capacity
        commons.touched = True
    elif isinstance(target, CommonDelta):
        entry = commons.entries.get(target.common_id)
        if entry is None:
            raise UnresolvableScenario(f"{where}: unknown common {target.common_id!r}")
        entry[2] = need_value()
        commons.touched = True
    elif isinstance(target, Resource):
        draft = citizen_draft(target.citizen_id)
        if draft is None:
            return
        slot = draft.resources.get(target.resource_id)
        if slot is None:
            raise UnresolvableScenario(
                f"{where}: citizen {target.citizen_id!r} has no resource "
                f"{target.resource_id!r}"
            )
        slot[0] = need_value()
        draft.touched = True
    elif isinstance(target, ConversionEntry):
        draft = citizen_draft(target.citizen_id)
        if draft is None:
            return
        if target.action_id not in action_ids:
            raise UnresolvableScenario(f"{where}: unknown action {target.action_id!r}")
        draft.conversion.setdefault(target.action_id, {})[target.column] = need_value()
        draft.touched = True
    elif isinstance(target, TransformationEntry):
        draft = citizen_draft(target.citizen_id)
        if draft is None:
            return
        if target.action_id not in action_ids:
            raise UnresolvableScenario(f"{where}: unknown action {target.action_id!r}")
        draft.transformation.setdefault(target.action_id, {})[
            target.dimension
        ] = need_value()
        draft.touched = True
    elif isinstance(target, ForbidAction):
        draft = citizen_draft(target.citizen_id)
        if draft is None:
            return
        if target.action_id not in action_ids:
            raise UnresolvableScenario(f"{where}: unknown action {target.action_id!r}")
        draft.forbidden.add(target.action_id)
        draft.touched = True
    else:
        raise UnresolvableScenario(f"{where}: unsupported target {target!r}")


# --------------------------------------------------------------------------
# Evaluation with a content-addressed cache.


def scenario_content_hash(
    scenario: Scenario, registry: Mapping[str, Scenario] | None = None
) -> str:
    """Digest of the resolved override list; labels and ids don't matter."""
    parts: list[str] = []
    for override in resolve_overrides(scenario, registry):
        target = override.target
        fields = [type(target).__name__]
        fields.extend(str(getattr(target, name)) for name in target.__dataclass_fields__)
        fields.append("" if override.value is None else format_rational(override.value))
        parts.append("\x1f".join(fields))
    return hashlib.sha256("\x1e".join(parts).encode()).hexdigest()


def evaluate(
    citizen: CitizenState,
    city: CityModel,
    commons: CommonsState,
    scenario: Scenario,
    dimensions: Sequence[str],
    options: FrontierOptions | None = None,
    *,
    registry: Mapping[str, Scenario] | None = None,
    known_citizen_ids: Sequence[str] | None = None,
    cache: dict | None = None,
) -> WelfareRepresentation:
    """Frontier of one citizen under a scenario, cached by content.

    The cache key also covers the solve method and node limit, since both
    can change the reported representation (partial results aside, the
    alternates field differs between methods).
    """
    options = options or FrontierOptions()
    key = None
    if cache is not None:
        key = (
            citizen.citizen_id,
            scenario_content_hash(scenario, registry),
            options.method,
            options.node_limit,
            tuple(dimensions),
        )
        hit = cache.get(key)
        if hit is not None:
            return hit
    _, mod_commons, mod_citizen = apply_scenario(
        (city, commons, citizen),
        scenario,
        registry=registry,
        known_citizen_ids=known_citizen_ids,
    )
    assert isinstance(mod_citizen, CitizenState)
    instance = build_ilp_for_dimensions(mod_citizen, city, mod_commons, dimensions)
    result = pareto_frontier(instance, options)
    if cache is not None and key is not None:
        cache.setdefault(key, result)
    return result


class ScenarioEvaluator:
    """Evaluation front-end over one loaded model document.

    Thread-safe: the cache is guarded by a lock, and identical keys always
    map to identical results, so concurrent fills are harmless.
    """

    def __init__(
        self,
        city: CityModel,
        commons: CommonsState,
        citizens: Sequence[CitizenState],
        dimensions: Sequence[str],
        scenarios: Mapping[str, Scenario] | None = None,
        options: FrontierOptions | None = None,
    ):
        self.city = city
        self.commons = commons
        self.citizens = {cz.citizen_id: cz for cz in citizens}
        self.dimensions = tuple(dimensions)
        self.registry = dict(scenarios or {})
        self.options = options or FrontierOptions()
        self._cache: dict = {}
        self._lock = threading.Lock()

    def scenario(self, scenario: Scenario | str | None) -> Scenario:
        if scenario is None:
            return base_scenario()
        if isinstance(scenario, Scenario):
            return scenario
        if scenario == BASE_SCENARIO_ID:
            return base_scenario()
        found = self.registry.get(scenario)
        if found is None:
            raise UnresolvableScenario(f"unknown scenario {scenario!r}")
        return found

    def evaluate(
        self,
        citizen_id: str,
        scenario: Scenario | str | None = None,
        options: FrontierOptions | None = None,
    ) -> WelfareRepresentation:
        citizen = self.citizens.get(citizen_id)
        if citizen is None:
            raise UnknownCitizen(citizen_id)
        options = options or self.options
        resolved = self.scenario(scenario)
        key = (
            citizen_id,
            scenario_content_hash(resolved, self.registry),
            options.method,
            options.node_limit,
        )
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        result = evaluate(
            citizen,
            self.city,
            self.commons,
            resolved,
            self.dimensions,
            options,
            registry=self.registry,
            known_citizen_ids=tuple(self.citizens),
        )
        with self._lock:
            self._cache.setdefault(key, result)
        return result


# --------------------------------------------------------------------------
# Deprivation metrics.


@dataclass(frozen=True)
class DeprivationReport:
    before: WelfareRepresentation
    after: WelfareRepresentation
    lost_points: tuple[BeingsPoint, ...]
    ideal_point_drop: tuple[Rat, ...]
    dominated_region_shrink_2d: Rat | None


def ideal_point(values: Sequence[tuple[Rat, ...]], width: int) -> tuple[Rat, ...]:
    """Componentwise maximum; the origin when there are no points."""
    out = [ZERO] * width
    for point in values:
        for i, v in enumerate(point):
            if as_rat(v) > out[i]:
                out[i] = as_rat(v)
    return tuple(out)


def staircase_area(values: Sequence[tuple[Rat, ...]], box: tuple[Rat, Rat]) -> Rat:
    """Exact area of union of [0,x]x[0,y] rectangles clipped to the box."""
    bx, by = as_rat(box[0]), as_rat(box[1])
    if bx <= 0 or by <= 0:
        return ZERO
    clipped = []
    for x, y in values:
        x = min(as_rat(x), bx)
        y = min(as_rat(y), by)
        if x > 0 and y > 0:
            clipped.append((x, y))
    # Nondominated corners sorted by decreasing x have strictly increasing y,
    # so each one contributes a horizontal slab above the previous corner.
    kept = _nondominated_2d(clipped)
    area = ZERO
    prev_y = ZERO
    for x, y in sorted(kept, key=lambda p: (-p[0], -p[1])):
        if y > prev_y:
            area = area + x * (y - prev_y)
            prev_y = y
    return area


def _nondominated_2d(values: list[tuple[Rat, Rat]]) -> list[tuple[Rat, Rat]]:
    kept = []
    for candidate in values:
        if any(
            other != candidate and other[0] >= candidate[0] and other[1] >= candidate[1]
            for other in values
        ):
            continue
        if candidate not in kept:
            kept.append(candidate)
    return kept


def deprivation(
    before: WelfareRepresentation, after: WelfareRepresentation
) -> DeprivationReport:
    """What the after state lost relative to the before state."""
    if before.dimensions != after.dimensions:
        raise DimensionMismatch(
            f"dimensions differ: {before.dimensions} vs {after.dimensions}"
        )
    width = len(before.dimensions)
    before_values = before.value_tuples()
    after_set = set(after.value_tuples())
    lost = tuple(
        BeingsPoint(v) for v in before_values if v not in after_set
    )
    ideal_before = ideal_point(before_values, width)
    ideal_after = ideal_point(after.value_tuples(), width)
    drop = tuple(
        max(ZERO, b - a) for b, a in zip(ideal_before, ideal_after)
    )
    shrink: Rat | None = None
    if width == 2:
        box = (ideal_before[0], ideal_before[1])
        shrink = staircase_area(before_values, box) - staircase_area(
            after.value_tuples(), box
        )
    return DeprivationReport(before, after, lost, drop, shrink)


__all__ = [
    "BASE_SCENARIO_ID",
    "CommonCapacity",
    "CommonDelta",
    "ConversionEntry",
    "DeprivationReport",
    "DimensionMismatch",
    "ForbidAction",
    "InvariantViolated",
    "Override",
    "Resource",
    "Scenario",
    "ScenarioError",
    "ScenarioEvaluator",
    "TransformationEntry",
    "UnknownCitizen",
    "UnresolvableScenario",
    "apply_scenario",
    "base_scenario",
    "deprivation",
    "evaluate",
    "ideal_point",
    "resolve_overrides",
    "scenario_content_hash",
    "staircase_area",
]
