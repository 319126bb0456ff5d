"""Core domain types: city graph, commons, citizens, doings and beings.

A citizen chooses *doings* (non-negative integer counts of actions, where
an action is either traversing an edge or performing an activity at a
vertex). Doings consume resources and commons through the citizen's
conversion matrix and produce welfare through the transformation matrix.
The welfare image of a doings bundle is a *beings point*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Collection, Iterable, Mapping, Sequence

from .rationals import Rat, ZERO, as_rat


class ModelError(Exception):
    """Base class for model-level failures."""


class IndexMismatchError(ModelError):
    """A doings bundle or matrix row references an id the model lacks."""


class TransportMode(Enum):
    ROAD = "road"
    PUBLIC_TRANSPORT = "public_transport"


class ActionKind(Enum):
    BINARY = "binary"
    BOUNDED_INTEGER = "bounded_integer"


class CommonKind(Enum):
    UTILISED = "utilised"
    CONSUMABLE = "consumable"


@dataclass(frozen=True)
class Vertex:
    vertex_id: str
    label: str = ""


@dataclass(frozen=True)
class Edge:
    """Directed city edge. Traversals are counted per direction."""

    edge_id: str
    source: str
    target: str
    mode: TransportMode = TransportMode.ROAD


@dataclass(frozen=True)
class Activity:
    """Something a citizen can do at a fixed vertex."""

    activity_id: str
    vertex: str
    kind: ActionKind = ActionKind.BINARY


@dataclass(frozen=True)
class CityModel:
    vertices: tuple[Vertex, ...] = ()
    edges: tuple[Edge, ...] = ()
    activities: tuple[Activity, ...] = ()

    def action_ids(self) -> tuple[str, ...]:
        """Canonical action order: edges, then activities, as declared."""
        return tuple(e.edge_id for e in self.edges) + tuple(
            a.activity_id for a in self.activities
        )

    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.vertex_id for v in self.vertices)


@dataclass(frozen=True)
class CommonSpec:
    """A shared facility. Capacity is depleted exogenously by delta."""

    common_id: str
    kind: CommonKind
    capacity: Rat
    delta: Rat = ZERO

    def effective_capacity(self) -> Rat:
        return as_rat(self.capacity) - as_rat(self.delta)


@dataclass(frozen=True)
class CommonsState:
    commons: tuple[CommonSpec, ...] = ()

    def ids(self) -> tuple[str, ...]:
        return tuple(c.common_id for c in self.commons)

    def get(self, common_id: str) -> CommonSpec:
        for c in self.commons:
            if c.common_id == common_id:
                return c
        raise IndexMismatchError(f"unknown common {common_id!r}")


@dataclass(frozen=True)
class ResourceQuantity:
    resource_id: str
    quantity: Rat
    unit: str = ""


@dataclass(frozen=True)
class ResourceVector:
    entries: tuple[ResourceQuantity, ...] = ()

    def ids(self) -> tuple[str, ...]:
        return tuple(r.resource_id for r in self.entries)

    def quantity(self, resource_id: str) -> Rat:
        for r in self.entries:
            if r.resource_id == resource_id:
                return as_rat(r.quantity)
        raise IndexMismatchError(f"unknown resource {resource_id!r}")


@dataclass(frozen=True)
class ConversionMatrix:
    """Per-action consumption. rows[action][column] with missing entries 0.

    Columns are resource ids and common ids. Negative entries mean the
    action earns the resource instead of spending it.
    """

    rows: Mapping[str, Mapping[str, Rat]] = field(default_factory=dict)

    def __post_init__(self):
        # drop empty rows so equal matrices compare equal however built
        object.__setattr__(
            self, "rows", {a: row for a, row in self.rows.items() if row}
        )

    def entry(self, action_id: str, column_id: str) -> Rat:
        return as_rat(self.rows.get(action_id, {}).get(column_id, 0))

    def row(self, action_id: str) -> Mapping[str, Rat]:
        return self.rows.get(action_id, {})


@dataclass(frozen=True)
class TransformationMatrix:
    """Per-action welfare contribution. rows[action][dimension], missing 0."""

    rows: Mapping[str, Mapping[str, Rat]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "rows", {a: row for a, row in self.rows.items() if row}
        )

    def entry(self, action_id: str, dimension_id: str) -> Rat:
        return as_rat(self.rows.get(action_id, {}).get(dimension_id, 0))

    def row(self, action_id: str) -> Mapping[str, Rat]:
        return self.rows.get(action_id, {})


@dataclass(frozen=True)
class CitizenState:
    citizen_id: str
    home_vertex: str
    resources: ResourceVector
    conversion: ConversionMatrix
    transformation: TransformationMatrix
    forbidden_actions: tuple[str, ...] = ()


@dataclass(frozen=True)
class Doings:
    """Non-negative integer action counts; absent actions count 0."""

    counts: Mapping[str, int] = field(default_factory=dict)

    def count(self, action_id: str) -> int:
        return self.counts.get(action_id, 0)

    def support(self) -> tuple[str, ...]:
        return tuple(sorted(a for a, n in self.counts.items() if n != 0))

    def __add__(self, other: "Doings") -> "Doings":
        merged = dict(self.counts)
        for a, n in other.counts.items():
            merged[a] = merged.get(a, 0) + n
        return Doings({a: n for a, n in merged.items() if n != 0})

    def scaled(self, factor: int) -> "Doings":
        return Doings({a: n * factor for a, n in self.counts.items() if n * factor != 0})


@dataclass(frozen=True)
class BeingsPoint:
    """Welfare coordinates, aligned with a dimension id list held elsewhere."""

    values: tuple[Rat, ...]

    def __le__(self, other: "BeingsPoint") -> bool:
        return len(self.values) == len(other.values) and all(
            a <= b for a, b in zip(self.values, other.values)
        )


@dataclass(frozen=True)
class FrontierPoint:
    beings: BeingsPoint
    witness: Doings
    alternates_count: int | None = None


@dataclass(frozen=True)
class WelfareRepresentation:
    """Non-dominated beings points with one witness doings bundle each.

    Points are kept in decreasing lexicographic order of their values.
    """

    dimensions: tuple[str, ...]
    points: tuple[FrontierPoint, ...] = ()

    def beings(self) -> tuple[BeingsPoint, ...]:
        return tuple(p.beings for p in self.points)

    def value_tuples(self) -> tuple[tuple[Rat, ...], ...]:
        return tuple(p.beings.values for p in self.points)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.path}: {self.message}"


def beings_of(
    doings: Doings,
    transformation: TransformationMatrix,
    dimensions: Sequence[str],
    known_actions: Collection[str] | None = None,
) -> BeingsPoint:
    """Welfare image of a doings bundle: count-weighted row sums."""
    if known_actions is not None:
        _check_known(doings, known_actions)
    totals = [ZERO for _ in dimensions]
    for action_id, count in doings.counts.items():
        if count == 0:
            continue
        row = transformation.row(action_id)
        for i, dim in enumerate(dimensions):
            coeff = row.get(dim)
            if coeff is not None:
                totals[i] = totals[i] + as_rat(coeff) * count
    return BeingsPoint(tuple(totals))


def consumption_of(
    doings: Doings,
    conversion: ConversionMatrix,
    columns: Sequence[str],
    known_actions: Collection[str] | None = None,
) -> tuple[Rat, ...]:
    """Resource and commons consumption of a doings bundle, per column."""
    if known_actions is not None:
        _check_known(doings, known_actions)
    totals = [ZERO for _ in columns]
    for action_id, count in doings.counts.items():
        if count == 0:
            continue
        row = conversion.row(action_id)
        for i, col in enumerate(columns):
            coeff = row.get(col)
            if coeff is not None:
                totals[i] = totals[i] + as_rat(coeff) * count
    return tuple(totals)


def _check_known(doings: Doings, known_actions: Collection[str]) -> None:
    for action_id in doings.counts:
        if action_id not in known_actions:
            raise IndexMismatchError(f"doings references unknown action {action_id!r}")


def validate_doings(doings: Doings, city: CityModel) -> tuple[Diagnostic, ...]:
    """Shape checks only; budget and flow feasibility live in the solver."""
    out: list[Diagnostic] = []
    known = set(city.action_ids())
    binary = {a.activity_id for a in city.activities if a.kind is ActionKind.BINARY}
    for action_id, count in sorted(doings.counts.items()):
        path = f"doings.{action_id}"
        if action_id not in known:
            out.append(Diagnostic("error", path, "unknown action"))
            continue
        if not isinstance(count, int) or isinstance(count, bool):
            out.append(Diagnostic("error", path, "count must be an integer"))
            continue
        if count < 0:
            out.append(Diagnostic("error", path, "count must be non-negative"))
        elif action_id in binary and count > 1:
            out.append(Diagnostic("error", path, "binary activity done more than once"))
    return tuple(out)


def validate_model(
    city: CityModel,
    commons: CommonsState,
    citizens: Sequence[CitizenState],
    dimensions: Sequence[str],
) -> tuple[Diagnostic, ...]:
    """Structural consistency diagnostics, errors before warnings."""
    errors: list[Diagnostic] = []
    warnings: list[Diagnostic] = []

    def err(path: str, message: str) -> None:
        errors.append(Diagnostic("error", path, message))

    def warn(path: str, message: str) -> None:
        warnings.append(Diagnostic("warning", path, message))

    if not dimensions:
        err("welfare_dimensions", "at least one welfare dimension is required")
    _check_unique((d for d in dimensions), "welfare_dimensions", err)

    vertex_ids = set()
    for i, v in enumerate(city.vertices):
        if v.vertex_id in vertex_ids:
            err(f"city.vertices[{i}]", f"duplicate vertex id {v.vertex_id!r}")
        vertex_ids.add(v.vertex_id)

    action_ids: set[str] = set()
    for i, e in enumerate(city.edges):
        path = f"city.edges[{i}]"
        if e.edge_id in action_ids:
            err(path, f"duplicate action id {e.edge_id!r}")
        action_ids.add(e.edge_id)
        for endpoint in (e.source, e.target):
            if endpoint not in vertex_ids:
                err(path, f"unknown vertex {endpoint!r}")
        if e.source == e.target:
            warn(path, "self-loop edge")
    for i, a in enumerate(city.activities):
        path = f"city.activities[{i}]"
        if a.activity_id in action_ids:
            err(path, f"duplicate action id {a.activity_id!r}")
        action_ids.add(a.activity_id)
        if a.vertex not in vertex_ids:
            err(path, f"unknown vertex {a.vertex!r}")

    common_ids = set()
    for i, c in enumerate(commons.commons):
        path = f"commons[{i}]"
        if c.common_id in common_ids:
            err(path, f"duplicate common id {c.common_id!r}")
        common_ids.add(c.common_id)
        if as_rat(c.capacity) < 0:
            err(path, "capacity must be non-negative")
        if as_rat(c.delta) < 0:
            err(path, "delta must be non-negative")
        elif as_rat(c.delta) > as_rat(c.capacity):
            err(path, "delta exceeds capacity")
        if c.kind is CommonKind.UTILISED and as_rat(c.capacity) not in (0, 1):
            warn(path, "utilised common capacity is usually 0 or 1")

    citizen_ids = set()
    for i, cz in enumerate(citizens):
        path = f"citizens[{i}]"
        if cz.citizen_id in citizen_ids:
            err(path, f"duplicate citizen id {cz.citizen_id!r}")
        citizen_ids.add(cz.citizen_id)
        if cz.home_vertex not in vertex_ids:
            err(path, f"unknown home vertex {cz.home_vertex!r}")
        for action_id in cz.forbidden_actions:
            if action_id not in action_ids:
                err(f"{path}.forbidden_actions", f"unknown action {action_id!r}")

        resource_ids = set()
        for j, r in enumerate(cz.resources.entries):
            rpath = f"{path}.resources[{j}]"
            if r.resource_id in resource_ids:
                err(rpath, f"duplicate resource id {r.resource_id!r}")
            resource_ids.add(r.resource_id)
            if r.resource_id in common_ids:
                err(rpath, f"resource id {r.resource_id!r} collides with a common")
            if as_rat(r.quantity) < 0:
                warn(rpath, "negative resource budget")

        columns = resource_ids | common_ids
        for action_id, row in sorted(cz.conversion.rows.items()):
            rpath = f"{path}.conversion.{action_id}"
            if action_id not in action_ids:
                err(rpath, "row for unknown action")
            for col in sorted(row):
                if col not in columns:
                    err(f"{rpath}.{col}", "unknown resource or common column")
        for action_id, row in sorted(cz.transformation.rows.items()):
            rpath = f"{path}.transformation.{action_id}"
            if action_id not in action_ids:
                err(rpath, "row for unknown action")
            for col in sorted(row):
                if col not in set(dimensions):
                    err(f"{rpath}.{col}", "unknown welfare dimension")

    return tuple(errors) + tuple(warnings)


def _check_unique(items: Iterable[str], path: str, err) -> None:
    seen = set()
    for item in items:
        if item in seen:
            err(path, f"duplicate id {item!r}")
        seen.add(item)


def sort_points_canonical(values: Iterable[tuple[Rat, ...]]) -> list[tuple[Rat, ...]]:
    """Decreasing lexicographic order; ties impossible after dedup."""
    return sorted(values, reverse=True)


def integral_counts(doings: Doings) -> bool:
    return all(isinstance(n, int) and not isinstance(n, bool) for n in doings.counts.values())


__all__ = [
    "ActionKind",
    "Activity",
    "BeingsPoint",
    "CitizenState",
    "CityModel",
    "CommonKind",
    "CommonSpec",
    "CommonsState",
    "ConversionMatrix",
    "Diagnostic",
    "Doings",
    "Edge",
    "FrontierPoint",
    "IndexMismatchError",
    "ModelError",
    "ResourceQuantity",
    "ResourceVector",
    "TransformationMatrix",
    "TransportMode",
    "Vertex",
    "WelfareRepresentation",
    "beings_of",
    "consumption_of",
    "integral_counts",
    "sort_points_canonical",
    "validate_doings",
    "validate_model",
]
