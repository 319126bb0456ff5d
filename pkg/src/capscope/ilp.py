"""Compile a citizen's choice problem into an exact integer linear program.

Variables are action counts (edge traversals and activity repetitions).
Constraints: resource budgets, consumable commons budgets, utilised
commons availability switches, flow conservation, and activity gating
(activities away from home require an inbound trip). Objectives are the
welfare dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .model import (
    ActionKind,
    CitizenState,
    CityModel,
    CommonKind,
    CommonsState,
)
from .rationals import Rat, ZERO, as_rat, format_rational, rat_floor


class UnboundedVariableError(Exception):
    """An action has no finite usage bound derivable from the budgets."""


class VarKind(Enum):
    BINARY = "binary"
    INTEGER = "integer"


@dataclass(frozen=True)
class Variable:
    name: str
    kind: VarKind
    lower: int
    upper: int


@dataclass(frozen=True)
class Constraint:
    """Sparse row: sum(coeff * var) sense rhs, sense in {'<=', '=='}."""

    name: str
    coeffs: tuple[tuple[int, Rat], ...]
    sense: str
    rhs: Rat


@dataclass(frozen=True)
class Objective:
    """A welfare dimension to maximize."""

    dimension_id: str
    coeffs: tuple[tuple[int, Rat], ...]


@dataclass(frozen=True)
class IlpInstance:
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    objectives: tuple[Objective, ...]

    def index_of(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise KeyError(name)

    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)


def evaluate_terms(coeffs: Sequence[tuple[int, Rat]], values: Sequence[Rat]) -> Rat:
    total = ZERO
    for idx, coeff in coeffs:
        total = total + coeff * values[idx]
    return total


def violations(instance: IlpInstance, assignment: Mapping[str, int]) -> tuple[str, ...]:
    """Names of bounds and rows the assignment breaks. Empty means feasible."""
    values = [as_rat(assignment.get(v.name, 0)) for v in instance.variables]
    out: list[str] = []
    for v, x in zip(instance.variables, values):
        if not (v.lower <= x <= v.upper):
            out.append(f"bound:{v.name}")
    for row in instance.constraints:
        lhs = evaluate_terms(row.coeffs, values)
        ok = lhs <= row.rhs if row.sense == "<=" else lhs == row.rhs
        if not ok:
            out.append(f"row:{row.name}")
    return tuple(out)


def objective_values(instance: IlpInstance, assignment: Mapping[str, int]) -> tuple[Rat, ...]:
    values = [as_rat(assignment.get(v.name, 0)) for v in instance.variables]
    return tuple(evaluate_terms(obj.coeffs, values) for obj in instance.objectives)


def upper_bounds(
    citizen: CitizenState, city: CityModel, commons: CommonsState
) -> dict[str, int]:
    """Finite per-action usage caps implied by non-earnable budgets.

    A resource is earnable when some action has a negative conversion
    entry for it; earnable resources cannot cap usage. Consumable commons
    act as additional budgets. Binary activities are capped at 1 and
    forbidden actions at 0.
    """
    action_ids = city.action_ids()
    forbidden = frozenset(citizen.forbidden_actions)
    resource_ids = citizen.resources.ids()
    earnable = {
        r
        for r in resource_ids
        if any(citizen.conversion.entry(a, r) < 0 for a in action_ids)
    }
    budgets: list[tuple[str, Rat]] = [
        (r, citizen.resources.quantity(r)) for r in resource_ids if r not in earnable
    ]
    budgets += [
        (c.common_id, c.effective_capacity())
        for c in commons.commons
        if c.kind is CommonKind.CONSUMABLE
    ]

    binary = {a.activity_id for a in city.activities if a.kind is ActionKind.BINARY}
    bounds: dict[str, int] = {}
    for action_id in action_ids:
        if action_id in forbidden:
            bounds[action_id] = 0
            continue
        candidates: list[int] = []
        for column, budget in budgets:
            cost = citizen.conversion.entry(action_id, column)
            if cost > 0:
                candidates.append(max(0, rat_floor(as_rat(budget) / cost)))
        if action_id in binary:
            bounds[action_id] = min([1] + candidates)
        elif candidates:
            bounds[action_id] = min(candidates)
        else:
            raise UnboundedVariableError(
                f"action {action_id!r} has no positive cost on any finite budget"
            )
    return bounds


def build_ilp(
    citizen: CitizenState,
    city: CityModel,
    commons: CommonsState,
) -> IlpInstance:
    """Compile the model for one citizen (apply scenario overrides beforehand)."""
    bounds = upper_bounds(citizen, city, commons)
    action_ids = city.action_ids()
    binary = {a.activity_id for a in city.activities if a.kind is ActionKind.BINARY}

    variables: list[Variable] = []
    index: dict[str, int] = {}
    for action_id in action_ids:
        kind = VarKind.BINARY if action_id in binary else VarKind.INTEGER
        index[action_id] = len(variables)
        variables.append(Variable(action_id, kind, 0, bounds[action_id]))

    constraints: list[Constraint] = []

    def add_row(name: str, coeffs: dict[int, Rat], sense: str, rhs: Rat) -> None:
        packed = tuple(sorted((i, c) for i, c in coeffs.items() if c != 0))
        if not packed:
            # Keep only constant rows that are unsatisfiable.
            satisfied = (ZERO <= rhs) if sense == "<=" else (ZERO == rhs)
            if satisfied:
                return
        constraints.append(Constraint(name, packed, sense, as_rat(rhs)))

    common_ids = commons.ids()
    for resource in citizen.resources.entries:
        coeffs = {
            index[a]: citizen.conversion.entry(a, resource.resource_id)
            for a in action_ids
            if citizen.conversion.entry(a, resource.resource_id) != 0
        }
        add_row(f"budget:{resource.resource_id}", coeffs, "<=", as_rat(resource.quantity))

    for common in commons.commons:
        if common.kind is not CommonKind.CONSUMABLE:
            continue
        coeffs = {
            index[a]: citizen.conversion.entry(a, common.common_id)
            for a in action_ids
            if citizen.conversion.entry(a, common.common_id) != 0
        }
        add_row(
            f"budget:{common.common_id}", coeffs, "<=", common.effective_capacity()
        )

    for common in commons.commons:
        if common.kind is not CommonKind.UTILISED:
            continue
        cap = common.effective_capacity()
        for a in action_ids:
            if citizen.conversion.entry(a, common.common_id) > 0:
                usage_cap = as_rat(variables[index[a]].upper) * cap
                add_row(
                    f"common:{common.common_id}:{a}",
                    {index[a]: as_rat(1)},
                    "<=",
                    usage_cap,
                )

    inbound: dict[str, list[int]] = {v.vertex_id: [] for v in city.vertices}
    outbound: dict[str, list[int]] = {v.vertex_id: [] for v in city.vertices}
    for e in city.edges:
        outbound[e.source].append(index[e.edge_id])
        inbound[e.target].append(index[e.edge_id])

    for v in city.vertices:
        coeffs: dict[int, Rat] = {}
        for i in inbound[v.vertex_id]:
            coeffs[i] = coeffs.get(i, ZERO) + 1
        for i in outbound[v.vertex_id]:
            coeffs[i] = coeffs.get(i, ZERO) - 1
        add_row(f"flow:{v.vertex_id}", coeffs, "==", ZERO)

    # Activities away from home need at least one inbound trip; the big-M
    # is the total activity capacity at the vertex, so one arrival opens
    # every activity slot there. The home vertex is never gated. At
    # vertices with several activities the aggregate row is weak in the
    # relaxation, so per-activity rows (same integer solutions) are added
    # to keep branch-and-bound trees small.
    for v in city.vertices:
        if v.vertex_id == citizen.home_vertex:
            continue
        here = [a for a in city.activities if a.vertex == v.vertex_id]
        if not here:
            continue
        big_m = sum(variables[index[a.activity_id]].upper for a in here)
        coeffs = {index[a.activity_id]: as_rat(1) for a in here}
        for i in inbound[v.vertex_id]:
            coeffs[i] = coeffs.get(i, ZERO) - big_m
        add_row(f"gate:{v.vertex_id}", coeffs, "<=", ZERO)
        if len(here) > 1:
            for a in here:
                bound = variables[index[a.activity_id]].upper
                cut = {index[a.activity_id]: as_rat(1)}
                for i in inbound[v.vertex_id]:
                    cut[i] = cut.get(i, ZERO) - bound
                add_row(f"gate:{v.vertex_id}:{a.activity_id}", cut, "<=", ZERO)

    dims: list[str] = []
    for row in citizen.transformation.rows.values():
        for dim in row:
            if dim not in dims:
                dims.append(dim)
    objectives = tuple(
        Objective(
            dim,
            tuple(
                (index[a], citizen.transformation.entry(a, dim))
                for a in action_ids
                if citizen.transformation.entry(a, dim) != 0
            ),
        )
        for dim in dims
    )

    return IlpInstance(tuple(variables), tuple(constraints), objectives)


def build_ilp_for_dimensions(
    citizen: CitizenState,
    city: CityModel,
    commons: CommonsState,
    dimensions: Sequence[str],
) -> IlpInstance:
    """build_ilp with the objective list pinned to a document's dimensions."""
    instance = build_ilp(citizen, city, commons)
    by_dim = {o.dimension_id: o for o in instance.objectives}
    objectives = tuple(
        by_dim.get(dim, Objective(dim, ())) for dim in dimensions
    )
    return IlpInstance(instance.variables, instance.constraints, objectives)


def _format_terms(coeffs: tuple[tuple[int, Rat], ...], names: tuple[str, ...]) -> str:
    if not coeffs:
        return "0"
    parts: list[str] = []
    for idx, coeff in coeffs:
        c = format_rational(coeff)
        term = names[idx] if c == "1" else f"{c}*{names[idx]}"
        if c.startswith("-"):
            term = f"-{names[idx]}" if c == "-1" else f"{c}*{names[idx]}"
        parts.append(term)
    text = parts[0]
    for part in parts[1:]:
        text += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return text


def dump_instance(instance: IlpInstance) -> str:
    """Canonical line-oriented text form, stable for golden-file tests."""
    names = instance.names()
    lines: list[str] = []
    for v in instance.variables:
        lines.append(f"var {v.name} {v.kind.value} [{v.lower}, {v.upper}]")
    for obj in instance.objectives:
        lines.append(f"max {obj.dimension_id}: {_format_terms(obj.coeffs, names)}")
    for row in instance.constraints:
        op = "<=" if row.sense == "<=" else "="
        lines.append(
            f"row {row.name}: {_format_terms(row.coeffs, names)} {op} "
            f"{format_rational(row.rhs)}"
        )
    return "\n".join(lines) + "\n"


__all__ = [
    "Constraint",
    "IlpInstance",
    "Objective",
    "UnboundedVariableError",
    "VarKind",
    "Variable",
    "build_ilp",
    "build_ilp_for_dimensions",
    "dump_instance",
    "evaluate_terms",
    "objective_values",
    "upper_bounds",
    "violations",
]
