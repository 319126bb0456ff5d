"""Exact multi-objective integer solver.

Two frontier methods with identical output contracts:

- "eps": branch-and-bound plus epsilon-constraint enumeration. Objectives
  are pre-scaled to integers, so stepping the constrained objective by 1
  between slices loses no non-dominated point.
- "exhaustive": full enumeration of the variable box, used as the oracle
  in tests and for small instances.

Both return points in decreasing lexicographic order with the
lexicographically smallest optimal witness per point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .ilp import IlpInstance, VarKind
from .model import BeingsPoint, Doings, FrontierPoint, WelfareRepresentation
from .rationals import (
    Rat,
    ZERO,
    as_rat,
    common_denominator,
    make_rat,
    rat_ceil,
    rat_floor,
)
from .simplex import LpStatus, solve_lp


class SolverError(Exception):
    pass


class TooManyObjectives(SolverError):
    """The eps method only handles one or two objectives."""


class SearchSpaceTooLarge(SolverError):
    """The exhaustive method refuses boxes above the configured limit."""


class NodeLimitExceeded(SolverError):
    """Branch-and-bound ran out of nodes; carries the best known partial."""

    def __init__(
        self,
        message: str,
        incumbent: "SolveResult | None" = None,
        partial_points: tuple[FrontierPoint, ...] = (),
    ):
        super().__init__(message)
        self.incumbent = incumbent
        self.partial_points = partial_points


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    value: Rat | None = None
    assignment: Doings | None = None
    nodes: int = 0


@dataclass(frozen=True)
class FrontierOptions:
    """method: 'eps' or 'exhaustive'. node_limit caps branch-and-bound
    nodes per solve. dedupe=False skips alternates counting in the
    exhaustive method (identical points always merge regardless)."""

    method: str = "eps"
    node_limit: int | None = None
    search_space_limit: int = 20_000_000
    dedupe: bool = True


def filter_nondominated(
    points: Iterable[Sequence[Rat | int]],
) -> list[tuple[Rat, ...]]:
    """Deduplicated maximal points, in decreasing lexicographic order."""
    unique = {tuple(as_rat(v) for v in p) for p in points}
    kept = [
        p
        for p in unique
        if not any(q != p and all(a >= b for a, b in zip(q, p)) for q in unique)
    ]
    return sorted(kept, reverse=True)


def dominates_values(a: Sequence[Rat], b: Sequence[Rat]) -> bool:
    """Weak componentwise dominance, strict somewhere."""
    return all(x >= y for x, y in zip(a, b)) and tuple(a) != tuple(b)


# ---------------------------------------------------------------------------
# Preprocessing: fold singleton rows into bounds, scale objectives to ints.


@dataclass
class _Program:
    names: tuple[str, ...]
    lower: list[int]
    upper: list[int]
    rows: list[tuple[dict[int, Rat], str, Rat]]
    obj_int: list[dict[int, int]]  # integer-scaled objective coefficients
    obj_scale: list[int]  # beings value = int value / scale
    feasible_box: bool = True


def _prepare(instance: IlpInstance) -> _Program:
    n = len(instance.variables)
    lower = [v.lower for v in instance.variables]
    upper = [v.upper for v in instance.variables]
    rows: list[tuple[dict[int, Rat], str, Rat]] = []
    feasible = True

    for row in instance.constraints:
        coeffs = {i: as_rat(c) for i, c in row.coeffs if c != 0}
        rhs = as_rat(row.rhs)
        if not coeffs:
            ok = (ZERO <= rhs) if row.sense == "<=" else (ZERO == rhs)
            if not ok:
                feasible = False
            continue
        if len(coeffs) == 1:
            (j, a), = coeffs.items()
            if row.sense == "<=":
                if a > 0:
                    upper[j] = min(upper[j], rat_floor(rhs / a))
                else:
                    lower[j] = max(lower[j], rat_ceil(rhs / a))
            else:
                exact = rhs / a
                if exact.denominator != 1:
                    feasible = False
                else:
                    v = int(exact.numerator)
                    lower[j] = max(lower[j], v)
                    upper[j] = min(upper[j], v)
            continue
        rows.append((coeffs, row.sense, rhs))

    if any(lo > up for lo, up in zip(lower, upper)):
        feasible = False

    obj_int: list[dict[int, int]] = []
    obj_scale: list[int] = []
    for obj in instance.objectives:
        coeffs = {i: as_rat(c) for i, c in obj.coeffs if c != 0}
        scale = common_denominator(coeffs.values())
        obj_int.append({i: int(c * scale) for i, c in coeffs.items()})
        obj_scale.append(scale)

    return _Program(
        instance.names(), lower, upper, rows, obj_int, obj_scale, feasible
    )


# ---------------------------------------------------------------------------
# Branch and bound.


@dataclass
class _Budget:
    """Node counter shared across the solves of one frontier run."""

    limit: int | None
    used: int = 0

    def spend(self) -> None:
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise _BudgetExhausted()


class _BudgetExhausted(Exception):
    pass


def _branch_and_bound(
    program: _Program,
    objective: dict[int, int],
    side_rows: list[tuple[dict[int, Rat], str, Rat]],
    budget: _Budget,
    root_lower: Sequence[int] | None = None,
    root_upper: Sequence[int] | None = None,
    warm: tuple[int, dict[int, int]] | None = None,
) -> tuple[int | None, dict[int, int] | None]:
    """Maximize an integer-coefficient objective. Returns (value, assignment)
    or (None, None) when infeasible. Deterministic DFS, branch up first,
    first fractional variable in declaration order. A warm (value,
    assignment) pair seeds the incumbent; improvements must be strict."""
    if not program.feasible_box:
        return None, None
    rows = program.rows + side_rows
    best_value: int | None = None
    best_assign: dict[int, int] | None = None
    if warm is not None:
        best_value, best_assign = warm
    n = len(program.names)
    obj = {j: as_rat(c) for j, c in objective.items()}

    stack: list[tuple[tuple[int, ...], tuple[int, ...]]] = [
        (
            tuple(program.lower if root_lower is None else root_lower),
            tuple(program.upper if root_upper is None else root_upper),
        )
    ]
    try:
        while stack:
            lo, up = stack.pop()
            if any(a > b for a, b in zip(lo, up)):
                continue
            budget.spend()
            result = solve_lp(lo, up, rows, obj)
            if result.status is not LpStatus.OPTIMAL:
                continue
            bound = rat_floor(result.value)
            if best_value is not None and bound <= best_value:
                continue
            assert result.values is not None
            # Branch on the fractional variable with the smallest domain
            # (binaries before wide integer ranges), ties by declaration
            # order. Domain size only guides the search; results do not
            # depend on it because witnesses are canonicalized separately.
            frac_var = -1
            frac_domain = 0
            for j in range(n):
                if as_rat(result.values[j]).denominator != 1:
                    domain = up[j] - lo[j]
                    if frac_var < 0 or domain < frac_domain:
                        frac_var = j
                        frac_domain = domain
            if frac_var < 0:
                value = int(result.value)
                if best_value is None or value > best_value:
                    best_value = value
                    best_assign = {
                        j: int(result.values[j]) for j in range(n)
                    }
                continue
            split = result.values[frac_var]
            down_up = list(up)
            down_up[frac_var] = rat_floor(split)
            up_lo = list(lo)
            up_lo[frac_var] = rat_ceil(split)
            stack.append((lo, tuple(down_up)))  # explored second
            stack.append((tuple(up_lo), up))  # branch up first
    except _BudgetExhausted:
        incumbent = None
        if best_value is not None and best_assign is not None:
            incumbent = SolveResult(
                SolveStatus.OPTIMAL,
                make_rat(best_value),
                _to_doings(program, best_assign),
                budget.used,
            )
        raise NodeLimitExceeded(
            f"node limit {budget.limit} exhausted", incumbent=incumbent
        )
    return best_value, best_assign


def _to_doings(program: _Program, assignment: dict[int, int]) -> Doings:
    return Doings(
        {program.names[j]: v for j, v in sorted(assignment.items()) if v != 0}
    )


def _lexmin_witness(
    program: _Program,
    side_rows: list[tuple[dict[int, Rat], str, Rat]],
    budget: _Budget,
    hint: dict[int, int] | None = None,
) -> dict[int, int]:
    """Lexicographically smallest integer point satisfying program+side rows.

    Minimizes each variable in declaration order by branch-and-bound and
    pins it before moving on; each step's optimum extends to a full
    integer point, so the result is the lexmin point. The assignment
    found at each step warm-starts the next, and a variable already
    sitting on its lower bound is pinned without a solve. The caller
    guarantees at least one integer point exists; `hint` may be any
    feasible point.
    """
    n = len(program.names)
    lo = list(program.lower)
    up = list(program.upper)
    current = dict(hint) if hint else None
    for j in range(n):
        if current is not None and current[j] == lo[j]:
            up[j] = lo[j]
            continue
        warm = None
        if current is not None:
            warm = (-current[j], current)
        value, assign = _branch_and_bound(
            program,
            {j: -1},
            side_rows,
            budget,
            root_lower=lo,
            root_upper=up,
            warm=warm,
        )
        if value is None or assign is None:
            raise SolverError("witness extraction failed on a feasible point")
        lo[j] = up[j] = -value
        current = assign
    assert current is not None
    return current


def solve_single(
    instance: IlpInstance,
    objective_index: int = 0,
    options: FrontierOptions | None = None,
) -> SolveResult:
    """Maximize one welfare dimension; witness is the lexmin optimum."""
    options = options or FrontierOptions()
    program = _prepare(instance)
    if not 0 <= objective_index < len(program.obj_int):
        raise IndexError(f"no objective {objective_index}")
    budget = _Budget(options.node_limit)
    obj = program.obj_int[objective_index]
    value, assign = _branch_and_bound(program, obj, [], budget)
    if value is None:
        return SolveResult(SolveStatus.INFEASIBLE, nodes=budget.used)
    pin: list[tuple[dict[int, Rat], str, Rat]] = [
        ({j: as_rat(c) for j, c in obj.items()}, "==", make_rat(value))
    ]
    try:
        witness = _lexmin_witness(program, pin, budget, hint=assign)
    except _BudgetExhausted:
        raise NodeLimitExceeded(
            f"node limit {options.node_limit} exhausted during witness search",
            incumbent=SolveResult(
                SolveStatus.OPTIMAL,
                make_rat(value, program.obj_scale[objective_index]),
                _to_doings(program, assign or {}),
                budget.used,
            ),
        )
    return SolveResult(
        SolveStatus.OPTIMAL,
        make_rat(value, program.obj_scale[objective_index]),
        _to_doings(program, witness),
        budget.used,
    )


def pareto_frontier(
    instance: IlpInstance, options: FrontierOptions | None = None
) -> WelfareRepresentation:
    """Non-dominated beings points with lexmin witnesses."""
    options = options or FrontierOptions()
    dimensions = tuple(o.dimension_id for o in instance.objectives)
    if options.method == "exhaustive":
        return exhaustive_frontier(instance, options)
    if options.method != "eps":
        raise ValueError(f"unknown method {options.method!r}")
    if len(dimensions) == 1:
        result = solve_single(instance, 0, options)
        if result.status is SolveStatus.INFEASIBLE:
            return WelfareRepresentation(dimensions, ())
        return WelfareRepresentation(
            dimensions,
            (FrontierPoint(BeingsPoint((result.value,)), result.assignment),),
        )
    if len(dimensions) != 2:
        raise TooManyObjectives(
            f"eps method supports 1 or 2 objectives, got {len(dimensions)}"
        )

    program = _prepare(instance)
    budget = _Budget(options.node_limit)
    obj1, obj2 = program.obj_int
    scale1, scale2 = program.obj_scale
    obj1_rat = {j: as_rat(c) for j, c in obj1.items()}
    obj2_rat = {j: as_rat(c) for j, c in obj2.items()}

    points: list[FrontierPoint] = []
    floor2: int | None = None  # scaled strict lower bound on the second dim
    try:
        while True:
            side: list[tuple[dict[int, Rat], str, Rat]] = []
            if floor2 is not None:
                side.append(
                    ({j: -c for j, c in obj2_rat.items()}, "<=", make_rat(-floor2))
                )
            z1, assign1 = _branch_and_bound(program, obj1, side, budget)
            if z1 is None:
                break
            assert assign1 is not None
            lock1 = side + [(obj1_rat, "==", make_rat(z1))]
            warm2 = sum(c * assign1[j] for j, c in obj2.items())
            z2, assign2 = _branch_and_bound(
                program, obj2, lock1, budget, warm=(warm2, assign1)
            )
            assert z2 is not None and assign2 is not None
            lock_both = lock1 + [(obj2_rat, "==", make_rat(z2))]
            witness = _lexmin_witness(program, lock_both, budget, hint=assign2)
            beings = BeingsPoint(
                (make_rat(z1, scale1), make_rat(z2, scale2))
            )
            points.append(FrontierPoint(beings, _to_doings(program, witness)))
            floor2 = z2 + 1
    except _BudgetExhausted:
        raise NodeLimitExceeded(
            f"node limit {options.node_limit} exhausted after "
            f"{len(points)} frontier points",
            partial_points=tuple(points),
        )
    except NodeLimitExceeded as exc:
        raise NodeLimitExceeded(
            str(exc), incumbent=exc.incumbent, partial_points=tuple(points)
        )

    ordered = sorted(points, key=lambda p: p.beings.values, reverse=True)
    return WelfareRepresentation(dimensions, tuple(ordered))


# ---------------------------------------------------------------------------
# Exhaustive oracle.


def exhaustive_frontier(
    instance: IlpInstance, options: FrontierOptions | None = None
) -> WelfareRepresentation:
    """Enumerate the whole variable box and keep the non-dominated image."""
    options = options or FrontierOptions()
    dimensions = tuple(o.dimension_id for o in instance.objectives)
    program, found = _enumerate_images(instance, options)
    if not found:
        return WelfareRepresentation(dimensions, ())

    unscaled = {
        tuple(
            make_rat(v, s) for v, s in zip(key, program.obj_scale)
        ): key
        for key in found
    }
    frontier = filter_nondominated(unscaled.keys())

    points = []
    for values in frontier:
        witness_index, alternates = found[unscaled[values]]
        points.append(
            FrontierPoint(
                BeingsPoint(values),
                _decode_witness(program, witness_index),
                alternates if options.dedupe else None,
            )
        )
    return WelfareRepresentation(dimensions, tuple(points))


def enumerate_beings(
    instance: IlpInstance, options: FrontierOptions | None = None
) -> tuple[FrontierPoint, ...]:
    """Every distinct feasible beings point, dominated ones included.

    Sorted in decreasing lexicographic order; each point carries its
    lexmin witness and the exact number of assignments mapping to it.
    """
    options = options or FrontierOptions()
    program, found = _enumerate_images(instance, options)
    unscaled = {
        tuple(make_rat(v, s) for v, s in zip(key, program.obj_scale)): key
        for key in found
    }
    points = []
    for values in sorted(unscaled, reverse=True):
        witness_index, alternates = found[unscaled[values]]
        points.append(
            FrontierPoint(
                BeingsPoint(values),
                _decode_witness(program, witness_index),
                alternates,
            )
        )
    return tuple(points)


def _decode_witness(program: _Program, witness_index: int) -> Doings:
    sizes = [up - lo + 1 for lo, up in zip(program.lower, program.upper)]
    assignment = {}
    remaining = witness_index
    for j in range(len(sizes) - 1, -1, -1):
        assignment[j] = program.lower[j] + remaining % sizes[j]
        remaining //= sizes[j]
    return _to_doings(program, assignment)


def _enumerate_images(
    instance: IlpInstance, options: FrontierOptions
) -> tuple[_Program, dict[tuple[int, ...], list[int]]]:
    """Scan the whole bound box; map each scaled beings image to its
    smallest witness index and multiplicity.

    Assignments are encoded as mixed-radix integers (first variable most
    significant) so the smallest surviving index per beings point is the
    lexmin witness.
    """
    program = _prepare(instance)
    if not program.feasible_box:
        return program, {}

    n = len(program.names)
    lows = np.array(program.lower, dtype=np.int64)
    sizes = [up - lo + 1 for lo, up in zip(program.lower, program.upper)]
    space = math.prod(sizes)
    if space > options.search_space_limit:
        raise SearchSpaceTooLarge(
            f"{space} assignments exceed the limit {options.search_space_limit}"
        )

    # Integer-scale each row so feasibility checks stay exact in int64.
    int_rows: list[tuple[np.ndarray, str, int]] = []
    for coeffs, sense, rhs in program.rows:
        scale = common_denominator(list(coeffs.values()) + [rhs])
        line = np.zeros(n, dtype=np.int64)
        for j, c in coeffs.items():
            line[j] = int(as_rat(c) * scale)
        int_rows.append((line, sense, int(as_rat(rhs) * scale)))
    obj_lines = []
    for obj in program.obj_int:
        line = np.zeros(n, dtype=np.int64)
        for j, c in obj.items():
            line[j] = c
        obj_lines.append(line)
    obj_matrix = (
        np.stack(obj_lines) if obj_lines else np.zeros((0, n), dtype=np.int64)
    )

    _check_int64_headroom(program, int_rows, sizes)

    strides = np.ones(n, dtype=np.int64)
    for j in range(n - 2, -1, -1):
        strides[j] = strides[j + 1] * sizes[j + 1]
    radix = np.array(sizes, dtype=np.int64)

    # beings tuple (scaled ints) -> [witness linear index, alternates]
    found: dict[tuple[int, ...], list[int]] = {}
    block = 262_144
    for start in range(0, space, block):
        stop = min(start + block, space)
        idx = np.arange(start, stop, dtype=np.int64)
        digits = (idx[None, :] // strides[:, None]) % radix[:, None]
        values = digits + lows[:, None]
        mask = np.ones(stop - start, dtype=bool)
        for line, sense, rhs in int_rows:
            lhs = line @ values
            mask &= (lhs <= rhs) if sense == "<=" else (lhs == rhs)
        if not mask.any():
            continue
        kept = values[:, mask]
        kept_idx = idx[mask]
        images = obj_matrix @ kept
        for col in range(images.shape[1]):
            key = tuple(int(x) for x in images[:, col])
            slot = found.get(key)
            if slot is None:
                found[key] = [int(kept_idx[col]), 1]
            else:
                slot[1] += 1
                if kept_idx[col] < slot[0]:
                    slot[0] = int(kept_idx[col])
    return program, found


def _check_int64_headroom(
    program: _Program,
    int_rows: list[tuple[np.ndarray, str, int]],
    sizes: list[int],
) -> None:
    top = max((abs(up) + abs(lo) for lo, up in zip(program.lower, program.upper)), default=1)
    worst = 0
    for line, _, _ in int_rows:
        worst = max(worst, int(np.abs(line).sum()))
    for obj in program.obj_int:
        worst = max(worst, sum(abs(c) for c in obj.values()))
    if worst * top >= 2**62:
        raise SolverError("coefficients too large for exact int64 enumeration")


__all__ = [
    "FrontierOptions",
    "NodeLimitExceeded",
    "SearchSpaceTooLarge",
    "SolveResult",
    "SolveStatus",
    "SolverError",
    "TooManyObjectives",
    "dominates_values",
    "enumerate_beings",
    "exhaustive_frontier",
    "filter_nondominated",
    "pareto_frontier",
    "solve_single",
]
