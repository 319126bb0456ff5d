"""Exact LP solver: bounded-variable two-phase simplex over rationals.

No floating point anywhere. Bland's rule guarantees termination, and
results are deterministic for a fixed input ordering, which the integer
solver and the frontier enumeration rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .rationals import Rat, ZERO, as_rat


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    value: Rat | None = None
    values: tuple[Rat, ...] | None = None  # structural variables only


def solve_lp(
    lower: Sequence[Rat],
    upper: Sequence[Rat | None],
    rows: Sequence[tuple[Mapping[int, Rat], str, Rat]],
    objective: Mapping[int, Rat],
) -> LpResult:
    """Maximize objective subject to rows and bounds.

    lower[j] must be finite; upper[j] may be None for +infinity. Each row
    is (sparse coefficients over structural indices, '<=' or '==', rhs).
    """
    n = len(lower)
    m = len(rows)
    lo: list[Rat] = [as_rat(x) for x in lower]
    up: list[Rat | None] = [None if x is None else as_rat(x) for x in upper]
    for j in range(n):
        if up[j] is not None and lo[j] > up[j]:
            return LpResult(LpStatus.INFEASIBLE)

    # Columns: structural, then one slack per row, then artificials.
    tableau: list[list[Rat]] = []
    rhs: list[Rat] = []
    for coeffs, sense, b in rows:
        line = [ZERO] * (n + m)
        for j, c in coeffs.items():
            line[j] = line[j] + as_rat(c)
        tableau.append(line)
        rhs.append(as_rat(b))
    for i, (_, sense, _) in enumerate(rows):
        tableau[i][n + i] = as_rat(1)
        lo.append(ZERO)
        up.append(ZERO if sense == "==" else None)

    # Nonbasic variables sit at a bound; start everything at its lower.
    at_upper = [False] * (n + m)
    val: list[Rat] = list(lo[: n + m])

    basis: list[int] = []
    beta: list[Rat] = []
    artificial_start = n + m
    for i in range(m):
        residual = rhs[i]
        for j in range(n):
            if tableau[i][j] != 0:
                residual = residual - tableau[i][j] * val[j]
        slack = n + i
        slack_up = up[slack]
        if ZERO <= residual and (slack_up is None or residual <= slack_up):
            basis.append(slack)
            beta.append(residual)
            continue
        # Slack cannot absorb the residual: park it at 0 and cover the
        # gap with an artificial of the right sign.
        sign = 1 if residual > 0 else -1
        art = len(lo)
        for line in tableau:
            line.append(ZERO)
        tableau[i][art] = as_rat(sign)
        lo.append(ZERO)
        up.append(None)
        at_upper.append(False)
        val.append(ZERO)
        if sign < 0:
            tableau[i] = [-x for x in tableau[i]]
            rhs[i] = -rhs[i]
        basis.append(art)
        beta.append(residual if sign > 0 else -residual)

    total = len(lo)
    at_upper += [False] * (total - len(at_upper))
    while len(val) < total:
        val.append(ZERO)

    state = _State(tableau, basis, beta, lo, up, at_upper, val, total)

    if total > artificial_start:
        phase1 = {j: as_rat(-1) for j in range(artificial_start, total)}
        status = _optimize(state, phase1)
        if status is LpStatus.UNBOUNDED:  # cannot happen: objective <= 0
            return LpResult(LpStatus.INFEASIBLE)
        if _objective_value(state, phase1) != 0:
            return LpResult(LpStatus.INFEASIBLE)
        # Pin artificials at zero for phase 2.
        for j in range(artificial_start, total):
            state.up[j] = ZERO

    obj = {j: as_rat(c) for j, c in objective.items() if j < n and c != 0}
    status = _optimize(state, obj)
    if status is LpStatus.UNBOUNDED:
        return LpResult(LpStatus.UNBOUNDED)
    solution = _current_values(state)[:n]
    value = ZERO
    for j, c in obj.items():
        value = value + c * solution[j]
    return LpResult(LpStatus.OPTIMAL, value, tuple(solution))


class _State:
    __slots__ = ("tableau", "basis", "beta", "lo", "up", "at_upper", "val", "total")

    def __init__(self, tableau, basis, beta, lo, up, at_upper, val, total):
        self.tableau = tableau
        self.basis = basis
        self.beta = beta
        self.lo = lo
        self.up = up
        self.at_upper = at_upper
        self.val = val
        self.total = total


def _current_values(state: _State) -> list[Rat]:
    values = list(state.val)
    for i, j in enumerate(state.basis):
        values[j] = state.beta[i]
    return values


def _objective_value(state: _State, objective: Mapping[int, Rat]) -> Rat:
    values = _current_values(state)
    total = ZERO
    for j, c in objective.items():
        total = total + c * values[j]
    return total


def _reduced_costs(state: _State, objective: Mapping[int, Rat]) -> list[Rat]:
    d = [ZERO] * state.total
    for j, c in objective.items():
        d[j] = c
    for i, b in enumerate(state.basis):
        cb = objective.get(b, ZERO)
        if cb != 0:
            row = state.tableau[i]
            for j in range(state.total):
                if row[j] != 0:
                    d[j] = d[j] - cb * row[j]
    return d


def _optimize(state: _State, objective: Mapping[int, Rat]) -> LpStatus:
    tableau = state.tableau
    basis = state.basis
    beta = state.beta
    lo = state.lo
    up = state.up
    at_upper = state.at_upper
    val = state.val
    m = len(basis)

    d = _reduced_costs(state, objective)
    in_basis = [False] * state.total
    for j in basis:
        in_basis[j] = True

    while True:
        # Bland: smallest improving nonbasic index.
        enter = -1
        for j in range(state.total):
            if in_basis[j]:
                continue
            if up[j] is not None and lo[j] == up[j]:
                continue
            dj = d[j]
            if dj > 0 and not at_upper[j]:
                enter = j
                break
            if dj < 0 and at_upper[j]:
                enter = j
                break
        if enter < 0:
            return LpStatus.OPTIMAL

        direction = -1 if at_upper[enter] else 1
        limit: Rat | None = None
        if up[enter] is not None:
            limit = up[enter] - lo[enter]
        leave_row = -1
        leave_to_upper = False
        for i in range(m):
            g = tableau[i][enter] * direction
            if g > 0:
                cap = (beta[i] - lo[basis[i]]) / g
                hits_upper = False
            elif g < 0:
                ub = up[basis[i]]
                if ub is None:
                    continue
                cap = (ub - beta[i]) / (-g)
                hits_upper = True
            else:
                continue
            if limit is None or cap < limit or (
                cap == limit and leave_row >= 0 and basis[i] < basis[leave_row]
            ):
                if limit is None or cap < limit:
                    leave_row = i
                    leave_to_upper = hits_upper
                    limit = cap
                else:
                    leave_row = i
                    leave_to_upper = hits_upper

        if limit is None:
            return LpStatus.UNBOUNDED

        step = limit * direction
        if leave_row < 0:
            # Bound flip: the entering variable crosses to its other bound.
            for i in range(m):
                coeff = tableau[i][enter]
                if coeff != 0:
                    beta[i] = beta[i] - coeff * step
            at_upper[enter] = not at_upper[enter]
            val[enter] = up[enter] if at_upper[enter] else lo[enter]
            continue

        new_value = val[enter] + step
        for i in range(m):
            coeff = tableau[i][enter]
            if coeff != 0 and i != leave_row:
                beta[i] = beta[i] - coeff * step
        leaving = basis[leave_row]
        at_upper[leaving] = leave_to_upper
        bound = up[leaving] if leave_to_upper else lo[leaving]
        assert bound is not None
        val[leaving] = bound
        in_basis[leaving] = False
        in_basis[enter] = True
        basis[leave_row] = enter
        beta[leave_row] = new_value

        pivot_row = tableau[leave_row]
        piv = pivot_row[enter]
        if piv != 1:
            inv = 1 / piv
            tableau[leave_row] = pivot_row = [x * inv for x in pivot_row]
        for i in range(m):
            if i == leave_row:
                continue
            f = tableau[i][enter]
            if f != 0:
                row = tableau[i]
                tableau[i] = [a - f * b for a, b in zip(row, pivot_row)]
        f = d[enter]
        if f != 0:
            for j in range(state.total):
                if pivot_row[j] != 0:
                    d[j] = d[j] - f * pivot_row[j]
    # unreachable


__all__ = ["LpResult", "LpStatus", "solve_lp"]
