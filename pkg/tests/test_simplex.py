import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capscope.rationals import ZERO, as_rat, make_rat, to_float
from capscope.simplex import LpStatus, solve_lp

scipy_linprog = pytest.importorskip("scipy.optimize").linprog


def test_simple_box_maximum():
    result = solve_lp([0, 0], [4, 5], [], {0: make_rat(2), 1: make_rat(3)})
    assert result.status is LpStatus.OPTIMAL
    assert result.value == 23
    assert result.values == (4, 5)


def test_binding_row():
    result = solve_lp(
        [0, 0],
        [10, 10],
        [({0: make_rat(1), 1: make_rat(1)}, "<=", make_rat(6))],
        {0: make_rat(1), 1: make_rat(2)},
    )
    assert result.status is LpStatus.OPTIMAL
    assert result.value == 12
    assert result.values == (0, 6)


def test_equality_rows_rank_deficient():
    rows = [
        ({0: make_rat(1), 1: make_rat(1)}, "==", make_rat(4)),
        ({0: make_rat(2), 1: make_rat(2)}, "==", make_rat(8)),
    ]
    result = solve_lp([0, 0], [10, 10], rows, {0: make_rat(1)})
    assert result.status is LpStatus.OPTIMAL
    assert result.value == 4


def test_infeasible():
    rows = [
        ({0: make_rat(1)}, "<=", make_rat(1)),
        ({0: make_rat(-1)}, "<=", make_rat(-3)),
    ]
    result = solve_lp([0], [10], rows, {0: make_rat(1)})
    assert result.status is LpStatus.INFEASIBLE


def test_unbounded():
    result = solve_lp([0], [None], [], {0: make_rat(1)})
    assert result.status is LpStatus.UNBOUNDED


def test_fractional_optimum_exact():
    rows = [({0: make_rat(3), 1: make_rat(2)}, "<=", make_rat(5))]
    result = solve_lp([0, 0], [None, None], rows, {0: make_rat(1), 1: make_rat(1)})
    assert result.status is LpStatus.OPTIMAL
    assert result.value == make_rat(5, 2)


@st.composite
def lp_problems(draw):
    n = draw(st.integers(1, 6))
    uppers = [draw(st.integers(0, 6)) for _ in range(n)]
    objective = {
        j: make_rat(draw(st.integers(-4, 4))) for j in range(n) if draw(st.booleans())
    }
    rows = []
    for _ in range(draw(st.integers(0, 5))):
        support = draw(
            st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True)
        )
        coeffs = {j: make_rat(draw(st.integers(-4, 4))) for j in sorted(support)}
        coeffs = {j: c for j, c in coeffs.items() if c != 0}
        if not coeffs:
            continue
        if draw(st.integers(0, 5)) == 0:
            rows.append((coeffs, "==", make_rat(draw(st.integers(0, 8)))))
        else:
            rows.append((coeffs, "<=", make_rat(draw(st.integers(-2, 12)))))
    return uppers, rows, objective


@given(lp_problems())
@settings(max_examples=120)
def test_against_scipy(problem):
    uppers, rows, objective = problem
    n = len(uppers)
    result = solve_lp([0] * n, uppers, rows, objective)

    c = [-to_float(objective.get(j, ZERO)) for j in range(n)]
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for coeffs, sense, rhs in rows:
        line = [to_float(coeffs.get(j, ZERO)) for j in range(n)]
        if sense == "<=":
            a_ub.append(line)
            b_ub.append(to_float(rhs))
        else:
            a_eq.append(line)
            b_eq.append(to_float(rhs))
    reference = scipy_linprog(
        c,
        A_ub=a_ub or None,
        b_ub=b_ub or None,
        A_eq=a_eq or None,
        b_eq=b_eq or None,
        bounds=[(0, u) for u in uppers],
        method="highs",
    )

    if result.status is LpStatus.INFEASIBLE:
        assert reference.status == 2
        return
    assert reference.status == 0
    assert abs(to_float(result.value) - (-reference.fun)) < 1e-7

    # the returned point must satisfy every bound and row exactly
    for j, value in enumerate(result.values):
        assert 0 <= value <= uppers[j]
    for coeffs, sense, rhs in rows:
        lhs = sum(as_rat(c) * result.values[j] for j, c in coeffs.items())
        if sense == "<=":
            assert lhs <= rhs
        else:
            assert lhs == rhs
    assert result.value == sum(
        as_rat(c) * result.values[j] for j, c in objective.items()
    )
