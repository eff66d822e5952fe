from fractions import Fraction as F

from hypothesis import given, strategies as st

from gpauction.linprog import (
    EQ,
    GE,
    LE,
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    LPResult,
    lp_solve,
)


def test_single_bound():
    lp = LinearProgram((F(1),), (((F(1),), LE, F(3)),))
    res = lp_solve(lp)
    assert res == LPResult(OPTIMAL, F(3), (F(3),))


def test_infeasible_pair():
    lp = LinearProgram((F(1),), (((F(1),), LE, F(0)), ((F(1),), GE, F(1))))
    assert lp_solve(lp).status == INFEASIBLE


def test_unbounded():
    assert lp_solve(LinearProgram((F(1),), ())).status == UNBOUNDED


def test_free_variable_negative_optimum():
    lp = LinearProgram((F(-1),), (((F(1),), GE, F(-5)),))
    res = lp_solve(lp)
    assert (res.value, res.x) == (F(5), (F(-5),))


def test_equality_and_nonneg():
    lp = LinearProgram(
        (F(1), F(1)),
        (((F(1), F(1)), EQ, F(2)), ((F(1), F(0)), LE, F(1))),
        nonneg=(True, True),
    )
    res = lp_solve(lp)
    assert res.value == 2
    assert sum(res.x) == 2


def test_fixings_fold_into_value():
    lp = LinearProgram(
        (F(1), F(1)), (((F(1), F(0)), LE, F(1)),), fixings={1: F(2)}
    )
    res = lp_solve(lp)
    assert res.value == 3
    assert res.x[1] == 2


def test_zero_objective_feasibility():
    lp = LinearProgram(
        (F(0), F(0)),
        (((F(1), F(1)), GE, F(1)), ((F(1), F(-1)), EQ, F(0))),
    )
    res = lp_solve(lp)
    assert res.status == OPTIMAL
    assert res.x[0] == res.x[1] and res.x[0] + res.x[1] >= 1


def test_degenerate_cycling_guard():
    # classic Beale-style degeneracy; Bland's rule must terminate
    rows = (
        ((F(1, 4), F(-8), F(-1), F(9)), LE, F(0)),
        ((F(1, 2), F(-12), F(-1, 2), F(3)), LE, F(0)),
        ((F(0), F(0), F(1), F(0)), LE, F(1)),
    )
    lp = LinearProgram((F(3, 4), F(-20), F(1, 2), F(-6)), rows, nonneg=(True,) * 4)
    res = lp_solve(lp)
    assert res.status == OPTIMAL
    assert res.value == F(5, 4)


def test_rational_exactness():
    lp = LinearProgram(
        (F(1), F(1)),
        (
            ((F(1, 3), F(1, 7)), LE, F(1)),
            ((F(1, 7), F(1, 3)), LE, F(1)),
        ),
        nonneg=(True, True),
    )
    res = lp_solve(lp)
    assert res.value == F(21, 5)


def test_all_zero_row_consistency():
    sat = LinearProgram((F(1),), (((F(0),), LE, F(1)), ((F(1),), LE, F(2))))
    assert lp_solve(sat).value == 2
    unsat = LinearProgram((F(1),), (((F(0),), GE, F(1)),))
    assert lp_solve(unsat).status == INFEASIBLE


@given(st.data())
def test_witness_satisfies_all_rows(data):
    nvars = data.draw(st.integers(1, 4))
    nrows = data.draw(st.integers(1, 6))
    frac = st.fractions(min_value=F(-4), max_value=F(4), max_denominator=4)
    obj = tuple(data.draw(frac) for _ in range(nvars))
    rows = tuple(
        (
            tuple(data.draw(frac) for _ in range(nvars)),
            data.draw(st.sampled_from((LE, GE, EQ))),
            data.draw(frac),
        )
        for _ in range(nrows)
    )
    res = lp_solve(LinearProgram(obj, rows))
    if res.status != OPTIMAL:
        return
    for coeffs, rel, rhs in rows:
        lhs = sum(c * x for c, x in zip(coeffs, res.x))
        assert (
            lhs <= rhs if rel == LE else lhs >= rhs if rel == GE else lhs == rhs
        )
    assert sum(c * x for c, x in zip(obj, res.x)) == res.value
