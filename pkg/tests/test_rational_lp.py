"""Exact simplex: solutions are Fractions and certified against scipy.

Bland's rule is exercised on Beale's classical cycling example, whose optimum
is exactly 1/20; random feasible programs are cross-checked against
scipy.optimize.linprog to float precision.
"""

from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from hardyveto.rational_lp import (
    Infeasible,
    LinearProgram,
    Unbounded,
    simplex_solve,
)


def test_single_variable():
    lp = LinearProgram(a=((1,),), b=(3,), c=(2,))
    sol = simplex_solve(lp)
    assert sol.value == Fraction(6)
    assert sol.x == (Fraction(3),)


def test_solution_is_exact_fraction():
    # max x + y  s.t.  3x + y = 1, x + 3y = 1
    lp = LinearProgram(a=((3, 1), (1, 3)), b=(1, 1), c=(1, 1))
    sol = simplex_solve(lp)
    assert isinstance(sol.value, Fraction)
    assert sol.value == Fraction(1, 2)
    assert sol.x == (Fraction(1, 4), Fraction(1, 4))


def test_beale_cycling_example():
    """Degenerate pivots must terminate (Bland) and land on exactly 1/20."""
    # max 0.75 x1 - 150 x2 + 0.02 x3 - 6 x4 with the classical three rows,
    # in equality form via explicit slack columns.
    a = (
        (Fraction(1, 4), -60, Fraction(-1, 25), 9, 1, 0, 0),
        (Fraction(1, 2), -90, Fraction(-1, 50), 3, 0, 1, 0),
        (0, 0, 1, 0, 0, 0, 1),
    )
    b = (0, 0, 1)
    c = (Fraction(3, 4), -150, Fraction(1, 50), -6, 0, 0, 0)
    sol = simplex_solve(LinearProgram(a=a, b=b, c=c))
    assert sol.value == Fraction(1, 20)


def test_infeasible_raises():
    # x = 1 and x = 2 simultaneously
    lp = LinearProgram(a=((1,), (1,)), b=(1, 2), c=(1,))
    with pytest.raises(Infeasible):
        simplex_solve(lp)


def test_negative_orthant_is_infeasible():
    lp = LinearProgram(a=((1, 1),), b=(-1,), c=(1, 0))
    with pytest.raises(Infeasible):
        simplex_solve(lp)


def test_unbounded_raises():
    # max x - y  s.t.  x - y free to grow along the ray
    lp = LinearProgram(a=((1, -1, -1),), b=(0,), c=(1, 0, 0))
    with pytest.raises(Unbounded):
        simplex_solve(lp)


def test_zero_objective():
    lp = LinearProgram(a=((1, 1),), b=(1,), c=(0, 0))
    sol = simplex_solve(lp)
    assert sol.value == 0


def test_shape_validation():
    with pytest.raises(ValueError):
        LinearProgram(a=((1, 2),), b=(1, 2), c=(1, 1))
    with pytest.raises(ValueError):
        LinearProgram(a=((1,),), b=(1,), c=(1, 1))


@pytest.mark.parametrize("seed", range(25))
def test_matches_scipy_on_random_programs(seed):
    """Random bounded-feasible equality programs agree with HiGHS."""
    rng = np.random.default_rng(seed)
    n, m = 6, 3
    a_eq = rng.integers(-4, 5, size=(m, n))
    x_feas = rng.integers(0, 4, size=n)
    b_eq = a_eq @ x_feas  # feasible by construction
    c = rng.integers(-5, 6, size=n)
    # bound the feasible set so the program cannot be unbounded
    a_full = np.vstack([a_eq, np.ones(n)])
    b_full = np.append(b_eq, x_feas.sum() + rng.integers(1, 10))
    a_full = np.hstack([a_full, np.zeros((m + 1, 1))])
    a_full[-1, -1] = 1  # slack for the budget row
    c_full = np.append(c, 0)

    ref = linprog(-c_full, A_eq=a_full, b_eq=b_full, bounds=(0, None))
    lp = LinearProgram(
        a=tuple(tuple(int(v) for v in row) for row in a_full),
        b=tuple(int(v) for v in b_full),
        c=tuple(int(v) for v in c_full),
    )
    if ref.status == 2:
        with pytest.raises(Infeasible):
            simplex_solve(lp)
        return
    assert ref.status == 0
    sol = simplex_solve(lp)
    assert float(sol.value) == pytest.approx(-ref.fun, abs=1e-7)
    # the reported point must be feasible and attain the value exactly
    assert all(v >= 0 for v in sol.x)
    for row, rhs in zip(lp.a, lp.b):
        assert sum(r * v for r, v in zip(row, sol.x)) == rhs
    assert sum(cv * v for cv, v in zip(lp.c, sol.x)) == sol.value
