from fractions import Fraction

import pytest
import sympy

from nqcalc.errors import DegreeError
from nqcalc.graded import GradedContext, GradedPoly
from nqcalc.symbolic import (
    DEGENERATE,
    EVERYWHERE,
    GENERIC,
    as_polynomial,
    from_sympy,
    injectivity,
    polynomial_inverse,
    solve_linear,
    to_sympy,
)


@pytest.fixture
def context():
    return GradedContext(["x", "y"], [("a", 1)])


@pytest.fixture
def x(context):
    return GradedPoly.generator(context, "x")


def test_sympy_round_trip(context, x):
    y = GradedPoly.generator(context, "y")
    p = x ** 2 - y * Fraction(1, 2) + 3
    expression = to_sympy(p)
    assert expression == sympy.Symbol("x") ** 2 - sympy.Symbol("y") / 2 + 3
    assert from_sympy(expression, context) == p
    with pytest.raises(DegreeError):
        to_sympy(GradedPoly.generator(context, "a"))


def test_injectivity(context, x):
    one = GradedPoly.constant(context, 1)
    zero = GradedPoly.zero(context)
    assert injectivity([[one, x]], context).status == EVERYWHERE
    generic = injectivity([[one, zero], [zero, x]], context)
    assert generic.status == GENERIC
    assert generic.passed
    assert generic.describe() == "generic; vanishing locus of x"
    square = injectivity([[x, zero], [zero, x]], context)
    assert square.status == GENERIC
    assert square.locus == ("x",)
    degenerate = injectivity([[x, zero], [x, zero]], context)
    assert degenerate.status == DEGENERATE
    assert degenerate.rank == 1
    assert not degenerate.passed
    assert injectivity([], context).status == EVERYWHERE


def test_solve_linear(context, x):
    one = GradedPoly.constant(context, 1)
    zero = GradedPoly.zero(context)
    solution = solve_linear([[one, zero], [zero, x]], [one, one])
    assert solution == [1, 1 / sympy.Symbol("x")]
    y = sympy.Symbol("y")
    assert solve_linear([[one, zero], [zero, x]], [y, 1]) == [y, 1 / sympy.Symbol("x")]
    assert solve_linear([[x, x], [x, x]], [one, one]) is None


def test_polynomial_inverse(context, x):
    one = GradedPoly.constant(context, 1)
    zero = GradedPoly.zero(context)
    assert polynomial_inverse([[one, x], [zero, one]], context) == [[one, -x], [zero, one]]
    assert polynomial_inverse([[x]], context) is None
    assert as_polynomial(sympy.Symbol("x") ** 2 / sympy.Symbol("x"), context) == x
