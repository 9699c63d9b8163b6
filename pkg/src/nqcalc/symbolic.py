"""Bridge to sympy for rank, minor and linear-solve questions over base polynomials."""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from nqcalc.errors import DegreeError
from nqcalc.graded import GradedContext, GradedPoly

__all__ = [
    "EVERYWHERE",
    "GENERIC",
    "DEGENERATE",
    "Nondegeneracy",
    "to_sympy",
    "from_sympy",
    "symbols_of",
    "injectivity",
    "solve_linear",
    "polynomial_inverse",
    "as_polynomial",
    "rational_str",
    "denominators",
]

logger = logging.getLogger(__name__)

EVERYWHERE = "everywhere"
GENERIC = "generic"
DEGENERATE = "degenerate"

# Caps the number of maximal minors enumerated for one matrix.
MAX_MINORS = 5000


def symbols_of(context: GradedContext) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.Symbol(name) for name in context.base_coords)


def to_sympy(p: GradedPoly) -> sympy.Expr:
    if not p.is_base_function():
        raise DegreeError(f"{p} is not a function on the base")
    symbols = symbols_of(p.context)
    count = len(symbols)
    expression = sympy.Integer(0)
    for monomial, coefficient in p.items():
        term = sympy.Rational(coefficient.numerator, coefficient.denominator)
        for symbol, exponent in zip(symbols, monomial[:count]):
            if exponent:
                term *= symbol ** exponent
        expression += term
    return expression


def from_sympy(expression: sympy.Expr, context: GradedContext) -> GradedPoly:
    """Polynomial in the base coordinates; rational functions are rejected."""
    symbols = symbols_of(context)
    expression = sympy.expand(expression)
    if expression == 0:
        return GradedPoly.zero(context)
    polynomial = sympy.Poly(expression, *symbols) if symbols else None
    result = GradedPoly.zero(context)
    if polynomial is None:
        value = sympy.Rational(expression)
        return GradedPoly.constant(context, Fraction(int(value.p), int(value.q)))
    for exponents, coefficient in polynomial.terms():
        coefficient = sympy.Rational(coefficient)
        powers = {s.name: e for s, e in zip(symbols, exponents) if e}
        result = result + GradedPoly.from_monomial(
            context, powers, Fraction(int(coefficient.p), int(coefficient.q))
        )
    return result


@dataclass(frozen=True)
class Nondegeneracy:
    """Verdict of the minors policy for an injective bundle map."""

    status: str
    rank: int
    locus: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.status != DEGENERATE

    def describe(self) -> str:
        if self.status == GENERIC:
            return f"{self.status}; vanishing locus of {', '.join(self.locus)}"
        return self.status


def injectivity(rows: Sequence[Sequence[GradedPoly]], context: GradedContext) -> Nondegeneracy:
    """Decide whether the map with these rows (one per source basis vector) is injective.

    Injective everywhere when some maximal minor is a nonzero constant, generically
    when only nonconstant maximal minors survive, degenerate when all vanish.
    """
    height = len(rows)
    if height == 0:
        return Nondegeneracy(EVERYWHERE, 0)
    width = len(rows[0])
    if width == 0:
        return Nondegeneracy(DEGENERATE, 0)
    matrix = sympy.Matrix([[to_sympy(entry) for entry in row] for row in rows])
    if height > width:
        return Nondegeneracy(DEGENERATE, int(matrix.rank()))
    surviving: List[GradedPoly] = []
    for count, columns in enumerate(itertools.combinations(range(width), height)):
        if count >= MAX_MINORS:
            logger.warning("Stopped after %d maximal minors", MAX_MINORS)
            break
        determinant = sympy.expand(matrix.extract(list(range(height)), list(columns)).det())
        minor = from_sympy(determinant, context)
        if not minor:
            continue
        if minor.is_constant():
            return Nondegeneracy(EVERYWHERE, height)
        surviving.append(from_sympy(sympy.sqf_part(determinant), context))
    if surviving:
        locus = tuple(sorted({str(m) for m in surviving}))
        return Nondegeneracy(GENERIC, height, locus)
    return Nondegeneracy(DEGENERATE, int(matrix.rank()))


def _as_expression(value: Union[GradedPoly, sympy.Expr]) -> sympy.Expr:
    return to_sympy(value) if isinstance(value, GradedPoly) else sympy.sympify(value)


def solve_linear(
    matrix: Sequence[Sequence[Union[GradedPoly, sympy.Expr]]],
    rhs: Sequence[Union[GradedPoly, sympy.Expr]],
) -> Optional[List[sympy.Expr]]:
    """Exact solution over the fraction field of base polynomials, None if singular.

    Entries may be base polynomials or sympy expressions in the base coordinates.
    """
    A = sympy.Matrix([[_as_expression(entry) for entry in row] for row in matrix])
    b = sympy.Matrix([_as_expression(entry) for entry in rhs])
    if sympy.expand(A.det()) == 0:
        return None
    solution = A.LUsolve(b)
    return [sympy.cancel(sympy.together(value)) for value in solution]


def polynomial_inverse(
    rows: Sequence[Sequence[GradedPoly]], context: GradedContext
) -> Optional[List[List[GradedPoly]]]:
    """Inverse of a square matrix when it has polynomial entries, else None."""
    matrix = sympy.Matrix([[to_sympy(entry) for entry in row] for row in rows])
    if not matrix.is_square or matrix.det() == 0:
        return None
    inverse = matrix.inv()
    result = []
    for i in range(inverse.rows):
        row = []
        for j in range(inverse.cols):
            entry = as_polynomial(inverse[i, j], context)
            if entry is None:
                return None
            row.append(entry)
        result.append(row)
    return result


def rational_str(expression: sympy.Expr) -> str:
    return sympy.sstr(sympy.cancel(expression), order="lex")


def as_polynomial(expression: sympy.Expr, context: GradedContext) -> Optional[GradedPoly]:
    """The expression as a base polynomial, or None when a denominator survives."""
    expression = sympy.cancel(expression)
    _, denominator = sympy.fraction(expression)
    if not denominator.free_symbols:
        return from_sympy(expression, context)
    return None


def denominators(values: Sequence[sympy.Expr]) -> Dict[str, sympy.Expr]:
    result = {}
    for value in values:
        _, denominator = sympy.fraction(sympy.cancel(value))
        if denominator.free_symbols:
            result[rational_str(denominator)] = denominator
    return result
