"""Seeded random charts, polynomials, vector fields and forms.

Every generator takes a :class:`random.Random`, so a run is reproduced by
its seed (``NQCALC_SEED`` in the test suites).
"""
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from nqcalc.cartan import Derivation, VectorValuedForm, vector_field
from nqcalc.graded import GradedContext, GradedPoly, Monomial, homogeneous_monomials

__all__ = [
    "BASE_NAMES",
    "FIBER_NAMES",
    "random_context",
    "random_coefficient",
    "random_poly",
    "random_form",
    "random_vector_field",
]

BASE_NAMES = ("x", "y", "z")
FIBER_NAMES = ("a", "b", "c")


def random_context(
    rng: random.Random,
    max_base: int = 3,
    max_fiber: int = 3,
    max_degree: int = 2,
    frame: Sequence[str] = (),
) -> GradedContext:
    """A chart with at least one fiber coordinate, so positive degrees exist."""
    base = BASE_NAMES[: rng.randint(0, max_base)]
    fibers: List[Tuple[str, int]] = [
        (name, rng.randint(1, max_degree)) for name in FIBER_NAMES[: rng.randint(1, max_fiber)]
    ]
    return GradedContext(base, fibers, frame)


def random_coefficient(rng: random.Random) -> Fraction:
    numerator = rng.choice([-3, -2, -1, 1, 2, 3])
    return Fraction(numerator, rng.choice([1, 1, 2, 3]))


def random_poly(
    rng: random.Random,
    context: GradedContext,
    form_degree: int,
    internal_degree: int,
    terms: int = 3,
    max_base_power: int = 1,
) -> GradedPoly:
    """A homogeneous polynomial with at most ``terms`` monomials; may be zero."""
    if form_degree < 0 or internal_degree < 0:
        return GradedPoly.zero(context)
    monomials = homogeneous_monomials(context, form_degree, internal_degree, max_base_power)
    if not monomials:
        return GradedPoly.zero(context)
    chosen: Dict[Monomial, Fraction] = {}
    for monomial in rng.sample(list(monomials), min(terms, len(monomials))):
        chosen[monomial] = random_coefficient(rng)
    return GradedPoly(context, chosen)


def random_form(
    rng: random.Random,
    context: GradedContext,
    order: int,
    degree: int,
    terms: int = 3,
) -> VectorValuedForm:
    """An E-valued form of bidegree ``(order, degree)``."""
    return VectorValuedForm(
        context,
        {name: random_poly(rng, context, order, degree, terms) for name in context.components},
    )


def random_vector_field(
    rng: random.Random,
    context: GradedContext,
    degree: int,
    terms: int = 2,
    endo: Optional[bool] = None,
) -> Derivation:
    """A vector field of the given internal degree, with a random ∇-part when ``endo``."""
    values = {
        name: random_poly(rng, context, 0, context.degree_of(name) + degree, terms)
        for name in context.coordinates
    }
    entries = {}
    if endo if endo is not None else bool(context.frame):
        for alpha in context.frame:
            for beta in context.frame:
                entries[(alpha, beta)] = random_poly(rng, context, 0, degree, terms)
    return vector_field(context, values, entries, degree)
