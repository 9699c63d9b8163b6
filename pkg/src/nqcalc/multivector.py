"""Multivector fields as functions on ``T*[1]M``.

A ``p``-vector ``Σ P^{i₁…i_p} ∂_{i₁}∧…∧∂_{i_p}`` is stored as the polynomial
``Σ P^{i₁…i_p} θ_{i₁}⋯θ_{i_p}`` in the odd fiber coordinates ``θ_i = p_{x^i}``.
"""
import itertools
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from nqcalc.cartan import Derivation, vector_field
from nqcalc.errors import DegreeError
from nqcalc.graded import Bidegree, GradedContext, GradedPoly, ZERO, partial
from nqcalc.models import cotangent_context, cotangent_name

__all__ = [
    "MultivectorField",
    "schouten_bracket",
    "wedge",
    "contract",
    "sharp",
    "evaluate",
    "jacobi_defects",
]

OneForm = Mapping[str, Any]


class MultivectorField:
    __slots__ = "context", "polynomial", "degree"

    def __init__(self, context: GradedContext, polynomial: GradedPoly, degree: Optional[int] = None) -> None:
        allowed = context.base_coords + tuple(cotangent_name(x) for x in context.base_coords)
        polynomial = polynomial.transfer(context)
        if not polynomial.uses_only(allowed):
            raise DegreeError(f"{polynomial} is not a multivector field")
        bidegree = polynomial.bidegree()
        if bidegree == ZERO:
            actual = degree if degree is not None else 0
        elif isinstance(bidegree, Bidegree):
            actual = bidegree.internal_degree
            if degree is not None and degree != actual:
                raise DegreeError(f"{polynomial} is a {actual}-vector, not a {degree}-vector")
        else:
            raise DegreeError(f"{polynomial} mixes multivector degrees")
        self.context = context
        self.polynomial = polynomial
        self.degree = actual

    @classmethod
    def from_components(
        cls,
        base: Any,
        components: Mapping[Tuple[str, ...], Any],
        degree: Optional[int] = None,
    ) -> "MultivectorField":
        """Build ``Σ P^{I} ∂_I`` from coefficients keyed by ordered coordinate tuples."""
        context = base if isinstance(base, GradedContext) else cotangent_context(base)
        result = GradedPoly.zero(context)
        for indices, value in components.items():
            term = context.coerce(value)
            for x in indices:
                term = term * GradedPoly.generator(context, cotangent_name(x))
            result = result + term
        if degree is None and components:
            degree = len(next(iter(components)))
        return cls(context, result, degree)

    @classmethod
    def bivector(cls, base: Any, components: Mapping[Tuple[str, str], Any]) -> "MultivectorField":
        return cls.from_components(base, components, 2)

    @classmethod
    def vector(cls, base: Any, components: Mapping[str, Any]) -> "MultivectorField":
        return cls.from_components(base, {(x,): v for x, v in components.items()}, 1)

    @property
    def base_coords(self) -> Tuple[str, ...]:
        return self.context.base_coords

    def component(self, *indices: str) -> GradedPoly:
        value = self.polynomial
        for x in indices:
            value = partial(value, cotangent_name(x))
        return value.drop_generators(cotangent_name(x) for x in self.base_coords)

    def components(self) -> Dict[Tuple[str, ...], GradedPoly]:
        result = {}
        for indices in itertools.combinations(self.base_coords, self.degree):
            value = self.component(*indices)
            if value:
                result[indices] = value
        return result

    def as_vector_field(self, context: Optional[GradedContext] = None) -> Derivation:
        """A 1-vector as a derivation of functions on the base chart."""
        if self.degree != 1 and not self.is_zero():
            raise DegreeError(f"{self} is not a vector field")
        target = context or self.context
        return vector_field(
            target,
            {x: self.component(x).transfer(target) for x in self.base_coords},
            degree=0,
        )

    def is_zero(self) -> bool:
        return self.polynomial.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _wrap(self, polynomial: GradedPoly, degree: int) -> "MultivectorField":
        return MultivectorField(self.context, polynomial, max(degree, 0))

    def __add__(self, other: "MultivectorField") -> "MultivectorField":
        return self._wrap(self.polynomial + other.polynomial, self.degree)

    def __sub__(self, other: "MultivectorField") -> "MultivectorField":
        return self._wrap(self.polynomial - other.polynomial, self.degree)

    def __neg__(self) -> "MultivectorField":
        return self._wrap(-self.polynomial, self.degree)

    def __rmul__(self, other: Any) -> "MultivectorField":
        if isinstance(other, GradedPoly):
            other = other.transfer(self.context)
        return self._wrap(other * self.polynomial, self.degree)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultivectorField):
            return NotImplemented
        return self.polynomial == other.polynomial

    def __hash__(self) -> int:
        return hash(self.polynomial)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for indices, value in self.components().items():
            wedge_text = "^".join(f"del({x})" for x in indices)
            pieces.append(f"({value})*{wedge_text}" if wedge_text else f"({value})")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"MultivectorField({str(self)!r}, degree={self.degree})"


def wedge(first: MultivectorField, second: MultivectorField) -> MultivectorField:
    return first._wrap(first.polynomial * second.polynomial, first.degree + second.degree)


def _one_form(context: GradedContext, form: OneForm) -> Dict[str, GradedPoly]:
    return {x: context.coerce(v) for x, v in form.items()}


def contract(form: OneForm, field: MultivectorField) -> MultivectorField:
    """Right contraction ``Σ φ_i P∂⃖_{θ_i}`` of a 1-form into a multivector."""
    context = field.context
    result = GradedPoly.zero(context)
    for x, coefficient in _one_form(context, form).items():
        result = result + coefficient * partial(field.polynomial, cotangent_name(x), side="right")
    return field._wrap(result, field.degree - 1)


def evaluate(field: MultivectorField, forms: Sequence[OneForm]) -> GradedPoly:
    """``P(α₁, …, α_p)``."""
    if len(forms) != field.degree:
        raise DegreeError(f"A {field.degree}-vector takes {field.degree} arguments")
    current = field
    for form in reversed(forms):
        current = contract(form, current)
    return current.polynomial


def sharp(field: MultivectorField, form: OneForm) -> MultivectorField:
    """``P♯φ = P(φ, ·)`` for a bivector."""
    return -contract(form, field)


def schouten_bracket(first: MultivectorField, second: MultivectorField) -> MultivectorField:
    context = first.context
    P, R = first.polynomial, second.polynomial.transfer(context)
    result = GradedPoly.zero(context)
    for x in context.base_coords:
        theta = cotangent_name(x)
        result = result + partial(P, theta, side="right") * partial(R, x)
        result = result - partial(P, x) * partial(R, theta)
    if first.degree % 2 == 0:
        result = -result
    return first._wrap(result, first.degree + second.degree - 1)


def jacobi_defects(
    bivector: MultivectorField, reeb: MultivectorField
) -> Tuple[MultivectorField, MultivectorField]:
    """``([Λ,Λ] - 2E∧Λ, [E,Λ])``: both vanish exactly for Jacobi pairs."""
    square = schouten_bracket(bivector, bivector)
    twice = wedge(reeb, bivector)
    return square - twice - twice, schouten_bracket(reeb, bivector)
