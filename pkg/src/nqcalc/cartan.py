"""Vector-valued Cartan calculus on a graded chart.

Forms with values in the framed bundle E are :class:`VectorValuedForm`
instances, one :class:`GradedPoly` component per frame element.  A
:class:`Derivation` is stored through its values on the generators of the
algebra (coordinates and, when it acts on forms, differentials) together with
its endomorphism part on the frame: ``D e_α = Σ_β endo[(α, β)] e_β``.

Derivations act through left partial derivatives, ``D(p) = Σ_g D(g) ∂_g p``.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple, Union

from nqcalc.errors import (
    ContextMismatch,
    DegreeError,
    DegreeZero,
    FrameMismatch,
    NonFlatConnection,
    NotClosed,
)
from nqcalc.graded import (
    MIXED,
    ZERO,
    Bidegree,
    GradedContext,
    GradedPoly,
    Scalar,
    differential_name,
    partial,
)

__all__ = [
    "VectorValuedForm",
    "Derivation",
    "vector_field",
    "partial_field",
    "exterior_derivative",
    "parity_twist",
    "interior_derivation",
    "lie_derivation",
    "de_rham_derivation",
    "covariant_derivation",
    "insert",
    "lie_derive",
    "de_rham",
    "commutator",
    "grading_derivation",
    "potential",
    "curvature",
    "check_flat",
]

logger = logging.getLogger(__name__)

Target = Union[GradedPoly, "VectorValuedForm"]


def parity_twist(p: GradedPoly) -> GradedPoly:
    """Flip the sign of every odd monomial."""
    return GradedPoly(
        p.context, {m: (-c if p.monomial_parity(m) else c) for m, c in p.items()}
    )


class VectorValuedForm:
    __slots__ = "context", "_components", "_hash"

    def __init__(
        self, context: GradedContext, components: Optional[Mapping[str, Any]] = None
    ) -> None:
        self.context = context
        self._hash: Optional[int] = None
        values: Dict[str, GradedPoly] = {}
        for name, value in (components or {}).items():
            if name not in context.components:
                raise FrameMismatch(f"{name!r} is not a component of {context}")
            values[name] = context.coerce(value)
        self._components: Tuple[GradedPoly, ...] = tuple(
            values.get(name, GradedPoly.zero(context)) for name in context.components
        )

    @classmethod
    def zero(cls, context: GradedContext) -> "VectorValuedForm":
        return cls(context)

    @classmethod
    def scalar(cls, p: GradedPoly) -> "VectorValuedForm":
        if p.context.frame:
            raise FrameMismatch(f"{p.context} has a frame; name the component")
        return cls(p.context, {p.context.components[0]: p})

    @classmethod
    def frame_element(cls, context: GradedContext, name: str) -> "VectorValuedForm":
        return cls(context, {name: 1})

    def component(self, name: str) -> GradedPoly:
        try:
            return self._components[self.context.components.index(name)]
        except ValueError:
            raise FrameMismatch(f"{name!r} is not a component of {self.context}") from None

    def components(self) -> Dict[str, GradedPoly]:
        return dict(zip(self.context.components, self._components))

    def __iter__(self) -> Iterator[Tuple[str, GradedPoly]]:
        return iter(zip(self.context.components, self._components))

    def as_scalar(self) -> GradedPoly:
        if self.context.frame:
            raise FrameMismatch("Only forms of a frameless context are scalar")
        return self._components[0]

    def map(self, function: Any) -> "VectorValuedForm":
        return VectorValuedForm(
            self.context, {name: function(p) for name, p in self}
        )

    def is_zero(self) -> bool:
        return not any(self._components)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def bidegree(self) -> Union[Bidegree, str]:
        bidegrees = set()
        for p in self._components:
            bidegree = p.bidegree()
            if bidegree == MIXED:
                return MIXED
            if bidegree != ZERO:
                bidegrees.add(bidegree)
        if not bidegrees:
            return ZERO
        if len(bidegrees) > 1:
            return MIXED
        return bidegrees.pop()

    def homogeneous_bidegree(self) -> Bidegree:
        bidegree = self.bidegree()
        if not isinstance(bidegree, Bidegree):
            raise DegreeError(f"{self} has no single bidegree ({bidegree})")
        return bidegree

    @property
    def degree(self) -> int:
        return self.homogeneous_bidegree().internal_degree

    def _check(self, other: "VectorValuedForm") -> None:
        if not self.context.same_algebra(other.context):
            raise ContextMismatch(self.context, other.context)
        if self.context.components != other.context.components:
            raise FrameMismatch(
                f"Frames differ: {self.context.components} and {other.context.components}"
            )

    def __add__(self, other: "VectorValuedForm") -> "VectorValuedForm":
        if not isinstance(other, VectorValuedForm):
            return NotImplemented
        self._check(other)
        return VectorValuedForm(
            self.context,
            {name: a + b for name, a, b in zip(self.context.components, self._components, other._components)},
        )

    def __sub__(self, other: "VectorValuedForm") -> "VectorValuedForm":
        if not isinstance(other, VectorValuedForm):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "VectorValuedForm":
        return self.map(lambda p: -p)

    def __rmul__(self, other: Any) -> "VectorValuedForm":
        if isinstance(other, (int, Fraction)):
            return self.map(lambda p: p * other)
        if isinstance(other, GradedPoly):
            return self.map(lambda p: other * p)
        return NotImplemented

    def __mul__(self, other: Any) -> "VectorValuedForm":
        if isinstance(other, (int, Fraction)):
            return self.map(lambda p: p * other)
        if isinstance(other, GradedPoly):
            return self.map(lambda p: p * other)
        return NotImplemented

    def drop_generators(self, names: Any) -> "VectorValuedForm":
        return self.map(lambda p: p.drop_generators(names))

    def transfer(self, context: GradedContext) -> "VectorValuedForm":
        return VectorValuedForm(context, {name: p.transfer(context) for name, p in self})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, VectorValuedForm):
            return NotImplemented
        return (
            self.context.same_algebra(other.context)
            and self.context.components == other.context.components
            and self._components == other._components
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._components)
        return self._hash

    def __str__(self) -> str:
        if not self.context.frame:
            return str(self._components[0])
        pieces = [f"({p})*{name}" for name, p in self if p]
        return " + ".join(pieces) if pieces else "0"

    def __repr__(self) -> str:
        return f"VectorValuedForm({str(self)!r})"


def _shift(value: GradedPoly, generator_bidegree: Bidegree) -> Optional[Tuple[int, int]]:
    bidegree = value.bidegree()
    if bidegree == ZERO:
        return None
    if bidegree == MIXED:
        raise DegreeError(f"Derivation value {value} is not homogeneous")
    return (
        bidegree.internal_degree - generator_bidegree.internal_degree,
        bidegree.form_degree - generator_bidegree.form_degree,
    )


class Derivation:
    """Graded derivation of E-valued forms of fixed degree and form shift."""

    __slots__ = "context", "values", "endo", "degree", "form_degree"

    def __init__(
        self,
        context: GradedContext,
        values: Optional[Mapping[str, Any]] = None,
        endo: Optional[Mapping[Tuple[str, str], Any]] = None,
        degree: Optional[int] = None,
        form_degree: Optional[int] = None,
    ) -> None:
        self.context = context
        self.values: Dict[str, GradedPoly] = {}
        self.endo: Dict[Tuple[str, str], GradedPoly] = {}
        shifts = set()
        for name, value in (values or {}).items():
            generator = context.generator(name)
            poly = context.coerce(value)
            if not poly:
                continue
            self.values[name] = poly
            shift = _shift(poly, Bidegree(generator.form_degree, generator.internal_degree))
            shifts.add(shift)
        for (alpha, beta), value in (endo or {}).items():
            if alpha not in context.frame or beta not in context.frame:
                raise FrameMismatch(f"Endomorphism entry ({alpha}, {beta}) outside the frame")
            poly = context.coerce(value)
            if not poly:
                continue
            self.endo[(alpha, beta)] = poly
            shifts.add(_shift(poly, Bidegree(0, 0)))
        if len(shifts) > 1:
            raise DegreeError(f"Derivation has inconsistent degree shifts {sorted(shifts)}")
        inferred = shifts.pop() if shifts else None
        if inferred is not None:
            if degree is not None and degree != inferred[0]:
                raise DegreeError(f"Declared degree {degree} but values shift by {inferred[0]}")
            if form_degree is not None and form_degree != inferred[1]:
                raise DegreeError(
                    f"Declared form degree {form_degree} but values shift by {inferred[1]}"
                )
            degree, form_degree = inferred
        self.degree: int = degree or 0
        self.form_degree: int = form_degree or 0

    @classmethod
    def zero(cls, context: GradedContext, degree: int = 0, form_degree: int = 0) -> "Derivation":
        return cls(context, degree=degree, form_degree=form_degree)

    @property
    def parity(self) -> int:
        return (self.degree + self.form_degree) % 2

    def value(self, name: str) -> GradedPoly:
        return self.values.get(name, GradedPoly.zero(self.context))

    def endo_entry(self, alpha: str, beta: str) -> GradedPoly:
        return self.endo.get((alpha, beta), GradedPoly.zero(self.context))

    def endo_column(self, alpha: str) -> VectorValuedForm:
        """The image ``D e_α`` as an E-valued function."""
        return VectorValuedForm(
            self.context, {beta: self.endo_entry(alpha, beta) for beta in self.context.frame}
        )

    def apply(self, p: GradedPoly) -> GradedPoly:
        if not self.context.same_algebra(p.context):
            raise ContextMismatch(self.context, p.context)
        result = GradedPoly.zero(self.context)
        for name, value in self.values.items():
            derivative = partial(p, name)
            if derivative:
                result = result + value * derivative
        return result

    def apply_form(self, form: VectorValuedForm) -> VectorValuedForm:
        if not self.context.same_algebra(form.context):
            raise ContextMismatch(self.context, form.context)
        if self.context.components != form.context.components:
            raise FrameMismatch("Derivation and form use different frames")
        components = {name: self.apply(p) for name, p in form}
        if self.endo:
            for (alpha, beta), entry in self.endo.items():
                coefficient = form.component(alpha)
                if not coefficient:
                    continue
                if self.parity:
                    coefficient = parity_twist(coefficient)
                components[beta] = components[beta] + coefficient * entry
        return VectorValuedForm(form.context, components)

    def __call__(self, target: Target) -> Target:
        if isinstance(target, VectorValuedForm):
            return self.apply_form(target)
        return self.apply(target)

    def symbol(self) -> "Derivation":
        return Derivation(
            self.context,
            {name: v for name, v in self.values.items() if self.context.generator(name).is_coordinate},
            degree=self.degree,
            form_degree=self.form_degree,
        )

    def is_zero(self) -> bool:
        return not self.values and not self.endo

    def is_vector_field(self) -> bool:
        return self.form_degree == 0 and all(
            self.context.generator(name).is_coordinate for name in self.values
        )

    def _combine(self, other: "Derivation", sign: int) -> "Derivation":
        if not isinstance(other, Derivation):
            return NotImplemented
        if not self.context.same_algebra(other.context):
            raise ContextMismatch(self.context, other.context)
        if other.is_zero():
            return self
        if self.is_zero():
            return other if sign > 0 else -other
        if (self.degree, self.form_degree) != (other.degree, other.form_degree):
            raise DegreeError("Cannot add derivations of different degrees")
        values = dict(self.values)
        for name, value in other.values.items():
            values[name] = values.get(name, GradedPoly.zero(self.context)) + sign * value
        endo = dict(self.endo)
        for key, value in other.endo.items():
            endo[key] = endo.get(key, GradedPoly.zero(self.context)) + sign * value
        return Derivation(self.context, values, endo, self.degree, self.form_degree)

    def __add__(self, other: "Derivation") -> "Derivation":
        return self._combine(other, 1)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self._combine(other, -1)

    def __neg__(self) -> "Derivation":
        return self.scale(-1)

    def scale(self, factor: Scalar) -> "Derivation":
        return Derivation(
            self.context,
            {n: v * factor for n, v in self.values.items()},
            {k: v * factor for k, v in self.endo.items()},
            self.degree,
            self.form_degree,
        )

    def __rmul__(self, other: Any) -> "Derivation":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, GradedPoly):
            bidegree = other.bidegree()
            if bidegree == ZERO:
                return Derivation.zero(self.context, self.degree, self.form_degree)
            if not isinstance(bidegree, Bidegree):
                raise DegreeError(f"Cannot multiply a derivation by inhomogeneous {other}")
            return Derivation(
                self.context,
                {n: other * v for n, v in self.values.items()},
                {k: other * v for k, v in self.endo.items()},
                self.degree + bidegree.internal_degree,
                self.form_degree + bidegree.form_degree,
            )
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return (
            self.context.same_algebra(other.context)
            and self.values == other.values
            and self.endo == other.endo
        )

    def __hash__(self) -> int:
        return hash((frozenset(self.values.items()), frozenset(self.endo.items())))

    def __str__(self) -> str:
        pieces = [
            f"({self.values[g.name]})*del({g.name})"
            for g in self.context.generators
            if g.name in self.values
        ]
        pieces.extend(
            f"({self.endo[(a, b)]})*[{a}->{b}]"
            for a in self.context.frame
            for b in self.context.frame
            if (a, b) in self.endo
        )
        return " + ".join(pieces) if pieces else "0"

    def __repr__(self) -> str:
        return f"Derivation({str(self)!r}, degree={self.degree}, form={self.form_degree})"


def vector_field(
    context: GradedContext,
    values: Mapping[str, Any],
    endo: Optional[Mapping[Tuple[str, str], Any]] = None,
    degree: Optional[int] = None,
) -> Derivation:
    for name in values:
        if not context.generator(name).is_coordinate:
            raise DegreeError(f"Vector fields have no component along {name!r}")
    return Derivation(context, values, endo, degree, 0)


def partial_field(context: GradedContext, name: str) -> Derivation:
    generator = context.generator(name)
    return vector_field(context, {name: 1}, degree=-generator.internal_degree)


def exterior_derivative(p: GradedPoly) -> GradedPoly:
    """Plain de Rham differential of a scalar form."""
    context = p.context
    result = GradedPoly.zero(context)
    for name in context.coordinates:
        derivative = partial(p, name)
        if derivative:
            result = result + GradedPoly.generator(context, differential_name(name)) * derivative
    return result


def _require_vector_field(field: Derivation) -> None:
    if field.form_degree != 0:
        raise DegreeError("Insertion and Lie derivative need a derivation of form degree 0")


def interior_derivation(field: Derivation) -> Derivation:
    _require_vector_field(field)
    context = field.context
    values = {
        differential_name(name): field.value(name)
        for name in context.coordinates
        if name in field.values
    }
    return Derivation(context, values, degree=field.degree, form_degree=-1)


def lie_derivation(field: Derivation) -> Derivation:
    """``L_𝕏``: symbol ``[i_X, d]`` on scalars and ``𝕏`` on frame elements."""
    _require_vector_field(field)
    context = field.context
    sign = -1 if field.degree % 2 else 1
    values: Dict[str, GradedPoly] = {}
    for name in context.coordinates:
        if name in field.values:
            image = field.values[name]
            values[name] = image
            values[differential_name(name)] = sign * exterior_derivative(image)
    return Derivation(context, values, field.endo, field.degree, 0)


def de_rham_derivation(context: GradedContext) -> Derivation:
    values = {
        name: GradedPoly.generator(context, differential_name(name))
        for name in context.coordinates
    }
    endo: Dict[Tuple[str, str], GradedPoly] = {}
    for (coord, alpha), row in context.connection.items():
        dx = GradedPoly.generator(context, differential_name(coord))
        for beta, coefficient in row.items():
            endo[(alpha, beta)] = endo.get((alpha, beta), GradedPoly.zero(context)) + dx * coefficient
    return Derivation(context, values, endo, 0, 1)


def covariant_derivation(field: Derivation) -> Derivation:
    """``∇_X``: the symbol of ``field`` with endomorphism ``Σ_i X(x^i) Γ_i``."""
    _require_vector_field(field)
    context = field.context
    endo: Dict[Tuple[str, str], GradedPoly] = {}
    for (coord, alpha), row in context.connection.items():
        component = field.value(coord)
        if not component:
            continue
        for beta, coefficient in row.items():
            endo[(alpha, beta)] = endo.get((alpha, beta), GradedPoly.zero(context)) + component * coefficient
    return Derivation(
        context, field.symbol().values, endo, field.degree, 0
    )


def _act(derivation: Derivation, target: Target) -> Target:
    if isinstance(target, VectorValuedForm):
        return derivation.apply_form(target)
    if isinstance(target, GradedPoly):
        return derivation.apply(target)
    raise TypeError(f"Cannot apply a derivation to {target!r}")


def _same_context(field: Derivation, target: Target) -> None:
    if not field.context.same_algebra(target.context):
        raise ContextMismatch(field.context, target.context)


def insert(field: Derivation, form: Target) -> Target:
    _same_context(field, form)
    return _act(interior_derivation(field), form)


def lie_derive(field: Derivation, form: Target) -> Target:
    _same_context(field, form)
    return _act(lie_derivation(field), form)


def de_rham(form: Target) -> Target:
    context = form.context
    if isinstance(form, VectorValuedForm) and context.has_connection:
        check_flat(context)
    return _act(de_rham_derivation(context), form)


def commutator(first: Derivation, second: Derivation) -> Derivation:
    if not first.context.same_algebra(second.context):
        raise ContextMismatch(first.context, second.context)
    context = first.context
    sign = -1 if first.parity * second.parity % 2 else 1
    values: Dict[str, GradedPoly] = {}
    for generator in context.generators:
        name = generator.name
        if name not in first.values and name not in second.values:
            continue
        values[name] = first.apply(second.value(name)) - sign * second.apply(first.value(name))
    endo: Dict[Tuple[str, str], GradedPoly] = {}
    if first.endo or second.endo:
        for alpha in context.frame:
            column = first.apply_form(second.endo_column(alpha)) - sign * second.apply_form(
                first.endo_column(alpha)
            )
            for beta, entry in column:
                if entry:
                    endo[(alpha, beta)] = entry
    return Derivation(
        context,
        values,
        endo,
        first.degree + second.degree,
        first.form_degree + second.form_degree,
    )


def grading_derivation(context: GradedContext) -> Derivation:
    """The Euler field ``Δ_𝓔 = Σ |z| z ∂_z`` with zero endomorphism part."""
    return vector_field(
        context,
        {
            name: GradedPoly.generator(context, name) * context.degree_of(name)
            for name in context.fiber_coords
        },
        degree=0,
    )


@lru_cache(maxsize=None)
def curvature(context: GradedContext) -> Tuple[Tuple[str, str, GradedPoly], ...]:
    """Nonzero entries ``(α, β, R^β_α)`` of ``d_∇² e_α``."""
    if not context.connection:
        return ()
    differential = de_rham_derivation(context)
    entries: List[Tuple[str, str, GradedPoly]] = []
    for alpha in context.frame:
        twice = differential.apply_form(
            differential.apply_form(VectorValuedForm.frame_element(context, alpha))
        )
        for beta, value in twice:
            if value:
                entries.append((alpha, beta, value))
    logger.debug("Curvature of %s has %d nonzero entries", context, len(entries))
    return tuple(entries)


def check_flat(context: GradedContext) -> None:
    entries = curvature(context)
    if entries:
        alpha, beta, value = entries[0]
        raise NonFlatConnection(f"R[{alpha}->{beta}] = {value}")


def potential(form: VectorValuedForm, n: int) -> VectorValuedForm:
    """A primitive ``ϑ = n⁻¹ i_Δ ω`` of a closed form of internal degree ``n``."""
    if n == 0:
        raise DegreeZero()
    if n < 0:
        raise DegreeError(f"Internal degree must be positive, got {n}")
    if form.is_zero():
        return form
    bidegree = form.homogeneous_bidegree()
    if bidegree.internal_degree != n:
        raise DegreeError(f"Form has internal degree {bidegree.internal_degree}, expected {n}")
    closure = de_rham(form)
    if closure:
        raise NotClosed(str(closure))
    result = insert(grading_derivation(form.context), form) * Fraction(1, n)
    if de_rham(result) != form:
        raise NotClosed(f"d(potential) differs from {form}")
    return result
