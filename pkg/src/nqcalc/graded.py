"""Exact bigraded-commutative polynomial algebra.

A :class:`GradedContext` fixes the generators of the algebra of functions and
forms on a graded chart: base coordinates (degree 0), fiber coordinates
(positive degree) and the differential ``d(g)`` of each of them.  Every
generator carries a form degree and an internal degree; signs follow the
Koszul rule for the parity of the total degree.

:class:`GradedPoly` stores a canonical sum of monomials.  A monomial is an
exponent tuple in the global generator order (base coordinates, fiber
coordinates, base differentials, fiber differentials); odd generators have
exponent 0 or 1 and their product is read in that order.
"""
import enum
from fractions import Fraction
from functools import lru_cache
from typing import (
    Any,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from nqcalc.errors import ContextError, ContextMismatch, DegreeError, UnknownGenerator

__all__ = [
    "GeneratorKind",
    "Generator",
    "Bidegree",
    "GradedContext",
    "GradedPoly",
    "Monomial",
    "Scalar",
    "SCALAR_COMPONENT",
    "ZERO",
    "MIXED",
    "normalize",
    "multiply",
    "add",
    "partial",
    "bidegree_of",
    "differential_name",
]

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]

SCALAR_COMPONENT = "value"
ZERO = "zero"
MIXED = "mixed"


def differential_name(name: str) -> str:
    return f"d({name})"


class GeneratorKind(enum.Enum):
    BASE = "base"
    FIBER = "fiber"
    BASE_DIFFERENTIAL = "base differential"
    FIBER_DIFFERENTIAL = "fiber differential"


class Generator:
    __slots__ = "name", "index", "kind", "internal_degree", "form_degree", "source"

    def __init__(
        self,
        name: str,
        index: int,
        kind: GeneratorKind,
        internal_degree: int,
        form_degree: int,
        source: Optional[str] = None,
    ) -> None:
        self.name = name
        self.index = index
        self.kind = kind
        self.internal_degree = internal_degree
        self.form_degree = form_degree
        # coordinate a differential was taken of
        self.source = source

    @property
    def parity(self) -> int:
        return (self.internal_degree + self.form_degree) % 2

    @property
    def is_odd(self) -> bool:
        return self.parity == 1

    @property
    def is_coordinate(self) -> bool:
        return self.form_degree == 0

    @property
    def is_differential(self) -> bool:
        return self.form_degree == 1

    def __repr__(self) -> str:
        return (
            f"Generator({self.name!r}, internal={self.internal_degree}, "
            f"form={self.form_degree})"
        )


class Bidegree(NamedTuple):
    form_degree: int
    internal_degree: int

    @property
    def total(self) -> int:
        return self.form_degree + self.internal_degree

    @property
    def parity(self) -> int:
        return self.total % 2

    def __str__(self) -> str:
        return f"(form {self.form_degree}, internal {self.internal_degree})"


ConnectionInput = Mapping[Tuple[str, str], Mapping[str, Any]]


class GradedContext:
    """Coordinate chart of a graded manifold together with a framed bundle E.

    ``connection[(x, alpha)][beta]`` is the coefficient Γ^β_{xα} of the flat
    connection, ``∇_{∂x} e_α = Σ_β Γ^β_{xα} e_β``.  Flatness is verified
    lazily by :func:`nqcalc.cartan.check_flat`.
    """

    __slots__ = (
        "generators",
        "base_coords",
        "fiber_coords",
        "frame",
        "connection",
        "odd_positions",
        "_index",
        "_flat",
    )

    def __init__(
        self,
        base_coords: Sequence[str],
        fiber_coords: Sequence[Tuple[str, int]] = (),
        frame: Sequence[str] = (),
        connection: Optional[ConnectionInput] = None,
    ) -> None:
        self.base_coords: Tuple[str, ...] = tuple(base_coords)
        self.fiber_coords: Tuple[str, ...] = tuple(name for name, _ in fiber_coords)
        self.frame: Tuple[str, ...] = tuple(frame)

        for name, degree in fiber_coords:
            if not isinstance(degree, int) or degree < 1:
                raise ContextError(
                    f"Fiber coordinate {name!r} must have a positive integer degree, "
                    f"got {degree!r}"
                )

        generators: List[Generator] = []
        for name in self.base_coords:
            generators.append(Generator(name, len(generators), GeneratorKind.BASE, 0, 0))
        for name, degree in fiber_coords:
            generators.append(
                Generator(name, len(generators), GeneratorKind.FIBER, degree, 0)
            )
        for name in self.base_coords:
            generators.append(
                Generator(
                    differential_name(name),
                    len(generators),
                    GeneratorKind.BASE_DIFFERENTIAL,
                    0,
                    1,
                    source=name,
                )
            )
        for name, degree in fiber_coords:
            generators.append(
                Generator(
                    differential_name(name),
                    len(generators),
                    GeneratorKind.FIBER_DIFFERENTIAL,
                    degree,
                    1,
                    source=name,
                )
            )
        self.generators: Tuple[Generator, ...] = tuple(generators)

        self._index: Dict[str, int] = {}
        for generator in self.generators:
            if generator.name in self._index:
                raise ContextError(f"Duplicate generator name {generator.name!r}")
            self._index[generator.name] = generator.index
        for name in self.frame:
            if name in self._index or self.frame.count(name) > 1:
                raise ContextError(f"Frame name {name!r} clashes with another name")
        if SCALAR_COMPONENT in self._index:
            raise ContextError(f"{SCALAR_COMPONENT!r} is reserved")

        self.odd_positions: Tuple[int, ...] = tuple(
            g.index for g in self.generators if g.is_odd
        )
        self.connection: Dict[Tuple[str, str], Dict[str, GradedPoly]] = {}
        self._flat: Optional[bool] = None
        if connection:
            self._load_connection(connection)

    def _load_connection(self, connection: ConnectionInput) -> None:
        for (coord, alpha), row in connection.items():
            if coord not in self.base_coords:
                raise ContextError(f"Connection row for unknown base coordinate {coord!r}")
            if alpha not in self.frame:
                raise ContextError(f"Connection row for unknown frame element {alpha!r}")
            clean: Dict[str, GradedPoly] = {}
            for beta, value in row.items():
                if beta not in self.frame:
                    raise ContextError(f"Connection entry for unknown frame element {beta!r}")
                poly = self.coerce(value)
                if not poly.is_base_function():
                    raise DegreeError(
                        f"Connection coefficient ({coord}, {alpha}, {beta}) = {poly} "
                        f"is not a base function"
                    )
                if poly:
                    clean[beta] = poly
            if clean:
                self.connection[(coord, alpha)] = clean

    # Construction helpers -------------------------------------------------

    def with_connection(self, connection: ConnectionInput) -> "GradedContext":
        return GradedContext(
            self.base_coords,
            self.fiber_degrees(),
            self.frame,
            connection,
        )

    def with_frame(
        self, frame: Sequence[str], connection: Optional[ConnectionInput] = None
    ) -> "GradedContext":
        return GradedContext(self.base_coords, self.fiber_degrees(), frame, connection)

    def fiber_degrees(self) -> List[Tuple[str, int]]:
        return [(name, self.degree_of(name)) for name in self.fiber_coords]

    # Lookup ----------------------------------------------------------------

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGenerator(name, self) from None

    def generator(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def degree_of(self, name: str) -> int:
        return self.generator(name).internal_degree

    def differential_of(self, name: str) -> Generator:
        return self.generator(differential_name(name))

    @property
    def coordinates(self) -> Tuple[str, ...]:
        return self.base_coords + self.fiber_coords

    @property
    def components(self) -> Tuple[str, ...]:
        return self.frame if self.frame else (SCALAR_COMPONENT,)

    @property
    def degree(self) -> int:
        return max((self.degree_of(z) for z in self.fiber_coords), default=0)

    @property
    def is_degree_one(self) -> bool:
        return all(self.degree_of(z) == 1 for z in self.fiber_coords)

    @property
    def size(self) -> int:
        return len(self.generators)

    @property
    def signature(self) -> Tuple[Tuple[str, int, int], ...]:
        return tuple((g.name, g.internal_degree, g.form_degree) for g in self.generators)

    def same_algebra(self, other: "GradedContext") -> bool:
        return self is other or self.signature == other.signature

    def connection_coefficient(self, coord: str, alpha: str, beta: str) -> "GradedPoly":
        return self.connection.get((coord, alpha), {}).get(beta, GradedPoly.zero(self))

    @property
    def has_connection(self) -> bool:
        return bool(self.connection)

    def coerce(self, value: Any) -> "GradedPoly":
        if isinstance(value, GradedPoly):
            return value.transfer(self)
        if isinstance(value, (int, Fraction)):
            return GradedPoly.constant(self, value)
        raise TypeError(f"Cannot interpret {value!r} as a polynomial")

    def _key(self) -> Tuple[Any, ...]:
        connection = tuple(
            (key, beta, tuple(sorted(poly.items())))
            for key, row in sorted(self.connection.items())
            for beta, poly in sorted(row.items())
        )
        return self.signature, self.frame, connection

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, GradedContext):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash((self.signature, self.frame))

    def __str__(self) -> str:
        fibers = ", ".join(f"{name}:{self.degree_of(name)}" for name in self.fiber_coords)
        parts = [f"base=[{', '.join(self.base_coords)}]", f"fiber=[{fibers}]"]
        if self.frame:
            parts.append(f"frame=[{', '.join(self.frame)}]")
        return f"GradedContext({'; '.join(parts)})"

    __repr__ = __str__


def _monomial_product(
    odd_positions: Sequence[int], left: Monomial, right: Monomial
) -> Tuple[int, Optional[Monomial]]:
    sign = 1
    for j in odd_positions:
        if right[j]:
            if left[j]:
                return 0, None
            for i in odd_positions:
                if i > j and left[i]:
                    sign = -sign
    return sign, tuple(a + b for a, b in zip(left, right))


def _format_coefficient(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class GradedPoly:
    __slots__ = "context", "_terms", "_hash"

    def __init__(
        self, context: GradedContext, terms: Optional[Mapping[Monomial, Scalar]] = None
    ) -> None:
        self.context = context
        self._terms: Dict[Monomial, Fraction] = {}
        self._hash: Optional[int] = None
        if terms:
            for monomial, coefficient in terms.items():
                if coefficient:
                    self._terms[monomial] = Fraction(coefficient)

    # Constructors -------------------------------------------------------------

    @classmethod
    def zero(cls, context: GradedContext) -> "GradedPoly":
        return cls(context)

    @classmethod
    def constant(cls, context: GradedContext, value: Scalar) -> "GradedPoly":
        return cls(context, {(0,) * context.size: value})

    @classmethod
    def generator(cls, context: GradedContext, name: str) -> "GradedPoly":
        exponents = [0] * context.size
        exponents[context.index(name)] = 1
        return cls(context, {tuple(exponents): 1})

    @classmethod
    def from_monomial(
        cls, context: GradedContext, powers: Mapping[str, int], coefficient: Scalar = 1
    ) -> "GradedPoly":
        result = cls.constant(context, coefficient)
        for name, power in powers.items():
            result = result * cls.generator(context, name) ** power
        return result

    # Introspection ------------------------------------------------------------

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Monomials in canonical printing order."""
        return sorted(self._terms.items(), key=lambda item: self._monomial_key(item[0]))

    def _monomial_key(self, monomial: Monomial) -> Tuple[Any, ...]:
        bidegree = self.monomial_bidegree(monomial)
        return bidegree.form_degree, bidegree.internal_degree, tuple(-e for e in monomial)

    def coefficient(self, monomial: Monomial) -> Fraction:
        return self._terms.get(monomial, Fraction(0))

    def monomial_bidegree(self, monomial: Monomial) -> Bidegree:
        form = internal = 0
        for generator, exponent in zip(self.context.generators, monomial):
            if exponent:
                form += exponent * generator.form_degree
                internal += exponent * generator.internal_degree
        return Bidegree(form, internal)

    def monomial_parity(self, monomial: Monomial) -> int:
        return self.monomial_bidegree(monomial).parity

    def monomial_names(self, monomial: Monomial) -> List[str]:
        return [g.name for g, e in zip(self.context.generators, monomial) if e]

    def bidegree(self) -> Union[Bidegree, str]:
        return bidegree_of(self)

    def homogeneous_bidegree(self) -> Bidegree:
        """Bidegree of a nonzero homogeneous polynomial, else DegreeError."""
        bidegree = bidegree_of(self)
        if not isinstance(bidegree, Bidegree):
            raise DegreeError(f"{self} has no single bidegree ({bidegree})")
        return bidegree

    def parity(self) -> int:
        parities = {self.monomial_parity(m) for m in self._terms}
        if len(parities) > 1:
            raise DegreeError(f"{self} has mixed parity")
        return parities.pop() if parities else 0

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((0,) * self.context.size, Fraction(0))

    def uses_only(self, names: Iterable[str]) -> bool:
        allowed = {self.context.index(name) for name in names}
        return all(
            i in allowed for monomial in self._terms for i, e in enumerate(monomial) if e
        )

    def is_base_function(self) -> bool:
        return self.uses_only(self.context.base_coords)

    def drop_generators(self, names: Iterable[str]) -> "GradedPoly":
        """Restriction to the locus where the named generators vanish."""
        indices = [self.context.index(name) for name in names]
        return GradedPoly(
            self.context,
            {m: c for m, c in self._terms.items() if not any(m[i] for i in indices)},
        )

    def transfer(self, context: GradedContext) -> "GradedPoly":
        """Re-express in another context that knows every generator used here."""
        if context is self.context:
            return self
        if context.same_algebra(self.context):
            return GradedPoly(context, self._terms)
        result = GradedPoly.zero(context)
        for monomial, coefficient in self._terms.items():
            powers = {
                self.context.generators[i].name: e for i, e in enumerate(monomial) if e
            }
            result = result + GradedPoly.from_monomial(context, powers, coefficient)
        return result

    # Arithmetic ---------------------------------------------------------------

    def _coerce(self, other: Any) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            if not self.context.same_algebra(other.context):
                raise ContextMismatch(self.context, other.context)
            return other
        if isinstance(other, (int, Fraction)):
            return GradedPoly.constant(self.context, other)
        return NotImplemented

    def __add__(self, other: Any) -> "GradedPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "GradedPoly":
        return GradedPoly(self.context, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> "GradedPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other: Any) -> "GradedPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(other, -self)

    def __mul__(self, other: Any) -> "GradedPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other: Any) -> "GradedPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "GradedPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"Exponent must be a natural number, got {exponent!r}")
        result = GradedPoly.constant(self.context, 1)
        for _ in range(exponent):
            result = multiply(result, self)
        return result

    def scale(self, factor: Scalar) -> "GradedPoly":
        factor = Fraction(factor)
        return GradedPoly(self.context, {m: c * factor for m, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GradedPoly.constant(self.context, other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.context.same_algebra(other.context) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # Printing -------------------------------------------------------------------

    def format_monomial(self, monomial: Monomial) -> str:
        factors = []
        for generator, exponent in zip(self.context.generators, monomial):
            if exponent == 1:
                factors.append(generator.name)
            elif exponent > 1:
                factors.append(f"{generator.name}^{exponent}")
        return "*".join(factors)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: List[str] = []
        for monomial, coefficient in self.terms():
            body = self.format_monomial(monomial)
            magnitude = abs(coefficient)
            if not body:
                text = _format_coefficient(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{_format_coefficient(magnitude)}*{body}"
            if not pieces:
                pieces.append(f"-{text}" if coefficient < 0 else text)
            else:
                pieces.append(f"- {text}" if coefficient < 0 else f"+ {text}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"GradedPoly({str(self)!r})"


RawTerm = Tuple[Scalar, Sequence[str]]


def normalize(context: GradedContext, raw_terms: Iterable[RawTerm]) -> GradedPoly:
    """Canonical form of a sum of ordered generator products.

    Each raw term is ``(coefficient, [generator names])`` read as the product
    of the generators in the given order.
    """
    result: Dict[Monomial, Fraction] = {}
    for coefficient, names in raw_terms:
        sign = 1
        monomial: Optional[Monomial] = (0,) * context.size
        for name in names:
            single = [0] * context.size
            single[context.index(name)] = 1
            factor_sign, monomial = _monomial_product(
                context.odd_positions, monomial, tuple(single)  # type: ignore
            )
            if monomial is None:
                break
            sign *= factor_sign
        if monomial is None:
            continue
        result[monomial] = result.get(monomial, Fraction(0)) + sign * Fraction(coefficient)
    return GradedPoly(context, result)


def _check_same(a: GradedPoly, b: GradedPoly) -> None:
    if not a.context.same_algebra(b.context):
        raise ContextMismatch(a.context, b.context)


def add(a: GradedPoly, b: GradedPoly) -> GradedPoly:
    _check_same(a, b)
    terms = dict(a._terms)
    for monomial, coefficient in b._terms.items():
        terms[monomial] = terms.get(monomial, Fraction(0)) + coefficient
    return GradedPoly(a.context, terms)


def multiply(a: GradedPoly, b: GradedPoly) -> GradedPoly:
    _check_same(a, b)
    odd = a.context.odd_positions
    terms: Dict[Monomial, Fraction] = {}
    for left, lc in a._terms.items():
        for right, rc in b._terms.items():
            sign, monomial = _monomial_product(odd, left, right)
            if monomial is None:
                continue
            terms[monomial] = terms.get(monomial, Fraction(0)) + sign * lc * rc
    return GradedPoly(a.context, terms)


def partial(p: GradedPoly, name: str, side: str = "left") -> GradedPoly:
    """Graded partial derivative with respect to a generator.

    The left derivative strips an odd generator after moving it to the front;
    ``side="right"`` moves it to the back instead.
    """
    context = p.context
    k = context.index(name)
    generator = context.generators[k]
    terms: Dict[Monomial, Fraction] = {}
    for monomial, coefficient in p._terms.items():
        exponent = monomial[k]
        if not exponent:
            continue
        if generator.is_odd:
            if side == "left":
                passed = sum(1 for i in context.odd_positions if i < k and monomial[i])
            else:
                passed = sum(1 for i in context.odd_positions if i > k and monomial[i])
            value = -coefficient if passed % 2 else coefficient
        else:
            value = coefficient * exponent
        lowered = monomial[:k] + (exponent - 1,) + monomial[k + 1 :]
        terms[lowered] = terms.get(lowered, Fraction(0)) + value
    return GradedPoly(context, terms)


def bidegree_of(p: GradedPoly) -> Union[Bidegree, str]:
    if p.is_zero():
        return ZERO
    bidegrees = {p.monomial_bidegree(m) for m in p._terms}
    if len(bidegrees) > 1:
        return MIXED
    return bidegrees.pop()


@lru_cache(maxsize=None)
def homogeneous_monomials(
    context: GradedContext, form_degree: int, internal_degree: int, max_base_power: int = 1
) -> Tuple[Monomial, ...]:
    """All monomials of a bidegree with base exponents bounded by ``max_base_power``."""
    found: List[Monomial] = []
    generators = context.generators

    def walk(position: int, prefix: List[int], form: int, internal: int) -> None:
        if position == len(generators):
            if form == 0 and internal == 0:
                found.append(tuple(prefix))
            return
        generator = generators[position]
        if generator.is_odd:
            limit = 1
        elif generator.form_degree == 0 and generator.internal_degree == 0:
            limit = max_base_power
        else:
            limit = min(
                form // generator.form_degree if generator.form_degree else form + internal,
                internal // generator.internal_degree
                if generator.internal_degree
                else form + internal,
            )
        for exponent in range(limit + 1):
            rest_form = form - exponent * generator.form_degree
            rest_internal = internal - exponent * generator.internal_degree
            if rest_form < 0 or rest_internal < 0:
                break
            prefix.append(exponent)
            walk(position + 1, prefix, rest_form, rest_internal)
            prefix.pop()

    walk(0, [], form_degree, internal_degree)
    return tuple(found)
