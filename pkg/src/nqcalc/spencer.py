"""Spencer data of vector-valued forms.

A degree ``n`` E-valued ``k``-form ω on a chart of positive degree is the same
as the pair ``D(X) = L_X ω``, ``ℓ(X) = i_X ω`` on negatively graded vector
fields.  Both are stored on the monomial basis ``z^{b₁}⋯z^{b_j} ∂_b`` and
extended to base-function multiples by the Leibniz rule
``D(fX) = f D(X) + (-1)^{|X|} df ℓ(X)``.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from nqcalc.cartan import (
    Derivation,
    VectorValuedForm,
    commutator,
    de_rham,
    exterior_derivative,
    insert,
    lie_derive,
    vector_field,
)
from nqcalc.checks import CheckResult, CheckSuite, first_failure
from nqcalc.errors import DegreeError, DegreeZero, InvalidSpencerData
from nqcalc.graded import (
    Bidegree,
    GradedContext,
    GradedPoly,
    Monomial,
    differential_name,
    homogeneous_monomials,
)

__all__ = [
    "BasisField",
    "NegBasis",
    "SpencerData",
    "SpencerReport",
    "negative_basis",
    "extract_spencer",
    "reconstruct_form",
    "validate_spencer",
    "differential_spencer",
]

logger = logging.getLogger(__name__)

FieldOperator = Callable[[Derivation], VectorValuedForm]


class BasisField:
    __slots__ = "label", "field", "target", "monomial", "degree"

    def __init__(self, label: str, field: Derivation, target: str, monomial: Monomial) -> None:
        self.label = label
        self.field = field
        self.target = target
        self.monomial = monomial
        self.degree = field.degree

    def __repr__(self) -> str:
        return f"BasisField({self.label!r}, degree={self.degree})"


def basis_label(context: GradedContext, monomial: Monomial, target: str) -> str:
    prefix = GradedPoly(context).format_monomial(monomial)
    return f"{prefix}*del({target})" if prefix else f"del({target})"


class NegBasis:
    """Monomial vector fields of negative degree, ordered by target then degree."""

    __slots__ = "context", "fields", "_by_key", "_by_label"

    def __init__(self, context: GradedContext) -> None:
        self.context = context
        fields: List[BasisField] = []
        for target in context.fiber_coords:
            target_degree = context.degree_of(target)
            for degree in range(target_degree):
                for monomial in homogeneous_monomials(context, 0, degree, 0):
                    coefficient = GradedPoly(context, {monomial: 1})
                    field = vector_field(
                        context, {target: coefficient}, degree=degree - target_degree
                    )
                    fields.append(
                        BasisField(basis_label(context, monomial, target), field, target, monomial)
                    )
        self.fields: Tuple[BasisField, ...] = tuple(fields)
        self._by_key = {(f.monomial, f.target): f for f in self.fields}
        self._by_label = {f.label: f for f in self.fields}

    def __iter__(self) -> Iterator[BasisField]:
        return iter(self.fields)

    def __len__(self) -> int:
        return len(self.fields)

    def __getitem__(self, label: str) -> BasisField:
        return self._by_label[label]

    def __contains__(self, label: object) -> bool:
        return label in self._by_label

    @property
    def labels(self) -> List[str]:
        return [f.label for f in self.fields]

    def coordinate_field(self, name: str) -> BasisField:
        """The basis element ``∂_name``."""
        return self._by_key[((0,) * self.context.size, name)]

    def decompose(self, field: Derivation) -> List[Tuple[GradedPoly, BasisField]]:
        """Write a negatively graded field as ``Σ f_j X_j`` with base functions ``f_j``."""
        context = self.context
        if field.is_zero():
            return []
        if field.degree >= 0 or not field.is_vector_field():
            raise DegreeError(f"{field} is not a negatively graded vector field")
        base = {context.index(name) for name in context.base_coords}
        fiber = {context.index(name) for name in context.fiber_coords}
        collected: Dict[str, Tuple[Dict[Monomial, Fraction], BasisField]] = {}
        for target, coefficient in field.values.items():
            for monomial, value in coefficient.items():
                if any(e and i not in base and i not in fiber for i, e in enumerate(monomial)):
                    raise DegreeError(f"{field} has form-valued coefficients")
                base_part = tuple(e if i in base else 0 for i, e in enumerate(monomial))
                fiber_part = tuple(e if i in fiber else 0 for i, e in enumerate(monomial))
                try:
                    element = self._by_key[(fiber_part, target)]
                except KeyError:
                    raise DegreeError(f"{field} is not negatively graded") from None
                terms, _ = collected.setdefault(element.label, ({}, element))
                terms[base_part] = terms.get(base_part, Fraction(0)) + value
        return [
            (GradedPoly(context, terms), element)
            for terms, element in (collected[label] for label in self.labels if label in collected)
        ]


@lru_cache(maxsize=None)
def negative_basis(context: GradedContext) -> NegBasis:
    return NegBasis(context)


class SpencerData:
    """The pair ``(D, ℓ)`` of order ``k`` and internal degree ``n``.

    Values live on :class:`NegBasis` labels.  ``D_operator``/``ell_operator``
    replace the basis extension by arbitrary maps on vector fields, which is
    how data that may violate the Leibniz rule are represented.
    """

    __slots__ = "context", "order", "degree", "basis", "_D", "_ell", "_D_operator", "_ell_operator"

    def __init__(
        self,
        context: GradedContext,
        order: int,
        degree: int,
        D: Optional[Mapping[str, VectorValuedForm]] = None,
        ell: Optional[Mapping[str, VectorValuedForm]] = None,
        D_operator: Optional[FieldOperator] = None,
        ell_operator: Optional[FieldOperator] = None,
    ) -> None:
        if degree == 0:
            raise DegreeZero()
        if order < 0 or degree < 0:
            raise DegreeError(f"Order and degree must be positive, got {order}, {degree}")
        self.context = context
        self.order = order
        self.degree = degree
        self.basis = negative_basis(context)
        for label in list(D or {}) + list(ell or {}):
            if label not in self.basis:
                raise DegreeError(f"{label!r} is not a negatively graded basis field")
        self._D: Dict[str, VectorValuedForm] = dict(D or {})
        self._ell: Dict[str, VectorValuedForm] = dict(ell or {})
        self._D_operator = D_operator
        self._ell_operator = ell_operator

    def _stored(self, table: Dict[str, VectorValuedForm], label: str) -> VectorValuedForm:
        return table.get(label) or VectorValuedForm.zero(self.context)

    def D_of(self, field: Derivation) -> VectorValuedForm:
        if self._D_operator is not None:
            return self._D_operator(field)
        result = VectorValuedForm.zero(self.context)
        for coefficient, element in self.basis.decompose(field):
            sign = -1 if element.degree % 2 else 1
            result = (
                result
                + coefficient * self._stored(self._D, element.label)
                + sign * exterior_derivative(coefficient) * self._stored(self._ell, element.label)
            )
        return result

    def ell_of(self, field: Derivation) -> VectorValuedForm:
        if self._ell_operator is not None:
            return self._ell_operator(field)
        result = VectorValuedForm.zero(self.context)
        for coefficient, element in self.basis.decompose(field):
            result = result + coefficient * self._stored(self._ell, element.label)
        return result

    def D(self, label: str) -> VectorValuedForm:
        return self.D_of(self.basis[label].field)

    def ell(self, label: str) -> VectorValuedForm:
        return self.ell_of(self.basis[label].field)

    def tabulate(self) -> List[Tuple[str, VectorValuedForm, VectorValuedForm]]:
        return [(f.label, self.D_of(f.field), self.ell_of(f.field)) for f in self.basis]

    def literature_sign(self) -> "SpencerData":
        """The same data in the convention where D carries the opposite sign."""
        return SpencerData(
            self.context,
            self.order,
            self.degree,
            {label: -d for label, d, _ in self.tabulate()},
            {label: l for label, _, l in self.tabulate()},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpencerData):
            return NotImplemented
        return (
            self.context.same_algebra(other.context)
            and (self.order, self.degree) == (other.order, other.degree)
            and self.tabulate() == other.tabulate()
        )

    __hash__ = None  # type: ignore

    def __str__(self) -> str:
        lines = [f"SpencerData(order={self.order}, degree={self.degree})"]
        for label, d, l in self.tabulate():
            lines.append(f"  D({label}) = {d}")
            lines.append(f"  ell({label}) = {l}")
        return "\n".join(lines)


@dataclass(frozen=True)
class SpencerReport(CheckSuite):
    checks: Tuple[CheckResult, ...]

    def all_checks(self) -> Sequence[CheckResult]:
        return self.checks


def extract_spencer(
    form: VectorValuedForm, order: Optional[int] = None, degree: Optional[int] = None
) -> SpencerData:
    context = form.context
    if form.is_zero():
        return SpencerData(context, order or 0, degree or 1)
    bidegree = form.homogeneous_bidegree()
    if bidegree.internal_degree == 0:
        raise DegreeZero()
    basis = negative_basis(context)
    D = {f.label: lie_derive(f.field, form) for f in basis}
    ell = {f.label: insert(f.field, form) for f in basis}
    logger.debug("Extracted Spencer data on %d basis fields", len(basis))
    return SpencerData(context, bidegree.form_degree, bidegree.internal_degree, D, ell)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _degree_check(data: SpencerData) -> CheckResult:
    cases = []
    for element in data.basis:
        expected_internal = data.degree + element.degree
        for kind, value, form_degree in (
            ("D", data.D_of(element.field), data.order),
            ("ell", data.ell_of(element.field), data.order - 1),
        ):
            if value.is_zero():
                continue
            bidegree = value.bidegree()
            if bidegree != Bidegree(form_degree, expected_internal):
                cases.append(
                    (f"{kind}({element.label}) has bidegree {bidegree}", "expected "
                     f"{Bidegree(form_degree, expected_internal)}")
                )
    return first_failure("degree", cases)


def validate_spencer(data: SpencerData) -> SpencerReport:
    context = data.context
    basis = list(data.basis)
    D = {f.label: data.D_of(f.field) for f in basis}
    ell = {f.label: data.ell_of(f.field) for f in basis}

    def leibniz_cases() -> Iterator[Tuple[str, VectorValuedForm]]:
        for element in basis:
            for name in context.base_coords:
                f = GradedPoly.generator(context, name)
                shifted = f * element.field
                value = (
                    data.D_of(shifted)
                    - f * D[element.label]
                    - _sign(element.degree) * exterior_derivative(f) * ell[element.label]
                )
                linear = data.ell_of(shifted) - f * ell[element.label]
                yield f"X={element.label}, f={name}", value
                yield f"X={element.label}, f={name} (ell linearity)", linear

    def pair_cases(kind: str) -> Iterator[Tuple[str, VectorValuedForm]]:
        for X in basis:
            for Y in basis:
                x, y = X.degree, Y.degree
                label = f"X={X.label}, Y={Y.label}"
                if kind == "insertion-symmetry":
                    value = insert(X.field, ell[Y.label]) - _sign((x - 1) * (y - 1)) * insert(
                        Y.field, ell[X.label]
                    )
                    yield label, value
                    continue
                bracket = commutator(X.field, Y.field)
                if kind == "lie-bracket":
                    value = (
                        lie_derive(X.field, D[Y.label])
                        - _sign(x * y) * lie_derive(Y.field, D[X.label])
                        - data.D_of(bracket)
                    )
                else:
                    value = (
                        lie_derive(X.field, ell[Y.label])
                        - _sign(x * (y - 1)) * insert(Y.field, D[X.label])
                        - data.ell_of(bracket)
                    )
                yield label, value

    checks = (
        _degree_check(data),
        first_failure("leibniz", leibniz_cases()),
        first_failure("lie-bracket", pair_cases("lie-bracket")),
        first_failure("mixed-bracket", pair_cases("mixed-bracket")),
        first_failure("insertion-symmetry", pair_cases("insertion-symmetry")),
    )
    report = SpencerReport(checks)
    logger.debug("Spencer validation: %s", ", ".join(str(c) for c in checks))
    return report


def reconstruct_form(data: SpencerData) -> VectorValuedForm:
    report = validate_spencer(data)
    if not report.passed:
        raise InvalidSpencerData(report)
    context = data.context
    result = VectorValuedForm.zero(context)
    for name in context.fiber_coords:
        element = data.basis.coordinate_field(name)
        weight = Fraction(context.degree_of(name), data.degree)
        z = GradedPoly.generator(context, name)
        dz = GradedPoly.generator(context, differential_name(name))
        term = z * data.D_of(element.field) + dz * data.ell_of(element.field)
        result = result + term * weight
    return result


def differential_spencer(data: SpencerData) -> SpencerData:
    """Spencer data of ``d_∇ω`` in terms of those of ω."""
    D: Dict[str, VectorValuedForm] = {}
    ell: Dict[str, VectorValuedForm] = {}
    for label, d_value, ell_value in data.tabulate():
        element = data.basis[label]
        D[label] = _sign(element.degree) * de_rham(d_value)
        ell[label] = d_value - _sign(element.degree) * de_rham(ell_value)
    return SpencerData(data.context, data.order + 1, data.degree, D, ell)
