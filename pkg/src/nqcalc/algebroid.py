"""Degree-one NQ structures and Lie algebroids.

A Lie algebroid ``A → M`` with a representation on E is encoded on the chart
``A[1]`` (base coordinates ``x``, degree-one fiber coordinates ``ξ^a`` dual to
the frame ``e_a``) by the homological derivation

    ℚ = ρ^i_a ξ^a ∂_{x^i} - ½ c^c_{ab} ξ^a ξ^b ∂_{ξ^c},   ℚ e_α = ξ^a N^β_{aα} e_β

and recovered through ``ρ(e_a) = [ℚ, ∂_a]`` on functions,
``[[e_a, e_b]] = [[ℚ, ∂_a], ∂_b]`` and ``∇_{e_a} = [ℚ, ∂_a]`` on the frame.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from nqcalc.cartan import (
    Derivation,
    VectorValuedForm,
    commutator,
    partial_field,
    vector_field,
)
from nqcalc.checks import CheckResult, CheckSuite, first_failure
from nqcalc.errors import (
    AntisymmetryError,
    ArityMismatch,
    DegreeError,
    FrameMismatch,
    NotHomological,
    WrongDegree,
)
from nqcalc.graded import GradedContext, GradedPoly, partial

__all__ = [
    "Section",
    "AlgebroidData",
    "HomologicalReport",
    "AxiomReport",
    "build_homological_vf",
    "build_homological_derivation",
    "check_homological",
    "extract_algebroid",
    "algebroid_axioms",
    "chevalley_eilenberg",
    "ce_to_function",
    "function_to_ce",
]

logger = logging.getLogger(__name__)

Section = Dict[str, GradedPoly]


def _base_function(context: GradedContext, value: Any, what: str) -> GradedPoly:
    poly = context.coerce(value)
    if not poly.is_base_function():
        raise DegreeError(f"{what} = {poly} is not a function on the base")
    return poly


class AlgebroidData:
    """Anchor, structure functions and representation coefficients in a frame.

    ``anchor[(a, x)] = ρ^x_a``, ``structure[(a, b, c)] = c^c_{ab}`` and
    ``representation[(a, α, β)]`` is the coefficient of ``e_β`` in
    ``∇_{e_a} e_α``.  The representation lives on the frame of the context;
    a context without frame carries none.
    """

    __slots__ = "context", "frame", "anchor", "structure", "representation"

    def __init__(
        self,
        context: GradedContext,
        anchor: Optional[Mapping[Tuple[str, str], Any]] = None,
        structure: Optional[Mapping[Tuple[str, str, str], Any]] = None,
        representation: Optional[Mapping[Tuple[str, str, str], Any]] = None,
    ) -> None:
        if not context.is_degree_one:
            raise FrameMismatch(f"{context} is not of the form A[1]")
        self.context = context
        self.frame: Tuple[str, ...] = context.fiber_coords
        self.anchor: Dict[Tuple[str, str], GradedPoly] = {}
        self.structure: Dict[Tuple[str, str, str], GradedPoly] = {}
        self.representation: Dict[Tuple[str, str, str], GradedPoly] = {}

        for (a, x), value in (anchor or {}).items():
            self._require_frame(a)
            if x not in context.base_coords:
                raise FrameMismatch(f"Anchor component along unknown base coordinate {x!r}")
            poly = _base_function(context, value, f"rho[{a}, {x}]")
            if poly:
                self.anchor[(a, x)] = poly

        given: Dict[Tuple[str, str, str], GradedPoly] = {}
        for (a, b, c), value in (structure or {}).items():
            for name in (a, b, c):
                self._require_frame(name)
            given[(a, b, c)] = _base_function(context, value, f"c[{a}, {b}, {c}]")
        for (a, b, c), poly in given.items():
            mirror = given.get((b, a, c))
            if (a == b and poly) or (mirror is not None and mirror != -poly):
                raise AntisymmetryError("Structure functions", (a, b, c))
            if poly:
                self.structure[(a, b, c)] = poly
                self.structure[(b, a, c)] = -poly

        if representation and not context.frame:
            raise FrameMismatch("Representation coefficients need a frame on the context")
        for (a, alpha, beta), value in (representation or {}).items():
            self._require_frame(a)
            if alpha not in context.frame or beta not in context.frame:
                raise FrameMismatch(f"Representation entry ({alpha}, {beta}) outside the frame")
            poly = _base_function(context, value, f"N[{a}, {alpha}, {beta}]")
            if poly:
                self.representation[(a, alpha, beta)] = poly

    def _require_frame(self, name: str) -> None:
        if name not in self.frame:
            raise FrameMismatch(f"{name!r} is not an element of the frame {self.frame}")

    @property
    def has_representation(self) -> bool:
        return bool(self.context.frame)

    @property
    def rank(self) -> int:
        return len(self.frame)

    def _zero(self) -> GradedPoly:
        return GradedPoly.zero(self.context)

    def anchor_entry(self, a: str, x: str) -> GradedPoly:
        return self.anchor.get((a, x), self._zero())

    def structure_entry(self, a: str, b: str, c: str) -> GradedPoly:
        return self.structure.get((a, b, c), self._zero())

    def representation_entry(self, a: str, alpha: str, beta: str) -> GradedPoly:
        return self.representation.get((a, alpha, beta), self._zero())

    # Non-graded operations on sections --------------------------------------

    def frame_section(self, a: str) -> Section:
        self._require_frame(a)
        return {a: GradedPoly.constant(self.context, 1)}

    def anchor_field(self, a: str) -> Derivation:
        """``ρ(e_a)`` as a vector field on the base."""
        return vector_field(
            self.context,
            {x: self.anchor_entry(a, x) for x in self.context.base_coords},
            degree=0,
        )

    def anchor_of(self, section: Mapping[str, GradedPoly]) -> Derivation:
        result = Derivation.zero(self.context)
        for a, coefficient in section.items():
            result = result + coefficient * self.anchor_field(a)
        return result

    def bracket(self, first: Mapping[str, GradedPoly], second: Mapping[str, GradedPoly]) -> Section:
        result: Section = {}

        def accumulate(c: str, value: GradedPoly) -> None:
            if value:
                result[c] = result.get(c, self._zero()) + value

        for a, f in first.items():
            for b, g in second.items():
                for c in self.frame:
                    accumulate(c, f * g * self.structure_entry(a, b, c))
                accumulate(b, f * self.anchor_field(a).apply(g))
                accumulate(a, -(g * self.anchor_field(b).apply(f)))
        return {c: v for c, v in result.items() if v}

    def covariant(self, a: str) -> Derivation:
        """``∇_{e_a}`` acting on E-valued forms of the base."""
        endo = {
            (alpha, beta): self.representation_entry(a, alpha, beta)
            for alpha in self.context.frame
            for beta in self.context.frame
        }
        return Derivation(
            self.context,
            {x: self.anchor_entry(a, x) for x in self.context.base_coords},
            endo,
            0,
            0,
        )

    def covariant_of(self, section: Mapping[str, GradedPoly]) -> Derivation:
        result = Derivation.zero(self.context)
        for a, coefficient in section.items():
            result = result + coefficient * self.covariant(a)
        return result

    def section_to_field(self, section: Mapping[str, GradedPoly]) -> Derivation:
        """The degree ``-1`` vector field ``Σ f_a ∂_{ξ^a}`` of a section."""
        return vector_field(self.context, dict(section), degree=-1)

    def field_to_section(self, field: Derivation) -> Section:
        return {a: field.value(a) for a in self.frame if field.value(a)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebroidData):
            return NotImplemented
        return (
            self.context.same_algebra(other.context)
            and self.anchor == other.anchor
            and self.structure == other.structure
            and self.representation == other.representation
        )

    __hash__ = None  # type: ignore

    def __str__(self) -> str:
        lines = [f"AlgebroidData(frame={list(self.frame)})"]
        for (a, x), value in sorted(self.anchor.items()):
            lines.append(f"  rho({a})({x}) = {value}")
        for (a, b, c), value in sorted(self.structure.items()):
            if self.frame.index(a) < self.frame.index(b):
                lines.append(f"  [{a},{b}]^{c} = {value}")
        for (a, alpha, beta), value in sorted(self.representation.items()):
            lines.append(f"  nabla({a}) {alpha} -> {beta}: {value}")
        return "\n".join(lines)


def build_homological_vf(algebroid: AlgebroidData) -> Derivation:
    context = algebroid.context
    xi = {a: GradedPoly.generator(context, a) for a in algebroid.frame}
    values: Dict[str, GradedPoly] = {}
    for x in context.base_coords:
        values[x] = sum(
            (xi[a] * algebroid.anchor_entry(a, x) for a in algebroid.frame),
            GradedPoly.zero(context),
        )
    half = Fraction(-1, 2)
    for c in algebroid.frame:
        values[c] = sum(
            (
                xi[a] * xi[b] * algebroid.structure_entry(a, b, c) * half
                for a in algebroid.frame
                for b in algebroid.frame
            ),
            GradedPoly.zero(context),
        )
    return vector_field(context, values, degree=1)


def build_homological_derivation(algebroid: AlgebroidData) -> Derivation:
    if not algebroid.has_representation:
        raise FrameMismatch("A representation needs a frame on the context")
    context = algebroid.context
    symbol = build_homological_vf(algebroid)
    endo: Dict[Tuple[str, str], GradedPoly] = {}
    for (a, alpha, beta), value in algebroid.representation.items():
        entry = GradedPoly.generator(context, a) * value
        endo[(alpha, beta)] = endo.get((alpha, beta), GradedPoly.zero(context)) + entry
    return Derivation(context, symbol.values, endo, 1, 0)


@dataclass(frozen=True)
class HomologicalReport(CheckSuite):
    check_result: CheckResult

    def all_checks(self) -> Sequence[CheckResult]:
        return (self.check_result,)

    @property
    def witness(self) -> Optional[str]:
        return self.check_result.witness


def _square_cases(square: Derivation) -> Iterator[Tuple[str, GradedPoly]]:
    context = square.context
    for generator in context.generators:
        yield f"[Q,Q]({generator.name})", square.value(generator.name)
    for alpha in context.frame:
        for beta in context.frame:
            yield f"[Q,Q]({alpha}->{beta})", square.endo_entry(alpha, beta)


def check_homological(Q: Derivation) -> HomologicalReport:
    if not Q.is_zero() and (Q.degree, Q.form_degree) != (1, 0):
        raise WrongDegree(1, Q.degree)
    square = commutator(Q, Q)
    report = HomologicalReport(first_failure("homological", _square_cases(square)))
    logger.debug("check_homological: %s", report.check_result)
    return report


def extract_algebroid(Q: Derivation) -> AlgebroidData:
    context = Q.context
    if not context.is_degree_one:
        raise DegreeError(f"{context} is not a degree one chart")
    report = check_homological(Q)
    if not report.passed:
        raise NotHomological(report.witness)
    anchor: Dict[Tuple[str, str], GradedPoly] = {}
    structure: Dict[Tuple[str, str, str], GradedPoly] = {}
    representation: Dict[Tuple[str, str, str], GradedPoly] = {}
    for a in context.fiber_coords:
        transported = commutator(Q, partial_field(context, a))
        for x in context.base_coords:
            anchor[(a, x)] = transported.value(x)
        for (alpha, beta), value in transported.endo.items():
            representation[(a, alpha, beta)] = value
        for b in context.fiber_coords:
            bracket = commutator(transported, partial_field(context, b))
            for c in context.fiber_coords:
                structure[(a, b, c)] = bracket.value(c)
    return AlgebroidData(context, anchor, structure, representation)


@dataclass(frozen=True)
class AxiomReport(CheckSuite):
    jacobi: CheckResult
    anchor_morphism: CheckResult
    flat_representation: CheckResult

    def all_checks(self) -> Sequence[CheckResult]:
        return self.jacobi, self.anchor_morphism, self.flat_representation


def _add_sections(*sections: Section) -> Section:
    result: Section = {}
    for section in sections:
        for a, value in section.items():
            result[a] = result[a] + value if a in result else value
    return {a: v for a, v in result.items() if v}


def _format_section(section: Mapping[str, GradedPoly]) -> str:
    return " + ".join(f"({v})*{a}" for a, v in section.items()) or "0"


def algebroid_axioms(algebroid: AlgebroidData) -> AxiomReport:
    """Non-graded check of the Jacobi identity, the anchor and the flatness of ∇."""
    frame = algebroid.frame
    section = algebroid.frame_section

    def jacobi_cases() -> Iterator[Tuple[str, str]]:
        for a, b, c in itertools.combinations(frame, 3):
            jacobiator = _add_sections(
                algebroid.bracket(section(a), algebroid.bracket(section(b), section(c))),
                algebroid.bracket(section(b), algebroid.bracket(section(c), section(a))),
                algebroid.bracket(section(c), algebroid.bracket(section(a), section(b))),
            )
            yield f"Jac({a},{b},{c})", _format_section(jacobiator) if jacobiator else ""

    def anchor_cases() -> Iterator[Tuple[str, str]]:
        for a, b in itertools.combinations(frame, 2):
            defect = algebroid.anchor_of(algebroid.bracket(section(a), section(b))) - commutator(
                algebroid.anchor_field(a), algebroid.anchor_field(b)
            )
            yield f"rho([{a},{b}]) - [rho({a}),rho({b})]", str(defect) if not defect.is_zero() else ""

    def curvature_cases() -> Iterator[Tuple[str, VectorValuedForm]]:
        context = algebroid.context
        for a, b in itertools.combinations(frame, 2):
            bracket = algebroid.covariant_of(algebroid.bracket(section(a), section(b)))
            for alpha in context.frame:
                e = VectorValuedForm.frame_element(context, alpha)
                value = (
                    algebroid.covariant(a).apply_form(algebroid.covariant(b).apply_form(e))
                    - algebroid.covariant(b).apply_form(algebroid.covariant(a).apply_form(e))
                    - bracket.apply_form(e)
                )
                yield f"R({a},{b}){alpha}", value

    return AxiomReport(
        first_failure("jacobi", jacobi_cases()),
        first_failure("anchor-morphism", anchor_cases()),
        first_failure("flat-representation", curvature_cases()),
    )


# Chevalley–Eilenberg complex ----------------------------------------------

CochainInput = Mapping[Tuple[str, ...], Union[VectorValuedForm, GradedPoly]]
Cochain = Dict[Tuple[str, ...], VectorValuedForm]


def _as_form(context: GradedContext, value: Union[VectorValuedForm, GradedPoly]) -> VectorValuedForm:
    if isinstance(value, VectorValuedForm):
        return value
    return VectorValuedForm.scalar(context.coerce(value))


def _permutation_sign(order: Sequence[int]) -> int:
    sign = 1
    for i, j in itertools.combinations(range(len(order)), 2):
        if order[i] > order[j]:
            sign = -sign
    return sign


class _Cochain:
    __slots__ = "algebroid", "arity", "values"

    def __init__(self, algebroid: AlgebroidData, phi: CochainInput, arity: Optional[int]) -> None:
        self.algebroid = algebroid
        arities = {len(key) for key in phi}
        if len(arities) > 1 or (arity is not None and arities and arities != {arity}):
            raise ArityMismatch(f"Cochain entries have arities {sorted(arities)}")
        self.arity = arity if arity is not None else (arities.pop() if arities else 0)
        self.values: Cochain = {}
        for key, value in phi.items():
            canonical, sign = self.canonical(key)
            if canonical is None:
                raise ArityMismatch(f"Cochain entry {key} repeats an argument")
            self.values[canonical] = _as_form(algebroid.context, value) * sign

    def canonical(self, key: Sequence[str]) -> Tuple[Optional[Tuple[str, ...]], int]:
        for a in key:
            self.algebroid._require_frame(a)
        if len(set(key)) < len(key):
            return None, 0
        positions = [self.algebroid.frame.index(a) for a in key]
        ordered = tuple(sorted(key, key=self.algebroid.frame.index))
        return ordered, _permutation_sign(positions)

    def __call__(self, key: Sequence[str]) -> VectorValuedForm:
        zero = VectorValuedForm.zero(self.algebroid.context)
        canonical, sign = self.canonical(key)
        if canonical is None:
            return zero
        value = self.values.get(canonical)
        return value * sign if value is not None else zero


def chevalley_eilenberg(
    algebroid: AlgebroidData, phi: CochainInput, arity: Optional[int] = None
) -> Cochain:
    """Components of ``d_E φ`` on increasing tuples of frame elements."""
    cochain = _Cochain(algebroid, phi, arity)
    frame = algebroid.frame
    context = algebroid.context
    result: Cochain = {}
    for arguments in itertools.combinations(frame, cochain.arity + 1):
        total = VectorValuedForm.zero(context)
        for i, a in enumerate(arguments):
            rest = arguments[:i] + arguments[i + 1 :]
            sign = 1 if i % 2 == 0 else -1
            total = total + algebroid.covariant(a).apply_form(cochain(rest)) * sign
        for i, j in itertools.combinations(range(len(arguments)), 2):
            rest = tuple(a for k, a in enumerate(arguments) if k not in (i, j))
            sign = 1 if (i + j) % 2 == 0 else -1
            for c in frame:
                coefficient = algebroid.structure_entry(arguments[i], arguments[j], c)
                if coefficient:
                    total = total + coefficient * cochain((c,) + rest) * sign
        if total:
            result[arguments] = total
    return result


def ce_to_function(
    algebroid: AlgebroidData, phi: CochainInput, arity: Optional[int] = None
) -> VectorValuedForm:
    """The E-valued function on A[1] of a cochain: ``Σ ξ^{a₁}⋯ξ^{a_k} φ(e_{a₁},…,e_{a_k})``."""
    cochain = _Cochain(algebroid, phi, arity)
    context = algebroid.context
    result = VectorValuedForm.zero(context)
    for key, value in cochain.values.items():
        monomial = GradedPoly.constant(context, 1)
        for a in key:
            monomial = monomial * GradedPoly.generator(context, a)
        result = result + monomial * value
    return result


def function_to_ce(algebroid: AlgebroidData, function: VectorValuedForm, arity: int) -> Cochain:
    result: Cochain = {}
    for arguments in itertools.combinations(algebroid.frame, arity):
        value = function
        for a in arguments:
            value = value.map(lambda p, a=a: partial(p, a))
        value = value.map(lambda p: p.drop_generators(algebroid.frame))
        if value:
            result[arguments] = value
    return result
