"""Higher order forms on degree-one NQ-manifolds.

A degree one E-valued k-form on ``A[1]`` compatible with ℚ is the same as a
Spencer operator ``(D, ℓ)`` on the Lie algebroid A with values in the
representation E:

    D(fX) = f D(X) - df∧ℓ(X)
    L_{∇X} D(Y) - L_{∇Y} D(X) = D([[X,Y]])
    L_{∇X} ℓ(Y) + i_{ρ(Y)} D(X) = ℓ([[X,Y]])
    i_{ρ(X)} ℓ(Y) + i_{ρ(Y)} ℓ(X) = 0

Replacing ``D → -D`` gives the sign convention common in the literature.

For a closed scalar ``(k+1)``-form, D is ``-d∘ℓ`` and the last three lines
reduce to the IM k-plectic conditions on ℓ; non-degeneracy of the form is
``ker ℓ = 0`` together with ``(im ℓ)° = 0``.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from nqcalc.algebroid import (
    AlgebroidData,
    build_homological_derivation,
    build_homological_vf,
    check_homological,
)
from nqcalc.cartan import (
    Derivation,
    VectorValuedForm,
    de_rham,
    insert,
    lie_derive,
    partial_field,
)
from nqcalc.checks import CheckResult, CheckSuite, first_failure
from nqcalc.classifiers.compat import CompatReport, check_compat, closed_form_from_ell
from nqcalc.errors import FrameMismatch, InvalidSpencerData, NotHomological
from nqcalc.graded import Bidegree, GradedContext, GradedPoly, differential_name, partial
from nqcalc.spencer import SpencerData, negative_basis, reconstruct_form
from nqcalc.symbolic import GENERIC, Nondegeneracy, injectivity

__all__ = [
    "LITERATURE_NOTE",
    "SpencerOperatorReport",
    "KplecticReport",
    "spencer_operator_data",
    "check_spencer_operator",
    "check_im_kplectic",
    "form_rows",
    "zero_section_rows",
]

logger = logging.getLogger(__name__)

LITERATURE_NOTE = "D -> -D gives the sign convention of the literature"

FieldOperator = Callable[[Derivation], VectorValuedForm]
OperatorInput = Union[Mapping[str, VectorValuedForm], FieldOperator]


def _homological(algebroid: AlgebroidData) -> Derivation:
    if algebroid.has_representation:
        Q = build_homological_derivation(algebroid)
    else:
        Q = build_homological_vf(algebroid)
    report = check_homological(Q)
    if not report.passed:
        raise NotHomological(report.witness)
    return Q


def spencer_operator_data(
    algebroid: AlgebroidData, D: OperatorInput, ell: OperatorInput, order: int
) -> SpencerData:
    """Spencer data of degree one from values on the frame or from operators on sections."""
    context = algebroid.context
    basis = negative_basis(context)

    def table(values: Mapping[str, VectorValuedForm]) -> Dict[str, VectorValuedForm]:
        result = {}
        for a, value in values.items():
            if a not in algebroid.frame:
                raise FrameMismatch(f"{a!r} is not an element of the frame {algebroid.frame}")
            result[basis.coordinate_field(a).label] = value
        return result

    return SpencerData(
        context,
        order,
        1,
        None if callable(D) else table(D),
        None if callable(ell) else table(ell),
        D_operator=D if callable(D) else None,
        ell_operator=ell if callable(ell) else None,
    )


@dataclass(frozen=True)
class SpencerOperatorReport(CheckSuite):
    degree: CheckResult
    leibniz: CheckResult
    bracket: CheckResult
    mixed: CheckResult
    symmetry: CheckResult
    compat: Optional[CompatReport]
    agreement: CheckResult
    note: str = field(default=LITERATURE_NOTE, compare=False)

    def all_checks(self) -> Sequence[CheckResult]:
        checks = [self.degree, self.leibniz, self.bracket, self.mixed, self.symmetry]
        if self.compat is not None:
            checks.append(self.compat.direct)
        checks.append(self.agreement)
        return checks

    @property
    def spencer_operator(self) -> bool:
        return all(
            check.passed
            for check in (self.degree, self.leibniz, self.bracket, self.mixed, self.symmetry)
        )

    def to_dict(self) -> Dict[str, Any]:
        result = super().to_dict()
        result["note"] = self.note
        return result


def check_spencer_operator(
    algebroid: AlgebroidData, D: OperatorInput, ell: OperatorInput, order: int
) -> SpencerOperatorReport:
    """Check the Spencer operator identities and compare with ``L_ℚ ω = 0``.

    ``D`` and ``ell`` map frame elements to forms on the base or are operators
    on degree ``-1`` vector fields.  Raises NotHomological when A is not a Lie
    algebroid with a representation.
    """
    Q = _homological(algebroid)
    context = algebroid.context
    data = spencer_operator_data(algebroid, D, ell, order)
    frame = algebroid.frame
    fields = {a: partial_field(context, a) for a in frame}
    D_of = {a: data.D_of(fields[a]) for a in frame}
    ell_of = {a: data.ell_of(fields[a]) for a in frame}

    def section_field(section: Mapping[str, GradedPoly]) -> Derivation:
        return algebroid.section_to_field(section)

    def bracket_field(a: str, b: str) -> Derivation:
        return section_field(algebroid.bracket(algebroid.frame_section(a), algebroid.frame_section(b)))

    def degree_cases() -> Iterator[Tuple[str, str]]:
        base_only = context.base_coords + tuple(differential_name(x) for x in context.base_coords)
        for a in frame:
            for kind, value, form_degree in (("D", D_of[a], order), ("ell", ell_of[a], order - 1)):
                if value.is_zero():
                    continue
                if not all(p.uses_only(base_only) for _, p in value):
                    yield f"{kind}({a})", f"{value} is not a form on the base"
                elif value.bidegree() != Bidegree(form_degree, 0):
                    yield f"{kind}({a})", f"bidegree {value.bidegree()}, expected ({form_degree}, 0)"

    def leibniz_cases() -> Iterator[Tuple[str, VectorValuedForm]]:
        for a in frame:
            for x in context.base_coords:
                f = GradedPoly.generator(context, x)
                df = GradedPoly.generator(context, differential_name(x))
                shifted = f * fields[a]
                yield f"D({x}*{a})", data.D_of(shifted) - f * D_of[a] + df * ell_of[a]
                yield f"ell({x}*{a})", data.ell_of(shifted) - f * ell_of[a]

    def bracket_cases() -> Iterator[Tuple[str, VectorValuedForm]]:
        for a, b in itertools.combinations(frame, 2):
            yield f"X={a}, Y={b}", (
                lie_derive(algebroid.covariant(a), D_of[b])
                - lie_derive(algebroid.covariant(b), D_of[a])
                - data.D_of(bracket_field(a, b))
            )

    def mixed_cases() -> Iterator[Tuple[str, VectorValuedForm]]:
        for a in frame:
            for b in frame:
                yield f"X={a}, Y={b}", (
                    lie_derive(algebroid.covariant(a), ell_of[b])
                    + insert(algebroid.anchor_field(b), D_of[a])
                    - data.ell_of(bracket_field(a, b))
                )

    def symmetry_cases() -> Iterator[Tuple[str, VectorValuedForm]]:
        for i, a in enumerate(frame):
            for b in frame[i:]:
                yield f"X={a}, Y={b}", insert(algebroid.anchor_field(a), ell_of[b]) + insert(
                    algebroid.anchor_field(b), ell_of[a]
                )

    degree = first_failure("degree", degree_cases())
    leibniz = first_failure("leibniz", leibniz_cases())
    bracket = first_failure("spencer-bracket", bracket_cases())
    mixed = first_failure("spencer-mixed", mixed_cases())
    symmetry = first_failure("spencer-symmetry", symmetry_cases())
    spencer = all(check.passed for check in (degree, leibniz, bracket, mixed, symmetry))

    compat: Optional[CompatReport] = None
    try:
        form = reconstruct_form(data)
    except InvalidSpencerData as error:
        nq = False
        nq_detail = f"not Spencer data of a form: {error}"
    else:
        compat = check_compat(Q, form)
        nq = compat.compatible
        nq_detail = None
    if nq == spencer:
        agreement = CheckResult.ok("agreement", nq_detail)
    else:
        agreement = CheckResult.failure("agreement", f"nq={nq}, spencer-operator={spencer}", nq_detail)
    report = SpencerOperatorReport(degree, leibniz, bracket, mixed, symmetry, compat, agreement)
    logger.info("check_spencer_operator(order=%d): %s", order, report.passed)
    return report


def _coefficient(form: GradedPoly, indices: Sequence[str]) -> GradedPoly:
    """Coefficient of ``dx^{i₁}⋯dx^{i_j}`` in a scalar form on the base."""
    value = form
    for x in indices:
        value = partial(value, differential_name(x))
    return value


def form_rows(
    context: GradedContext, ell: Mapping[str, GradedPoly], frame: Sequence[str], order: int
) -> Tuple[List[List[GradedPoly]], List[List[GradedPoly]]]:
    """Matrices of ``a ↦ ℓ(a)`` and ``Z ↦ i_Z∘ℓ``, one row per source basis vector."""
    base = context.base_coords
    kernel = [
        [_coefficient(ell[a], indices) for indices in itertools.combinations(base, order)]
        for a in frame
    ]
    annihilator = []
    for z in base:
        row = []
        for a in frame:
            inserted = insert(partial_field(context, z), ell[a])
            row.extend(
                _coefficient(inserted, indices)
                for indices in itertools.combinations(base, order - 1)
            )
        annihilator.append(row)
    return kernel, annihilator


def zero_section_rows(form: VectorValuedForm) -> List[List[GradedPoly]]:
    """Rows of ``X ↦ i_X ω`` restricted to the zero section, one per coordinate."""
    context = form.context
    scalar = form.as_scalar()
    base_positions = [context.index(x) for x in context.base_coords]
    split_rows: List[Dict[Tuple[int, ...], Dict[Tuple[int, ...], Any]]] = []
    columns = set()
    for z in context.coordinates:
        restricted = insert(partial_field(context, z), scalar).drop_generators(context.fiber_coords)
        grouped: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Any]] = {}
        for monomial, coefficient in restricted.items():
            base_part = tuple(e if i in base_positions else 0 for i, e in enumerate(monomial))
            rest = tuple(0 if i in base_positions else e for i, e in enumerate(monomial))
            grouped.setdefault(rest, {})[base_part] = coefficient
            columns.add(rest)
        split_rows.append(grouped)
    ordered = sorted(columns)
    return [
        [GradedPoly(context, grouped.get(column, {})) for column in ordered]
        for grouped in split_rows
    ]


@dataclass(frozen=True)
class KplecticReport(CheckSuite):
    im1: CheckResult
    im2: CheckResult
    kernel: CheckResult
    annihilator: CheckResult
    compat: CompatReport
    agreement: CheckResult
    block_structure: CheckResult
    statuses: Tuple[Nondegeneracy, Nondegeneracy] = field(default=(), compare=False)

    def all_checks(self) -> Sequence[CheckResult]:
        return (
            self.im1,
            self.im2,
            self.kernel,
            self.annihilator,
            self.compat.direct,
            self.agreement,
            self.block_structure,
        )


def _nondegeneracy_check(name: str, status: Nondegeneracy, what: str) -> CheckResult:
    if status.passed:
        return CheckResult.ok(name, status.describe())
    return CheckResult.failure(name, f"{what} has rank {status.rank}")


def check_im_kplectic(
    algebroid: AlgebroidData, ell: Mapping[str, Any], order: int
) -> KplecticReport:
    """IM k-plectic conditions on ``ℓ: A → Ω^k(M)``, cross-checked on ``A[1]``.

    Raises NotHomological when A is not a Lie algebroid.
    """
    context = algebroid.context
    if context.frame:
        raise FrameMismatch("IM k-plectic structures take scalar forms; drop the frame")
    Q = _homological(algebroid)
    frame = algebroid.frame
    for a in ell:
        if a not in frame:
            raise FrameMismatch(f"{a!r} is not an element of the frame {frame}")
    values = {a: context.coerce(ell.get(a, 0)) for a in frame}

    def ell_of(section: Mapping[str, GradedPoly]) -> GradedPoly:
        return sum((f * values[c] for c, f in section.items()), GradedPoly.zero(context))

    def im1_cases() -> Iterator[Tuple[str, GradedPoly]]:
        for i, a in enumerate(frame):
            for b in frame[i:]:
                yield f"X={a}, Y={b}", insert(algebroid.anchor_field(a), values[b]) + insert(
                    algebroid.anchor_field(b), values[a]
                )

    def im2_cases() -> Iterator[Tuple[str, GradedPoly]]:
        for a in frame:
            for b in frame:
                bracket = algebroid.bracket(algebroid.frame_section(a), algebroid.frame_section(b))
                yield f"X={a}, Y={b}", (
                    lie_derive(algebroid.anchor_field(a), values[b])
                    - insert(algebroid.anchor_field(b), de_rham(values[a]))
                    - ell_of(bracket)
                )

    im1 = first_failure("im1", im1_cases())
    im2 = first_failure("im2", im2_cases())
    kernel_rows, annihilator_rows = form_rows(context, values, frame, order)
    kernel_status = injectivity(kernel_rows, context)
    annihilator_status = injectivity(annihilator_rows, context)
    kernel = _nondegeneracy_check("kernel", kernel_status, "ell")
    annihilator = _nondegeneracy_check("annihilator", annihilator_status, "Z -> i_Z ell")

    basis = negative_basis(context)
    form = closed_form_from_ell(
        context,
        order + 1,
        {basis.coordinate_field(a).label: VectorValuedForm.scalar(values[a]) for a in frame},
        degree=1,
    )
    compat = check_compat(Q, form)
    if compat.compatible == (im1.passed and im2.passed):
        agreement = CheckResult.ok("agreement")
    else:
        agreement = CheckResult.failure(
            "agreement", f"nq={compat.compatible}, im={im1.passed and im2.passed}"
        )
    whole = injectivity(zero_section_rows(form), context)
    blocks = kernel_status.passed and annihilator_status.passed
    if whole.passed == blocks:
        block_structure = CheckResult.ok("block-structure", whole.describe())
    else:
        block_structure = CheckResult.failure(
            "block-structure", f"zero section={whole.passed}, blocks={blocks}"
        )
    if kernel_status.passed and annihilator_status.passed and GENERIC in (
        kernel_status.status,
        annihilator_status.status,
    ):
        logger.warning("ell is only generically non-degenerate")
    report = KplecticReport(
        im1,
        im2,
        kernel,
        annihilator,
        compat,
        agreement,
        block_structure,
        (kernel_status, annihilator_status),
    )
    logger.info("check_im_kplectic(order=%d): %s", order, report.passed)
    return report
