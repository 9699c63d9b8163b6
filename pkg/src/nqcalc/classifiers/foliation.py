"""Involutive distributions on ``A[1]`` co-generated in degree one and IM foliations.

Such a distribution is the kernel of ``θ: TA[1] → A/B`` whose Spencer data are
``(-d_∇∘ℓ, ℓ)`` for the projection ``ℓ: A → A/B`` and a flat connection ∇ in
``A/B``.  It is compatible with ℚ (built from A and an A-connection
``∇^{A/B}``) exactly when ``(B, ∇)`` is an IM foliation:

    ∇^{A/B}_X (Y mod B) = ∇_{ρ(Y)} (X mod B) - [[Y, X]] mod B
    d_∇([[X,Y]] mod B) = L_{∇^{A/B}_X} d_∇(Y mod B) - L_{∇^{A/B}_Y} d_∇(X mod B)

The first formula has to be independent of the representative of ``Y mod B``.
The quotient is trivialized by the images of the frame elements outside B,
named ``q_<a>``.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterator, Mapping, Optional, Sequence, Tuple

from nqcalc.algebroid import AlgebroidData, algebroid_axioms, build_homological_derivation
from nqcalc.cartan import Derivation, VectorValuedForm, curvature, de_rham, lie_derive
from nqcalc.checks import CheckResult, CheckSuite, first_failure
from nqcalc.classifiers.compat import CompatReport, check_compat, closed_form_from_ell
from nqcalc.errors import FrameMismatch, RankDrop
from nqcalc.graded import GradedContext, GradedPoly
from nqcalc.spencer import negative_basis

__all__ = [
    "FoliationData",
    "FoliationReport",
    "quotient_name",
    "induced_quotient_connection",
    "distribution_form",
    "check_im_foliation",
]

logger = logging.getLogger(__name__)

Table = Dict[Tuple[str, str, str], GradedPoly]


def quotient_name(a: str) -> str:
    return f"q_{a}"


class FoliationData:
    """A subframe spanning B, a connection in ``A/B`` and optionally ``∇^{A/B}``.

    ``connection[(x, a, b)]`` is the coefficient of ``b mod B`` in
    ``∇_{∂x}(a mod B)`` and ``induced[(c, a, b)]`` that of ``b mod B`` in
    ``∇^{A/B}_{e_c}(a mod B)``; ``a`` and ``b`` are frame elements outside B.
    """

    __slots__ = "algebroid", "sub", "quotient", "context", "induced"

    def __init__(
        self,
        algebroid: AlgebroidData,
        sub: Sequence[str],
        connection: Optional[Mapping[Tuple[str, str, str], Any]] = None,
        induced: Optional[Mapping[Tuple[str, str, str], Any]] = None,
    ) -> None:
        for a in sub:
            if a not in algebroid.frame:
                raise FrameMismatch(f"{a!r} is not an element of the frame {algebroid.frame}")
        if len(set(sub)) != len(sub):
            raise RankDrop(f"subframe {list(sub)} repeats an element")
        self.algebroid = algebroid
        self.sub: Tuple[str, ...] = tuple(sub)
        self.quotient: Tuple[str, ...] = tuple(a for a in algebroid.frame if a not in self.sub)
        rows: Dict[Tuple[str, str], Dict[str, Any]] = {}
        for (x, a, b), value in (connection or {}).items():
            self._require_quotient(a, b)
            rows.setdefault((x, quotient_name(a)), {})[quotient_name(b)] = value
        self.context: GradedContext = algebroid.context.with_frame(
            [quotient_name(a) for a in self.quotient], rows
        )
        self.induced: Optional[Table] = None
        if induced is not None:
            self.induced = {}
            for (c, a, b), value in induced.items():
                if c not in algebroid.frame:
                    raise FrameMismatch(f"{c!r} is not an element of the frame {algebroid.frame}")
                self._require_quotient(a, b)
                self.induced[(c, a, b)] = self.context.coerce(value)

    def _require_quotient(self, *names: str) -> None:
        for name in names:
            if name not in self.quotient:
                raise FrameMismatch(f"{name!r} is not a frame element of A/B {self.quotient}")

    @property
    def is_zero_quotient(self) -> bool:
        return not self.quotient

    def connection_entry(self, x: str, a: str, b: str) -> GradedPoly:
        if a not in self.quotient:
            return GradedPoly.zero(self.context)
        return self.context.connection_coefficient(x, quotient_name(a), quotient_name(b))

    def induced_entry(self, c: str, a: str, b: str) -> GradedPoly:
        return (self.induced or {}).get((c, a, b), GradedPoly.zero(self.context))

    def project(self, section: Mapping[str, GradedPoly]) -> VectorValuedForm:
        """``section mod B`` as an ``A/B``-valued function."""
        return VectorValuedForm(
            self.context,
            {quotient_name(a): value for a, value in section.items() if a in self.quotient},
        )


def _nabla_along_anchor(data: FoliationData, c: str, a: str, b: str) -> GradedPoly:
    """Coefficient of ``b mod B`` in ``∇_{ρ(e_c)}(a mod B)``."""
    algebroid = data.algebroid
    total = GradedPoly.zero(data.context)
    for x in algebroid.context.base_coords:
        rho = algebroid.anchor_entry(c, x).transfer(data.context)
        if rho:
            total = total + rho * data.connection_entry(x, a, b)
    return total


def induced_quotient_connection(data: FoliationData) -> Tuple[Table, CheckResult]:
    """``∇^{A/B}`` from the first formula, with its B-independence check.

    Keys are ``(c, a, b)``: the coefficient of ``b mod B`` in ``∇^{A/B}_{e_c}(a mod B)``.
    """
    algebroid = data.algebroid
    frame = algebroid.frame

    def formula(x_dir: str, y_arg: str, b: str) -> GradedPoly:
        # ∇_{ρ(Y)}(X mod B) - [[Y, X]] mod B with X = e_{x_dir}, Y = e_{y_arg}
        return _nabla_along_anchor(data, y_arg, x_dir, b) - algebroid.structure_entry(
            y_arg, x_dir, b
        ).transfer(data.context)

    table: Table = {}
    for c in frame:
        for a in data.quotient:
            for b in data.quotient:
                value = formula(c, a, b)
                if value:
                    table[(c, a, b)] = value

    def independence_cases() -> Iterator[Tuple[str, GradedPoly]]:
        for c in frame:
            for y in data.sub:
                for b in data.quotient:
                    yield f"nabla^(A/B)_{c}({y} mod B) -> {b}", formula(c, y, b)

    return table, first_failure("b-independence", independence_cases())


def distribution_form(data: FoliationData) -> VectorValuedForm:
    """``θ`` with Spencer data ``(-d_∇∘ℓ, ℓ)``, ℓ the projection onto ``A/B``."""
    basis = negative_basis(data.context)
    ell = {
        basis.coordinate_field(a).label: VectorValuedForm.frame_element(data.context, quotient_name(a))
        for a in data.quotient
    }
    return closed_form_from_ell(data.context, 1, ell, degree=1)


def _quotient_algebroid(data: FoliationData, induced: Table) -> AlgebroidData:
    algebroid = data.algebroid
    representation = {
        (c, quotient_name(a), quotient_name(b)): value for (c, a, b), value in induced.items()
    }
    return AlgebroidData(data.context, algebroid.anchor, algebroid.structure, representation)


def _quotient_lie(data: FoliationData, induced: Table, c: str) -> Derivation:
    """``L_{∇^{A/B}_{e_c}}`` on ``A/B``-valued forms of the base."""
    context = data.context
    algebroid = data.algebroid
    endo = {
        (quotient_name(a), quotient_name(b)): value
        for (c2, a, b), value in induced.items()
        if c2 == c
    }
    return Derivation(
        context,
        {x: algebroid.anchor_entry(c, x) for x in context.base_coords},
        endo,
        0,
        0,
    )


@dataclass(frozen=True)
class FoliationReport(CheckSuite):
    flat_connection: CheckResult
    b_independence: CheckResult
    induced: CheckResult
    lie_algebroid: CheckResult
    flat_representation: CheckResult
    transport: CheckResult
    compat: Optional[CompatReport]
    agreement: CheckResult

    def all_checks(self) -> Sequence[CheckResult]:
        checks = [
            self.flat_connection,
            self.b_independence,
            self.induced,
            self.lie_algebroid,
            self.flat_representation,
            self.transport,
        ]
        if self.compat is not None:
            checks += [self.compat.homological, self.compat.direct]
        checks.append(self.agreement)
        return checks

    @property
    def im_foliation(self) -> bool:
        return all(
            check.passed
            for check in (
                self.flat_connection,
                self.b_independence,
                self.induced,
                self.lie_algebroid,
                self.flat_representation,
                self.transport,
            )
        )


def check_im_foliation(algebroid: AlgebroidData, data: FoliationData) -> FoliationReport:
    """Decide whether ``(B, ∇)`` is an IM foliation and cross-check against ``L_ℚ θ = 0``."""
    if data.algebroid is not algebroid and data.algebroid != algebroid:
        raise FrameMismatch("Foliation data belong to another algebroid")
    if data.is_zero_quotient:
        trivial = CheckResult.ok
        detail = "zero quotient"
        return FoliationReport(
            trivial("flat-connection", detail),
            trivial("b-independence", detail),
            trivial("induced", detail),
            trivial("lie-algebroid", detail),
            trivial("flat-representation", detail),
            trivial("transport", detail),
            None,
            trivial("agreement", detail),
        )

    context = data.context
    flat_connection = first_failure(
        "flat-connection",
        ((f"R[{alpha}->{beta}]", value) for alpha, beta, value in curvature(context)),
    )
    derived, b_independence = induced_quotient_connection(data)
    if data.induced is None:
        candidate = derived
        induced = CheckResult.ok("induced", "derived from the anchor and the bracket")
    else:
        candidate = data.induced
        zero = GradedPoly.zero(context)
        induced = first_failure(
            "induced",
            (
                (
                    f"nabla^(A/B)_{c}({a} mod B) -> {b}",
                    data.induced_entry(c, a, b) - derived.get((c, a, b), zero),
                )
                for c in algebroid.frame
                for a in data.quotient
                for b in data.quotient
            ),
        )
    quotient_algebroid = _quotient_algebroid(data, candidate)
    axioms = algebroid_axioms(quotient_algebroid)
    lie_algebroid = next(
        (check for check in (axioms.jacobi, axioms.anchor_morphism) if not check.passed),
        CheckResult.ok("lie-algebroid"),
    )
    flat_representation = axioms.flat_representation

    if not flat_connection.passed:
        skipped = "connection in A/B is not flat; not evaluated"
        report = FoliationReport(
            flat_connection,
            b_independence,
            induced,
            lie_algebroid,
            flat_representation,
            CheckResult.ok("transport", skipped),
            None,
            CheckResult.ok("agreement", skipped),
        )
        logger.info("check_im_foliation: %s", report.passed)
        return report

    lie = {c: _quotient_lie(data, candidate, c) for c in algebroid.frame}
    differential = {
        a: de_rham(data.project(algebroid.frame_section(a))) for a in algebroid.frame
    }

    def transport_cases() -> Iterator[Tuple[str, VectorValuedForm]]:
        frame = algebroid.frame
        for i, a in enumerate(frame):
            for b in frame[i + 1 :]:
                bracket = algebroid.bracket(algebroid.frame_section(a), algebroid.frame_section(b))
                projected = data.project(
                    {c: value.transfer(context) for c, value in bracket.items()}
                )
                yield f"X={a}, Y={b}", (
                    de_rham(projected)
                    - lie_derive(lie[a], differential[b])
                    + lie_derive(lie[b], differential[a])
                )

    transport = first_failure("transport", transport_cases())
    Q = build_homological_derivation(quotient_algebroid)
    compat = check_compat(Q, distribution_form(data), require_homological=False)
    im_foliation = all(
        check.passed for check in (b_independence, induced, lie_algebroid, flat_representation, transport)
    )
    if compat.verdict == im_foliation:
        agreement = CheckResult.ok("agreement")
    else:
        agreement = CheckResult.failure(
            "agreement", f"nq={compat.verdict}, im-foliation={im_foliation}"
        )
    report = FoliationReport(
        flat_connection,
        b_independence,
        induced,
        lie_algebroid,
        flat_representation,
        transport,
        compat,
        agreement,
    )
    logger.info("check_im_foliation: %s", report.passed)
    return report
