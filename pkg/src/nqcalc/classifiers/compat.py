"""Compatibility of a vector-valued form with a homological derivation.

ω is compatible with ℚ when ``L_ℚ ω = 0``.  The same condition is read off
the Spencer data ``(D, ℓ)`` of ω through three obstruction tensors on pairs of
negatively graded basis fields:

    A(X,Y) = D([[Q,X],Y]) - L_{[ℚ,X]} D(Y) - (-1)^{|X||Y|} (L_{[ℚ,Y]} D(X) - L_ℚ L_Y D(X))
    B(X,Y) = ℓ([[Q,X],Y]) - (-1)^{|Y|} i_{[Q,X]} D(Y) - (-1)^{|X||Y|} (L_{[ℚ,Y]} ℓ(X) - L_ℚ L_Y ℓ(X))
    C(X,Y) = i_{[Q,X]} ℓ(Y) + (-1)^{(|X|-1)(|Y|-1)} (i_{[Q,Y]} ℓ(X) - L_ℚ i_Y ℓ(X))

Both verdicts are computed and their agreement is part of the report.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Tuple

from nqcalc.algebroid import check_homological
from nqcalc.cartan import (
    Derivation,
    VectorValuedForm,
    commutator,
    de_rham,
    insert,
    lie_derive,
)
from nqcalc.checks import CheckResult, CheckSuite, first_failure
from nqcalc.errors import DegreeError, NotHomological
from nqcalc.graded import GradedContext
from nqcalc.spencer import (
    SpencerData,
    extract_spencer,
    negative_basis,
    reconstruct_form,
)

__all__ = [
    "CompatReport",
    "check_compat",
    "closed_spencer_data",
    "closed_form_from_ell",
]

logger = logging.getLogger(__name__)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


@dataclass(frozen=True)
class CompatReport(CheckSuite):
    homological: CheckResult
    direct: CheckResult
    obstructions: Tuple[CheckResult, ...]
    agreement: CheckResult

    def all_checks(self) -> Sequence[CheckResult]:
        return (self.homological, self.direct) + self.obstructions + (self.agreement,)

    @property
    def compatible(self) -> bool:
        return self.direct.passed

    @property
    def obstructions_vanish(self) -> bool:
        return all(check.passed for check in self.obstructions)

    @property
    def verdict(self) -> bool:
        return self.homological.passed and self.compatible


def _obstruction_cases(
    Q: Derivation, data: SpencerData
) -> Tuple[Iterator[Tuple[str, VectorValuedForm]], ...]:
    basis = list(data.basis)
    transported = {X.label: commutator(Q, X.field) for X in basis}
    D = {X.label: data.D_of(X.field) for X in basis}
    ell = {X.label: data.ell_of(X.field) for X in basis}

    def pairs() -> Iterator[Tuple[str, int, int, Derivation, Derivation, str, str]]:
        for X in basis:
            for Y in basis:
                yield f"X={X.label}, Y={Y.label}", X.degree, Y.degree, X.field, Y.field, X.label, Y.label

    def lie_obstruction() -> Iterator[Tuple[str, VectorValuedForm]]:
        for label, x, y, X, Y, a, b in pairs():
            double = commutator(transported[a], Y)
            yield label, (
                data.D_of(double)
                - lie_derive(transported[a], D[b])
                - _sign(x * y) * (lie_derive(transported[b], D[a]) - lie_derive(Q, lie_derive(Y, D[a])))
            )

    def mixed_obstruction() -> Iterator[Tuple[str, VectorValuedForm]]:
        for label, x, y, X, Y, a, b in pairs():
            double = commutator(transported[a], Y)
            yield label, (
                data.ell_of(double)
                - _sign(y) * insert(transported[a], D[b])
                - _sign(x * y) * (lie_derive(transported[b], ell[a]) - lie_derive(Q, lie_derive(Y, ell[a])))
            )

    def insertion_obstruction() -> Iterator[Tuple[str, VectorValuedForm]]:
        for label, x, y, X, Y, a, b in pairs():
            yield label, insert(transported[a], ell[b]) + _sign((x - 1) * (y - 1)) * (
                insert(transported[b], ell[a]) - lie_derive(Q, insert(Y, ell[a]))
            )

    return lie_obstruction(), mixed_obstruction(), insertion_obstruction()


def check_compat(
    Q: Derivation, form: VectorValuedForm, require_homological: bool = True
) -> CompatReport:
    """Decide ``L_ℚ ω = 0`` directly and through the Spencer obstructions.

    With ``require_homological=False`` a non-homological ℚ is reported
    instead of rejected.
    """
    homological = check_homological(Q).check_result
    if require_homological and not homological.passed:
        raise NotHomological(homological.witness)
    if not form.is_zero() and form.homogeneous_bidegree().internal_degree <= 0:
        raise DegreeError("Compatibility needs a form of positive internal degree")

    direct = first_failure("compatible", [("L_Q(omega)", lie_derive(Q, form))])
    data = extract_spencer(form)
    lie, mixed, insertion = _obstruction_cases(Q, data)
    obstructions = (
        first_failure("obstruction-D", lie),
        first_failure("obstruction-mixed", mixed),
        first_failure("obstruction-insertion", insertion),
    )
    vanish = all(check.passed for check in obstructions)
    if vanish == direct.passed:
        agreement = CheckResult.ok("agreement")
    else:
        agreement = CheckResult.failure(
            "agreement", f"direct={direct.passed}, obstructions vanish={vanish}"
        )
        logger.warning("Direct and obstruction verdicts disagree for %s", form)
    report = CompatReport(homological, direct, obstructions, agreement)
    logger.info("check_compat: homological=%s compatible=%s", homological.passed, direct.passed)
    return report


def closed_spencer_data(
    context: GradedContext,
    order: int,
    ell: Mapping[str, VectorValuedForm],
    degree: Optional[int] = None,
) -> SpencerData:
    """Spencer data ``(±d_∇∘ℓ, ℓ)`` of the closed form determined by ℓ alone.

    ``D(X) = (-1)^{|X|} d_∇ ℓ(X)`` on basis fields, which on degree-one charts
    is ``-d_∇∘ℓ``.
    """
    basis = negative_basis(context)
    D = {}
    for label, value in ell.items():
        D[label] = de_rham(value) * _sign(basis[label].degree)
    return SpencerData(context, order, degree if degree is not None else context.degree, D, dict(ell))


def closed_form_from_ell(
    context: GradedContext,
    order: int,
    ell: Mapping[str, VectorValuedForm],
    degree: Optional[int] = None,
) -> VectorValuedForm:
    """The closed form with insertion data ℓ; raises InvalidSpencerData otherwise."""
    return reconstruct_form(closed_spencer_data(context, order, ell, degree))
