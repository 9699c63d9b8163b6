"""Degree-one symplectic NQ-manifolds and Poisson bivectors.

A bivector P on M gives the cotangent algebroid ``T*M`` with
``ρ(dx^i) = P^{ij} ∂_j`` and ``[[dx^i, dx^j]] = d P^{ij}``, hence a degree one
vector field Q on ``T*[1]M``.  Q always preserves the canonical form
``ω = Σ dp_i dx^i``; it is homological exactly when ``[P, P] = 0``.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from nqcalc.algebroid import AlgebroidData, build_homological_vf
from nqcalc.cartan import (
    Derivation,
    VectorValuedForm,
    commutator,
    de_rham,
    insert,
    partial_field,
)
from nqcalc.checks import CheckResult, CheckSuite, check_zero
from nqcalc.classifiers.compat import CompatReport, check_compat
from nqcalc.errors import NotCompatible, NotSymplectic
from nqcalc.graded import Bidegree, GradedContext, GradedPoly, differential_name, partial
from nqcalc.models import cotangent_context, cotangent_name, one_form_coefficients
from nqcalc.multivector import MultivectorField, schouten_bracket
from nqcalc.symbolic import polynomial_inverse

__all__ = [
    "PoissonReport",
    "canonical_form",
    "cotangent_algebroid",
    "poisson_to_nq",
    "nq_to_poisson",
    "check_poisson_nq",
    "insertion_matrix",
]

logger = logging.getLogger(__name__)


def canonical_form(context: GradedContext) -> VectorValuedForm:
    """``dϑ = Σ dp_x dx`` for the tautological ``ϑ = Σ p_x dx`` on ``T*[1]M``."""
    result = GradedPoly.zero(context)
    for x in context.base_coords:
        result = result + GradedPoly.generator(
            context, differential_name(cotangent_name(x))
        ) * GradedPoly.generator(context, differential_name(x))
    return VectorValuedForm.scalar(result)


def cotangent_algebroid(bivector: MultivectorField) -> AlgebroidData:
    context = bivector.context
    base = context.base_coords
    anchor = {}
    structure = {}
    for xi in base:
        for xj in base:
            if xi == xj:
                continue
            entry = bivector.component(xi, xj)
            anchor[(cotangent_name(xi), xj)] = entry
            for xk in base:
                structure[(cotangent_name(xi), cotangent_name(xj), cotangent_name(xk))] = partial(
                    entry, xk
                )
    return AlgebroidData(context, anchor, structure)


def poisson_to_nq(bivector: MultivectorField) -> Tuple[GradedContext, Derivation, VectorValuedForm]:
    if bivector.degree != 2 and not bivector.is_zero():
        raise NotSymplectic(f"{bivector} is not a bivector")
    algebroid = cotangent_algebroid(bivector)
    context = algebroid.context
    return context, build_homological_vf(algebroid), canonical_form(context)


def insertion_matrix(form: VectorValuedForm) -> List[List[GradedPoly]]:
    """Rows ``i_{∂_a} ω`` of a degree one 2-form, one per fiber coordinate."""
    context = form.context
    rows = []
    for a in context.fiber_coords:
        coefficients = one_form_coefficients(insert(partial_field(context, a), form.as_scalar()))
        rows.append([coefficients.get(x, GradedPoly.zero(context)) for x in context.base_coords])
    return rows


def _require_symplectic(form: VectorValuedForm) -> List[List[GradedPoly]]:
    context = form.context
    if context.frame or not context.is_degree_one:
        raise NotSymplectic(f"{context} is not a frameless degree one chart")
    if len(context.fiber_coords) != len(context.base_coords):
        raise NotSymplectic("rank A differs from dim M")
    if form.is_zero() or form.bidegree() != Bidegree(2, 1):
        raise NotSymplectic(f"{form} is not a degree one 2-form")
    if de_rham(form):
        raise NotSymplectic(f"{form} is not closed")
    inverse = polynomial_inverse(insertion_matrix(form), context)
    if inverse is None:
        raise NotSymplectic(f"{form} is not everywhere non-degenerate")
    return inverse


def nq_to_poisson(Q: Derivation, form: VectorValuedForm) -> MultivectorField:
    """The bivector ``P(dx, dy) = ρ(ℓ⁻¹ dx)(y)``."""
    inverse = _require_symplectic(form)
    report = check_compat(Q, form, require_homological=False)
    if not report.compatible:
        raise NotCompatible(report.direct.witness)
    context = form.context
    anchors = {a: commutator(Q, partial_field(context, a)) for a in context.fiber_coords}
    base = context.base_coords
    components: Dict[Tuple[str, str], GradedPoly] = {}
    for i, xi in enumerate(base):
        for j, xj in enumerate(base):
            value = GradedPoly.zero(context)
            for a_index, a in enumerate(context.fiber_coords):
                value = value + inverse[i][a_index] * anchors[a].value(xj)
            if i == j and value:
                raise NotCompatible(f"P({xi},{xi}) = {value}")
            components[(xi, xj)] = value
    for (xi, xj), value in components.items():
        if value != -components[(xj, xi)]:
            raise NotCompatible(f"P({xi},{xj}) + P({xj},{xi}) = {value + components[(xj, xi)]}")
    upper = {
        (xi, xj): components[(xi, xj)]
        for i, xi in enumerate(base)
        for xj in base[i + 1 :]
    }
    return MultivectorField.from_components(cotangent_context(base), upper, 2)


@dataclass(frozen=True)
class PoissonReport(CheckSuite):
    compat: CompatReport
    schouten: CheckResult
    agreement: CheckResult
    roundtrip: CheckResult

    def all_checks(self) -> Sequence[CheckResult]:
        return (self.compat.homological, self.compat.direct, self.schouten, self.agreement, self.roundtrip)


def check_poisson_nq(bivector: MultivectorField) -> PoissonReport:
    """Run the bivector through ``T*[1]M`` and back, cross-checked by ``[P, P]``."""
    context, Q, form = poisson_to_nq(bivector)
    compat = check_compat(Q, form, require_homological=False)
    square = schouten_bracket(bivector, bivector)
    schouten = check_zero("poisson", "[P,P]", square)
    if compat.verdict == schouten.passed:
        agreement = CheckResult.ok("agreement")
    else:
        agreement = CheckResult.failure(
            "agreement", f"nq={compat.verdict}, schouten={schouten.passed}"
        )
    recovered = nq_to_poisson(Q, form)
    roundtrip = check_zero("roundtrip", "recovered - P", recovered - bivector)
    report = PoissonReport(compat, schouten, agreement, roundtrip)
    logger.info("check_poisson_nq(%s): %s", bivector, report.passed)
    return report
