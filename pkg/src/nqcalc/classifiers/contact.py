"""Degree-one contact NQ-manifolds and Jacobi pairs on a trivial line bundle.

A Jacobi pair ``(Λ, E)`` gives the bracket ``{f,g} = Λ(df,dg) + fE(g) - gE(f)``
and, through ``[[j¹λ, j¹μ]] = j¹{λ,μ}``, a Lie algebroid structure on
``J¹L = L ⊕ T*M`` represented on L.  In the frame ``ε₀ = j¹1``,
``ε_i = (0, dx^i)``:

    ρ(ε₀) = E,  ρ(ε_i) = Λ^{ij} ∂_j
    [[ε₀, ε_i]] = ∂_k E^i ε_k
    [[ε_i, ε_j]] = ∂_k Λ^{ij} ε_k + E^j ε_i - E^i ε_j - Λ^{ij} ε₀
    ∇_{ε₀} e = 0,  ∇_{ε_i} e = -E^i e
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, Sequence, Tuple

from nqcalc.algebroid import AlgebroidData, build_homological_derivation
from nqcalc.cartan import VectorValuedForm
from nqcalc.checks import CheckResult, CheckSuite, first_failure
from nqcalc.classifiers.compat import CompatReport, check_compat
from nqcalc.graded import GradedContext, GradedPoly, differential_name, partial
from nqcalc.models import JET_VALUE, LINE_FRAME, cotangent_name, jet_context
from nqcalc.multivector import MultivectorField, evaluate, jacobi_defects
from nqcalc.spencer import SpencerData, extract_spencer, negative_basis, reconstruct_form

__all__ = [
    "ContactReport",
    "cartan_form",
    "jet_algebroid",
    "jacobi_bracket",
    "check_contact_nq",
]

logger = logging.getLogger(__name__)


def cartan_form(base: Sequence[str]) -> VectorValuedForm:
    """``θ = (du + Σ p_i dx^i) e`` rebuilt from its Spencer data.

    ``ℓ(ε₀) = e`` and ``D(ε_i) = dx^i e``; every other value vanishes, so
    ``D = -S`` for the Spencer operator ``S(f, α) = df - α``.
    """
    context = jet_context(base)
    basis = negative_basis(context)
    e = VectorValuedForm.frame_element(context, LINE_FRAME)
    ell = {basis.coordinate_field(JET_VALUE).label: e}
    D = {
        basis.coordinate_field(cotangent_name(x)).label: GradedPoly.generator(
            context, differential_name(x)
        )
        * e
        for x in base
    }
    return reconstruct_form(SpencerData(context, 1, 1, D, ell))


def jet_algebroid(bivector: MultivectorField, reeb: MultivectorField) -> AlgebroidData:
    base = bivector.base_coords
    context = jet_context(base)
    lift = context.coerce
    E = {x: lift(reeb.component(x)) for x in base}
    Lam = {(xi, xj): lift(bivector.component(xi, xj)) for xi in base for xj in base}
    u = JET_VALUE
    anchor = {(u, x): E[x] for x in base}
    structure: Dict[Tuple[str, str, str], GradedPoly] = {}
    representation = {}
    for xi in base:
        pi = cotangent_name(xi)
        representation[(pi, LINE_FRAME, LINE_FRAME)] = -E[xi]
        for xk in base:
            anchor[(pi, xk)] = Lam[(xi, xk)]
            structure[(u, pi, cotangent_name(xk))] = partial(E[xi], xk)
    for i, xi in enumerate(base):
        for xj in base[i + 1 :]:
            pi, pj = cotangent_name(xi), cotangent_name(xj)
            structure[(pi, pj, u)] = -Lam[(xi, xj)]
            for xk in base:
                value = partial(Lam[(xi, xj)], xk)
                if xk == xi:
                    value = value + E[xj]
                if xk == xj:
                    value = value - E[xi]
                structure[(pi, pj, cotangent_name(xk))] = value
    return AlgebroidData(context, anchor, structure, representation)


def jacobi_bracket(
    bivector: MultivectorField, reeb: MultivectorField, f: GradedPoly, g: GradedPoly
) -> GradedPoly:
    """``{f, g} = Λ(df, dg) + f E(g) - g E(f)`` for base functions."""
    context = bivector.context
    f, g = context.coerce(f), context.coerce(g)

    def gradient(h: GradedPoly) -> Dict[str, GradedPoly]:
        return {x: partial(h, x) for x in context.base_coords}

    def along_reeb(h: GradedPoly) -> GradedPoly:
        total = GradedPoly.zero(context)
        for x in context.base_coords:
            total = total + reeb.component(x).transfer(context) * partial(h, x)
        return total

    return evaluate(bivector, [gradient(f), gradient(g)]) + f * along_reeb(g) - g * along_reeb(f)


@dataclass(frozen=True)
class ContactReport(CheckSuite):
    cartan_data: CheckResult
    compat: CompatReport
    jacobi: CheckResult
    agreement: CheckResult

    def all_checks(self) -> Sequence[CheckResult]:
        return (self.cartan_data, self.compat.homological, self.compat.direct, self.jacobi, self.agreement)


def _cartan_data_cases(form: VectorValuedForm) -> Iterator[Tuple[str, VectorValuedForm]]:
    context: GradedContext = form.context
    data = extract_spencer(form)
    e = VectorValuedForm.frame_element(context, LINE_FRAME)
    u_label = data.basis.coordinate_field(JET_VALUE).label
    yield f"ell({u_label}) - e", data.ell(u_label) - e
    yield f"D({u_label})", data.D(u_label)
    for x in context.base_coords:
        label = data.basis.coordinate_field(cotangent_name(x)).label
        dx = GradedPoly.generator(context, differential_name(x))
        yield f"ell({label})", data.ell(label)
        yield f"D({label}) - d({x})*e", data.D(label) - dx * e


def check_contact_nq(bivector: MultivectorField, reeb: MultivectorField) -> ContactReport:
    """Compatibility of the Cartan form with the jet algebroid of ``(Λ, E)``."""
    form = cartan_form(bivector.base_coords)
    cartan_data = first_failure("cartan-data", _cartan_data_cases(form))
    Q = build_homological_derivation(jet_algebroid(bivector, reeb))
    compat = check_compat(Q, form, require_homological=False)
    square, drift = jacobi_defects(bivector, reeb)
    jacobi = first_failure(
        "jacobi-pair", [("[L,L] - 2E^L", square), ("[E,L]", drift)]
    )
    if compat.verdict == jacobi.passed:
        agreement = CheckResult.ok("agreement")
    else:
        agreement = CheckResult.failure(
            "agreement", f"nq={compat.verdict}, schouten={jacobi.passed}"
        )
    report = ContactReport(cartan_data, compat, jacobi, agreement)
    logger.info("check_contact_nq: %s", report.passed)
    return report
