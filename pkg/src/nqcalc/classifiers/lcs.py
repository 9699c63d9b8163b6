"""Locally conformal symplectic and locally conformal Poisson structures.

On a trivialized line bundle L a flat connection is a closed 1-form φ with
``d_∇ 1 = -φ``.  A pair ``(φ, ω)`` on M is lcs when ``dω = φ∧ω`` and ω is
non-degenerate; its Jacobi bracket is ``{f,g} = X_f(g) - g φ(X_f)`` with
``i_{X_f} ω = df - fφ``.

Dually a bivector P is lc-Poisson for φ when ``[P,P] = 2 (i_φ P)∧P``.  The
NQ side lives on ``T*[1]M`` with values in L: the algebroid ``T*M ⊗ L`` has
anchor ``ρ(dx^i) = P^{ij}∂_j`` and bracket ``[[d_∇x^i, d_∇x^j]] = d_∇ P^{ij}``
twisted by φ, and ω is ``d_∇`` of the tautological L-valued 1-form.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import sympy

from nqcalc.algebroid import AlgebroidData, build_homological_derivation
from nqcalc.cartan import (
    Derivation,
    VectorValuedForm,
    covariant_derivation,
    de_rham,
    exterior_derivative,
    insert,
    partial_field,
)
from nqcalc.checks import CheckResult, CheckSuite, check_zero, first_failure
from nqcalc.classifiers.compat import CompatReport, check_compat
from nqcalc.errors import NonClosedConnectionForm, NotNondegenerate
from nqcalc.graded import GradedContext, GradedPoly, differential_name, partial
from nqcalc.models import LINE_FRAME, cotangent_context, cotangent_name, one_form_coefficients
from nqcalc.multivector import MultivectorField, contract, jacobi_defects
from nqcalc.symbolic import (
    EVERYWHERE,
    as_polynomial,
    denominators,
    injectivity,
    rational_str,
    solve_linear,
    symbols_of,
    to_sympy,
)

__all__ = [
    "LcsBracket",
    "LcsReport",
    "LcsNqReport",
    "lcs_to_jacobi",
    "check_lcs",
    "lc_cotangent_algebroid",
    "lcs_nq",
    "check_lcs_nq",
]

logger = logging.getLogger(__name__)

UNIT = "1"


def _insertion_rows(omega: GradedPoly) -> List[List[GradedPoly]]:
    """``W[i][j] = ω(∂_i, ∂_j)``, so that ``i_X ω = Σ X^i W[i][j] dx^j``."""
    context = omega.context
    rows = []
    for x in context.base_coords:
        coefficients = one_form_coefficients(insert(partial_field(context, x), omega))
        rows.append([coefficients.get(y, GradedPoly.zero(context)) for y in context.base_coords])
    return rows


class LcsBracket:
    """The Jacobi bracket of a non-degenerate pair ``(φ, ω)``.

    Functions are sympy expressions in the base coordinates; Hamiltonian
    fields are solved exactly over the fraction field, so brackets may carry
    denominators.
    """

    __slots__ = "context", "symbols", "phi", "transpose", "nondegeneracy"

    def __init__(self, phi: GradedPoly, omega: GradedPoly) -> None:
        context = omega.context
        rows = _insertion_rows(omega)
        nondegeneracy = injectivity(rows, context)
        if not nondegeneracy.passed:
            raise NotNondegenerate(f"{omega} has rank {nondegeneracy.rank}")
        self.context = context
        self.nondegeneracy = nondegeneracy
        self.symbols = symbols_of(context)
        coefficients = one_form_coefficients(phi.transfer(context))
        self.phi = [
            to_sympy(coefficients.get(x, GradedPoly.zero(context))) for x in context.base_coords
        ]
        self.transpose = [list(column) for column in zip(*rows)]

    def function(self, name: str) -> sympy.Expr:
        return sympy.Integer(1) if name == UNIT else sympy.Symbol(name)

    def hamiltonian(self, f: sympy.Expr) -> List[sympy.Expr]:
        """Components of ``X_f`` with ``i_{X_f} ω = df - fφ``."""
        rhs = [sympy.diff(f, symbol) - f * weight for symbol, weight in zip(self.symbols, self.phi)]
        solution = solve_linear(self.transpose, rhs)
        if solution is None:
            raise NotNondegenerate(f"no Hamiltonian field for {f}")
        return solution

    def __call__(self, f: sympy.Expr, g: sympy.Expr) -> sympy.Expr:
        vector = self.hamiltonian(f)
        along = sum((X * sympy.diff(g, s) for X, s in zip(vector, self.symbols)), sympy.Integer(0))
        twist = sum((X * weight for X, weight in zip(vector, self.phi)), sympy.Integer(0))
        return sympy.cancel(along - g * twist)

    @property
    def generators(self) -> Tuple[str, ...]:
        return (UNIT,) + self.context.base_coords

    def table(self) -> Dict[Tuple[str, str], sympy.Expr]:
        """Brackets of the constant 1 and the coordinates, which determine all others."""
        return {
            (f, g): self(self.function(f), self.function(g))
            for f, g in itertools.combinations(self.generators, 2)
        }

    def jacobiator_cases(self) -> Iterator[Tuple[str, str]]:
        for f, g, h in itertools.combinations(self.generators, 3):
            a, b, c = (self.function(name) for name in (f, g, h))
            value = sympy.cancel(self(a, self(b, c)) + self(b, self(c, a)) + self(c, self(a, b)))
            yield f"{{{f},{{{g},{h}}}}} + cyclic", "" if value == 0 else rational_str(value)

    def jacobi_pair(self) -> Optional[Tuple[MultivectorField, MultivectorField]]:
        """``(Λ, E)`` with ``E(g) = {1,g}``, or None when a bracket is not polynomial."""
        base = self.context.base_coords
        context = cotangent_context(base)
        reeb: Dict[str, GradedPoly] = {}
        for x in base:
            value = as_polynomial(self(sympy.Integer(1), sympy.Symbol(x)), context)
            if value is None:
                return None
            reeb[x] = value
        bivector: Dict[Tuple[str, str], GradedPoly] = {}
        for xi, xj in itertools.combinations(base, 2):
            value = as_polynomial(self(sympy.Symbol(xi), sympy.Symbol(xj)), context)
            if value is None:
                return None
            xi_poly = GradedPoly.generator(context, xi)
            xj_poly = GradedPoly.generator(context, xj)
            bivector[(xi, xj)] = value - xi_poly * reeb[xj] + xj_poly * reeb[xi]
        return (
            MultivectorField.from_components(context, bivector, 2),
            MultivectorField.vector(context, reeb),
        )


def lcs_to_jacobi(phi: GradedPoly, omega: GradedPoly) -> Dict[Tuple[str, str], sympy.Expr]:
    return LcsBracket(phi, omega).table()


@dataclass(frozen=True)
class LcsReport(CheckSuite):
    closed_phi: CheckResult
    conformal: CheckResult
    nondegenerate: CheckResult
    jacobi: CheckResult
    brackets: Tuple[Tuple[str, str], ...] = field(default=(), compare=False)

    def all_checks(self) -> Sequence[CheckResult]:
        return self.closed_phi, self.conformal, self.nondegenerate, self.jacobi

    def to_dict(self) -> Dict[str, Any]:
        result = super().to_dict()
        result["brackets"] = dict(self.brackets)
        return result


def check_lcs(phi: GradedPoly, omega: GradedPoly) -> LcsReport:
    """Decide whether ``(φ, ω)`` is locally conformal symplectic.

    Raises NotNondegenerate when every maximal minor of ω vanishes.
    """
    context = omega.context
    phi = phi.transfer(context)
    closed_phi = check_zero("closed-phi", "d(phi)", exterior_derivative(phi))
    conformal = check_zero(
        "conformal", "d(omega) - phi^omega", exterior_derivative(omega) - phi * omega
    )
    bracket = LcsBracket(phi, omega)
    if bracket.nondegeneracy.status != EVERYWHERE:
        logger.warning("omega is only %s", bracket.nondegeneracy.describe())
    nondegenerate = CheckResult.ok("nondegenerate", bracket.nondegeneracy.describe())
    table = bracket.table()
    poles = denominators(list(table.values()))
    detail = f"denominators: {', '.join(sorted(poles))}" if poles else None
    jacobi = first_failure("jacobi", bracket.jacobiator_cases(), detail)
    brackets = tuple(
        (f"{{{f},{g}}}", rational_str(value)) for (f, g), value in table.items()
    )
    report = LcsReport(closed_phi, conformal, nondegenerate, jacobi, brackets)
    logger.info("check_lcs: %s", report.passed)
    return report


def _connection_form(phi: GradedPoly) -> Dict[str, GradedPoly]:
    closure = exterior_derivative(phi)
    if closure:
        raise NonClosedConnectionForm(str(closure))
    return one_form_coefficients(phi)


def lc_cotangent_algebroid(phi: GradedPoly, bivector: MultivectorField) -> AlgebroidData:
    """``T*M ⊗ L`` in the frame ``d_∇x^i``, represented on L.

    With ``(Pφ)^i = Σ_a P^{ia} φ_a``:

        [[d_∇x^i, d_∇x^j]] = (∂_k P^{ij} + P^{ij} φ_k) d_∇x^k - (Pφ)^i d_∇x^j + (Pφ)^j d_∇x^i
        ∇_{d_∇x^i} e = -(Pφ)^i e
    """
    base = bivector.base_coords
    weights = _connection_form(phi)
    context = cotangent_context(
        base,
        frame=(LINE_FRAME,),
        connection={(x, LINE_FRAME): {LINE_FRAME: -value} for x, value in weights.items()},
    )
    zero = GradedPoly.zero(context)
    P = {(xi, xj): bivector.component(xi, xj).transfer(context) for xi in base for xj in base}
    phi_of = {x: weights.get(x, zero).transfer(context) for x in base}
    twisted = {
        xi: sum((P[(xi, xa)] * phi_of[xa] for xa in base), GradedPoly.zero(context))
        for xi in base
    }
    anchor = {}
    structure = {}
    representation = {}
    for xi in base:
        representation[(cotangent_name(xi), LINE_FRAME, LINE_FRAME)] = -twisted[xi]
        for xj in base:
            anchor[(cotangent_name(xi), xj)] = P[(xi, xj)]
    for xi, xj in itertools.combinations(base, 2):
        for xk in base:
            value = partial(P[(xi, xj)], xk) + P[(xi, xj)] * phi_of[xk]
            if xk == xj:
                value = value - twisted[xi]
            if xk == xi:
                value = value + twisted[xj]
            structure[(cotangent_name(xi), cotangent_name(xj), cotangent_name(xk))] = value
    return AlgebroidData(context, anchor, structure, representation)


def lcs_nq(phi: GradedPoly, bivector: MultivectorField) -> Tuple[GradedContext, Derivation, VectorValuedForm]:
    """``(context, ℚ, ω)`` with ``ω = d_∇(Σ p_x dx e)``."""
    algebroid = lc_cotangent_algebroid(phi, bivector)
    context = algebroid.context
    tautological = GradedPoly.zero(context)
    for x in context.base_coords:
        tautological = tautological + GradedPoly.generator(
            context, cotangent_name(x)
        ) * GradedPoly.generator(context, differential_name(x))
    form = de_rham(VectorValuedForm(context, {LINE_FRAME: tautological}))
    return context, build_homological_derivation(algebroid), form


@dataclass(frozen=True)
class LcsNqReport(CheckSuite):
    compat: CompatReport
    lc_poisson: CheckResult
    agreement: CheckResult
    covariant: CheckResult

    def all_checks(self) -> Sequence[CheckResult]:
        return (
            self.compat.homological,
            self.compat.direct,
            self.lc_poisson,
            self.agreement,
            self.covariant,
        )


def check_lcs_nq(phi: GradedPoly, bivector: MultivectorField) -> LcsNqReport:
    """Compatibility of ``d_∇ϑ`` with the ℚ of a candidate lc-Poisson pair.

    Raises NonClosedConnectionForm when ``dφ ≠ 0``.
    """
    context, Q, form = lcs_nq(phi, bivector)
    compat = check_compat(Q, form, require_homological=False)
    weights = {x: v.transfer(bivector.context) for x, v in _connection_form(phi).items()}
    square, _ = jacobi_defects(bivector, contract(weights, bivector))
    lc_poisson = check_zero("lc-poisson", "[P,P] - 2(i_phi P)^P", square)
    if compat.verdict == lc_poisson.passed:
        agreement = CheckResult.ok("agreement")
    else:
        agreement = CheckResult.failure(
            "agreement", f"nq={compat.verdict}, schouten={lc_poisson.passed}"
        )
    expected = covariant_derivation(Q.symbol())

    def covariant_cases() -> Iterator[Tuple[str, GradedPoly]]:
        for alpha in context.frame:
            for beta in context.frame:
                yield f"Q({alpha}->{beta}) - nabla_Q", Q.endo_entry(alpha, beta) - expected.endo_entry(
                    alpha, beta
                )

    covariant = first_failure("covariant", covariant_cases())
    report = LcsNqReport(compat, lc_poisson, agreement, covariant)
    logger.info("check_lcs_nq: %s", report.passed)
    return report
