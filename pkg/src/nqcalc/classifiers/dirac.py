"""Degree-one presymplectic NQ-manifolds and Dirac structures.

A closed degree-one 2-form on ``A[1]`` is the same as a bundle map
``ℓ: A → T*M``.  Together with the anchor it gives ``Φ = (ρ, ℓ): A → TM ⊕ T*M``
and compatibility with ℚ becomes the statement that Φ is an isotropic,
bracket-preserving map for the Courant pairing and the Dorfman bracket.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Mapping, NamedTuple, Optional, Sequence, Tuple

from nqcalc.algebroid import AlgebroidData, build_homological_vf
from nqcalc.cartan import Derivation, VectorValuedForm, commutator, de_rham, insert, lie_derive
from nqcalc.checks import CheckResult, CheckSuite, first_failure
from nqcalc.classifiers.compat import CompatReport, check_compat, closed_form_from_ell
from nqcalc.classifiers.poisson import cotangent_algebroid
from nqcalc.errors import FrameMismatch
from nqcalc.graded import GradedPoly, differential_name, partial
from nqcalc.models import cotangent_name, one_form
from nqcalc.multivector import MultivectorField
from nqcalc.spencer import negative_basis
from nqcalc.symbolic import Nondegeneracy, injectivity

__all__ = [
    "GeneralizedSection",
    "DiracMorphism",
    "PresymplecticReport",
    "courant_pairing",
    "dorfman",
    "poisson_graph",
    "check_presymplectic_nq",
]

logger = logging.getLogger(__name__)


class GeneralizedSection(NamedTuple):
    """A section ``(X, σ)`` of ``TM ⊕ T*M``."""

    vector: Derivation
    form: GradedPoly

    def __str__(self) -> str:
        return f"({self.vector}, {self.form})"


def courant_pairing(first: GeneralizedSection, second: GeneralizedSection) -> GradedPoly:
    """``⟨(X,σ), (X',σ')⟩ = i_X σ' + i_{X'} σ``."""
    return insert(first.vector, second.form) + insert(second.vector, first.form)


def dorfman(first: GeneralizedSection, second: GeneralizedSection) -> GeneralizedSection:
    """``[(X,σ), (X',σ')] = ([X,X'], L_X σ' - i_{X'} dσ)``."""
    return GeneralizedSection(
        commutator(first.vector, second.vector),
        lie_derive(first.vector, second.form) - insert(second.vector, de_rham(first.form)),
    )


class DiracMorphism:
    """``Φ: A → TM ⊕ T*M`` given on the frame of an algebroid.

    The tangent part defaults to the anchor of the algebroid.
    """

    __slots__ = "algebroid", "tangent", "ell"

    def __init__(
        self,
        algebroid: AlgebroidData,
        ell: Mapping[str, Mapping[str, Any]],
        tangent: Optional[Mapping[str, Mapping[str, Any]]] = None,
    ) -> None:
        context = algebroid.context
        self.algebroid = algebroid
        for a in list(ell) + list(tangent or {}):
            if a not in algebroid.frame:
                raise FrameMismatch(f"{a!r} is not an element of the frame {algebroid.frame}")
        self.ell: Dict[str, GradedPoly] = {
            a: one_form(context, ell.get(a, {})) for a in algebroid.frame
        }
        if tangent is None:
            self.tangent: Dict[str, Derivation] = {
                a: algebroid.anchor_field(a) for a in algebroid.frame
            }
        else:
            self.tangent = {
                a: Derivation(
                    context,
                    {x: v for x, v in tangent.get(a, {}).items()},
                    degree=0,
                    form_degree=0,
                )
                for a in algebroid.frame
            }

    def image(self, a: str) -> GeneralizedSection:
        return GeneralizedSection(self.tangent[a], self.ell[a])

    def image_of(self, section: Mapping[str, GradedPoly]) -> GeneralizedSection:
        context = self.algebroid.context
        vector = Derivation.zero(context)
        form = GradedPoly.zero(context)
        for a, coefficient in section.items():
            vector = vector + coefficient * self.tangent[a]
            form = form + coefficient * self.ell[a]
        return GeneralizedSection(vector, form)

    def ell_rows(self) -> Sequence[Sequence[GradedPoly]]:
        context = self.algebroid.context
        return [
            [_coefficient(self.ell[a], x) for x in context.base_coords]
            for a in self.algebroid.frame
        ]

    def graph_rows(self) -> Sequence[Sequence[GradedPoly]]:
        """Rows of ``(ρ, ℓ)``; injective exactly when ``ker ρ ∩ ker ℓ = 0``."""
        context = self.algebroid.context
        return [
            [self.algebroid.anchor_entry(a, x) for x in context.base_coords]
            + [_coefficient(self.ell[a], x) for x in context.base_coords]
            for a in self.algebroid.frame
        ]

    def closed_form(self) -> VectorValuedForm:
        """The closed degree-one 2-form on ``A[1]`` with Spencer data ``(-d∘ℓ, ℓ)``."""
        context = self.algebroid.context
        basis = negative_basis(context)
        ell = {
            basis.coordinate_field(a).label: VectorValuedForm.scalar(value)
            for a, value in self.ell.items()
        }
        return closed_form_from_ell(context, 2, ell, degree=1)


def _coefficient(form: GradedPoly, x: str) -> GradedPoly:
    return partial(form, differential_name(x))


def poisson_graph(bivector: MultivectorField) -> DiracMorphism:
    """``Φ(dx^i) = (P♯dx^i, dx^i)`` on the cotangent algebroid of P."""
    algebroid = cotangent_algebroid(bivector)
    ell = {cotangent_name(x): {x: 1} for x in bivector.base_coords}
    return DiracMorphism(algebroid, ell)


@dataclass(frozen=True)
class PresymplecticReport(CheckSuite):
    anchor_factorization: CheckResult
    isotropy: CheckResult
    bracket: CheckResult
    rank: CheckResult
    kernel: CheckResult
    compat: CompatReport
    agreement: CheckResult
    ell_nondegeneracy: Nondegeneracy = field(compare=False)

    def all_checks(self) -> Sequence[CheckResult]:
        return (
            self.anchor_factorization,
            self.isotropy,
            self.bracket,
            self.rank,
            self.kernel,
            self.compat.homological,
            self.agreement,
        )

    @property
    def dirac(self) -> bool:
        return self.anchor_factorization.passed and self.isotropy.passed and self.bracket.passed

    def to_dict(self) -> Dict[str, Any]:
        result = super().to_dict()
        result["ell_nondegeneracy"] = self.ell_nondegeneracy.describe()
        return result


def _format(section: GeneralizedSection) -> str:
    vector = "" if section.vector.is_zero() else str(section.vector)
    form = "" if section.form.is_zero() else str(section.form)
    return " ; ".join(part for part in (vector, form) if part)


def check_presymplectic_nq(
    algebroid: AlgebroidData,
    ell: Mapping[str, Mapping[str, Any]],
    tangent: Optional[Mapping[str, Mapping[str, Any]]] = None,
) -> PresymplecticReport:
    morphism = DiracMorphism(algebroid, ell, tangent)
    context = algebroid.context
    frame = algebroid.frame

    def factorization_cases() -> Iterator[Tuple[str, str]]:
        for a in frame:
            defect = algebroid.anchor_field(a) - morphism.tangent[a]
            yield f"rho({a}) - pr_T Phi({a})", "" if defect.is_zero() else str(defect)

    def isotropy_cases() -> Iterator[Tuple[str, GradedPoly]]:
        for i, a in enumerate(frame):
            for b in frame[i:]:
                yield f"<Phi({a}),Phi({b})>", courant_pairing(morphism.image(a), morphism.image(b))

    def bracket_cases() -> Iterator[Tuple[str, str]]:
        for i, a in enumerate(frame):
            for b in frame[i + 1 :]:
                image = morphism.image_of(
                    algebroid.bracket(algebroid.frame_section(a), algebroid.frame_section(b))
                )
                bracket = dorfman(morphism.image(a), morphism.image(b))
                defect = GeneralizedSection(image.vector - bracket.vector, image.form - bracket.form)
                yield f"Phi([{a},{b}]) - [Phi({a}),Phi({b})]", _format(defect)

    anchor_factorization = first_failure("anchor-factorization", factorization_cases())
    isotropy = first_failure("isotropy", isotropy_cases())
    bracket = first_failure("bracket", bracket_cases())
    dimension = len(context.base_coords)
    if algebroid.rank == dimension:
        rank = CheckResult.ok("rank", f"rank A = dim M = {dimension}")
    else:
        rank = CheckResult.failure("rank", f"rank A = {algebroid.rank}, dim M = {dimension}")
    graph = injectivity(morphism.graph_rows(), context)
    if graph.passed:
        kernel = CheckResult.ok("kernel", graph.describe())
    else:
        kernel = CheckResult.failure("kernel", "ker rho and ker ell intersect")
    ell_status = injectivity(morphism.ell_rows(), context)

    Q = build_homological_vf(algebroid)
    compat = check_compat(Q, morphism.closed_form(), require_homological=False)
    if not anchor_factorization.passed:
        agreement = CheckResult.ok("agreement", "anchor does not factor; not compared")
    elif not compat.homological.passed:
        agreement = CheckResult.ok("agreement", "not a Lie algebroid; not compared")
    elif compat.compatible == (isotropy.passed and bracket.passed):
        agreement = CheckResult.ok("agreement")
    else:
        agreement = CheckResult.failure(
            "agreement", f"nq={compat.compatible}, dirac={isotropy.passed and bracket.passed}"
        )
    report = PresymplecticReport(
        anchor_factorization, isotropy, bracket, rank, kernel, compat, agreement, ell_status
    )
    logger.info("check_presymplectic_nq: dirac=%s passed=%s", report.dirac, report.passed)
    return report
