"""Standard graded charts built from the base coordinates of a manifold."""
import itertools
from typing import Dict, List, Optional, Sequence, Tuple

from nqcalc.cartan import VectorValuedForm
from nqcalc.graded import ConnectionInput, GradedContext, GradedPoly, differential_name, partial

__all__ = [
    "JET_VALUE",
    "LINE_FRAME",
    "cotangent_name",
    "cotangent_context",
    "tangent_context",
    "jet_context",
    "multiform_fibers",
    "multiform_context",
    "tautological_form",
    "one_form",
    "one_form_coefficients",
    "two_form",
]

JET_VALUE = "u"
LINE_FRAME = "e"


def cotangent_name(coordinate: str) -> str:
    return f"p_{coordinate}"


def cotangent_context(
    base: Sequence[str],
    frame: Sequence[str] = (),
    connection: Optional[ConnectionInput] = None,
) -> GradedContext:
    """``T*[1]M``: one degree-one fiber coordinate ``p_x`` per base coordinate."""
    return GradedContext(base, [(cotangent_name(x), 1) for x in base], frame, connection)


def tangent_context(base: Sequence[str], prefix: str = "v_") -> GradedContext:
    return GradedContext(base, [(f"{prefix}{x}", 1) for x in base])


def jet_context(base: Sequence[str]) -> GradedContext:
    """``J¹L[1]`` for the trivial line bundle with frame ``e``.

    ``u`` is dual to ``j¹1`` and ``p_x`` to the ``dx`` part of ``J¹L = L ⊕ T*M``.
    """
    fibers = [(JET_VALUE, 1)] + [(cotangent_name(x), 1) for x in base]
    return GradedContext(base, fibers, (LINE_FRAME,))


def multiform_fibers(base: Sequence[str], order: int) -> List[Tuple[str, Tuple[str, ...]]]:
    return [
        ("p_" + "_".join(indices), indices)
        for indices in itertools.combinations(base, order)
    ]


def multiform_context(base: Sequence[str], order: int) -> GradedContext:
    """``(∧^k T*)[1]M``."""
    return GradedContext(base, [(name, 1) for name, _ in multiform_fibers(base, order)])


def one_form(context: GradedContext, coefficients: dict) -> GradedPoly:
    """``Σ f_x dx`` from a mapping base coordinate → coefficient."""
    result = GradedPoly.zero(context)
    for x, value in coefficients.items():
        result = result + context.coerce(value) * GradedPoly.generator(context, differential_name(x))
    return result


def two_form(context: GradedContext, coefficients: dict) -> GradedPoly:
    """``Σ f_{xy} dx dy`` over the given coordinate pairs."""
    result = GradedPoly.zero(context)
    for (x, y), value in coefficients.items():
        result = result + context.coerce(value) * GradedPoly.generator(
            context, differential_name(x)
        ) * GradedPoly.generator(context, differential_name(y))
    return result


def one_form_coefficients(form: GradedPoly) -> Dict[str, GradedPoly]:
    """Inverse of :func:`one_form` on ``Σ f_x dx`` with base-function coefficients."""
    context = form.context
    result = {}
    for x in context.base_coords:
        value = partial(form, differential_name(x))
        if value:
            result[x] = value
    return result


def tautological_form(base: Sequence[str], order: int) -> VectorValuedForm:
    """The tautological ``Σ_I p_I dx^I`` on ``(∧^k T*)[1]M``."""
    context = multiform_context(base, order)
    result = GradedPoly.zero(context)
    for name, indices in multiform_fibers(base, order):
        term = GradedPoly.generator(context, name)
        for x in indices:
            term = term * GradedPoly.generator(context, differential_name(x))
        result = result + term
    return VectorValuedForm.scalar(result)
