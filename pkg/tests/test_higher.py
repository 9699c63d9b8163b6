import random

import pytest
from hypothesis import given, settings, strategies as st

from nqcalc.algebroid import AlgebroidData, build_homological_vf
from nqcalc.cartan import VectorValuedForm, lie_derive
from nqcalc.classifiers.compat import check_compat
from nqcalc.classifiers.higher import LITERATURE_NOTE, check_im_kplectic, check_spencer_operator
from nqcalc.errors import FrameMismatch, NotHomological
from nqcalc.graded import GradedContext, GradedPoly, differential_name
from nqcalc.models import multiform_context, multiform_fibers, tangent_context
from nqcalc.sampling import random_form, random_poly
from nqcalc.spencer import extract_spencer, negative_basis, reconstruct_form
from nqcalc.symbolic import EVERYWHERE

seeds = st.integers(min_value=0, max_value=10 ** 6)


def tangent_algebroid(base):
    return AlgebroidData(tangent_context(base), anchor={(f"v_{x}", x): 1 for x in base})


@pytest.fixture
def line():
    return tangent_algebroid(["x"])


@pytest.fixture
def plane():
    return tangent_algebroid(["x", "y"])


def test_de_rham_differential_of_the_fiber_is_a_spencer_operator(line):
    context = line.context
    D = {"v_x": VectorValuedForm.scalar(GradedPoly.zero(context))}
    ell = {"v_x": VectorValuedForm.scalar(GradedPoly.constant(context, 1))}
    report = check_spencer_operator(line, D, ell, 1)
    assert report.spencer_operator
    assert report.compat.compatible
    assert report.agreement.passed
    assert report.to_dict()["note"] == LITERATURE_NOTE


def test_non_constant_ell_breaks_the_mixed_identity(line):
    context = line.context
    x = GradedPoly.generator(context, "x")
    D = {"v_x": VectorValuedForm.scalar(GradedPoly.zero(context))}
    report = check_spencer_operator(line, D, {"v_x": VectorValuedForm.scalar(x)}, 1)
    assert not report.mixed.passed
    assert report.mixed.name == "spencer-mixed"
    assert not report.compat.compatible
    assert report.agreement.passed
    assert not report.spencer_operator


def test_planar_area_form_is_im_symplectic(plane):
    dx = GradedPoly.generator(plane.context, "d(x)")
    dy = GradedPoly.generator(plane.context, "d(y)")
    report = check_im_kplectic(plane, {"v_x": dy, "v_y": -dx}, 1)
    assert report.im1.passed
    assert report.im2.passed
    assert report.kernel.passed
    assert report.annihilator.passed
    assert report.compat.compatible
    assert report.agreement.passed


def test_degenerate_ell(plane):
    dy = GradedPoly.generator(plane.context, "d(y)")
    report = check_im_kplectic(plane, {"v_x": dy}, 1)
    assert not report.im1.passed
    assert not report.kernel.passed
    assert report.agreement.passed
    assert not report.passed


def test_im_kplectic_rejections(plane):
    with pytest.raises(FrameMismatch):
        check_im_kplectic(plane, {"v_z": 1}, 1)
    context = plane.context
    x = GradedPoly.generator(context, "x")
    broken = AlgebroidData(context, anchor={("v_x", "x"): 1, ("v_y", "x"): x})
    with pytest.raises(NotHomological):
        check_im_kplectic(broken, {}, 1)


def line_algebroid():
    context = GradedContext(["x", "y"], [("a", 1), ("b", 1)])
    return AlgebroidData(context, anchor={("a", "x"): 1}, structure={("a", "b", "b"): 1})


ALGEBROIDS = [
    lambda: tangent_algebroid(["x"]),
    lambda: tangent_algebroid(["x", "y"]),
    lambda: tangent_algebroid(["x", "y", "z"]),
    line_algebroid,
]


def pick(rng, order):
    algebroids = [build() for build in ALGEBROIDS]
    return rng.choice([a for a in algebroids if len(a.context.base_coords) >= order])


def base_form(rng, context, order):
    return VectorValuedForm.scalar(random_poly(rng, context, order, 0, max_base_power=2))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_spencer_operator_verdict_matches_compatibility(seed):
    rng = random.Random(seed)
    order = rng.randint(1, 3)
    algebroid = pick(rng, order)
    context = algebroid.context
    D = {a: base_form(rng, context, order) for a in algebroid.frame}
    ell = {a: base_form(rng, context, order - 1) for a in algebroid.frame}
    report = check_spencer_operator(algebroid, D, ell, order)
    assert report.agreement.passed
    assert report.compat is not None
    assert report.compat.agreement.passed
    assert report.compat.compatible is report.spencer_operator


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_data_of_exact_compatible_forms_are_spencer_operators(seed):
    rng = random.Random(seed)
    order = rng.randint(1, 3)
    algebroid = pick(rng, order)
    context = algebroid.context
    Q = build_homological_vf(algebroid)
    form = lie_derive(Q, random_form(rng, context, order, 0))
    assert check_compat(Q, form).compatible
    data = extract_spencer(form, order, 1)
    basis = negative_basis(context)
    D = {a: data.D(basis.coordinate_field(a).label) for a in algebroid.frame}
    ell = {a: data.ell(basis.coordinate_field(a).label) for a in algebroid.frame}
    report = check_spencer_operator(algebroid, D, ell, order)
    assert report.spencer_operator
    assert report.compat.compatible
    assert report.agreement.passed
    assert reconstruct_form(data) == form


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_im_kplectic_verdict_matches_compatibility(seed):
    rng = random.Random(seed)
    order = rng.randint(1, 3)
    algebroid = pick(rng, order)
    context = algebroid.context
    ell = {a: random_poly(rng, context, order, 0, max_base_power=2) for a in algebroid.frame}
    report = check_im_kplectic(algebroid, ell, order)
    assert report.agreement.passed
    assert report.compat.agreement.passed
    assert report.compat.compatible is (report.im1.passed and report.im2.passed)
    assert report.block_structure.passed


@pytest.mark.parametrize("order", [1, 2, 3])
def test_tautological_kplectic_form(order):
    base = ["x", "y", "z"]
    context = multiform_context(base, order)
    ell = {}
    for name, indices in multiform_fibers(base, order):
        value = GradedPoly.constant(context, 1)
        for x in indices:
            value = value * GradedPoly.generator(context, differential_name(x))
        ell[name] = value
    report = check_im_kplectic(AlgebroidData(context), ell, order)
    assert report.im1.passed
    assert report.im2.passed
    assert report.kernel.passed
    assert report.annihilator.passed
    assert [status.status for status in report.statuses] == [EVERYWHERE, EVERYWHERE]
    assert report.compat.compatible
    assert report.compat.obstructions_vanish
    assert report.agreement.passed
    assert report.block_structure.passed
    assert report.passed
