import pytest

from nqcalc.cartan import VectorValuedForm
from nqcalc.classifiers.contact import cartan_form, check_contact_nq, jacobi_bracket, jet_algebroid
from nqcalc.graded import GradedPoly
from nqcalc.models import jet_context
from nqcalc.multivector import MultivectorField

BASE = ["x", "y", "z"]


def test_cartan_form_on_the_line():
    context = jet_context(["x"])
    du = GradedPoly.generator(context, "d(u)")
    p = GradedPoly.generator(context, "p_x")
    dx = GradedPoly.generator(context, "d(x)")
    e = VectorValuedForm.frame_element(context, "e")
    assert cartan_form(["x"]) == (du + p * dx) * e


def test_jacobi_bracket():
    bivector = MultivectorField.bivector(BASE, {("x", "y"): 1})
    reeb = MultivectorField.vector(BASE, {"z": 1})
    x, y, z = (GradedPoly.generator(bivector.context, name) for name in BASE)
    assert jacobi_bracket(bivector, reeb, x, y) == 1
    assert jacobi_bracket(bivector, reeb, 1, z) == 1
    assert jacobi_bracket(bivector, reeb, z, x) == -x


def test_jet_algebroid_anchor():
    bivector = MultivectorField.bivector(BASE, {("x", "y"): 1})
    reeb = MultivectorField.vector(BASE, {"z": 1})
    algebroid = jet_algebroid(bivector, reeb)
    assert algebroid.context == jet_context(BASE)
    assert algebroid.anchor_entry("u", "z") == 1
    assert algebroid.anchor_entry("p_x", "y") == 1
    assert algebroid.anchor_entry("p_y", "x") == -1
    assert algebroid.anchor_entry("u", "x").is_zero()


def test_every_vector_field_on_the_line_is_contact():
    bivector = MultivectorField.bivector(["x"], {})
    reeb = MultivectorField.vector(["x"], {"x": 1})
    report = check_contact_nq(bivector, reeb)
    assert report.cartan_data.passed
    assert report.jacobi.passed
    assert report.compat.compatible
    assert report.passed


@pytest.mark.parametrize(
    "twist, is_jacobi",
    [
        pytest.param(1, True, id="jacobi-pair"),
        pytest.param(0, False, id="square-defect"),
    ],
)
def test_jacobi_pairs_in_three_dimensions(twist, is_jacobi):
    context = MultivectorField.bivector(BASE, {}).context
    y = GradedPoly.generator(context, "y")
    bivector = MultivectorField.bivector(context, {("x", "y"): 1, ("y", "z"): -twist * y})
    reeb = MultivectorField.vector(context, {"z": 1})
    report = check_contact_nq(bivector, reeb)
    assert report.cartan_data.passed
    assert report.jacobi.passed is is_jacobi
    assert report.agreement.passed
    assert report.passed is is_jacobi
