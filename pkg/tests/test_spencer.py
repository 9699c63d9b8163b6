import random

import pytest
from hypothesis import given, settings, strategies as st

from nqcalc.cartan import VectorValuedForm, de_rham, vector_field
from nqcalc.errors import DegreeError, DegreeZero, InvalidSpencerData
from nqcalc.graded import GradedContext, GradedPoly
from nqcalc.sampling import random_context, random_form
from nqcalc.spencer import (
    SpencerData,
    differential_spencer,
    extract_spencer,
    negative_basis,
    reconstruct_form,
    validate_spencer,
)

seeds = st.integers(min_value=0, max_value=10 ** 6)


@pytest.fixture
def context():
    return GradedContext(["x", "y"], [("a", 1)])


def gen(context, name):
    return GradedPoly.generator(context, name)


def test_negative_basis_labels():
    context = GradedContext(["x"], [("a", 1), ("b", 2)])
    basis = negative_basis(context)
    assert basis.labels == ["del(a)", "del(b)", "a*del(b)"]
    assert basis.coordinate_field("b").label == "del(b)"
    assert [f.degree for f in basis] == [-1, -2, -1]
    assert "x*del(a)" not in basis


def test_decompose_collects_base_coefficients():
    context = GradedContext(["x"], [("a", 1), ("b", 2)])
    x = gen(context, "x")
    field = vector_field(context, {"b": x * gen(context, "a")})
    [(coefficient, element)] = negative_basis(context).decompose(field)
    assert coefficient == x
    assert element.label == "a*del(b)"


def test_extract_symplectic_form(context):
    form = VectorValuedForm.scalar(gen(context, "d(x)") * gen(context, "d(a)"))
    data = extract_spencer(form)
    assert (data.order, data.degree) == (2, 1)
    assert data.ell("del(a)").as_scalar() == gen(context, "d(x)")
    assert data.D("del(a)").is_zero()
    assert validate_spencer(data).passed
    assert reconstruct_form(data) == form


def test_leibniz_extension(context):
    form = VectorValuedForm.scalar(gen(context, "a") * gen(context, "d(x)") * gen(context, "d(y)"))
    data = extract_spencer(form)
    x = gen(context, "x")
    shifted = x * negative_basis(context)["del(a)"].field
    assert data.ell_of(shifted).is_zero()
    assert data.D_of(shifted) == x * data.D("del(a)")


def test_literature_sign(context):
    form = VectorValuedForm.scalar(gen(context, "a") * gen(context, "d(x)"))
    data = extract_spencer(form)
    flipped = data.literature_sign()
    assert flipped.D("del(a)") == -data.D("del(a)")
    assert flipped.ell("del(a)") == data.ell("del(a)")
    assert flipped.literature_sign() == data


def test_degree_zero_is_rejected(context):
    with pytest.raises(DegreeZero):
        SpencerData(context, 1, 0)
    with pytest.raises(DegreeZero):
        extract_spencer(VectorValuedForm.scalar(gen(context, "d(x)")))


def test_unknown_label(context):
    with pytest.raises(DegreeError):
        SpencerData(context, 1, 1, ell={"x*del(a)": VectorValuedForm.zero(context)})


def test_wrong_degree_fails_validation(context):
    two_form = VectorValuedForm.scalar(gen(context, "d(x)") * gen(context, "d(y)"))
    data = SpencerData(context, 2, 1, ell={"del(a)": two_form})
    report = validate_spencer(data)
    assert not report.check("degree").passed
    with pytest.raises(InvalidSpencerData):
        reconstruct_form(data)


def test_nonlinear_ell_fails_leibniz(context):
    dx = VectorValuedForm.scalar(gen(context, "d(x)"))
    data = SpencerData(context, 2, 1, ell_operator=lambda field: dx)
    report = validate_spencer(data)
    assert report.check("degree").passed
    assert not report.check("leibniz").passed
    assert "ell linearity" in report.check("leibniz").witness


def test_differential_spencer_sign(context):
    x = gen(context, "x")
    form = VectorValuedForm.scalar(x * gen(context, "a"))
    data = differential_spencer(extract_spencer(form))
    assert data.D("del(a)").as_scalar() == -gen(context, "d(x)")
    assert data.ell("del(a)").as_scalar() == x
    assert data == extract_spencer(de_rham(form))


def _random_form(seed):
    rng = random.Random(seed)
    ctx = random_context(rng)
    return random_form(rng, ctx, rng.randint(0, 3), rng.randint(1, 2))


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_extracted_data_are_valid(seed):
    form = _random_form(seed)
    assert validate_spencer(extract_spencer(form)).passed


@settings(max_examples=120, deadline=None)
@given(seeds)
def test_reconstruct_inverts_extract(seed):
    form = _random_form(seed)
    data = extract_spencer(form)
    assert reconstruct_form(data) == form
    assert extract_spencer(reconstruct_form(data)) == data


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_differential_commutes_with_extract(seed):
    form = _random_form(seed)
    closure = de_rham(form)
    if closure.is_zero():
        return
    assert differential_spencer(extract_spencer(form)) == extract_spencer(closure)
