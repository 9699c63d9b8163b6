import pytest

from nqcalc.errors import DegreeError
from nqcalc.graded import GradedPoly
from nqcalc.models import cotangent_context
from nqcalc.multivector import (
    MultivectorField,
    evaluate,
    jacobi_defects,
    schouten_bracket,
    sharp,
    wedge,
)

BASE = ["x", "y", "z"]


@pytest.fixture
def context():
    return cotangent_context(BASE)


def coordinate(context, name):
    return GradedPoly.generator(context, name)


def test_components_and_evaluation(context):
    P = MultivectorField.bivector(context, {("x", "y"): 1})
    assert P.degree == 2
    assert P.components() == {("x", "y"): GradedPoly.constant(context, 1)}
    assert evaluate(P, [{"x": 1}, {"y": 1}]) == 1
    assert evaluate(P, [{"y": 1}, {"x": 1}]) == -1
    with pytest.raises(DegreeError):
        evaluate(P, [{"x": 1}])


def test_sharp(context):
    P = MultivectorField.bivector(context, {("x", "y"): 1})
    assert sharp(P, {"x": 1}) == MultivectorField.vector(context, {"y": 1})
    assert sharp(P, {"y": 1}) == MultivectorField.vector(context, {"x": -1})


def test_schouten_of_vectors_is_lie_bracket(context):
    X = MultivectorField.vector(context, {"x": 1})
    Y = MultivectorField.vector(context, {"y": coordinate(context, "x")})
    assert schouten_bracket(X, Y) == MultivectorField.vector(context, {"y": 1})


def test_poisson_bivectors(context):
    x = coordinate(context, "x")
    y = coordinate(context, "y")
    poisson = MultivectorField.bivector(context, {("x", "y"): 1, ("x", "z"): y})
    assert schouten_bracket(poisson, poisson).is_zero()
    broken = MultivectorField.bivector(context, {("x", "y"): 1, ("x", "z"): x})
    square = schouten_bracket(broken, broken)
    assert square.degree == 3
    assert not square.is_zero()


def test_jacobi_pairs(context):
    y = coordinate(context, "y")
    reeb = MultivectorField.vector(context, {"z": 1})
    bivector = MultivectorField.bivector(context, {("x", "y"): 1, ("y", "z"): -y})
    assert not any(jacobi_defects(bivector, reeb))
    flat = MultivectorField.bivector(context, {("x", "y"): 1})
    square, invariance = jacobi_defects(flat, reeb)
    assert square
    assert not invariance


def test_wedge(context):
    dx = MultivectorField.vector(context, {"x": 1})
    dy = MultivectorField.vector(context, {"y": 1})
    assert wedge(dx, dy) == MultivectorField.bivector(context, {("x", "y"): 1})
    assert wedge(dy, dx) == -wedge(dx, dy)


def test_rejects_non_multivectors(context):
    with pytest.raises(DegreeError):
        MultivectorField(context, coordinate(context, "d(x)"))
    with pytest.raises(DegreeError):
        MultivectorField(context, coordinate(context, "p_x") + coordinate(context, "x"))
    vector = MultivectorField.vector(context, {"x": 1})
    assert vector.as_vector_field().value("x") == 1
    with pytest.raises(DegreeError):
        MultivectorField.bivector(context, {("x", "y"): 1}).as_vector_field()
