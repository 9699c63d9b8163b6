import random

import pytest
from hypothesis import given, settings, strategies as st

from nqcalc.cartan import (
    Derivation,
    VectorValuedForm,
    check_flat,
    commutator,
    covariant_derivation,
    curvature,
    de_rham,
    de_rham_derivation,
    exterior_derivative,
    grading_derivation,
    insert,
    interior_derivation,
    lie_derivation,
    lie_derive,
    partial_field,
    potential,
    vector_field,
)
from nqcalc.errors import DegreeError, DegreeZero, FrameMismatch, NonFlatConnection, NotClosed
from nqcalc.graded import GradedContext, GradedPoly
from nqcalc.sampling import (
    BASE_NAMES,
    FIBER_NAMES,
    random_coefficient,
    random_context,
    random_form,
    random_poly,
    random_vector_field,
)

seeds = st.integers(min_value=0, max_value=10 ** 6)


@pytest.fixture
def context():
    return GradedContext(["x", "y"], [("a", 1), ("b", 2)])


def gen(context, name):
    return GradedPoly.generator(context, name)


def test_insert_coordinate_field(context):
    form = gen(context, "d(x)") * gen(context, "d(y)")
    assert insert(partial_field(context, "x"), form) == gen(context, "d(y)")
    assert insert(partial_field(context, "y"), form) == -gen(context, "d(x)")


def test_vector_field_rejects_differentials(context):
    with pytest.raises(DegreeError):
        vector_field(context, {"d(x)": 1})


def test_inconsistent_degrees(context):
    with pytest.raises(DegreeError):
        vector_field(context, {"x": gen(context, "a"), "y": gen(context, "b")})


def test_grading_derivation(context):
    euler = grading_derivation(context)
    assert euler(gen(context, "b")) == 2 * gen(context, "b")
    assert euler(gen(context, "a") * gen(context, "b")) == 3 * gen(context, "a") * gen(context, "b")
    assert euler(gen(context, "x")).is_zero()


def test_potential():
    context = GradedContext(["x"], [("a", 1)])
    form = VectorValuedForm.scalar(gen(context, "d(x)") * gen(context, "d(a)"))
    primitive = potential(form, 1)
    assert str(primitive) == "a*d(x)"
    assert de_rham(primitive) == form


def test_potential_errors():
    context = GradedContext(["x"], [("a", 1)])
    open_form = VectorValuedForm.scalar(gen(context, "a") * gen(context, "d(x)"))
    with pytest.raises(NotClosed):
        potential(open_form, 1)
    with pytest.raises(DegreeZero):
        potential(open_form, 0)
    with pytest.raises(DegreeError):
        potential(open_form, 2)


def test_frame_mismatch(context):
    framed = context.with_frame(["e"])
    with pytest.raises(FrameMismatch):
        VectorValuedForm(framed, {"f": 1})
    with pytest.raises(FrameMismatch):
        VectorValuedForm.scalar(GradedPoly.constant(framed, 1))


def test_flat_connection():
    context = GradedContext(["x", "y"], frame=["e", "f"], connection={("x", "e"): {"f": 1}})
    assert curvature(context) == ()
    check_flat(context)
    e = VectorValuedForm.frame_element(context, "e")
    assert de_rham(e) == GradedPoly.generator(context, "d(x)") * VectorValuedForm.frame_element(
        context, "f"
    )
    assert de_rham(de_rham(e)).is_zero()


def test_curved_connection():
    y = GradedPoly.generator(GradedContext(["x", "y"]), "y")
    context = GradedContext(["x", "y"], frame=["e", "f"], connection={("x", "e"): {"f": y}})
    assert curvature(context)
    with pytest.raises(NonFlatConnection):
        check_flat(context)
    with pytest.raises(NonFlatConnection):
        de_rham(VectorValuedForm.frame_element(context, "e"))


def test_connection_must_be_base_function():
    a = GradedPoly.generator(GradedContext(["x"], [("a", 1)]), "a")
    with pytest.raises(DegreeError):
        GradedContext(["x"], [("a", 1)], ["e"], {("x", "e"): {"e": a}})


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_de_rham_squares_to_zero(seed):
    rng = random.Random(seed)
    ctx = random_context(rng)
    p = random_poly(rng, ctx, rng.randint(0, 2), rng.randint(0, 3), max_base_power=2)
    assert de_rham(de_rham(p)).is_zero()


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_lie_derivative_is_graded_commutator(seed):
    rng = random.Random(seed)
    ctx = random_context(rng)
    field = random_vector_field(rng, ctx, rng.randint(0, 1))
    cartan = commutator(interior_derivation(field), de_rham_derivation(ctx))
    p = random_poly(rng, ctx, rng.randint(0, 2), rng.randint(0, 2), max_base_power=2)
    assert cartan(p) == lie_derive(field, p)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_derivation_leibniz(seed):
    rng = random.Random(seed)
    ctx = random_context(rng)
    field = random_vector_field(rng, ctx, rng.randint(0, 1))
    p = random_poly(rng, ctx, rng.randint(0, 1), rng.randint(0, 2))
    q = random_poly(rng, ctx, rng.randint(0, 1), rng.randint(0, 2))
    if p.is_zero():
        return
    sign = -1 if field.parity * p.parity() else 1
    assert field(p * q) == field(p) * q + sign * (p * field(q))


def test_euler_field_scales_coordinate_fields(context):
    euler = grading_derivation(context)
    for name in context.fiber_coords:
        field = partial_field(context, name)
        assert commutator(euler, field) == -context.degree_of(name) * field


def test_commutator_of_odd_coordinate_fields():
    context = GradedContext([], [("a", 1), ("b", 1)])
    shifted = gen(context, "a") * partial_field(context, "b")
    assert shifted.degree == 0
    assert commutator(partial_field(context, "a"), shifted) == partial_field(context, "b")


def random_fields(rng, context, count):
    return [random_vector_field(rng, context, rng.randint(-2, 1)) for _ in range(count)]


def random_target(rng, context):
    return random_poly(rng, context, rng.randint(0, 2), rng.randint(0, 2), max_base_power=2)


def graded_bracket(first, second, target):
    sign = -1 if first.parity * second.parity else 1
    return first(second(target)) - sign * second(first(target))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_insertions_anticommute(seed):
    rng = random.Random(seed)
    ctx = random_context(rng)
    X, Y = (interior_derivation(field) for field in random_fields(rng, ctx, 2))
    assert commutator(X, Y).is_zero()
    assert graded_bracket(X, Y, random_target(rng, ctx)).is_zero()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_lie_derivative_against_insertion(seed):
    rng = random.Random(seed)
    ctx = random_context(rng)
    X, Y = random_fields(rng, ctx, 2)
    p = random_target(rng, ctx)
    bracket = commutator(X, Y)
    assert graded_bracket(lie_derivation(X), interior_derivation(Y), p) == insert(bracket, p)
    assert graded_bracket(lie_derivation(X), lie_derivation(Y), p) == lie_derive(bracket, p)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_lie_derivative_commutes_with_de_rham(seed):
    rng = random.Random(seed)
    ctx = random_context(rng)
    [X] = random_fields(rng, ctx, 1)
    assert graded_bracket(lie_derivation(X), de_rham_derivation(ctx), random_target(rng, ctx)).is_zero()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_module_rules(seed):
    rng = random.Random(seed)
    ctx = random_context(rng)
    [X] = random_fields(rng, ctx, 1)
    f = random_poly(rng, ctx, 0, rng.randint(0, 2), max_base_power=2)
    p = random_target(rng, ctx)
    assert insert(f * X, p) == f * insert(X, p)
    sign = -1 if (f.parity() + X.degree) % 2 else 1
    assert lie_derive(f * X, p) == f * lie_derive(X, p) + sign * (exterior_derivative(f) * insert(X, p))


def flat_context(rng):
    """A random chart with frame (e, f) and a flat connection along x."""
    base = BASE_NAMES[: rng.randint(1, 3)]
    fibers = [(name, rng.randint(1, 2)) for name in FIBER_NAMES[: rng.randint(1, 3)]]
    x = GradedPoly.generator(GradedContext(base), "x")
    connection = {
        ("x", "e"): {"f": random_coefficient(rng) * x},
        ("x", "f"): {"f": random_coefficient(rng)},
    }
    return GradedContext(base, fibers, ("e", "f"), connection)


def random_valued_form(rng, context):
    return random_form(rng, context, rng.randint(0, 2), rng.randint(0, 2))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_covariant_lie_derivative(seed):
    rng = random.Random(seed)
    ctx = flat_context(rng)
    field = random_vector_field(rng, ctx, rng.randint(-1, 1), endo=False)
    nabla = covariant_derivation(field)
    form = random_valued_form(rng, ctx)
    differential = de_rham_derivation(ctx)
    assert graded_bracket(interior_derivation(nabla), differential, form) == lie_derivation(nabla)(form)
    assert graded_bracket(lie_derivation(nabla), differential, form).is_zero()
    assert de_rham(de_rham(form)).is_zero()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_negative_fields_are_their_own_covariant_derivative(seed):
    rng = random.Random(seed)
    ctx = flat_context(rng)
    field = random_vector_field(rng, ctx, rng.randint(-2, -1), endo=False)
    assert covariant_derivation(field) == field
