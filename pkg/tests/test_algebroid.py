import pytest

from nqcalc.algebroid import (
    AlgebroidData,
    algebroid_axioms,
    build_homological_derivation,
    build_homological_vf,
    ce_to_function,
    check_homological,
    chevalley_eilenberg,
    extract_algebroid,
    function_to_ce,
)
from nqcalc.cartan import VectorValuedForm, partial_field
from nqcalc.classifiers.poisson import cotangent_algebroid
from nqcalc.errors import (
    AntisymmetryError,
    ArityMismatch,
    DegreeError,
    FrameMismatch,
    NotHomological,
    WrongDegree,
)
from nqcalc.graded import GradedContext, GradedPoly
from nqcalc.models import cotangent_context, tangent_context
from nqcalc.multivector import MultivectorField


@pytest.fixture
def so3():
    context = GradedContext([], [("a", 1), ("b", 1), ("c", 1)])
    return AlgebroidData(
        context,
        structure={("a", "b", "c"): 1, ("b", "c", "a"): 1, ("c", "a", "b"): 1},
    )


@pytest.fixture
def line_algebroid():
    """Rank two over a line: rho(a) = d/dx, [a, b] = b."""
    context = GradedContext(["x"], [("a", 1), ("b", 1)])
    return AlgebroidData(context, anchor={("a", "x"): 1}, structure={("a", "b", "b"): 1})


@pytest.fixture
def broken_anchor():
    context = GradedContext(["x"], [("a", 1), ("b", 1)])
    x = GradedPoly.generator(context, "x")
    return AlgebroidData(context, anchor={("a", "x"): 1, ("b", "x"): x})


def test_so3_is_homological(so3):
    Q = build_homological_vf(so3)
    assert Q.degree == 1
    assert check_homological(Q).passed
    assert algebroid_axioms(so3).passed


def test_extract_inverts_build(so3, line_algebroid):
    for algebroid in (so3, line_algebroid):
        assert extract_algebroid(build_homological_vf(algebroid)) == algebroid


def test_broken_anchor(broken_anchor):
    report = check_homological(build_homological_vf(broken_anchor))
    assert not report.passed
    assert report.witness
    axioms = algebroid_axioms(broken_anchor)
    assert axioms.jacobi.passed
    assert not axioms.anchor_morphism.passed
    with pytest.raises(NotHomological):
        extract_algebroid(build_homological_vf(broken_anchor))


def test_wrong_degree(so3):
    with pytest.raises(WrongDegree):
        check_homological(partial_field(so3.context, "a"))


def test_bracket_of_sections(line_algebroid):
    context = line_algebroid.context
    x = GradedPoly.generator(context, "x")
    bracket = line_algebroid.bracket({"a": GradedPoly.constant(context, 1)}, {"b": x})
    assert bracket == {"b": x + 1}


def test_structure_antisymmetry():
    context = GradedContext([], [("a", 1), ("b", 1)])
    with pytest.raises(AntisymmetryError):
        AlgebroidData(context, structure={("a", "b", "a"): 1, ("b", "a", "a"): 1})
    with pytest.raises(AntisymmetryError):
        AlgebroidData(context, structure={("a", "a", "b"): 1})


def test_rejects_bad_input():
    with pytest.raises(FrameMismatch):
        AlgebroidData(GradedContext(["x"], [("a", 2)]))
    context = GradedContext(["x"], [("a", 1)])
    with pytest.raises(FrameMismatch):
        AlgebroidData(context, anchor={("b", "x"): 1})
    with pytest.raises(DegreeError):
        AlgebroidData(context, anchor={("a", "x"): GradedPoly.generator(context, "a")})
    with pytest.raises(FrameMismatch):
        AlgebroidData(context, representation={("a", "e", "e"): 1})


def test_representation():
    context = GradedContext(["x"], [("a", 1)], frame=["e"])
    algebroid = AlgebroidData(context, anchor={("a", "x"): 1}, representation={("a", "e", "e"): 1})
    assert algebroid.has_representation
    Q = build_homological_derivation(algebroid)
    assert check_homological(Q).passed
    assert extract_algebroid(Q) == algebroid
    e = VectorValuedForm.frame_element(context, "e")
    assert Q(e) == GradedPoly.generator(context, "a") * e


def test_chevalley_eilenberg_matches_q(line_algebroid):
    context = line_algebroid.context
    x = GradedPoly.generator(context, "x")
    phi = {("a",): x, ("b",): x ** 2}
    differential = chevalley_eilenberg(line_algebroid, phi)
    assert differential == {("a", "b"): VectorValuedForm.scalar(2 * x - x ** 2)}
    Q = build_homological_vf(line_algebroid)
    image = Q(ce_to_function(line_algebroid, phi).as_scalar())
    assert ce_to_function(line_algebroid, differential).as_scalar() == image


def test_chevalley_eilenberg_squares_to_zero(line_algebroid):
    x = GradedPoly.generator(line_algebroid.context, "x")
    once = chevalley_eilenberg(line_algebroid, {(): x ** 2})
    assert once == {("a",): VectorValuedForm.scalar(2 * x)}
    assert chevalley_eilenberg(line_algebroid, once) == {}


def test_cochain_round_trip(so3):
    phi = {("a", "b"): VectorValuedForm.scalar(GradedPoly.constant(so3.context, 1))}
    function = ce_to_function(so3, phi)
    assert function_to_ce(so3, function, 2) == phi
    assert ce_to_function(so3, {("b", "a"): -1}) == function


def test_cochain_arity(so3):
    with pytest.raises(ArityMismatch):
        chevalley_eilenberg(so3, {("a",): 1, ("a", "b"): 1})
    with pytest.raises(ArityMismatch):
        chevalley_eilenberg(so3, {("a", "a"): 1})


def lie_algebra(structure):
    names = sorted({name for key in structure for name in key})
    return AlgebroidData(GradedContext([], [(name, 1) for name in names]), structure=structure)


def cotangent_of(base, components):
    context = cotangent_context(base)
    coordinate = {x: GradedPoly.generator(context, x) for x in base}
    values = {
        pair: value(coordinate) if callable(value) else value for pair, value in components.items()
    }
    return cotangent_algebroid(MultivectorField.bivector(context, values))


def action_of_affine_line(sign):
    context = GradedContext(["x"], [("a", 1), ("b", 1)])
    x = GradedPoly.generator(context, "x")
    return AlgebroidData(context, anchor={("a", "x"): sign * x, ("b", "x"): 1}, structure={("a", "b", "b"): 1})


def rotations_of_space():
    context = GradedContext(["x", "y", "z"], [("a", 1), ("b", 1), ("c", 1)])
    x, y, z = (GradedPoly.generator(context, name) for name in ("x", "y", "z"))
    return AlgebroidData(
        context,
        anchor={
            ("a", "y"): z,
            ("a", "z"): -y,
            ("b", "z"): x,
            ("b", "x"): -z,
            ("c", "x"): y,
            ("c", "y"): -x,
        },
        structure={("a", "b", "c"): 1, ("b", "c", "a"): 1, ("c", "a", "b"): 1},
    )


ALGEBROIDS = [
    pytest.param(lambda: AlgebroidData(GradedContext(["x"], [("a", 1), ("b", 1)])), True, id="abelian"),
    pytest.param(
        lambda: AlgebroidData(tangent_context(["x", "y"]), anchor={("v_x", "x"): 1, ("v_y", "y"): 1}),
        True,
        id="tangent-plane",
    ),
    pytest.param(
        lambda: lie_algebra({("a", "b", "c"): 1, ("b", "c", "a"): 1, ("c", "a", "b"): 1}), True, id="so3"
    ),
    pytest.param(
        lambda: lie_algebra({("e1", "e2", "e3"): 1, ("e2", "e3", "e1"): 1, ("e3", "e1", "e2"): -1}),
        True,
        id="so21",
    ),
    pytest.param(
        lambda: lie_algebra({("e1", "e2", "e3"): 1, ("e1", "e3", "e3"): 1, ("e2", "e3", "e1"): 1}),
        False,
        id="not-lie",
    ),
    pytest.param(lambda: cotangent_of(["x", "y"], {("x", "y"): 1}), True, id="symplectic-plane"),
    pytest.param(lambda: cotangent_of(["x", "y"], {("x", "y"): lambda c: c["x"]}), True, id="linear-plane"),
    pytest.param(
        lambda: cotangent_of(
            ["x", "y", "z"],
            {("x", "y"): lambda c: c["z"], ("y", "z"): lambda c: c["x"], ("z", "x"): lambda c: c["y"]},
        ),
        True,
        id="so3-dual",
    ),
    pytest.param(
        lambda: cotangent_of(["x", "y", "z"], {("x", "y"): 1, ("x", "z"): lambda c: c["x"]}),
        False,
        id="not-poisson-constant",
    ),
    pytest.param(
        lambda: cotangent_of(["x", "y", "z"], {("x", "y"): lambda c: c["x"], ("y", "z"): lambda c: c["y"]}),
        False,
        id="not-poisson-linear",
    ),
    pytest.param(lambda: action_of_affine_line(-1), True, id="affine-action"),
    pytest.param(rotations_of_space, True, id="rotation-action"),
    pytest.param(lambda: action_of_affine_line(1), False, id="anti-action"),
]


@pytest.mark.parametrize("build, lie", ALGEBROIDS)
def test_homological_agrees_with_axioms(build, lie):
    algebroid = build()
    assert check_homological(build_homological_vf(algebroid)).passed is lie
    assert algebroid_axioms(algebroid).passed is lie


def test_jacobiator_witness():
    algebroid = lie_algebra({("e1", "e2", "e3"): 1, ("e1", "e3", "e3"): 1, ("e2", "e3", "e1"): 1})
    axioms = algebroid_axioms(algebroid)
    assert axioms.jacobi.witness == "Jac(e1,e2,e3): (-1)*e1"
    assert axioms.anchor_morphism.passed
    report = check_homological(build_homological_vf(algebroid))
    assert report.witness.startswith("[Q,Q](e1): ")
