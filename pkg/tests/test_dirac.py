from nqcalc.algebroid import AlgebroidData
from nqcalc.classifiers.dirac import (
    GeneralizedSection,
    check_presymplectic_nq,
    courant_pairing,
    dorfman,
    poisson_graph,
)
from nqcalc.cartan import vector_field
from nqcalc.graded import GradedContext, GradedPoly
from nqcalc.models import cotangent_context, tangent_context
from nqcalc.multivector import MultivectorField
from nqcalc.symbolic import DEGENERATE, EVERYWHERE, GENERIC


def tangent_algebroid(base):
    context = tangent_context(base)
    return AlgebroidData(context, anchor={(f"v_{x}", x): 1 for x in base})


def test_planar_two_form_is_dirac():
    algebroid = tangent_algebroid(["x", "y"])
    report = check_presymplectic_nq(algebroid, {"v_x": {"y": 1}, "v_y": {"x": -1}})
    assert report.dirac
    assert report.ell_nondegeneracy.status == EVERYWHERE
    assert report.compat.compatible
    assert report.passed


def test_non_closed_two_form_breaks_the_bracket():
    algebroid = tangent_algebroid(["x", "y", "z"])
    x = GradedPoly.generator(algebroid.context, "x")
    report = check_presymplectic_nq(algebroid, {"v_y": {"z": x}, "v_z": {"y": -x}})
    assert report.isotropy.passed
    assert not report.bracket.passed
    assert report.bracket.witness == "Phi([v_x,v_y]) - [Phi(v_x),Phi(v_y)]: -d(z)"
    assert not report.compat.compatible
    assert report.agreement.passed
    assert not report.passed


def test_tangent_part_must_factor_the_anchor():
    algebroid = tangent_algebroid(["x"])
    report = check_presymplectic_nq(algebroid, {}, tangent={"v_x": {"x": 2}})
    assert not report.anchor_factorization.passed
    assert report.anchor_factorization.witness.startswith("rho(v_x) - pr_T Phi(v_x): ")
    assert report.agreement.passed


def test_courant_operations():
    context = tangent_context(["x", "y"])
    x = GradedPoly.generator(context, "x")
    dx = GradedPoly.generator(context, "d(x)")
    dy = GradedPoly.generator(context, "d(y)")
    first = GeneralizedSection(vector_field(context, {"x": 1}, degree=0), x * dy)
    second = GeneralizedSection(vector_field(context, {"y": 1}, degree=0), dx)
    assert courant_pairing(first, second) == x + 1
    bracket = dorfman(first, second)
    assert bracket.vector.is_zero()
    assert bracket.form == dx


def test_poisson_graph():
    base = ["x", "y"]
    P = MultivectorField.bivector(base, {("x", "y"): 1})
    graph = poisson_graph(P)
    image = graph.image("p_x")
    context = graph.algebroid.context
    assert image.form == GradedPoly.generator(context, "d(x)")
    assert image.vector.value("y") == 1
    assert check_presymplectic_nq(graph.algebroid, {"p_x": {"x": 1}, "p_y": {"y": 1}}).dirac


def test_self_pairing_breaks_isotropy():
    algebroid = tangent_algebroid(["x"])
    report = check_presymplectic_nq(algebroid, {"v_x": {"x": 1}})
    assert report.anchor_factorization.passed
    assert report.bracket.passed
    assert not report.isotropy.passed
    assert report.isotropy.witness == "<Phi(v_x),Phi(v_x)>: 2"
    assert not report.dirac
    assert not report.compat.compatible
    assert report.agreement.passed


def test_rank_below_dimension():
    context = GradedContext(["x", "y"], [("v", 1)])
    algebroid = AlgebroidData(context, anchor={("v", "x"): 1})
    report = check_presymplectic_nq(algebroid, {})
    assert report.dirac
    assert not report.rank.passed
    assert report.rank.witness == "rank A = 1, dim M = 2"
    assert report.kernel.passed
    assert not report.passed


def test_kernels_of_anchor_and_ell_meet():
    algebroid = AlgebroidData(GradedContext(["x"], [("v", 1)]))
    report = check_presymplectic_nq(algebroid, {})
    assert report.rank.passed
    assert not report.kernel.passed
    assert report.kernel.witness == "ker rho and ker ell intersect"
    assert report.ell_nondegeneracy.status == DEGENERATE
    assert report.compat.compatible
    assert not report.passed


def test_ell_degenerating_along_a_line():
    algebroid = tangent_algebroid(["x", "y"])
    x = GradedPoly.generator(algebroid.context, "x")
    report = check_presymplectic_nq(algebroid, {"v_x": {"y": x}, "v_y": {"x": -x}})
    assert report.dirac
    assert report.ell_nondegeneracy.status == GENERIC
    assert report.ell_nondegeneracy.locus == ("x",)
    assert report.to_dict()["ell_nondegeneracy"] == "generic; vanishing locus of x"
    assert report.kernel.detail == EVERYWHERE
    assert report.passed
