import pytest

from nqcalc.errors import ExpressionSyntaxError, UnknownGenerator
from nqcalc.expressions import parse_expression, tokenize
from nqcalc.graded import GradedContext, GradedPoly


@pytest.fixture
def context():
    return GradedContext(["x", "y", "z"], [("a", 1), ("b", 1)])


def generators(context, *names):
    return [GradedPoly.generator(context, name) for name in names]


def test_tokens_carry_columns():
    tokens = list(tokenize("x + d(y)"))
    assert [token.text for token in tokens] == ["x", "+", "d", "(", "y", ")", ""]
    assert [token.column for token in tokens[:3]] == [1, 3, 5]


def test_terms_are_collected(context):
    x, z = generators(context, "x", "z")
    assert parse_expression("3/2*x^2*z + z*x^2*3/2", context) == 3 * x * x * z


def test_odd_generators_anticommute(context):
    assert parse_expression("a*b", context) == -parse_expression("b*a", context)
    assert parse_expression("a^2", context).is_zero()


def test_differentials_and_parentheses(context):
    x, dx, a = generators(context, "x", "d(x)", "a")
    assert parse_expression("d(x)*a", context) == dx * a
    assert parse_expression("(x + 1)^2", context) == x * x + 2 * x + 1
    assert parse_expression("-x + x", context).is_zero()


def test_printed_polynomials_parse_back(context):
    p = parse_expression("y - 3/2*x^2*d(x) + a*d(b)", context)
    assert parse_expression(str(p), context) == p


@pytest.mark.parametrize(
    "text, column",
    [
        pytest.param("x +", 4, id="dangling-operator"),
        pytest.param("x $ y", 3, id="bad-character"),
        pytest.param("1/0", 3, id="zero-denominator"),
        pytest.param("x^y", 3, id="symbolic-exponent"),
        pytest.param("(x + y", 7, id="unclosed"),
        pytest.param("x y", 3, id="juxtaposition"),
    ],
)
def test_syntax_errors(context, text, column):
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_expression(text, context)
    assert excinfo.value.column == column
    assert excinfo.value.line == 1


def test_error_position_is_offset_by_the_source_location(context):
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_expression("x +", context, line=3, column=10)
    assert (excinfo.value.line, excinfo.value.column) == (3, 13)
    assert str(excinfo.value).endswith("at line 3, column 13")


def test_unknown_generator(context):
    with pytest.raises(UnknownGenerator):
        parse_expression("x + w", context)
