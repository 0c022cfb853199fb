import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from formalauto.errors import FormalAutoError, OperatorSyntaxError, UnboundParameter
from formalauto.moment import MomentSequence
from formalauto.operators import Operator1, Operator2, apply1, apply2, apply_integro, integrate_t
from formalauto.parser import parse_expression, parse_operator, pretty_print
from formalauto.scalar import Scalar
from formalauto.series import Poly1, Series1, Series2


def test_params_are_substituted():
    P = parse_operator("a + b*z*Dz + z^3*Dz^2", {"a": Scalar(2), "b": Scalar.parse("1/3")})
    assert isinstance(P, Operator1)
    assert P.coefficient(0) == Poly1({0: 2})
    assert P.coefficient(1) == Poly1({1: Scalar.parse("1/3")})
    assert P.coefficient(2) == Poly1({3: 1})


@pytest.mark.parametrize("text", [
    "1 + z*Dz + z^3*Dz^2",
    "2*z - 1/2*z^2*Dz",
    "(1 + z)^2*Dz^2 - 3",
    "Dt + t*Dt^2 + z*t*Dt^2*Dz",
    "Dt - Dz",
])
def test_pretty_print_roundtrip(text):
    P = parse_operator(text)
    assert parse_operator(pretty_print(P)) == P


def test_normal_form_collects_terms():
    assert parse_operator("z*Dz + z*Dz") == parse_operator("2*z*Dz")
    assert parse_operator("z*(1 + z)*Dz") == parse_operator("z*Dz + z^2*Dz")


def test_syntax_error_reports_position():
    with pytest.raises(OperatorSyntaxError) as err:
        parse_operator("1 + * z")
    assert err.value.position == 4
    assert err.value.expected


def test_unbound_parameter():
    with pytest.raises(UnboundParameter) as err:
        parse_operator("a + z*Dz")
    assert err.value.position == 0


@pytest.mark.parametrize("bad", ["Dz*z", "z^-1", "(z + Dz)^2", "Dz^1/2"])
def test_non_normal_form_is_rejected(bad):
    with pytest.raises(FormalAutoError):
        parse_operator(bad)


def test_dimension_detection():
    assert isinstance(parse_operator("z*Dz"), Operator1)
    assert isinstance(parse_operator("Dt*Dz"), Operator2)
    assert isinstance(parse_operator("z*Dz", dim=2), Operator2)


def test_moment_derivative_symbol():
    seq = MomentSequence.q_factorial(2)
    P = parse_operator("1 + z*Dmz", moment_z=seq)
    assert P.moment == seq


def test_expression_parser():
    p = parse_expression("1/2 + 3/7*z - z^4")
    assert p.coeff(4) == Scalar(-1) and p.coeff(1) == Scalar.parse("3/7")


fr = st.fractions(min_value=-9, max_value=9, max_denominator=5)


@given(st.lists(fr, min_size=8, max_size=8), fr, fr)
@settings(max_examples=40)
def test_apply1_matches_sympy(us, a, b):
    """``(a + b z Dz + z^3 Dz^2) u`` agrees with symbolic differentiation."""
    P = parse_operator("a + b*z*Dz + z^3*Dz^2", {"a": Scalar(a), "b": Scalar(b)})
    u = Series1.of(us, 7)
    got = apply1(P, u)
    assert got.truncation >= 7
    z = sympy.Symbol("z")
    U = sum(sympy.Rational(c) * z ** k for k, c in enumerate(us))
    ref = sympy.expand(sympy.Rational(a) * U + sympy.Rational(b) * z * sympy.diff(U, z)
                       + z ** 3 * sympy.diff(U, z, 2))
    for k in range(8):
        c = sympy.Rational(ref.coeff(z, k))
        assert got.coeffs[k] == Scalar(c.p) / c.q


def test_apply1_truncation_follows_lower_ordinate():
    P = parse_operator("Dz^2")
    assert apply1(P, Series1.of([1] * 6)).truncation == 3
    Q = parse_operator("z^2")
    assert apply1(Q, Series1.of([1] * 6)).truncation == 7


def test_apply2_and_integration():
    P = parse_operator("Dt - Dz")
    u = parse_expression("z^2 + 2*t*z + t^2", dim=2).to_series(4, 4)
    out = apply2(P, u)
    assert all(not c for row in out.coeffs for c in row.coeffs)
    v = Series2.of([Series1.of([1, 0]), Series1.of([0, 3])])
    w = integrate_t(v, 1)
    assert w.truncation_t == 2
    assert w.coeffs[1].coeffs[0] == Scalar(1) and not w.coeffs[0].coeffs[0]
    assert w.coeffs[2].coeffs[1] == Scalar.parse("3/2")
    # D_t undoes the antiderivative
    assert apply_integro(parse_operator("Dt", dim=2), 1, v) == v
