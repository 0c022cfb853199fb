import random
from fractions import Fraction

import pytest

from conftest import random_operator_1d
from formalauto.analysis import (
    check_thm1,
    check_thm1_moment,
    check_thm2,
    check_thm3,
    check_thm4,
    index,
    reduce_to_family,
    space_label,
)
from formalauto.errors import ResonanceObstruction
from formalauto.moment import MomentSequence
from formalauto.parser import parse_operator
from formalauto.spectral import FailsAt, Holds

IRREGULAR = "a + b*z*Dz + z^3*Dz^2"


def op(text, **params):
    from formalauto.scalar import Scalar
    return parse_operator(text, {k: Scalar.parse(v) for k, v in params.items()})


@pytest.mark.parametrize("a,b", [("1", "1"), ("2", "1/3"), ("7/2", "5")])
def test_irregular_second_order_is_automorphism(a, b):
    r = check_thm1(op(IRREGULAR, a=a, b=b))
    assert r.verdict.kind == "yes"
    assert r.condition_a["passed"] and isinstance(r.condition_b, Holds)
    assert (r.ker_dim, r.coker_dim, r.index) == (0, 0, 0)


def test_resonant_constant_kernel_resonant_at_zero():
    r = check_thm1(op("b*z*Dz + z^3*Dz^2", b="2"))
    assert r.verdict.kind == "no"
    assert r.condition_b == FailsAt(0)
    assert r.condition_a["passed"]


def test_shifted_cokernel_cokernel():
    r = check_thm1(op("a*z + b*z^2*Dz + z^5*Dz^2", a="1", b="1"))
    assert r.verdict.kind == "no" and not r.condition_a["passed"]
    assert r.condition_a["lower_ordinate"] == 1
    assert (r.ker_dim, r.coker_dim, r.index) == (0, 1, -1)
    assert r.extra["char_poly_lower_ordinate"] == "1 + n"
    assert r.extra["nonresonance_lower_ordinate"]["kind"] == "holds"


def test_shifted_resonant_both_conditions_fail():
    r = check_thm1(op("a*z + z^3*Dz", a="3"))
    assert r.verdict.kind == "no"
    assert not r.condition_a["passed"]
    assert isinstance(r.condition_b, FailsAt)


def test_fuchsian_first_order_formal_and_convergent():
    P = op("a + b*z*Dz", a="2", b="3")
    assert check_thm1(P).verdict.kind == "yes"
    r = check_thm2(P, 0)
    assert r.verdict.kind == "yes" and r.space == "convergent"
    assert r.is_fuchsian_principal


@pytest.mark.parametrize("s,kind", [(1, "yes"), (2, "yes"), (Fraction(3, 2), "yes"),
                                    (Fraction(1, 2), "no"), (Fraction(99, 100), "no"), (0, "no")])
def test_irregular_second_order_gevrey_threshold(s, kind):
    r = check_thm2(op(IRREGULAR, a="1", b="1"), s)
    assert r.verdict.kind == kind
    assert r.space == space_label(1, s)


def test_slope_threshold_for_steeper_polygon():
    # chain (1,0) -> (2,2): slope 2, Gevrey automorphism exactly for s >= 1/2
    P = parse_operator("1 + z*Dz + z^4*Dz^2")
    assert check_thm2(P, Fraction(1, 2)).verdict.kind == "yes"
    assert check_thm2(P, Fraction(2, 5)).verdict.kind == "no"


def test_boundary_equivalent_operator_matches_irregular_second_order():
    P = parse_operator("(1 + z + 2*z^2) + z*(1 - z)*Dz + z^3*Dz^2")
    Q = op(IRREGULAR, a="1", b="1")
    assert check_thm1(P).verdict == check_thm1(Q).verdict
    for s in (0, Fraction(1, 2), 1, 3):
        assert check_thm2(P, s).verdict.kind == check_thm2(Q, s).verdict.kind


def test_index_formula():
    assert index(op(IRREGULAR, a="1", b="1")) == 0
    assert index(parse_operator("z + z^2*Dz")) == -1
    assert index(parse_operator("Dz^2")) == 2
    with pytest.raises(ResonanceObstruction):
        index(parse_operator("z*Dz"))


def test_random_operators_index_matches_lower_ordinate():
    rng = random.Random(5)
    for _ in range(20):
        m = rng.randint(-2, 2)
        assert index(random_operator_1d(rng, m)) == -m


def test_moment_criteria():
    q2 = MomentSequence.q_factorial(2)
    good = parse_operator("1 + z*Dmz", moment_z=q2)
    r = check_thm1_moment(good)
    assert r.verdict.kind == "yes" and r.condition_b.certificate == "sign_uniform"
    bad = parse_operator("1 - z*Dmz", moment_z=q2)
    assert check_thm1_moment(bad).condition_b == FailsAt(1)
    g = MomentSequence.gamma_over(2)
    r = check_thm1_moment(parse_operator("1 - 3*z*Dmz", moment_z=g), n_bound=20)
    assert r.verdict.kind == "conditional_yes" and r.verdict.bound == 20
    # classical moments reduce to the formal criterion
    assert check_thm1_moment(op(IRREGULAR, a="1", b="1")).verdict.kind == "yes"


def test_cauchy_sign_uniform_two_variables():
    P = parse_operator("Dt + t*Dt^2 + z*t*Dt^2*Dz")
    fam = reduce_to_family(P)
    assert fam.m == 1
    assert str(fam.at(0)) == "1"
    assert str(fam.at(3)) == "4 + 3*z*Dz"
    r = check_thm3(P)
    assert r.verdict.kind == "yes"
    assert r.condition_b.certificate == "sign_uniform"
    assert check_thm4(P, 0).verdict.kind == "yes"


def test_two_variable_failures():
    assert check_thm3(parse_operator("z*Dt^2")).verdict.kind == "no"
    assert check_thm3(parse_operator("Dt^2")).verdict.kind == "yes"
    r = check_thm3(parse_operator("2*Dt - t*Dt^2"))
    assert r.verdict.kind == "no"


def test_report_serialisation_order():
    d = check_thm1(op(IRREGULAR, a="1", b="1")).to_dict()
    assert list(d)[:4] == ["space", "verdict", "condition_a", "condition_b"]
    assert d["verdict"] == {"kind": "yes"}
