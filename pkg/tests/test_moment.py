import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rand_series
from formalauto.moment import FACTORIAL, MomentSequence, moment_derive, moment_ratio, q_derivative, q_number
from formalauto.series import Series1, derive

fr = st.fractions(min_value=-10, max_value=10, max_denominator=6)


@given(st.lists(fr, min_size=3, max_size=15), st.integers(0, 2))
@settings(max_examples=60)
def test_factorial_moments_are_the_derivative(xs, j):
    u = Series1.of(xs)
    assert moment_derive(FACTORIAL, u, j) == derive(u, j)


@pytest.mark.parametrize("q", [2, 3, Fraction(1, 2)])
def test_q_derivative_is_the_q_factorial_moment_derivative(q):
    rng = random.Random(int(q * 10))
    seq = MomentSequence.q_factorial(q)
    for _ in range(10):
        u = rand_series(rng, 25)
        assert q_derivative(u, q) == moment_derive(seq, u)


def test_q_numbers():
    assert q_number(3, 2) == 7
    assert q_number(4, Fraction(1, 2)) == Fraction(15, 8)
    seq = MomentSequence.q_factorial(2)
    assert seq.value(3) == 1 * 3 * 7


def test_table_moments():
    seq = MomentSequence.table([1, 1, 2, 6, 24])
    u = Series1.of([1, 1, 1, 1, 1])
    assert moment_derive(seq, u) == derive(u)
    assert seq.length == 5


def test_gamma_moments_enclose_the_true_ratio():
    seq = MomentSequence.gamma_over(2)
    r = moment_ratio(seq, 5, 1)
    with mpmath.workdps(80):
        true = mpmath.gamma(mpmath.mpf(7) / 2) / mpmath.gamma(3)
        assert r.a <= true <= r.b
        assert r.b - r.a < mpmath.mpf(10) ** -30
        out = moment_derive(seq, Series1.of([0, 1, 0, 0]))
        g = mpmath.gamma(mpmath.mpf(3) / 2)
        assert out[0][0].a <= g <= out[0][0].b


def test_descriptor_roundtrip():
    for seq in [FACTORIAL, MomentSequence.gamma_over(Fraction(3, 2)),
                MomentSequence.q_factorial(Fraction(1, 3)), MomentSequence.table([1, 2, 3])]:
        assert MomentSequence.from_descriptor(seq.descriptor()) == seq


@pytest.mark.parametrize("bad", [{"kind": "q_factorial", "q": "1"}, {"kind": "table", "values": ["1", "-2"]},
                                 {"kind": "gamma_over", "k": "0"}, {"kind": "nope"}])
def test_invalid_sequences(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        MomentSequence.from_descriptor(bad)
