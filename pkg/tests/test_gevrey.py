import math
from fractions import Fraction

import mpmath
import pytest

from formalauto.gevrey import DegenerateWindow, borel_transform, estimate_order, verify_bound
from formalauto.scalar import Scalar
from formalauto.series import Series1


def synthetic(s, n=120):
    """``n!**s 2**n`` rounded up to integers, for known growth classes."""
    with mpmath.workdps(30):
        return [Scalar(int(mpmath.exp(s * mpmath.loggamma(k + 1) + k * mpmath.log(2))) + 1)
                for k in range(n)]


@pytest.mark.parametrize("s", [0, 0.5, 1, 2])
def test_estimate_recovers_known_orders(s):
    est = estimate_order(synthetic(s))
    assert abs(est.s_float - s) < 0.05
    assert abs(float(est.s_hat) - s) < 0.05


def test_estimate_is_monotone():
    vals = [estimate_order(synthetic(s)).s_float for s in (0, 0.25, 0.5, 1, 1.5)]
    assert vals == sorted(vals)


def test_degenerate_windows():
    with pytest.raises(DegenerateWindow):
        estimate_order([Scalar(1)] * 5)
    with pytest.raises(DegenerateWindow):
        estimate_order([Scalar(0)] * 40)


def test_verify_bound_factorial_growth():
    cs = [Scalar(math.factorial(n)) for n in range(110)]
    cert = verify_bound(cs, 1, 100)
    assert not isinstance(cert, int)
    assert cert.C == 1 and cert.A == 1
    fail = verify_bound(cs, 0, 100)
    assert isinstance(fail, int)
    assert math.factorial(fail) > 2 ** 64 * 16 ** fail


def test_verify_bound_fractional_order():
    cs = [Scalar(math.isqrt(math.factorial(n)) + 1) for n in range(40)]
    cert = verify_bound(cs, Fraction(1, 2), 30)
    assert not isinstance(cert, int)
    for n in range(31):
        assert cs[n].re <= cert.C * cert.A ** n * math.factorial(n) ** 0.5 * (1 + 1e-12)


def test_borel_transform():
    u = Series1.of([math.factorial(n) for n in range(8)])
    assert borel_transform(u, 1) == Series1.of([1] * 8)
    assert borel_transform(u, 0) == u
    half = borel_transform(Series1.of([1, 1, 1]), Fraction(1, 2))
    g = math.gamma(1.5)
    assert float(half[1].re.a) <= 1 / g <= float(half[1].re.b)
