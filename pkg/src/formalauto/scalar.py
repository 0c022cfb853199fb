"""Exact Gaussian rationals, the coefficient field of every series and operator."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = ["Scalar", "ZERO", "ONE", "I", "as_scalar"]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class Scalar:
    """An element ``re + im*i`` of Q(i).

    Both parts are :class:`fractions.Fraction`, so equality is exact and
    rationals are always kept in lowest terms with positive denominator.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Scalar):
            if im:
                raise TypeError("cannot combine a Scalar real part with an imaginary part")
            self.re, self.im = re.re, re.im
            return
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def parse(cls, text) -> "Scalar":
        """Parse ``"3/7"``, ``"-2"``, ``"1/2+1/3i"``, ``"i"``, ``"-5/2i"``."""
        if isinstance(text, (int, Fraction)):
            return cls(text)
        s = "".join(str(text).split()).replace("*i", "i")
        if not s.endswith("i"):
            if not _RATIONAL_RE.match(s):
                raise ValueError(f"not an exact Gaussian rational: {text!r}")
            return cls(Fraction(s))
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        real_txt, imag_txt = (body[:cut], body[cut:]) if cut > 0 else ("", body)
        if imag_txt in ("", "+", "-"):
            imag_txt += "1"
        if (real_txt and not _RATIONAL_RE.match(real_txt)) or not _RATIONAL_RE.match(imag_txt):
            raise ValueError(f"not an exact Gaussian rational: {text!r}")
        return cls(Fraction(real_txt) if real_txt else 0, Fraction(imag_txt))

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.im and not other.im:
            return Scalar(self.re * other.re)
        return Scalar(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other:
            raise ZeroDivisionError("Scalar division by zero")
        if not other.im:
            return Scalar(self.re / other.re, self.im / other.re)
        d = other.abs2()
        return Scalar((self.re * other.re + self.im * other.im) / d,
                      (self.im * other.re - self.re * other.im) / d)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ONE / self ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparisons and predicates -----------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def modulus_upper(self) -> Fraction:
        """Upper bound ``|re| + |im|`` on the modulus."""
        return abs(self.re) + abs(self.im)

    def modulus_lower(self) -> Fraction:
        """Lower bound ``max(|re|, |im|)`` on the modulus."""
        return max(abs(self.re), abs(self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # formatting ---------------------------------------------------------

    def __str__(self):
        if not self.im:
            return _frac(self.re)
        im = "i" if abs(self.im) == 1 else _frac(abs(self.im)) + "i"
        if not self.re:
            return ("-" if self.im < 0 else "") + im
        return _frac(self.re) + ("-" if self.im < 0 else "+") + im

    def __repr__(self):
        return f"Scalar({str(self)!r})"


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _coerce(x):
    if type(x) is Scalar:
        return x
    if isinstance(x, (int, Rational)):
        return Scalar(x)
    return NotImplemented


def as_scalar(x) -> Scalar:
    """Convert ints, Fractions and strings to :class:`Scalar`."""
    if isinstance(x, str):
        return Scalar.parse(x)
    s = _coerce(x)
    if s is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as an exact scalar")
    return s


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
