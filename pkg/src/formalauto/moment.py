"""Moment sequences, moment derivatives and the q-derivative.

For a positive sequence ``m = (m_n)`` with ``m_0 = 1`` the moment derivative
acts on monomials by ``z**n -> (m_n / m_{n-1}) z**(n-1)``.  The factorial
sequence gives the usual derivative and the q-factorial sequence the
Jackson q-derivative.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from .errors import IndexOutOfRange, InexactMoment
from .scalar import ONE, ZERO, Scalar, as_scalar
from .series import Series1, falling

__all__ = [
    "MomentSequence",
    "FACTORIAL",
    "moment_ratio",
    "moment_derive",
    "q_number",
    "q_derivative",
]

# absolute width bound for Gamma-ratio enclosures
INTERVAL_WIDTH = iv.mpf(2) ** -128

_iv_lock = threading.Lock()


def q_number(h: int, q) -> Fraction:
    """``[h]_q = 1 + q + ... + q**(h-1)``."""
    q = Fraction(q)
    return sum((q ** e for e in range(h)), Fraction(0))


@dataclass(frozen=True)
class MomentSequence:
    """A normalized moment sequence.

    ``kind`` is one of ``"factorial"``, ``"gamma_over"`` (``Gamma(1 + n/k)``),
    ``"q_factorial"`` (``[n]_q!``) or ``"table"`` (explicit exact values).
    The q-factorial sequence is sometimes written ``Lambda_{1;q}``; it is the
    same object as ``Gamma_{1;q}`` here.
    """

    kind: str = "factorial"
    k: Fraction | None = None
    q: Fraction | None = None
    values: tuple = ()

    def __post_init__(self):
        if self.kind == "factorial":
            return
        if self.kind == "gamma_over":
            if self.k is None or Fraction(self.k) <= 0:
                raise ValueError("gamma_over needs k > 0")
            object.__setattr__(self, "k", Fraction(self.k))
        elif self.kind == "q_factorial":
            if self.q is None or Fraction(self.q) <= 0 or Fraction(self.q) == 1:
                raise ValueError("q_factorial needs q > 0, q != 1")
            object.__setattr__(self, "q", Fraction(self.q))
        elif self.kind == "table":
            vals = tuple(Fraction(v) for v in self.values)
            if not vals or vals[0] != 1:
                raise ValueError("moment table must start with m_0 = 1")
            if any(v <= 0 for v in vals):
                raise ValueError("moments must be strictly positive")
            object.__setattr__(self, "values", vals)
        else:
            raise ValueError(f"unknown moment sequence kind {self.kind!r}")

    # constructors -------------------------------------------------------

    @classmethod
    def factorial(cls) -> "MomentSequence":
        return cls("factorial")

    @classmethod
    def gamma_over(cls, k) -> "MomentSequence":
        return cls("gamma_over", k=Fraction(k))

    @classmethod
    def q_factorial(cls, q) -> "MomentSequence":
        return cls("q_factorial", q=Fraction(q))

    @classmethod
    def table(cls, values) -> "MomentSequence":
        return cls("table", values=tuple(values))

    @classmethod
    def from_descriptor(cls, desc: dict | None) -> "MomentSequence":
        """Build from the problem-file form ``{"kind": ..., "k"/"q"/"values": ...}``."""
        if desc is None:
            return FACTORIAL
        kind = desc.get("kind", "factorial")
        if kind == "factorial":
            return FACTORIAL
        if kind == "gamma_over":
            return cls.gamma_over(Fraction(str(desc["k"])))
        if kind == "q_factorial":
            return cls.q_factorial(Fraction(str(desc["q"])))
        if kind == "table":
            return cls.table(Fraction(str(v)) for v in desc["values"])
        raise ValueError(f"unknown moment sequence kind {kind!r}")

    def descriptor(self) -> dict:
        if self.kind == "factorial":
            return {"kind": "factorial"}
        if self.kind == "gamma_over":
            return {"kind": "gamma_over", "k": str(self.k)}
        if self.kind == "q_factorial":
            return {"kind": "q_factorial", "q": str(self.q)}
        return {"kind": "table", "values": [str(v) for v in self.values]}

    # values -------------------------------------------------------------

    @property
    def is_factorial(self) -> bool:
        return self.kind == "factorial"

    @property
    def exact_ratios(self) -> bool:
        return self.kind != "gamma_over"

    @property
    def length(self) -> int | None:
        """Number of known terms, ``None`` for infinite sequences."""
        return len(self.values) if self.kind == "table" else None

    def value(self, n: int):
        """``m_n``: exact Fraction, or an interval for ``gamma_over``."""
        if n < 0:
            raise IndexOutOfRange(f"moment index {n} < 0")
        if self.kind == "factorial":
            return Fraction(falling(n, n))
        if self.kind == "q_factorial":
            out = Fraction(1)
            for h in range(1, n + 1):
                out *= q_number(h, self.q)
            return out
        if self.kind == "table":
            if n >= len(self.values):
                raise IndexOutOfRange(f"moment table has no entry {n}")
            return self.values[n]
        return _gamma_interval(self.k, n)

    def ratio(self, lam: int, j: int):
        """``m_lam / m_{lam-j}`` (zero when ``lam < j``, as for a derivative of a low power)."""
        return moment_ratio(self, lam, j)

    def exact_ratio(self, lam: int, j: int) -> Scalar:
        """As :meth:`ratio` but always an exact :class:`Scalar`."""
        if not self.exact_ratios:
            raise InexactMoment("Gamma(1+n/k) moments have no exact ratios")
        if 0 <= lam < j:
            return ZERO
        return moment_ratio(self, lam, j)


FACTORIAL = MomentSequence("factorial")


@lru_cache(maxsize=4096)
def _gamma_interval_cached(k: Fraction, n: int, prec: int):
    with _iv_lock:
        old = iv.prec
        iv.prec = prec
        try:
            return iv.gamma(1 + iv.mpf(n) / iv.mpf(k.numerator) * k.denominator)
        finally:
            iv.prec = old


def _gamma_interval(k: Fraction, n: int):
    return _gamma_interval_cached(k, n, 256)


def _gamma_ratio(k: Fraction, lam: int, j: int):
    prec = 256
    while True:
        num = _gamma_interval_cached(k, lam, prec)
        den = _gamma_interval_cached(k, lam - j, prec)
        with _iv_lock:
            old = iv.prec
            iv.prec = prec
            try:
                r = num / den
            finally:
                iv.prec = old
        if r.delta <= INTERVAL_WIDTH or prec > 4096:
            return r
        prec *= 2


def moment_ratio(seq: MomentSequence, lam: int, j: int):
    """``m_lam / m_{lam - j}`` for ``0 <= j <= lam``.

    Exact :class:`Scalar` for factorial, q-factorial and table sequences; an
    ``mpmath.iv`` interval of width at most ``2**-128`` for ``gamma_over``.
    """
    if j < 0 or lam < j:
        raise IndexOutOfRange(f"need 0 <= j <= lam, got lam={lam}, j={j}")
    if j == 0:
        return ONE if seq.exact_ratios else iv.mpf(1)
    if seq.kind == "factorial":
        return Scalar(falling(lam, j))
    if seq.kind == "q_factorial":
        out = Fraction(1)
        for h in range(lam - j + 1, lam + 1):
            out *= q_number(h, seq.q)
        return Scalar(out)
    if seq.kind == "table":
        return Scalar(seq.value(lam) / seq.value(lam - j))
    return _gamma_ratio(seq.k, lam, j)


def moment_derive(seq: MomentSequence, u: Series1, j: int = 1):
    """``j``-fold moment derivative: ``c_n -> c_{n+j} m_{n+j} / m_n``.

    Returns a :class:`Series1` for exact sequences and a list of intervals
    (real and imaginary parts as ``iv.mpf`` pairs) for ``gamma_over``.
    """
    if j == 0:
        return u
    n = u.truncation - j
    if seq.exact_ratios:
        return Series1(tuple(u.coeffs[i + j] * moment_ratio(seq, i + j, j) for i in range(n + 1)), n)
    out = []
    for i in range(n + 1):
        c = u.coeffs[i + j]
        r = moment_ratio(seq, i + j, j)
        out.append((r * iv.mpf(c.re.numerator) / c.re.denominator,
                    r * iv.mpf(c.im.numerator) / c.im.denominator))
    return out


def q_derivative(u: Series1, q) -> Series1:
    """Jackson derivative ``(f(qz) - f(z)) / (qz - z)`` computed from its definition."""
    q = as_scalar(Fraction(q))
    if q == ONE or q.re <= 0:
        raise ValueError("q must be positive and different from 1")
    f_qz = Series1(tuple(c * q ** n for n, c in enumerate(u.coeffs)), u.truncation)
    diff = f_qz - u
    # divide by (q - 1) z; the constant term of the difference vanishes
    assert not diff.coeffs or not diff.coeffs[0]
    return Series1(tuple(c / (q - 1) for c in diff.coeffs[1:]), u.truncation - 1)
