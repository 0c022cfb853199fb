"""Gevrey diagnostics for computed coefficient sequences.

These are empirical tools.  A finite list of coefficients cannot decide
membership in a Gevrey class; the estimate and the bound certificate only
describe the coefficients that were supplied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import iv

from .errors import FormalAutoError
from .moment import _iv_lock
from .scalar import Scalar, as_scalar
from .series import Series1
from .spectral import IntervalValue

__all__ = [
    "DegenerateWindow",
    "GevreyEstimate",
    "BoundCertificate",
    "borel_transform",
    "estimate_order",
    "verify_bound",
    "A_GRID",
    "C_GRID",
]

A_GRID = tuple(2 ** e for e in range(5))
C_GRID = tuple(2 ** e for e in range(65))

_PREC = 256


class DegenerateWindow(FormalAutoError, ValueError):
    """Too few nonzero coefficients in the fit window."""


@dataclass(frozen=True)
class BoundCertificate:
    """``|c_n| <= C * A**n * (n!)**s`` verified for every ``n <= n_verified``."""

    C: int
    A: int
    s: Fraction
    n_verified: int

    def to_dict(self) -> dict:
        return {"C": self.C, "A": self.A, "s": str(self.s), "n_verified": self.n_verified}


@dataclass(frozen=True)
class GevreyEstimate:
    s_hat: Fraction
    s_float: float
    fit_window: tuple
    residual: float
    bound_certificate: BoundCertificate | None = None

    def to_dict(self) -> dict:
        out = {
            "s_hat": str(self.s_hat),
            "s_float": round(self.s_float, 6),
            "fit_window": list(self.fit_window),
            "residual": round(self.residual, 6),
        }
        if self.bound_certificate is not None:
            out["bound_certificate"] = self.bound_certificate.to_dict()
        return out


def _coeff_list(coeffs):
    if isinstance(coeffs, Series1):
        return list(coeffs.coeffs)
    return [as_scalar(c) if not isinstance(c, Scalar) else c for c in coeffs]


def _iv(x: Fraction):
    return iv.mpf(x.numerator) / x.denominator


def borel_transform(u: Series1, s):
    """Divide ``u_n`` by ``Gamma(1 + s n)``.

    Exact for integer ``s`` (the divisor is ``(s n)!``); for other ``s`` the
    result is a list of :class:`IntervalValue` enclosures.
    """
    s = Fraction(s)
    if s < 0:
        raise ValueError("s must be non-negative")
    if s == 0:
        return u
    if s.denominator == 1:
        k = int(s)
        return Series1(tuple(c / math.factorial(k * n) for n, c in enumerate(u.coeffs)), u.truncation)
    out = []
    with _iv_lock:
        old = iv.prec
        iv.prec = _PREC
        try:
            for n, c in enumerate(u.coeffs):
                g = iv.gamma(1 + _iv(s) * n)
                out.append(IntervalValue(_iv(c.re) / g, _iv(c.im) / g))
        finally:
            iv.prec = old
    return out


def _log_abs(c: Scalar) -> float | None:
    if not c:
        return None
    if not c.im:
        q = abs(c.re)
        return math.log(q.numerator) - math.log(q.denominator)
    a2 = c.abs2()
    return 0.5 * (math.log(a2.numerator) - math.log(a2.denominator))


def estimate_order(coeffs, window=None) -> GevreyEstimate:
    """Fit ``log|c_n| ~ a + n log A + b log n + s log n!`` by least squares.

    ``s_hat`` is the fitted ``s`` clipped at 0 and rounded to a fraction
    with denominator at most 100.  ``window`` is an inclusive index range
    ``(lo, hi)``; the default skips the first quarter of the data.
    """
    cs = _coeff_list(coeffs)
    if window is None:
        window = (len(cs) // 4, len(cs) - 1)
    lo, hi = window
    if hi - lo + 1 < 8:
        raise DegenerateWindow("window must contain at least 8 indices")
    rows, ys = [], []
    for n in range(max(lo, 1), hi + 1):
        y = _log_abs(cs[n])
        if y is None:
            continue
        rows.append([1.0, n, math.log(n), math.lgamma(n + 1)])
        ys.append(y)
    if len(ys) < 8:
        raise DegenerateWindow("fewer than 8 nonzero coefficients in the window")
    X, Y = np.array(rows), np.array(ys)
    beta, *_ = np.linalg.lstsq(X, Y, rcond=None)
    resid = float(np.sqrt(np.mean((X @ beta - Y) ** 2)))
    s = max(0.0, float(beta[3]))
    return GevreyEstimate(Fraction(s).limit_denominator(100), s, (lo, hi), resid)


def _passes_exact(c: Scalar, C: int, A: int, s: int, n: int, fact: int) -> bool:
    bound = C * A ** n * fact ** s
    return c.abs2() <= bound * bound


def _passes_interval(c: Scalar, C: int, A: int, s: Fraction, n: int) -> bool:
    with _iv_lock:
        old = iv.prec
        iv.prec = _PREC
        try:
            bound = iv.mpf(C) * iv.mpf(A) ** n * iv.exp(_iv(s) * iv.log(iv.mpf(math.factorial(n))))
            mod = iv.sqrt(_iv(c.abs2()))
            return bool(mod.b <= bound.a)
        finally:
            iv.prec = old


def _holds_for(cs, C, A, s: Fraction, N: int):
    """First index ``n <= N`` violating the bound, or ``None``."""
    integral = s.denominator == 1
    fact = 1
    for n in range(N + 1):
        if n:
            fact *= n
        c = cs[n]
        if not c:
            continue
        ok = _passes_exact(c, C, A, int(s), n, fact) if integral else _passes_interval(c, C, A, s, n)
        if not ok:
            return n
    return None


def _needed_c(cs, A: int, s: Fraction, N: int) -> float:
    """Approximate ``max_n |c_n| / (A**n (n!)**s)`` in log2 scale."""
    worst = -math.inf
    for n in range(N + 1):
        y = _log_abs(cs[n])
        if y is None:
            continue
        worst = max(worst, (y - n * math.log(A) - float(s) * math.lgamma(n + 1)) / math.log(2))
    return worst


def verify_bound(coeffs, s, N: int):
    """Search ``(C, A)`` on a power-of-two grid with ``|c_n| <= C A**n (n!)**s`` for ``n <= N``.

    Returns a :class:`BoundCertificate` for the first ``A`` (then smallest
    ``C``) that works, every index re-verified exactly (or with intervals
    for non-integer ``s``).  Otherwise returns the first index where the
    largest grid pair fails.
    """
    s = Fraction(s)
    cs = _coeff_list(coeffs)
    if N >= len(cs):
        raise ValueError(f"only {len(cs)} coefficients available")
    for A in A_GRID:
        need = _needed_c(cs, A, s, N)
        start = 0 if need == -math.inf else max(0, math.floor(need) - 1)
        for e in range(start, len(C_GRID)):
            C = C_GRID[e]
            if _holds_for(cs, C, A, s, N) is None:
                return BoundCertificate(C, A, s, N)
            if e > start + 2:
                break
    fail = _holds_for(cs, C_GRID[-1], A_GRID[-1], s, N)
    if fail is None:
        return BoundCertificate(C_GRID[-1], A_GRID[-1], s, N)
    return fail
