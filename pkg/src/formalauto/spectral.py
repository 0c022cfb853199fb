"""Characteristic polynomials and exact non-resonance decisions.

One-variable questions ("does ``W(n)`` vanish for some integer ``n >= 0``?")
are decided exactly through a root bound.  The two-variable question is
Diophantine, so :func:`nonresonance_2d` is a semi-decision procedure that
reports the bound it reached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from mpmath import iv

from .errors import EmptyPrincipalPart, NegativeM
from .moment import MomentSequence, moment_ratio
from .newton import principal_part_1d
from .operators import Operator1, Operator2
from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "CharPoly",
    "CharPoly2",
    "Holds",
    "FailsAt",
    "UndecidedBeyond",
    "falling_poly",
    "char_poly_1d",
    "generalized_char_poly",
    "char_poly_2d",
    "nonneg_integer_roots",
    "integer_roots",
    "root_bound",
    "IntervalValue",
    "nonresonance_2d",
    "DEFAULT_N_BOUND",
]

DEFAULT_N_BOUND = 256

# above this many candidates the integer scan switches to divisor testing
_SCAN_LIMIT = 200_000


# ---------------------------------------------------------------------------
# polynomials in the index variable


def falling_poly(j: int) -> tuple:
    """Monomial coefficients (low to high) of ``x (x-1) ... (x-j+1)``."""
    coeffs = [1]
    for h in range(j):
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= h * c
        coeffs = nxt
    return tuple(coeffs)


def _trim(coeffs) -> tuple:
    out = list(coeffs)
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def _render(items, var: str) -> str:
    """``items``: (exponent tuple, Scalar) pairs; ``var``: names per exponent slot."""
    if not items:
        return "0"
    parts = []
    for exps, c in items:
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(var, exps) if e)
        if not mono:
            parts.append(str(c))
        elif c == ONE:
            parts.append(mono)
        elif c == -ONE:
            parts.append("-" + mono)
        else:
            cs = str(c)
            if not c.is_real() and c.re:
                cs = f"({cs})"
            parts.append(f"{cs}*{mono}")
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


class CharPoly:
    """Univariate polynomial with exact coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim(as_scalar(c) for c in coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        x = as_scalar(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, CharPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "CharPoly") -> "CharPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return CharPoly(x + y for x, y in zip(a, b))

    def scale(self, c) -> "CharPoly":
        c = as_scalar(c)
        return CharPoly(x * c for x in self.coeffs)

    def format(self, var: str = "n") -> str:
        return _render([((i,), c) for i, c in enumerate(self.coeffs) if c], (var,))

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"CharPoly({self.format()!r})"


class CharPoly2:
    """Polynomial in ``(n, k)`` stored as ``{(i, j): coefficient of n**i k**j}``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping = ()):
        items = dict(coeffs).items()
        self.coeffs = {(int(i), int(j)): as_scalar(c) for (i, j), c in sorted(items) if as_scalar(c)}

    def __call__(self, n, k):
        n, k = as_scalar(n), as_scalar(k)
        acc = ZERO
        for (i, j), c in self.coeffs.items():
            acc = acc + c * n ** i * k ** j
        return acc

    def __eq__(self, other):
        return isinstance(other, CharPoly2) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def in_k(self, n: int) -> CharPoly:
        """Specialize ``n`` and return the polynomial in ``k``."""
        acc: dict = {}
        for (i, j), c in self.coeffs.items():
            acc[j] = acc.get(j, ZERO) + c * Scalar(n) ** i
        return CharPoly(acc.get(j, ZERO) for j in range(max(acc, default=-1) + 1))

    def univariate(self):
        """``("n", CharPoly)`` or ``("k", CharPoly)`` when only one variable occurs, else ``None``."""
        if all(j == 0 for _, j in self.coeffs):
            deg = max((i for i, _ in self.coeffs), default=-1)
            return "n", CharPoly(self.coeffs.get((i, 0), ZERO) for i in range(deg + 1))
        if all(i == 0 for i, _ in self.coeffs):
            deg = max((j for _, j in self.coeffs), default=-1)
            return "k", CharPoly(self.coeffs.get((0, j), ZERO) for j in range(deg + 1))
        return None

    def format(self) -> str:
        items = sorted(self.coeffs.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0]))
        return _render([(e, c) for e, c in items], ("n", "k"))

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"CharPoly2({self.format()!r})"


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Holds:
    """Non-resonance certified.  ``certificate`` is ``"sign_uniform"`` or ``"root_bound"``."""

    certificate: str
    bound: int | None = None
    basis: str | None = None

    kind = "holds"

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "certificate": self.certificate}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.basis is not None:
            out["basis"] = self.basis
        return out


@dataclass(frozen=True)
class FailsAt:
    """A vanishing point: an integer or an ``(n, k)`` pair."""

    witness: object

    kind = "fails_at"

    def to_dict(self) -> dict:
        w = list(self.witness) if isinstance(self.witness, tuple) else self.witness
        return {"kind": self.kind, "witness": w}


@dataclass(frozen=True)
class UndecidedBeyond:
    """No witness up to ``bound`` and no certificate."""

    bound: int

    kind = "undecided_beyond"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "bound": self.bound}


# ---------------------------------------------------------------------------
# characteristic polynomials


def _level_terms(P: Operator1, level: int | None):
    """``[(j, a_{j,j+level})]`` for the ``j`` with ``ord a_j - j == level``.

    ``level=None`` selects the lower ordinate, i.e. the principal part.
    """
    if P.is_empty():
        return []
    if level is None:
        level = principal_part_1d(P).lower_ordinate
    return [(j, p.coeff(j + level)) for j, p in P.terms.items() if p.ord() - j == level]


def char_poly_1d(P: Operator1, level: int | None = None) -> CharPoly:
    """``sum_{j} a_{j,j+m} x (x-1) ... (x-j+1)`` over the principal part.

    With ``level`` given, the sum runs over the ``j`` with
    ``ord a_j - j == level`` instead; it is empty (zero) when no point of
    the polygon sits at that height.
    """
    acc = CharPoly()
    for j, a in _level_terms(P, level):
        acc = acc + CharPoly(falling_poly(j)).scale(a)
    return acc


@dataclass(frozen=True)
class IntervalValue:
    """Enclosure of a complex value by real and imaginary intervals."""

    re: object
    im: object

    def contains_zero(self) -> bool:
        return 0 in self.re and 0 in self.im

    def __str__(self):
        return f"[{self.re.a}, {self.re.b}] + i[{self.im.a}, {self.im.b}]"


def generalized_char_poly(P: Operator1, seq: MomentSequence, lam: int, level: int | None = None):
    """``sum_{j <= lam} a_{j,j+m} m_lam / m_{lam-j}`` over the principal part.

    Exact :class:`Scalar` for sequences with rational ratios, an
    :class:`IntervalValue` for ``Gamma(1 + n/k)``.  ``level`` as in
    :func:`char_poly_1d`.
    """
    if lam < 0:
        raise ValueError("lam must be non-negative")
    terms = [(j, a) for j, a in _level_terms(P, level) if j <= lam]
    if seq.exact_ratios:
        acc = ZERO
        for j, a in terms:
            acc = acc + a * moment_ratio(seq, lam, j)
        return acc
    re, im = iv.mpf(0), iv.mpf(0)
    for j, a in terms:
        r = moment_ratio(seq, lam, j)
        re += r * iv.mpf(a.re.numerator) / a.re.denominator
        im += r * iv.mpf(a.im.numerator) / a.im.denominator
    return IntervalValue(re, im)


def char_poly_2d(P: Operator2, m: int | None = None, l: int | None = None) -> CharPoly2:
    """``W_{m,l}(n, k, 0) = sum a~_{j,r}(0) ff(n, j-m) ff(k, r)``.

    ``a~_{j,r}(0)`` is the coefficient of ``z**(r+l)`` in the ``t**(j-m)``
    slice, summed over the principal indices with ``ord_z(slice) - r = l``.
    ``l`` defaults to the smallest such value.
    """
    if P.is_empty():
        raise EmptyPrincipalPart("the zero operator has no principal part")
    if m is None:
        m = P.m
    if m < 0:
        raise NegativeM(f"max(j - ord_t a_jr) = {m} < 0")
    slices = {}
    for (j, r), p in P.terms.items():
        if j - p.ord_t() == m:
            sl = p.t_slice(j - m)
            if sl:
                slices[(j, r)] = sl
    if not slices:
        raise EmptyPrincipalPart(f"no principal terms at integro order {m}")
    if l is None:
        l = min(sl.ord() - r for (_, r), sl in slices.items())
    chosen = [(j, r, sl) for (j, r), sl in slices.items() if sl.ord() - r == l]
    if not chosen:
        raise EmptyPrincipalPart(f"no principal terms with l = {l}")
    acc: dict = {}
    for j, r, sl in chosen:
        c = sl.coeff(r + l)
        fn, fk = falling_poly(j - m), falling_poly(r)
        for i, x in enumerate(fn):
            for h, y in enumerate(fk):
                if x and y:
                    acc[(i, h)] = acc.get((i, h), ZERO) + c * (x * y)
    return CharPoly2(acc)


# ---------------------------------------------------------------------------
# integer roots


def _integer_parts(W: CharPoly):
    """Integer polynomials ``(R, I)`` with ``W = (R + i I) / d`` for some ``d > 0``."""
    den = 1
    for c in W.coeffs:
        den = math.lcm(den, c.re.denominator, c.im.denominator)
    R = [int(c.re * den) for c in W.coeffs]
    I = [int(c.im * den) for c in W.coeffs]
    return R, I


def _horner(coeffs, x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _ceil_root(r: Fraction, i: int) -> int:
    """Smallest integer ``x >= 0`` with ``x**i >= r``."""
    if r <= 0:
        return 0
    hi = max(1, math.ceil(r))
    if i == 1:
        return hi
    try:
        x = int(float(r) ** (1.0 / i)) + 2
    except OverflowError:
        x = hi
    x = min(x, hi)
    while x ** i < r:
        x += 1
    while x > 0 and (x - 1) ** i >= r:
        x -= 1
    return x


def root_bound(W: CharPoly) -> int:
    """Integer ``B`` with ``|x| <= B`` for every complex root ``x`` of ``W``.

    The smaller of the Cauchy bound ``1 + max |c_i| / |c_d|`` and the
    Fujiwara bound ``2 max |c_{d-i} / c_d|**(1/i)``.  Coefficient moduli are
    bounded by ``|re| + |im|`` above and ``max(|re|, |im|)`` below.
    """
    d = W.degree
    if d <= 0:
        return 0
    lead = W.coeffs[-1].modulus_lower()
    ratios = [W.coeffs[i].modulus_upper() / lead for i in range(d)]
    cauchy = 1 + math.ceil(max(ratios))
    fujiwara = 2 * max(_ceil_root(ratios[d - i], i) for i in range(1, d + 1))
    return min(cauchy, fujiwara)


def _divisors_upto(c: int, bound: int):
    c = abs(c)
    out = set()
    d = 1
    while d * d <= c and d <= bound:
        if c % d == 0:
            out.add(d)
            if c // d <= bound:
                out.add(c // d)
        d += 1
    return sorted(out)


def integer_roots(W: CharPoly, start: int = 0):
    """Yield the integer roots ``n >= start`` of a nonzero ``W`` in increasing order."""
    start = max(0, start)
    if W.degree <= 0:
        return
    B = root_bound(W)
    R, I = _integer_parts(W)
    ref = R if any(R[1:]) else I
    if B - start <= _SCAN_LIMIT:
        candidates = range(start, B + 1)
    else:
        # nonzero roots of ref divide its lowest nonzero coefficient
        v = next(i for i, c in enumerate(ref) if c)
        candidates = ([0] if v > 0 and start == 0 else []) + [
            d for d in _divisors_upto(ref[v], B) if d >= start]
    for n in candidates:
        if _horner(R, n) == 0 and _horner(I, n) == 0:
            yield n


def nonneg_integer_roots(W: CharPoly, start: int = 0):
    """Decide whether ``W(n) = 0`` for some integer ``n >= start``.

    Returns ``Holds("root_bound", B)`` after testing every integer up to the
    root bound ``B``, or ``FailsAt(n)`` with the smallest such root.  The
    zero polynomial fails at ``start``.
    """
    start = max(0, start)
    if W.is_zero():
        return FailsAt(start)
    root = next(integer_roots(W, start), None)
    if root is not None:
        return FailsAt(root)
    return Holds("root_bound", root_bound(W))


# ---------------------------------------------------------------------------
# two-variable non-resonance


def _sign_uniform(coeffs) -> bool:
    vals = list(coeffs.values())
    if not vals or not all(c.is_real() for c in vals):
        return False
    if ZERO == coeffs.get((0, 0), ZERO):
        return False
    return all(c.re > 0 for c in vals) or all(c.re < 0 for c in vals)


def _to_falling_basis(W: CharPoly2) -> dict:
    """Coefficients of ``W`` in the basis ``ff(n, i) ff(k, j)``."""
    # x**p = sum_i S(p, i) ff(x, i) with Stirling numbers of the second kind
    def stirling_row(p):
        row = [0] * (p + 1)
        for i in range(p + 1):
            row[i] = sum((-1) ** (i - h) * math.comb(i, h) * h ** p for h in range(i + 1)) // math.factorial(i)
        return row

    out: dict = {}
    for (p, q), c in W.coeffs.items():
        for i, s in enumerate(stirling_row(p)):
            if not s:
                continue
            for j, t in enumerate(stirling_row(q)):
                if t:
                    out[(i, j)] = out.get((i, j), ZERO) + c * (s * t)
    return {k: v for k, v in out.items() if v}


def nonresonance_2d(W: CharPoly2, n_bound: int = DEFAULT_N_BOUND):
    """Search for ``(n, k)`` in ``N_0 x N_0`` with ``W(n, k) = 0``.

    A sign-uniform coefficient pattern (in the monomial basis or in the
    falling-factorial basis, both nonnegative on ``N_0``) certifies
    non-resonance outright; a polynomial in one variable is decided exactly;
    otherwise rows ``n = 0..n_bound`` are decided one at a time.
    """
    if n_bound < 0:
        raise ValueError("n_bound must be non-negative")
    if W.is_zero():
        return FailsAt((0, 0))
    # W vanishes only where its real and imaginary parts both do
    parts = [W]
    if not all(c.is_real() for c in W.coeffs.values()):
        parts = [CharPoly2({k: Scalar(c.re) for k, c in W.coeffs.items()}),
                 CharPoly2({k: Scalar(c.im) for k, c in W.coeffs.items()})]
    for part in parts:
        if _sign_uniform(part.coeffs):
            return Holds("sign_uniform", basis="monomial")
    for part in parts:
        if _sign_uniform(_to_falling_basis(part)):
            return Holds("sign_uniform", basis="falling_factorial")
    uni = W.univariate()
    if uni is not None:
        var, poly = uni
        v = nonneg_integer_roots(poly)
        if isinstance(v, FailsAt):
            return FailsAt((v.witness, 0) if var == "n" else (0, v.witness))
        return v
    for n in range(n_bound + 1):
        row = W.in_k(n)
        if row.is_zero():
            return FailsAt((n, 0))
        v = nonneg_integer_roots(row)
        if isinstance(v, FailsAt):
            return FailsAt((n, v.witness))
    return UndecidedBeyond(n_bound)
