"""Exact polynomials and truncated formal power series in ``z`` and ``(t, z)``.

A truncated series stores coefficients ``0..N`` and the truncation ``N``;
every coefficient of index ``<= N`` is known exactly, nothing beyond it is.
Operations only ever return coefficients that the inputs justify.  A
truncation of ``-1`` means that no coefficient is known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Poly1",
    "Poly2",
    "Series1",
    "Series2",
    "add",
    "mul",
    "derive",
    "ord_z",
    "falling",
]

Ratio = Callable[[int, int], Scalar]


def falling(n: int, j: int) -> int:
    """``n (n-1) ... (n-j+1)``; zero when ``0 <= n < j``."""
    result = 1
    for h in range(j):
        result *= n - h
    return result


def _factorial_ratio(lam: int, j: int) -> Scalar:
    return Scalar(falling(lam, j))


# ---------------------------------------------------------------------------
# polynomials


class Poly1:
    """Polynomial in ``z`` stored as ``{exponent: Scalar}`` without zeros."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        c = {}
        for k, v in items:
            if k < 0:
                raise ValueError("negative exponent in polynomial")
            v = as_scalar(v)
            if v:
                c[int(k)] = c.get(int(k), ZERO) + v
        self._c = {k: c[k] for k in sorted(c) if c[k]}

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly1":
        return cls({k: c})

    @classmethod
    def from_callback(cls, coeff: Callable[[int], object], degree: int) -> "Poly1":
        """Truncate a formal series given by ``k -> coefficient`` at ``degree``.

        Any finite computation reads finitely many coefficients, so a formal
        series coefficient can be replaced by a long enough truncation.
        """
        return cls({k: coeff(k) for k in range(degree + 1)})

    def terms(self):
        return self._c.items()

    def coeff(self, k: int) -> Scalar:
        return self._c.get(k, ZERO)

    def ord(self):
        """Order of vanishing at ``z = 0``; ``math.inf`` for the zero polynomial."""
        return next(iter(self._c), math.inf)

    @property
    def degree(self) -> int:
        return max(self._c, default=-1)

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def leading_low(self) -> Scalar:
        """Coefficient at the order of vanishing (``ã(0)`` after stripping ``z^ord``)."""
        return next(iter(self._c.values()), ZERO)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, Poly1):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._c.items()))

    def __add__(self, other: "Poly1") -> "Poly1":
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, ZERO) + v
        return Poly1(c)

    def __neg__(self):
        return Poly1({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly1):
            other = as_scalar(other)
            return Poly1({k: v * other for k, v in self._c.items()})
        c = {}
        for a, x in self._c.items():
            for b, y in other._c.items():
                c[a + b] = c.get(a + b, ZERO) + x * y
        return Poly1(c)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Poly1":
        """Multiply by ``z**k``."""
        return Poly1({e + k: v for e, v in self._c.items()})

    def __call__(self, z):
        z = as_scalar(z)
        return sum((v * z ** k for k, v in self._c.items()), ZERO)

    def to_series(self, truncation: int) -> "Series1":
        return Series1.from_poly(self, truncation)

    def __str__(self):
        return _format_terms([((0, k), v) for k, v in self._c.items()])

    def __repr__(self):
        return f"Poly1({str(self)!r})"


class Poly2:
    """Polynomial in ``(t, z)`` stored as ``{(t_exp, z_exp): Scalar}``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping = ()):
        c = {}
        for (a, b), v in dict(coeffs).items():
            if a < 0 or b < 0:
                raise ValueError("negative exponent in polynomial")
            v = as_scalar(v)
            if v:
                c[(a, b)] = c.get((a, b), ZERO) + v
        self._c = {k: c[k] for k in sorted(c) if c[k]}

    @classmethod
    def from_slices(cls, slices: Mapping[int, Poly1]) -> "Poly2":
        """Build ``sum_n slices[n](z) t**n``."""
        return cls({(n, k): v for n, p in slices.items() for k, v in p.terms()})

    @classmethod
    def from_poly1(cls, p: Poly1) -> "Poly2":
        return cls.from_slices({0: p})

    def terms(self):
        return self._c.items()

    def coeff(self, a: int, b: int) -> Scalar:
        return self._c.get((a, b), ZERO)

    def ord_t(self):
        return min((a for a, _ in self._c), default=math.inf)

    def ord_z(self):
        return min((b for _, b in self._c), default=math.inf)

    @property
    def degree_t(self) -> int:
        return max((a for a, _ in self._c), default=-1)

    def t_slice(self, n: int) -> Poly1:
        """The coefficient ``a_n(z)`` of ``t**n``."""
        return Poly1({b: v for (a, b), v in self._c.items() if a == n})

    def slices(self) -> dict[int, Poly1]:
        out: dict[int, dict] = {}
        for (a, b), v in self._c.items():
            out.setdefault(a, {})[b] = v
        return {a: Poly1(c) for a, c in out.items()}

    def depends_on_t(self) -> bool:
        return any(a for a, _ in self._c)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, Poly2):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._c.items()))

    def __add__(self, other: "Poly2") -> "Poly2":
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, ZERO) + v
        return Poly2(c)

    def __neg__(self):
        return Poly2({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly2):
            other = as_scalar(other)
            return Poly2({k: v * other for k, v in self._c.items()})
        c = {}
        for (a1, b1), x in self._c.items():
            for (a2, b2), y in other._c.items():
                key = (a1 + a2, b1 + b2)
                c[key] = c.get(key, ZERO) + x * y
        return Poly2(c)

    __rmul__ = __mul__

    def to_series(self, truncation_t: int, truncation_z: int) -> "Series2":
        return Series2.from_poly(self, truncation_t, truncation_z)

    def __str__(self):
        return _format_terms(list(self._c.items()))

    def __repr__(self):
        return f"Poly2({str(self)!r})"


def _format_scalar_factor(c: Scalar) -> str:
    s = str(c)
    if c.re and c.im:
        return f"({s})"
    return s.replace("i", "*i") if c.im and s not in ("i", "-i") else s


def _format_terms(items) -> str:
    """Render ``[((t_exp, z_exp), coeff), ...]`` in the operator grammar."""
    if not items:
        return "0"
    parts = []
    for (a, b), c in items:
        vars_ = []
        if a:
            vars_.append("t" if a == 1 else f"t^{a}")
        if b:
            vars_.append("z" if b == 1 else f"z^{b}")
        neg = (c.re < 0 and not c.im) or (not c.re and c.im < 0)
        mag = -c if neg else c
        if vars_ and mag == ONE:
            body = "*".join(vars_)
        else:
            body = "*".join([_format_scalar_factor(mag)] + vars_)
        parts.append(("-" if neg else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# series in one variable


@dataclass(frozen=True, eq=True)
class Series1:
    """Truncated series ``sum_{n<=truncation} coeffs[n] z**n``."""

    coeffs: tuple
    truncation: int

    def __post_init__(self):
        if self.truncation < -1:
            object.__setattr__(self, "truncation", -1)
        if len(self.coeffs) != self.truncation + 1:
            raise ValueError("coefficient count must equal truncation + 1")

    @classmethod
    def of(cls, values: Iterable, truncation: int | None = None) -> "Series1":
        vals = [as_scalar(v) for v in values]
        if truncation is None:
            truncation = len(vals) - 1
        vals = (vals + [ZERO] * (truncation + 1))[: truncation + 1]
        return cls(tuple(vals), truncation)

    @classmethod
    def zero(cls, truncation: int) -> "Series1":
        return cls((ZERO,) * (truncation + 1), truncation)

    @classmethod
    def from_poly(cls, p: Poly1, truncation: int) -> "Series1":
        return cls(tuple(p.coeff(k) for k in range(truncation + 1)), truncation)

    @classmethod
    def from_callback(cls, coeff: Callable[[int], object], truncation: int) -> "Series1":
        return cls.of((coeff(n) for n in range(truncation + 1)), truncation)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def valuation(self):
        """Index of the first nonzero coefficient, or ``None`` if all stored ones vanish.

        ``None`` means the order of vanishing is at least ``truncation + 1``.
        """
        return next((n for n, c in enumerate(self.coeffs) if c), None)

    def truncate(self, n: int) -> "Series1":
        n = min(n, self.truncation)
        return Series1(self.coeffs[: n + 1], n)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "Series1") -> "Series1":
        return add(self, other)

    def __sub__(self, other: "Series1") -> "Series1":
        n = min(self.truncation, other.truncation)
        return Series1(tuple(a - b for a, b in zip(self.coeffs[: n + 1], other.coeffs)), n)

    def __neg__(self):
        return Series1(tuple(-c for c in self.coeffs), self.truncation)

    def __mul__(self, other):
        if isinstance(other, Series1):
            return mul(self, other)
        if isinstance(other, Poly1):
            return self.mul_poly(other)
        c = as_scalar(other)
        return Series1(tuple(x * c for x in self.coeffs), self.truncation)

    __rmul__ = __mul__

    def mul_poly(self, p: Poly1) -> "Series1":
        """Product with an exact polynomial; valid up to ``truncation + ord(p)``."""
        if not p:
            return Series1.zero(self.truncation)
        n = self.truncation + p.ord()
        out = [ZERO] * (n + 1)
        for k, v in p.terms():
            for i, c in enumerate(self.coeffs):
                if i + k > n:
                    break
                if c:
                    out[i + k] = out[i + k] + v * c
        return Series1(tuple(out), n)

    def shift(self, k: int) -> "Series1":
        """Multiply by ``z**k``."""
        return Series1((ZERO,) * k + self.coeffs, self.truncation + k)

    def __str__(self):
        body = _format_terms([((0, k), c) for k, c in enumerate(self.coeffs) if c])
        return f"{body} + O(z^{self.truncation + 1})"


def add(a: Series1, b: Series1) -> Series1:
    """Coefficientwise sum; the truncation is the smaller one."""
    n = min(a.truncation, b.truncation)
    return Series1(tuple(x + y for x, y in zip(a.coeffs[: n + 1], b.coeffs)), n)


def mul(a: Series1, b: Series1) -> Series1:
    """Cauchy product up to the smaller truncation."""
    n = min(a.truncation, b.truncation)
    out = []
    for k in range(n + 1):
        acc = ZERO
        for i in range(k + 1):
            x = a.coeffs[i]
            if x:
                y = b.coeffs[k - i]
                if y:
                    acc = acc + x * y
        out.append(acc)
    return Series1(tuple(out), n)


def derive(a: Series1, j: int = 1, ratio: Ratio | None = None) -> Series1:
    """``j``-fold derivative; ``ratio(lam, j)`` replaces ``lam!/(lam-j)!`` if given."""
    if j == 0:
        return a
    ratio = ratio or _factorial_ratio
    n = a.truncation - j
    return Series1(tuple(a.coeffs[i + j] * ratio(i + j, j) for i in range(n + 1)), n)


def ord_z(p: Poly1):
    """Order of vanishing of a polynomial at 0 (``math.inf`` for zero)."""
    return p.ord()


# ---------------------------------------------------------------------------
# series in two variables


@dataclass(frozen=True, eq=True)
class Series2:
    """Truncated ``sum_{n<=truncation_t} coeffs[n](z) t**n``; each ``coeffs[n]`` is a Series1."""

    coeffs: tuple
    truncation_t: int
    truncation_z: int

    def __post_init__(self):
        if len(self.coeffs) != self.truncation_t + 1:
            raise ValueError("t-coefficient count must equal truncation_t + 1")
        if any(c.truncation != self.truncation_z for c in self.coeffs):
            raise ValueError("all z-series must share truncation_z")

    @classmethod
    def of(cls, rows: Iterable[Series1], truncation_t: int | None = None) -> "Series2":
        """Assemble from z-series, cutting every row to the common truncation."""
        rows = list(rows)
        if truncation_t is None:
            truncation_t = len(rows) - 1
        nz = min((r.truncation for r in rows), default=0)
        rows = [r.truncate(nz) for r in rows[: truncation_t + 1]]
        rows += [Series1.zero(nz)] * (truncation_t + 1 - len(rows))
        return cls(tuple(rows), truncation_t, nz)

    @classmethod
    def zero(cls, truncation_t: int, truncation_z: int) -> "Series2":
        return cls((Series1.zero(truncation_z),) * (truncation_t + 1), truncation_t, truncation_z)

    @classmethod
    def from_poly(cls, p: Poly2, truncation_t: int, truncation_z: int) -> "Series2":
        return cls(tuple(Series1.from_poly(p.t_slice(n), truncation_z)
                         for n in range(truncation_t + 1)), truncation_t, truncation_z)

    def __getitem__(self, n) -> Series1:
        return self.coeffs[n]

    def coeff(self, n: int, k: int) -> Scalar:
        return self.coeffs[n].coeffs[k]

    def truncate(self, nt: int, nz: int) -> "Series2":
        nt, nz = min(nt, self.truncation_t), min(nz, self.truncation_z)
        return Series2(tuple(c.truncate(nz) for c in self.coeffs[: nt + 1]), nt, nz)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: "Series2") -> "Series2":
        nt = min(self.truncation_t, other.truncation_t)
        return Series2.of([a + b for a, b in zip(self.coeffs[: nt + 1], other.coeffs)], nt)

    def __sub__(self, other: "Series2") -> "Series2":
        nt = min(self.truncation_t, other.truncation_t)
        return Series2.of([a - b for a, b in zip(self.coeffs[: nt + 1], other.coeffs)], nt)

    def __neg__(self):
        return Series2(tuple(-c for c in self.coeffs), self.truncation_t, self.truncation_z)

    def __mul__(self, other):
        if isinstance(other, Series2):
            nt = min(self.truncation_t, other.truncation_t)
            nz = min(self.truncation_z, other.truncation_z)
            rows = []
            for n in range(nt + 1):
                acc = Series1.zero(nz)
                for i in range(n + 1):
                    acc = acc + mul(self.coeffs[i], other.coeffs[n - i])
                rows.append(acc)
            return Series2(tuple(rows), nt, nz)
        if isinstance(other, Poly2):
            return self.mul_poly(other)
        c = as_scalar(other)
        return Series2(tuple(r * c for r in self.coeffs), self.truncation_t, self.truncation_z)

    __rmul__ = __mul__

    def mul_poly(self, p: Poly2) -> "Series2":
        """Product with an exact polynomial in ``(t, z)``."""
        if not p:
            return Series2.zero(self.truncation_t, self.truncation_z)
        nt = self.truncation_t + p.ord_t()
        nz = self.truncation_z + p.ord_z()
        rows = [Series1.zero(nz) for _ in range(nt + 1)]
        for q, pz in p.slices().items():
            for n, row in enumerate(self.coeffs):
                if n + q > nt:
                    break
                prod = row.mul_poly(pz).truncate(nz)
                prod = Series1(prod.coeffs + (ZERO,) * (nz - prod.truncation), nz)
                rows[n + q] = rows[n + q] + prod
        return Series2(tuple(rows), nt, nz)

    def derive_t(self, j: int = 1, ratio: Ratio | None = None) -> "Series2":
        if j == 0:
            return self
        ratio = ratio or _factorial_ratio
        nt = self.truncation_t - j
        rows = tuple(self.coeffs[n + j] * ratio(n + j, j) for n in range(nt + 1))
        return Series2(rows, nt, self.truncation_z)

    def derive_z(self, r: int = 1, ratio: Ratio | None = None) -> "Series2":
        if r == 0:
            return self
        rows = tuple(derive(c, r, ratio) for c in self.coeffs)
        return Series2(rows, self.truncation_t, self.truncation_z - r)

    def __str__(self):
        items = [((n, k), c) for n, row in enumerate(self.coeffs) for k, c in enumerate(row.coeffs) if c]
        return f"{_format_terms(items)} + O(t^{self.truncation_t + 1}, z^{self.truncation_z + 1})"
