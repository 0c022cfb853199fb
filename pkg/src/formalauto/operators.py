"""Linear operators in normal form and their action on truncated series.

``Operator1`` is ``sum_j a_j(z) D^j`` and ``Operator2`` is
``sum_{(j,r)} a_jr(t, z) Dt^j Dz^r``, with polynomial coefficients written to
the left of the derivatives.  ``D`` is the classical derivative unless a
moment sequence is attached, in which case it is the moment derivative.
"""

from __future__ import annotations

import math
from types import MappingProxyType
from typing import Mapping

from .errors import InexactMoment
from .moment import FACTORIAL, MomentSequence
from .scalar import ONE, Scalar, as_scalar
from .series import Poly1, Poly2, Series1, Series2, _format_terms, derive

__all__ = ["Operator1", "Operator2", "apply1", "apply2", "integrate_t", "apply_integro"]


def _exact_ratio(seq: MomentSequence):
    if seq.is_factorial:
        return None
    if not seq.exact_ratios:
        raise InexactMoment(f"{seq.kind} moments cannot be applied exactly")
    return seq.exact_ratio


class Operator1:
    """``sum_{j in Lambda} a_j(z) D_z^j`` with polynomial ``a_j``."""

    __slots__ = ("_terms", "moment")

    def __init__(self, terms: Mapping[int, Poly1] = (), moment: MomentSequence = FACTORIAL):
        terms = dict(terms)
        clean = {}
        for j in sorted(terms):
            p = terms[j]
            if not isinstance(p, Poly1):
                p = Poly1({0: p})
            if j < 0:
                raise ValueError("derivative orders must be non-negative")
            if p:
                clean[int(j)] = p
        self._terms = clean
        self.moment = moment

    @classmethod
    def identity(cls) -> "Operator1":
        return cls({0: Poly1({0: 1})})

    @classmethod
    def from_monomials(cls, monos, moment: MomentSequence = FACTORIAL) -> "Operator1":
        """From ``[(j, k, c), ...]`` meaning ``c z**k D**j``."""
        acc: dict[int, dict[int, Scalar]] = {}
        for j, k, c in monos:
            row = acc.setdefault(j, {})
            row[k] = row.get(k, 0) + as_scalar(c)
        return cls({j: Poly1(row) for j, row in acc.items()}, moment)

    @property
    def terms(self) -> Mapping[int, Poly1]:
        return MappingProxyType(self._terms)

    @property
    def support(self) -> tuple:
        return tuple(self._terms)

    @property
    def order(self) -> int:
        return max(self._terms, default=0)

    def coefficient(self, j: int) -> Poly1:
        return self._terms.get(j, Poly1())

    def monomials(self):
        """Yield ``(j, k, c)`` for every monomial ``c z**k D**j``."""
        for j, p in self._terms.items():
            for k, c in p.terms():
                yield j, k, c

    def is_empty(self) -> bool:
        return not self._terms

    def scale(self, c) -> "Operator1":
        return Operator1({j: p * as_scalar(c) for j, p in self._terms.items()}, self.moment)

    def with_moment(self, moment: MomentSequence) -> "Operator1":
        return Operator1(self._terms, moment)

    def __eq__(self, other):
        if not isinstance(other, Operator1):
            return NotImplemented
        return self._terms == other._terms and self.moment == other.moment

    def __hash__(self):
        return hash((tuple(self._terms.items()), self.moment))

    def __str__(self):
        return format_operator(self)

    def __repr__(self):
        return f"Operator1({format_operator(self)!r})"


class Operator2:
    """``sum_{(j,r) in Lambda} a_jr(t, z) D_t^j D_z^r`` with polynomial ``a_jr``."""

    __slots__ = ("_terms", "moment_t", "moment_z")

    def __init__(self, terms: Mapping = (), moment_t: MomentSequence = FACTORIAL,
                 moment_z: MomentSequence = FACTORIAL):
        terms = dict(terms)
        clean = {}
        for key in sorted(terms):
            p = terms[key]
            if not isinstance(p, Poly2):
                p = Poly2({(0, 0): p})
            j, r = key
            if j < 0 or r < 0:
                raise ValueError("derivative orders must be non-negative")
            if p:
                clean[(int(j), int(r))] = p
        self._terms = clean
        self.moment_t = moment_t
        self.moment_z = moment_z

    @classmethod
    def from_monomials(cls, monos, moment_t=FACTORIAL, moment_z=FACTORIAL) -> "Operator2":
        """From ``[(j, r, q, k, c), ...]`` meaning ``c t**q z**k Dt**j Dz**r``."""
        acc: dict = {}
        for j, r, q, k, c in monos:
            row = acc.setdefault((j, r), {})
            row[(q, k)] = row.get((q, k), 0) + as_scalar(c)
        return cls({key: Poly2(row) for key, row in acc.items()}, moment_t, moment_z)

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    @property
    def support(self) -> tuple:
        return tuple(self._terms)

    def coefficient(self, j: int, r: int) -> Poly2:
        return self._terms.get((j, r), Poly2())

    def monomials(self):
        """Yield ``(j, r, q, a_{j,r,q}(z))`` for each nonzero ``t**q`` slice."""
        for (j, r), p in self._terms.items():
            for q, pz in p.slices().items():
                yield j, r, q, pz

    @property
    def m(self):
        """``max (j - ord_t a_jr)``; ``-inf`` for the empty operator."""
        return max((j - p.ord_t() for (j, _), p in self._terms.items()), default=-math.inf)

    @property
    def order_t(self) -> int:
        return max((j for j, _ in self._terms), default=0)

    @property
    def order_z(self) -> int:
        return max((r for _, r in self._terms), default=0)

    def is_empty(self) -> bool:
        return not self._terms

    def scale(self, c) -> "Operator2":
        return Operator2({k: p * as_scalar(c) for k, p in self._terms.items()},
                         self.moment_t, self.moment_z)

    def __eq__(self, other):
        if not isinstance(other, Operator2):
            return NotImplemented
        return (self._terms == other._terms and self.moment_t == other.moment_t
                and self.moment_z == other.moment_z)

    def __hash__(self):
        return hash((tuple(self._terms.items()), self.moment_t, self.moment_z))

    def __str__(self):
        return format_operator(self)

    def __repr__(self):
        return f"Operator2({format_operator(self)!r})"


# ---------------------------------------------------------------------------
# pretty printing (inverse of parser.parse_operator)


def _dsym(var: str, power: int, moment: MomentSequence) -> str:
    sym = ("Dm" if not moment.is_factorial else "D") + var
    return sym if power == 1 else f"{sym}^{power}"


def _coef_text(items) -> str:
    body = _format_terms(items)
    return f"({body})" if len(items) > 1 or body.startswith("-") else body


def format_operator(op) -> str:
    """Render an operator in the grammar accepted by ``parse_operator``."""
    if op.is_empty():
        return "0"
    parts = []
    if isinstance(op, Operator1):
        keys = [((j,), [((0, k), c) for k, c in p.terms()]) for j, p in op.terms.items()]
        syms = lambda key: [_dsym("z", key[0], op.moment)] if key[0] else []
    else:
        keys = [((j, r), list(p.terms())) for (j, r), p in op.terms.items()]
        syms = lambda key: ([_dsym("t", key[0], op.moment_t)] if key[0] else []) + \
                           ([_dsym("z", key[1], op.moment_z)] if key[1] else [])
    for key, items in keys:
        ds = syms(key)
        if not ds:
            parts.append(_format_terms(items))
            continue
        if len(items) == 1:
            (exps, c), = items
            mono = _format_terms([(exps, c)])
            if mono == "1":
                parts.append("*".join(ds))
            elif mono == "-1":
                parts.append("-" + "*".join(ds))
            else:
                parts.append("*".join([mono] + ds))
        else:
            parts.append("*".join([_coef_text(items)] + ds))
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ---------------------------------------------------------------------------
# application


def apply1(P: Operator1, u: Series1) -> Series1:
    """``sum_j a_j(z) D^j u``.

    Coefficients are kept up to ``u.truncation + m`` where ``m`` is the lower
    ordinate ``min_j(ord a_j - j)``: exactly those the input determines.
    """
    ratio = _exact_ratio(P.moment)
    out = None
    for j, p in P.terms.items():
        term = derive(u, j, ratio).mul_poly(p)
        out = term if out is None else out + term
    return out if out is not None else Series1.zero(u.truncation)


def apply2(P: Operator2, u: Series2) -> Series2:
    """Two-variable analogue of :func:`apply1`."""
    rt, rz = _exact_ratio(P.moment_t), _exact_ratio(P.moment_z)
    out = None
    for (j, r), p in P.terms.items():
        term = u.derive_z(r, rz).derive_t(j, rt).mul_poly(p)
        out = term if out is None else out + term
    return out if out is not None else Series2.zero(u.truncation_t, u.truncation_z)


def integrate_t(u: Series2, m: int, moment: MomentSequence = FACTORIAL) -> Series2:
    """``m``-fold formal antiderivative in ``t`` with zero constants.

    The ``t**n`` coefficient of the result is ``u_{n-m} m_{n-m} / m_n``
    (``(n-m)!/n!`` classically) for ``n >= m`` and zero below.
    """
    if m == 0:
        return u
    zero = Series1.zero(u.truncation_z)
    rows = [zero] * m
    for n, row in enumerate(u.coeffs):
        if moment.is_factorial:
            factor = Scalar(1) / Scalar(math.perm(n + m, m))
        else:
            if not moment.exact_ratios:
                raise InexactMoment(f"{moment.kind} moments cannot be integrated exactly")
            factor = ONE / moment.exact_ratio(n + m, m)
        rows.append(row * factor)
    return Series2(tuple(rows), u.truncation_t + m, u.truncation_z)


def apply_integro(P: Operator2, m: int, u: Series2) -> Series2:
    """``P(D_t, D_z) D_t^{-m} u``."""
    return apply2(P, integrate_t(u, m, P.moment_t))
