"""Automorphism criteria for one- and two-variable operators.

Each checker measures the relevant facts (lower ordinate, non-resonance,
first positive slope) and combines them into a verdict:

* ``yes``: every condition holds with an exact certificate;
* ``no``: some condition fails, with the failing measurement attached;
* ``conditional_yes``: nothing failed, but non-resonance was only checked
  up to a finite bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyPrincipalPart, NegativeM, ResonanceObstruction
from .moment import MomentSequence
from .newton import VERTICAL, polygon_1d, polygon_from_points, principal_part_1d
from .operators import Operator1, Operator2
from .scalar import ZERO
from .series import Poly1
from .spectral import (
    DEFAULT_N_BOUND,
    CharPoly,
    CharPoly2,
    FailsAt,
    Holds,
    IntervalValue,
    UndecidedBeyond,
    char_poly_1d,
    char_poly_2d,
    falling_poly,
    generalized_char_poly,
    integer_roots,
    nonneg_integer_roots,
    nonresonance_2d,
)

__all__ = [
    "Verdict",
    "AutomorphismReport",
    "ReducedFamily",
    "reduce_to_family",
    "check_thm1",
    "check_thm2",
    "check_thm1_moment",
    "check_thm3",
    "check_thm4",
    "index",
    "space_label",
]


@dataclass(frozen=True)
class Verdict:
    kind: str  # "yes" | "no" | "conditional_yes"
    reason: str | None = None
    bound: int | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.bound is not None:
            out["bound"] = self.bound
        return out

    def __str__(self):
        if self.kind == "no":
            return f"No ({self.reason})"
        if self.kind == "conditional_yes":
            return f"ConditionalYes (checked up to n = {self.bound})"
        return "Yes"


YES = Verdict("yes")


def space_label(dim: int, s=None) -> str:
    s = None if s is None else Fraction(s)
    if dim == 1:
        if s is None:
            return "formal"
        return "convergent" if s == 0 else f"gevrey({s})"
    return "formal2" if s is None else f"gevrey2({s})"


def _slope_text(slope) -> str:
    return "vertical" if slope is VERTICAL else str(slope)


def _slope_ok(slope, s: Fraction) -> bool:
    """Is the first positive slope at least ``1/s``?  (``s = 0`` asks for no finite slope.)"""
    if slope is VERTICAL:
        return True
    if s == 0:
        return False
    return slope >= 1 / s


@dataclass
class AutomorphismReport:
    space: str
    condition_a: dict
    condition_b: object
    verdict: Verdict
    index: int | None
    is_fuchsian_principal: bool | None = None
    condition_c: dict | None = None
    ker_dim: int | None = None
    coker_dim: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def is_yes(self) -> bool:
        return self.verdict.kind == "yes"

    def to_dict(self) -> dict:
        out = {
            "space": self.space,
            "verdict": self.verdict.to_dict(),
            "condition_a": self.condition_a,
            "condition_b": self.condition_b.to_dict(),
        }
        if self.condition_c is not None:
            out["condition_c"] = self.condition_c
        out["index"] = self.index
        if self.is_fuchsian_principal is not None:
            out["is_fuchsian_principal"] = self.is_fuchsian_principal
        if self.ker_dim is not None:
            out["ker_dim"] = self.ker_dim
            out["coker_dim"] = self.coker_dim
        out.update(self.extra)
        return out


def _combine(a_ok: bool, b, c_ok: bool = True, a_reason="", c_reason="") -> Verdict:
    reasons = []
    if not a_ok:
        reasons.append(a_reason)
    if isinstance(b, FailsAt):
        w = b.witness
        reasons.append(f"non-resonance fails at {list(w) if isinstance(w, tuple) else w}")
    if not c_ok:
        reasons.append(c_reason)
    if reasons:
        return Verdict("no", "; ".join(reasons))
    if isinstance(b, UndecidedBeyond):
        return Verdict("conditional_yes", bound=b.bound)
    return YES


# ---------------------------------------------------------------------------
# one variable


def _kernel_facts(P: Operator1):
    """``(m, W_m, verdict on n >= max(0, -m))`` for the principal part."""
    m = principal_part_1d(P).lower_ordinate
    W = char_poly_1d(P)
    return m, W, nonneg_integer_roots(W, max(0, -m))


def check_thm1(P: Operator1) -> AutomorphismReport:
    """Automorphism of the formal series ring: lower ordinate 0 and ``W_0(n) != 0`` on ``N_0``.

    ``W_0`` collects the polygon points at height 0; it is the zero
    polynomial when no point sits there.  Kernel and cokernel dimensions
    come from the characteristic polynomial at the lower ordinate and are
    reported only when it has no root at the indices it governs.
    """
    if P.is_empty():
        return AutomorphismReport(space_label(1), {"passed": False, "lower_ordinate": None},
                                  FailsAt(0), Verdict("no", "zero operator"), None)
    m, W_m, kernel_verdict = _kernel_facts(P)
    W0 = char_poly_1d(P, level=0)
    b = nonneg_integer_roots(W0)
    a_ok = m == 0
    report = AutomorphismReport(
        space=space_label(1),
        condition_a={"passed": a_ok, "lower_ordinate": m},
        condition_b=b,
        verdict=_combine(a_ok, b, a_reason=f"lower ordinate {m} != 0"),
        index=-m,
        is_fuchsian_principal=m == 0,
        extra={
            "char_poly": W0.format(),
            "char_poly_lower_ordinate": W_m.format(),
            "nonresonance_lower_ordinate": kernel_verdict.to_dict(),
        },
    )
    if not isinstance(kernel_verdict, FailsAt):
        report.ker_dim = max(-m, 0)
        report.coker_dim = max(m, 0)
    return report


def check_thm2(P: Operator1, s) -> AutomorphismReport:
    """Automorphism of the Gevrey class of order ``s`` (``s = 0``: convergent series)."""
    s = Fraction(s)
    if s < 0:
        raise ValueError("s must be non-negative")
    report = check_thm1(P)
    report.space = space_label(1, s)
    if P.is_empty():
        report.condition_c = {"passed": False, "first_positive_slope": None, "required": None}
        return report
    slope = polygon_1d(P).first_positive_slope()
    c_ok = _slope_ok(slope, s)
    report.condition_c = {
        "passed": c_ok,
        "first_positive_slope": _slope_text(slope),
        "required": "vertical" if s == 0 else str(1 / s),
    }
    report.verdict = _combine(
        report.condition_a["passed"], report.condition_b, c_ok,
        a_reason=f"lower ordinate {report.condition_a['lower_ordinate']} != 0",
        c_reason=(f"first positive slope {_slope_text(slope)} is not vertical" if s == 0
                  else f"first positive slope {_slope_text(slope)} < {1 / s}"),
    )
    return report


def check_thm1_moment(P: Operator1, seq: MomentSequence | None = None,
                      n_bound: int = DEFAULT_N_BOUND) -> AutomorphismReport:
    """Criterion for the moment-derivative operator ``sum a_j(z) D_m^j``.

    The generalized characteristic values are positive combinations of the
    diagonal coefficients, so a common strict sign of those coefficients
    (with a nonzero constant one) certifies non-resonance for every ``n``.
    Otherwise the values are checked for ``n = 0..n_bound``.
    """
    seq = seq or P.moment
    if seq.is_factorial:
        report = check_thm1(P.with_moment(seq))
        report.extra["moment"] = seq.descriptor()
        return report
    m = principal_part_1d(P).lower_ordinate if not P.is_empty() else None
    diag = {j: p.coeff(j) for j, p in P.terms.items() if p.ord() - j == 0}
    b = _moment_nonresonance(P, seq, diag, n_bound)
    a_ok = m == 0
    return AutomorphismReport(
        space=space_label(1),
        condition_a={"passed": a_ok, "lower_ordinate": m},
        condition_b=b,
        verdict=_combine(a_ok, b, a_reason=f"lower ordinate {m} != 0"),
        index=None if m is None else -m,
        is_fuchsian_principal=a_ok,
        extra={"moment": seq.descriptor()},
    )


def _moment_nonresonance(P, seq, diag, n_bound):
    vals = list(diag.values())
    if 0 in diag and all(c.is_real() for c in vals) and (
            all(c.re > 0 for c in vals) or all(c.re < 0 for c in vals)):
        return Holds("sign_uniform", basis="moment_ratio")
    top = n_bound if seq.length is None else min(n_bound, seq.length - 1)
    for n in range(top + 1):
        w = generalized_char_poly(P, seq, n, level=0)
        if isinstance(w, IntervalValue):
            if w.contains_zero():
                if 0 == w.re.a == w.re.b and 0 == w.im.a == w.im.b:
                    return FailsAt(n)
                return UndecidedBeyond(n - 1)
        elif w == ZERO:
            return FailsAt(n)
    return UndecidedBeyond(top)


def index(P: Operator1) -> int:
    """Index ``dim ker - dim coker = -m`` on formal series.

    Raises :class:`ResonanceObstruction` when the characteristic polynomial
    vanishes at an index ``n >= max(0, -m)``, where the dimension count does
    not apply.
    """
    m, _, v = _kernel_facts(P)
    if isinstance(v, FailsAt):
        raise ResonanceObstruction(v.witness)
    return -m


# ---------------------------------------------------------------------------
# two variables


@dataclass(frozen=True)
class ReducedFamily:
    """The one-variable operators ``P~(n, D_z)`` acting on the ``t**n`` coefficients.

    ``columns`` maps each ``r`` to ``{z exponent: polynomial in n}``; the
    operator at ``n`` is ``sum_r (sum_k c_{r,k}(n) z**k) D_z**r``.  For
    ``n >= n_stable`` every lowest-order coefficient is nonzero, so all those
    operators share one Newton polygon; ``exceptional`` lists the operators
    at the other indices.
    """

    m: int
    columns: dict
    n_stable: int
    exceptional: dict
    moment_z: MomentSequence

    def at(self, n: int) -> Operator1:
        if n in self.exceptional:
            return self.exceptional[n]
        return _evaluate_columns(self.columns, n, self.moment_z)

    @property
    def stable(self) -> Operator1:
        """Representative operator for ``n >= n_stable``."""
        return self.at(self.n_stable)

    def stable_points(self) -> set:
        """Newton points of every ``P~(n)`` with ``n >= n_stable``."""
        return {(r, min(col) - r) for r, col in self.columns.items() if col}


def _evaluate_columns(columns, n, moment_z) -> Operator1:
    terms = {}
    for r, col in columns.items():
        terms[r] = Poly1({k: w(n) for k, w in col.items()})
    return Operator1(terms, moment_z)


def reduce_to_family(P: Operator2) -> ReducedFamily:
    """Split ``P D_t^{-m}`` into ``sum_n P~(n, D_z) u_n t**n`` for the principal slices."""
    if not P.moment_t.is_factorial:
        raise ValueError("the reduced family needs the classical t-derivative")
    m = P.m
    if P.is_empty():
        raise EmptyPrincipalPart("the zero operator has no principal part")
    if m < 0:
        raise NegativeM(f"max(j - ord_t a_jr) = {m} < 0")
    columns: dict = {}
    d_max = 0
    for (j, r), p in P.terms.items():
        if j - p.ord_t() != m:
            continue
        d = j - m
        d_max = max(d_max, d)
        ff = CharPoly(falling_poly(d))
        col = columns.setdefault(r, {})
        for k, c in p.t_slice(d).terms():
            col[k] = col.get(k, CharPoly()) + ff.scale(c)
    columns = {r: {k: w for k, w in sorted(col.items()) if not w.is_zero()}
               for r, col in sorted(columns.items())}
    columns = {r: col for r, col in columns.items() if col}
    # indices where a lowest-order coefficient cancels
    extra = set()
    for col in columns.values():
        extra.update(integer_roots(col[min(col)]))
    n_stable = max([d_max] + [n + 1 for n in extra])
    exceptional = {n: _evaluate_columns(columns, n, P.moment_z) for n in range(n_stable)}
    return ReducedFamily(m, columns, n_stable, exceptional, P.moment_z)


def _family_polygons(fam: ReducedFamily):
    """``[(label, polygon or None)]`` for the exceptional indices and the stable range."""
    out = []
    for n in sorted(fam.exceptional):
        op = fam.exceptional[n]
        out.append((n, None if op.is_empty() else polygon_1d(op)))
    pts = fam.stable_points()
    out.append((f">={fam.n_stable}", polygon_from_points(pts) if pts else None))
    return out


def _check_2d(P: Operator2, n_bound: int, s=None) -> AutomorphismReport:
    if not (P.moment_t.is_factorial and P.moment_z.is_factorial):
        raise ValueError("two-variable criteria are implemented for classical derivatives")
    fam = reduce_to_family(P)
    polys = _family_polygons(fam)
    ordinates = {str(n): (None if N is None else N.lower_ordinate) for n, N in polys}
    bad = [n for n, N in polys if N is None or N.lower_ordinate != 0]
    a_ok = not bad
    try:
        W = char_poly_2d(P, fam.m, 0)
    except EmptyPrincipalPart:
        W = CharPoly2()
    b = nonresonance_2d(W, n_bound)
    c_ok, cond_c, c_reason = True, None, ""
    if s is not None:
        s = Fraction(s)
        slopes = {str(n): (None if N is None else _slope_text(N.first_positive_slope()))
                  for n, N in polys}
        c_bad = [n for n, N in polys if N is None or not _slope_ok(N.first_positive_slope(), s)]
        c_ok = not c_bad
        cond_c = {"passed": c_ok, "first_positive_slopes": slopes,
                  "required": "vertical" if s == 0 else str(1 / s)}
        need = "vertical" if s == 0 else f">= {1 / s}"
        c_reason = f"first positive slope not {need} at n = {', '.join(map(str, c_bad))}"
    verdict = _combine(a_ok, b, c_ok,
                       a_reason=f"lower ordinate != 0 at n = {', '.join(map(str, bad))}",
                       c_reason=c_reason)
    return AutomorphismReport(
        space=space_label(2, s),
        condition_a={"passed": a_ok, "lower_ordinates": ordinates},
        condition_b=b,
        condition_c=cond_c,
        verdict=verdict,
        index=None,
        extra={"m": fam.m, "n_stable": fam.n_stable, "char_poly": W.format()},
    )


def check_thm3(P: Operator2, n_bound: int = DEFAULT_N_BOUND) -> AutomorphismReport:
    """Automorphism ``P D_t^{-m}`` of ``C[[t, z]]``.

    Condition (a) is decided exactly: the reduced operators share one
    polygon for ``n >= n_stable`` and the finitely many others are checked
    one by one.  An index whose reduced operator is zero fails.
    """
    return _check_2d(P, n_bound)


def check_thm4(P: Operator2, s, n_bound: int = DEFAULT_N_BOUND) -> AutomorphismReport:
    """As :func:`check_thm3` plus the slope condition on every reduced polygon."""
    if Fraction(s) < 0:
        raise ValueError("s must be non-negative")
    return _check_2d(P, n_bound, s)
