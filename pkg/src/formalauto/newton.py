"""Newton polygons of one- and two-variable operators.

The polygon is the convex hull of the translated second quadrants
``{x <= a, y >= b}`` attached to the points ``(a, b)``.  Its boundary is a
horizontal ray at the lower ordinate, a finite chain of edges with
increasing positive slopes, and a vertical ray above the last vertex.  Only
the finite chain is stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import EmptyInput, EmptyOperator, NegativeM
from .operators import Operator1, Operator2
from .series import Poly1, Poly2

__all__ = [
    "VERTICAL",
    "NewtonPolygon",
    "polygon_from_points",
    "polygon_1d",
    "polygon_2d",
    "first_positive_slope",
    "principal_part_1d",
    "principal_part_2d",
    "boundary_reduce_1d",
    "boundary_reduce_2d",
]


class _Vertical:
    """Slope of a polygon whose boundary has no finite positive-slope edge."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "VERTICAL"

    def __str__(self):
        return "vertical"

    def __reduce__(self):
        return (_Vertical, ())


VERTICAL = _Vertical()


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class NewtonPolygon:
    generators: tuple
    chain: tuple
    lower_ordinate: int
    slopes: tuple

    @property
    def max_x(self) -> int:
        return self.chain[-1][0]

    def envelope(self, x):
        """Height of the lower boundary at abscissa ``x``; ``None`` right of the polygon."""
        if x > self.max_x:
            return None
        if x <= self.chain[0][0]:
            return Fraction(self.lower_ordinate)
        for (x0, y0), (x1, y1) in zip(self.chain, self.chain[1:]):
            if x0 <= x <= x1:
                return Fraction(y0) + Fraction(y1 - y0, x1 - x0) * (x - x0)
        raise AssertionError("unreachable")

    def contains(self, x, y) -> bool:
        env = self.envelope(x)
        return env is not None and y >= env

    def on_boundary(self, x, y) -> bool:
        env = self.envelope(x)
        if env is None:
            return False
        return y == env or (x == self.max_x and y >= env)

    def first_positive_slope(self):
        return self.slopes[0] if self.slopes else VERTICAL

    def same_region(self, other: "NewtonPolygon") -> bool:
        """Equal as subsets of the plane (generators strictly inside may differ)."""
        return self.chain == other.chain

    def is_corner(self) -> bool:
        """True when the polygon is a single translated quadrant."""
        return len(self.chain) == 1


def polygon_from_points(points) -> NewtonPolygon:
    """Newton polygon spanned by the quadrants at ``points``."""
    pts = {(int(x), int(y)) for x, y in points}
    if not pts:
        raise EmptyInput("a Newton polygon needs at least one point")
    lowest = {}
    for x, y in pts:
        if x not in lowest or y < lowest[x]:
            lowest[x] = y
    m = min(lowest.values())
    x_start = max(x for x, y in lowest.items() if y == m)
    candidates = sorted((x, y) for x, y in lowest.items() if x >= x_start)
    chain: list = []
    for p in candidates:
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= 0:
            chain.pop()
        chain.append(p)
    slopes = tuple(Fraction(y1 - y0, x1 - x0) for (x0, y0), (x1, y1) in zip(chain, chain[1:]))
    return NewtonPolygon(tuple(sorted(pts)), tuple(chain), m, slopes)


def newton_points_1d(P: Operator1) -> set:
    return {(j, p.ord() - j) for j, p in P.terms.items()}


def newton_points_2d(P: Operator2) -> set:
    return {(j + r, p.ord_t() - j) for (j, r), p in P.terms.items()}


def polygon_1d(P: Operator1) -> NewtonPolygon:
    """Polygon of the points ``(j, ord_z a_j - j)``."""
    if P.is_empty():
        raise EmptyOperator("the zero operator has no Newton polygon")
    return polygon_from_points(newton_points_1d(P))


def polygon_2d(P: Operator2) -> NewtonPolygon:
    """Polygon of the points ``(j + r, ord_t a_jr - j)``."""
    if P.is_empty():
        raise EmptyOperator("the zero operator has no Newton polygon")
    return polygon_from_points(newton_points_2d(P))


def first_positive_slope(N: NewtonPolygon):
    """Smallest chain slope, or ``VERTICAL`` for a single-vertex chain."""
    return N.first_positive_slope()


class PrincipalPart1(NamedTuple):
    operator: Operator1
    lower_ordinate: int
    indices: frozenset


class PrincipalPart2(NamedTuple):
    operator: Operator2
    m: int
    indices: frozenset


def principal_part_1d(P: Operator1) -> PrincipalPart1:
    """``sum_{j in Lambda_m} a_{j,j+m} z**(j+m) D**j`` with ``m`` the lower ordinate."""
    if P.is_empty():
        raise EmptyOperator("the zero operator has no principal part")
    m = min(p.ord() - j for j, p in P.terms.items())
    idx = frozenset(j for j, p in P.terms.items() if p.ord() - j == m)
    op = Operator1({j: Poly1({j + m: P.terms[j].coeff(j + m)}) for j in idx}, P.moment)
    return PrincipalPart1(op, m, idx)


def principal_part_2d(P: Operator2) -> PrincipalPart2:
    """Keep the ``t**(j-m)`` slice of every ``a_jr`` with ``j - ord_t a_jr = m``."""
    if P.is_empty():
        raise EmptyOperator("the zero operator has no principal part")
    m = P.m
    if m < 0:
        raise NegativeM(f"max(j - ord_t a_jr) = {m} < 0")
    idx = frozenset(key for key, p in P.terms.items() if key[0] - p.ord_t() == m)
    terms = {(j, r): Poly2.from_slices({j - m: P.terms[(j, r)].t_slice(j - m)}) for j, r in idx}
    return PrincipalPart2(Operator2(terms, P.moment_t, P.moment_z), m, idx)


def boundary_reduce_1d(P: Operator1) -> Operator1:
    """Drop the monomials ``z**k D**j`` whose point ``(j, k - j)`` is off the polygon boundary."""
    if P.is_empty():
        return P
    N = polygon_1d(P)
    kept = [(j, k, c) for j, k, c in P.monomials() if N.on_boundary(j, k - j)]
    R = Operator1.from_monomials(kept, P.moment)
    assert polygon_1d(R).same_region(N)
    assert principal_part_1d(R) == principal_part_1d(P)
    return R


def boundary_reduce_2d(P: Operator2) -> Operator2:
    """Keep the slices ``a_{j,r,n}(z) t**n`` with ``(j + r, n - j)`` on the polygon boundary."""
    if P.is_empty():
        return P
    N = polygon_2d(P)
    terms: dict = {}
    for j, r, q, pz in P.monomials():
        if N.on_boundary(j + r, q - j):
            terms.setdefault((j, r), {})[q] = pz
    R = Operator2({key: Poly2.from_slices(sl) for key, sl in terms.items()}, P.moment_t, P.moment_z)
    assert polygon_2d(R).same_region(N)
    if P.m >= 0:
        assert principal_part_2d(R) == principal_part_2d(P)
    return R
