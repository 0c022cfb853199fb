"""Formal solutions by coefficient recursion, plus an independent matrix oracle.

``solve_1d`` runs the triangular recursion: the equation at ``z**(n+m)``
fixes ``u_n`` from ``u_0..u_{n-1}`` whenever the characteristic value at
``n`` is nonzero.  Indices that no equation reaches, and resonant indices,
become free parameters; resonant equations turn into linear constraints on
them.  ``solve_cauchy_2d`` reduces a two-variable Cauchy problem to a
sequence of such one-variable problems, one per power of ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyOperator, PositiveM, ResidualError, TruncationTooShort
from .moment import MomentSequence
from .newton import principal_part_1d
from .operators import Operator1, Operator2, _exact_ratio, apply1, apply2, integrate_t
from .scalar import ONE, ZERO, Scalar, as_scalar
from .series import Poly1, Series1, Series2, derive, falling
from .spectral import CharPoly, falling_poly

__all__ = [
    "Unique",
    "Underdetermined",
    "Obstructed",
    "Solution2",
    "OracleOutcome",
    "solve_1d",
    "kernel_basis",
    "solve_cauchy_2d",
    "oracle_solve",
]

RESONANCE = "resonance"
IMAGE_CONSTRAINT = "image_constraint"


@dataclass(frozen=True)
class Unique:
    u: object
    residual_order: int

    status = "unique"


@dataclass(frozen=True)
class Underdetermined:
    free_indices: tuple
    kernel_basis: tuple
    particular: object
    residual_order: int

    status = "underdetermined"


@dataclass(frozen=True)
class Obstructed:
    first_failed_index: object
    reason: str

    status = "obstructed"


# ---------------------------------------------------------------------------
# affine forms in the free parameters


def _axpy(acc: dict, c: Scalar, x: dict) -> None:
    """``acc += c * x`` for affine forms ``{param or None: Scalar}``."""
    for key, v in x.items():
        nv = acc.get(key, ZERO) + c * v
        if nv:
            acc[key] = nv
        else:
            acc.pop(key, None)


def _scaled(x: dict, c: Scalar) -> dict:
    return {k: v * c for k, v in x.items()} if c else {}


def _eliminate(constraints, params):
    """Solve ``form == 0`` for each affine form.

    Returns ``(substitution, index of first inconsistent constraint or None)``;
    the substitution expresses eliminated parameters through the free ones.
    Later parameters are eliminated first, so the earliest indices stay free.
    """
    subst: dict = {}
    for pos, form in enumerate(constraints):
        form = dict(form)
        # apply earlier substitutions
        for p in [k for k in form if k in subst]:
            c = form.pop(p)
            _axpy(form, c, subst[p])
        pivots = [k for k in form if k is not None]
        if not pivots:
            if form.get(None, ZERO):
                return subst, pos
            continue
        p = max(pivots, key=params.index)
        c = form.pop(p)
        expr = _scaled(form, -ONE / c)
        for q, e in subst.items():
            if p in e:
                cp = e.pop(p)
                _axpy(e, cp, expr)
        subst[p] = expr
    return subst, None


def _evaluate(form: dict, values: dict) -> Scalar:
    acc = form.get(None, ZERO)
    for k, v in form.items():
        if k is not None:
            acc = acc + v * values.get(k, ZERO)
    return acc


# ---------------------------------------------------------------------------
# one variable


def _shift_groups(P: Operator1, m: int):
    """``{e: [(j, c), ...]}`` grouping the monomials ``c z**k D**j`` by ``e = k - j``."""
    groups: dict = {}
    for j, k, c in P.monomials():
        groups.setdefault(k - j, []).append((j, c))
    return {e: groups[e] for e in sorted(groups)}


def _group_value(group, n: int, ratio) -> Scalar:
    acc = ZERO
    for j, c in group:
        if n >= j:
            acc = acc + c * ratio(n, j)
    return acc


def _group_polys(groups):
    """Classical case: each group's value as a polynomial in ``n`` (valid for all ``n >= 0``)."""
    out = {}
    for e, group in groups.items():
        acc = CharPoly()
        for j, c in group:
            acc = acc + CharPoly(falling_poly(j)).scale(c)
        out[e] = acc
    return out


def _residual_check(P: Operator1, u: Series1, f: Series1, what: str) -> int:
    r = apply1(P, u)
    n = min(r.truncation, f.truncation)
    for k in range(n + 1):
        if r.coeffs[k] != f.coeffs[k]:
            raise ResidualError(f"{what}: residual coefficient z^{k} is {r.coeffs[k] - f.coeffs[k]}")
    return n


def solve_1d(P: Operator1, f: Series1, N: int):
    """Solve ``P u = f`` for ``u_0..u_N``.

    Returns :class:`Unique`, :class:`Underdetermined` (free indices, a basis
    of the homogeneous solutions of the truncated recursion and a particular
    solution) or :class:`Obstructed` (the index of the first equation that
    cannot be met and whether it comes from a resonance or from ``f`` having
    a nonzero coefficient below ``z**m``).  Every returned series is checked
    against ``f`` through the operator before it is returned.
    """
    if P.is_empty():
        raise EmptyOperator("cannot solve with the zero operator")
    if N < 0:
        raise ValueError("N must be non-negative")
    m = principal_part_1d(P).lower_ordinate
    if f.truncation < N + m:
        raise TruncationTooShort(f"need f up to z^{N + m}, have z^{f.truncation}")
    for K in range(0, min(m, N + m + 1)):
        if f.coeffs[K]:
            return Obstructed(K, IMAGE_CONSTRAINT)

    ratio = _exact_ratio(P.moment)
    groups = _shift_groups(P, m)
    polys = _group_polys(groups) if ratio is None else None

    def value(e, n):
        if polys is not None:
            return polys[e](n)
        return _group_value(groups[e], n, ratio)

    later = [e for e in groups if e > m]
    forms: list = []
    params: list = []
    constraints: list = []
    constraint_index: list = []
    for n in range(N + 1):
        K = n + m
        if K < 0:
            params.append(n)
            forms.append({n: ONE})
            continue
        rhs = {None: f.coeffs[K]} if f.coeffs[K] else {}
        for e in later:
            n2 = K - e
            if n2 < 0:
                break
            c = value(e, n2)
            if c and forms[n2]:
                _axpy(rhs, -c, forms[n2])
        w = value(m, n)
        if w:
            forms.append(_scaled(rhs, ONE / w))
        else:
            constraints.append(rhs)
            constraint_index.append(n)
            params.append(n)
            forms.append({n: ONE})

    subst, bad = _eliminate(constraints, params)
    if bad is not None:
        return Obstructed(constraint_index[bad], RESONANCE)
    free = [p for p in params if p not in subst]

    def realize(values):
        full = dict(values)
        for p, expr in subst.items():
            full[p] = _evaluate(expr, values)
        return Series1(tuple(_evaluate(form, full) for form in forms), N)

    particular = realize({})
    order = _residual_check(P, particular, f, "particular solution")
    if not free:
        return Unique(particular, order)
    zero_f = Series1.zero(f.truncation)
    basis = []
    for p in free:
        hom = {}
        for key, expr in subst.items():
            hom[key] = _evaluate({k: v for k, v in expr.items() if k is not None}, {p: ONE})
        hom[p] = ONE
        vec = Series1(tuple(_evaluate({k: v for k, v in form.items() if k is not None}, hom)
                            for form in forms), N)
        _residual_check(P, vec, zero_f, "kernel vector")
        basis.append(vec)
    return Underdetermined(tuple(free), tuple(basis), particular, order)


def kernel_basis(P: Operator1, N: int) -> list:
    """Basis of the solutions of ``P u = 0`` truncated at ``z**N``.

    For a non-resonant operator with lower ordinate ``m <= 0`` it has ``-m``
    elements, the ``i``-th starting from ``u_i = 1`` and ``u_h = 0`` for the
    other ``h < -m``.  Resonances add one element each.
    """
    if P.is_empty():
        raise EmptyOperator("the zero operator has no finite kernel")
    m = principal_part_1d(P).lower_ordinate
    if m > 0:
        raise PositiveM(f"lower ordinate {m} > 0: the kernel is trivial")
    out = solve_1d(P, Series1.zero(N + m), N)
    if isinstance(out, Unique):
        return []
    return list(out.kernel_basis)


# ---------------------------------------------------------------------------
# two variables


@dataclass(frozen=True)
class Solution2:
    """Outcome of a Cauchy problem.

    ``status`` is ``"unique"``, ``"underdetermined"`` or ``"obstructed"``.
    ``per_n`` records the outcome of each one-variable subproblem.  For an
    underdetermined problem ``u`` is the solution with all free coefficients
    set to zero and ``free_indices`` lists ``(n, k)`` pairs of ``v = D_t^m u``.
    """

    status: str
    u: Series2 | None
    per_n: dict
    residual_order: tuple | None = None
    free_indices: tuple = ()
    first_failed_index: int | None = None
    reason: str | None = None
    kernel_basis: tuple = field(default=())


def _as_series1(x, trunc: int) -> Series1:
    if isinstance(x, Series1):
        if x.truncation < trunc:
            raise TruncationTooShort(f"initial datum known to z^{x.truncation}, need z^{trunc}")
        return x.truncate(trunc)
    if isinstance(x, str):
        from .parser import parse_expression
        x = parse_expression(x)
    if not isinstance(x, Poly1):
        x = Poly1({0: x})
    return Series1.from_poly(x, trunc)


def _row(f, n: int, trunc: int) -> Series1:
    if isinstance(f, Series2):
        if n > f.truncation_t:
            raise TruncationTooShort(f"right-hand side known to t^{f.truncation_t}")
        return _as_series1(f.coeffs[n], trunc)
    return Series1.from_poly(f.t_slice(n), trunc)


def _t_factor(seq: MomentSequence, n: int, j: int, m: int) -> Scalar:
    """Coefficient picked up by ``t**n`` under ``D_t^j D_t^{-m}``: ``m_n / m_{n+m-j}``."""
    if n + m - j < 0:
        return ZERO
    if seq.is_factorial:
        if j >= m:
            return Scalar(falling(n, j - m))
        return ONE / falling(n + m - j, m - j)
    if j >= m:
        return seq.exact_ratio(n, j - m)
    return ONE / seq.exact_ratio(n + m - j, m - j)


def _apply_z(c: Poly1, r: int, v: Series1, ratio) -> Series1:
    return derive(v, r, ratio).mul_poly(c)


def _cascade(P: Operator2, m: int, g_rows, n_count: int):
    """Solve the triangular system for ``v_0..v_{n_count-1}``.

    Returns ``(rows, per_n, free, failure)`` where ``failure`` is ``None`` or
    ``(n, reason)``.
    """
    rz = _exact_ratio(P.moment_z)
    monos = [(j, r, q - j + m, q, c) for j, r, q, c in P.monomials()]
    rows: list = []
    per_n: dict = {}
    free: list = []
    for n in range(n_count):
        rhs = g_rows[n]
        for j, r, d, q, c in monos:
            if d == 0 or n - d < 0:
                continue
            factor = _t_factor(P.moment_t, n - d, j, m)
            if factor:
                rhs = rhs - _apply_z(c, r, rows[n - d], rz) * factor
        terms: dict = {}
        for j, r, d, q, c in monos:
            if d == 0:
                factor = _t_factor(P.moment_t, n, j, m)
                if factor:
                    terms[r] = terms.get(r, Poly1()) + c * factor
        op = Operator1(terms, P.moment_z)
        if op.is_empty():
            per_n[n] = "empty_operator"
            return rows, per_n, free, (n, "empty_operator")
        mn = principal_part_1d(op).lower_ordinate
        N = rhs.truncation - mn
        if N < 0:
            raise TruncationTooShort(f"z truncation exhausted at t^{n}")
        out = solve_1d(op, rhs, N)
        per_n[n] = out.status
        if isinstance(out, Obstructed):
            return rows, per_n, free, (n, out.reason)
        if isinstance(out, Underdetermined):
            free.extend((n, k) for k in out.free_indices)
            rows.append(out.particular)
        else:
            rows.append(out.u)
    return rows, per_n, free, None


def solve_cauchy_2d(P: Operator2, m: int, f, phi, n_t: int, n_z: int) -> Solution2:
    """Solve ``P u = f`` with ``D_t^j u(0, z) = phi[j]`` for ``j < m``.

    ``f`` is a :class:`Poly2` or :class:`Series2`, ``phi`` a list of
    :class:`Poly1`/:class:`Series1`.  The result is known up to ``t**n_t``
    and ``z**n_z``; its residual ``P u - f`` is verified to vanish where ``u``
    determines it, and the initial data are verified exactly.
    """
    if len(phi) != m:
        raise ValueError(f"need {m} initial data, got {len(phi)}")
    if n_t < m:
        raise ValueError("n_t must be at least m")
    if P.m > m:
        raise ValueError(f"operator has integro order {P.m} > m = {m}")
    seq_t = P.moment_t
    n_count = n_t - m + 1

    # z-room lost per t-step in the cascade
    loss = max([r - c.ord() for _, r, _, c in P.monomials()] + [0])
    depth = max([0] + [r for _, r in P.terms])
    Z = n_z + (n_count + 1) * (loss + depth) + 1
    rz = _exact_ratio(P.moment_z)
    while True:
        phis = [_as_series1(p, Z) for p in phi]
        # g = f - P u0 with u0 = sum_i phi_i t**i / m_i, computed slice by slice
        g_rows = [_row(f, n, Z) for n in range(n_count)]
        for j, r, q, c in P.monomials():
            for i, ph in enumerate(phis):
                if i < j:
                    continue
                n = i - j + q
                if n >= n_count:
                    continue
                scale = ONE / as_scalar(seq_t.value(i - j))
                g_rows[n] = g_rows[n] - _apply_z(c, r, ph, rz) * scale
        rows, per_n, free, failure = _cascade(P, m, g_rows, n_count)
        if failure is not None:
            return Solution2("obstructed", None, per_n, first_failed_index=failure[0], reason=failure[1])
        short = min(r.truncation for r in rows)
        if short >= n_z:
            break
        Z += n_z - short
    v = Series2(tuple(r.truncate(n_z) for r in rows), n_count - 1, n_z)
    w = integrate_t(v, m, seq_t)
    u0_rows = []
    for i in range(n_t + 1):
        if i < m:
            u0_rows.append(phis[i].truncate(n_z) * (ONE / as_scalar(seq_t.value(i))))
        else:
            u0_rows.append(Series1.zero(n_z))
    u = Series2(tuple(u0_rows), n_t, n_z) + w
    order = _check_2d(P, m, u, f, phi)
    status = "underdetermined" if free else "unique"
    return Solution2(status, u, per_n, order, tuple(free))


def _check_2d(P: Operator2, m: int, u: Series2, f, phi) -> tuple:
    r = apply2(P, u)
    nt, nz = r.truncation_t, r.truncation_z
    for n in range(nt + 1):
        target = _row(f, n, nz)
        if r.coeffs[n] != target:
            raise ResidualError(f"Cauchy residual nonzero at t^{n}")
    seq_t = P.moment_t
    for j in range(m):
        dj = u.derive_t(j, _exact_ratio(seq_t)).coeffs[0]
        if dj != _as_series1(phi[j], u.truncation_z):
            raise ResidualError(f"initial condition {j} violated")
    return nt, nz


# ---------------------------------------------------------------------------
# matrix oracle


@dataclass(frozen=True)
class OracleOutcome:
    """Exact linear algebra on the truncated map ``(u_0..u_N) -> (P u)_0..``."""

    status: str  # "unique" | "underdetermined" | "inconsistent"
    rows: int
    cols: int
    rank: int
    ker_dim: int
    coker_dim: int
    solution: object
    kernel: tuple


def _rref(matrix, ncols):
    """Reduced row echelon form over exact scalars; rows are dicts ``col -> value``."""
    rows = [dict(r) for r in matrix]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i].get(col)), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ONE / rows[r][col]
        rows[r] = {k: v * inv for k, v in rows[r].items()}
        for i in range(len(rows)):
            if i != r and rows[i].get(col):
                c = rows[i][col]
                row = rows[i]
                for k, v in rows[r].items():
                    nv = row.get(k, ZERO) - c * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        pivots.append(col)
        r += 1
    return rows, pivots


def _oracle_linear(columns, rhs, ncols):
    """Solve ``sum_c x_c columns[c] = rhs``; ``columns[c]`` maps row -> value."""
    nrows = len(rhs)
    aug = [dict() for _ in range(nrows)]
    for c, col in enumerate(columns):
        for i, v in col.items():
            if v:
                aug[i][c] = v
    for i, v in enumerate(rhs):
        if v:
            aug[i][ncols] = v
    red, pivots = _rref(aug, ncols + 1)
    rank = sum(1 for p in pivots if p < ncols)
    if ncols in pivots:
        return "inconsistent", rank, None, ()
    sol = [ZERO] * ncols
    for i, p in enumerate(pivots):
        sol[p] = red[i].get(ncols, ZERO)
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [ZERO] * ncols
        vec[fc] = ONE
        for i, p in enumerate(pivots):
            vec[p] = -red[i].get(fc, ZERO)
        kernel.append(vec)
    status = "unique" if not free else "underdetermined"
    return status, rank, sol, kernel


def oracle_solve(P, f, N, n_z: int | None = None, m: int = 0, phi=()) -> OracleOutcome:
    """Solve the truncated linear system by exact Gaussian elimination.

    One variable: unknowns ``u_0..u_N`` and one equation per coefficient of
    ``P u`` that the truncation determines.  Two variables: unknowns
    ``u_{n,k}`` with ``n <= N``, ``k <= n_z``, plus the equations
    ``D_t^j u(0, z) = phi[j]`` when ``m > 0``.
    """
    if isinstance(P, Operator1):
        return _oracle_1d(P, f, N)
    return _oracle_2d(P, f, N, n_z, m, phi)


def _oracle_1d(P: Operator1, f, N: int) -> OracleOutcome:
    cols = []
    nrows = None
    for n in range(N + 1):
        e = Series1.of([ZERO] * n + [ONE], N)
        img = apply1(P, e)
        nrows = img.truncation + 1
        cols.append({i: c for i, c in enumerate(img.coeffs) if c})
    if nrows is None or nrows <= 0:
        nrows = 0
    f = f if isinstance(f, Series1) else Series1.from_poly(f, nrows - 1)
    if f.truncation < nrows - 1:
        raise TruncationTooShort(f"need f up to z^{nrows - 1}")
    status, rank, sol, kernel = _oracle_linear(cols, f.coeffs[:nrows], N + 1)
    return OracleOutcome(
        status, nrows, N + 1, rank, N + 1 - rank, nrows - rank,
        None if sol is None else Series1(tuple(sol), N),
        tuple(Series1(tuple(k), N) for k in kernel),
    )


def _oracle_2d(P: Operator2, f, N: int, n_z: int, m: int, phi) -> OracleOutcome:
    idx = [(n, k) for n in range(N + 1) for k in range(n_z + 1)]
    cols = []
    shape = None
    for n, k in idx:
        rows = [Series1.zero(n_z) for _ in range(N + 1)]
        rows[n] = Series1.of([ZERO] * k + [ONE], n_z)
        img = apply2(P, Series2(tuple(rows), N, n_z))
        shape = (img.truncation_t, img.truncation_z)
        col = {}
        for a, row in enumerate(img.coeffs):
            for b, c in enumerate(row.coeffs):
                if c:
                    col[a * (shape[1] + 1) + b] = c
        cols.append(col)
    nt, nz = shape
    base = (nt + 1) * (nz + 1)
    rhs = []
    for a in range(nt + 1):
        rhs.extend(_row(f, a, nz).coeffs)
    seq_t = P.moment_t
    for j in range(m):
        target = _as_series1(phi[j], n_z)
        # (D_t^j u)(0, z) = u_j(z) * m_j
        factor = as_scalar(seq_t.value(j))
        for b in range(n_z + 1):
            row_id = base + j * (n_z + 1) + b
            cols[idx.index((j, b))][row_id] = factor
            rhs.append(target.coeffs[b])
    status, rank, sol, kernel = _oracle_linear(cols, rhs, len(idx))

    def as_series(vec):
        return Series2(tuple(Series1(tuple(vec[n * (n_z + 1):(n + 1) * (n_z + 1)]), n_z)
                             for n in range(N + 1)), N, n_z)

    return OracleOutcome(
        status, len(rhs), len(idx), rank, len(idx) - rank, len(rhs) - rank,
        None if sol is None else as_series(sol),
        tuple(as_series(k) for k in kernel),
    )
