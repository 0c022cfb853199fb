"""Acceptance criteria, one test each.  A PASS/FAIL line per criterion is printed
in the terminal summary (and by running this file directly)."""

import io
import random
from fractions import Fraction


from conftest import (
    FIXTURES,
    rand_poly,
    rand_series,
    random_operator_1d,
    random_operator_2d,
    record_acceptance,
)
from formalauto.analysis import check_thm1, check_thm2, check_thm3
from formalauto.cli import run
from formalauto.gevrey import BoundCertificate, estimate_order, verify_bound
from formalauto.moment import FACTORIAL, MomentSequence, moment_derive, q_derivative
from formalauto.newton import boundary_reduce_1d, boundary_reduce_2d
from formalauto.operators import apply1, apply2
from formalauto.parser import parse_expression, parse_operator
from formalauto.problem import load_problem
from formalauto.scalar import ZERO, Scalar
from formalauto.series import Poly1, Series1, derive
from formalauto.solver import Underdetermined, Unique, oracle_solve, solve_1d, solve_cauchy_2d
from formalauto.spectral import FailsAt, Holds


def _check(number, title):
    """Run the decorated body; record PASS/FAIL and re-raise failures."""
    def wrap(fn):
        def test():
            try:
                detail = fn()
            except Exception:
                record_acceptance(number, title, False)
                raise
            record_acceptance(number, title, True, detail or "")
        test.__name__ = fn.__name__
        test.__doc__ = fn.__doc__
        return test
    return wrap


def _fixture(name):
    return load_problem(FIXTURES / f"{name}.json")


@_check(1, "fixture operators give the expected verdicts")
def test_fixture_verdicts():
    r1 = check_thm1(_fixture("irregular_second_order").operator)
    assert r1.verdict.kind == "yes"

    r2 = check_thm1(_fixture("resonant_constant_kernel").operator)
    assert r2.verdict.kind == "no" and r2.condition_b == FailsAt(0)

    ex3 = _fixture("shifted_cokernel")
    r3 = check_thm1(ex3.operator)
    assert r3.verdict.kind == "no" and r3.condition_a["lower_ordinate"] == 1
    assert r3.coker_dim == 1
    f = Series1.from_poly(ex3.rhs_poly(), 11)
    assert solve_1d(ex3.operator, f, 10).status == "obstructed"

    r4 = check_thm1(_fixture("shifted_resonant").operator)
    assert r4.verdict.kind == "no"
    assert not r4.condition_a["passed"] and isinstance(r4.condition_b, FailsAt)

    P7 = _fixture("fuchsian_first_order").operator
    assert check_thm1(P7).verdict.kind == "yes"
    assert check_thm2(P7, 0).verdict.kind == "yes"

    P1 = _fixture("irregular_second_order").operator
    assert check_thm2(P1, 1).verdict.kind == "yes"
    assert check_thm2(P1, Fraction(1, 2)).verdict.kind == "no"

    Pb = _fixture("boundary_reduction").operator
    assert check_thm1(Pb).verdict == r1.verdict
    for s in (0, Fraction(1, 2), 1, 2):
        assert check_thm2(Pb, s).verdict.kind == check_thm2(P1, s).verdict.kind

    r9 = check_thm3(_fixture("cauchy_sign_uniform").operator)
    assert r9.verdict.kind == "yes"
    assert isinstance(r9.condition_b, Holds) and r9.condition_b.certificate == "sign_uniform"


def _irregular_second_order_hand_recursion(f, N):
    u = []
    for n in range(N + 1):
        prev = (n - 1) * (n - 2) * u[n - 1] if n >= 3 else ZERO
        u.append((f[n] - prev) / (1 + n))
    return u


@_check(2, "recursion fidelity against the matrix oracle and the hand recursion")
def test_recursion_fidelity():
    P = parse_operator("1 + z*Dz + z^3*Dz^2")
    rng = random.Random(2)
    for _ in range(10):
        f = Series1.from_poly(rand_poly(rng, rng.randint(0, 12)), 30)
        out = solve_1d(P, f, 30)
        assert isinstance(out, Unique)
        ref = oracle_solve(P, f, 30)
        assert ref.status == "unique" and out.u == ref.solution
        assert list(out.u.coeffs) == _irregular_second_order_hand_recursion(f.coeffs, 30)
    return "10 right-hand sides, truncation 30"


@_check(3, "index identity dim ker - dim coker = -m on truncated oracles")
def test_index_identity():
    rng = random.Random(3)
    for i in range(50):
        m = (i % 5) - 2
        P = random_operator_1d(rng, m)
        ref = oracle_solve(P, Series1.zero(40 + m), 40)
        assert ref.ker_dim - ref.coker_dim == -m
        assert (ref.ker_dim, ref.coker_dim) == (max(-m, 0), max(m, 0))
    return "50 operators, m in -2..2, truncation 40"


@_check(4, "moment coherence with the classical and q-derivatives")
def test_moment_coherence():
    rng = random.Random(4)
    for _ in range(100):
        u = rand_series(rng, rng.randint(1, 20))
        assert moment_derive(FACTORIAL, u) == derive(u)
    for q in (2, 3, Fraction(1, 2)):
        seq = MomentSequence.q_factorial(q)
        for _ in range(10):
            u = rand_series(rng, 25)
            assert q_derivative(u, q) == moment_derive(seq, u)


@_check(5, "Gevrey growth of the irregular second-order solution")
def test_gevrey_growth():
    P = parse_operator("1 + z*Dz + z^3*Dz^2")
    f = Series1.of([1] * 200)
    out = solve_1d(P, f, 199)
    assert isinstance(out, Unique)
    est = estimate_order(out.u)
    assert Fraction(9, 10) <= est.s_hat <= Fraction(11, 10)
    cert = verify_bound(out.u, 1, 100)
    assert isinstance(cert, BoundCertificate)
    fail = verify_bound(out.u, 0, 100)
    assert isinstance(fail, int)
    return f"s_hat = {est.s_hat}, certificate C={cert.C} A={cert.A}, s=0 fails at n={fail}"


@_check(6, "boundary reduction preserves verdicts")
def test_boundary_reduction_equivalence():
    rng = random.Random(6)
    for i in range(30):
        P = random_operator_1d(rng, rng.randint(-1, 2))
        # add interior monomials so the reduction has something to drop
        terms = dict(P.terms)
        j = rng.choice(list(terms))
        terms[j] = terms[j] + Poly1({terms[j].ord() + 5: Scalar(rng.randint(1, 5))})
        P = type(P)(terms)
        R = boundary_reduce_1d(P)
        assert check_thm1(P).verdict == check_thm1(R).verdict
        for s in (0, Fraction(1, 2), 1, 2):
            assert check_thm2(P, s).verdict == check_thm2(R, s).verdict
    for i in range(15):
        P = random_operator_2d(rng, rng.randint(0, 2))
        R = boundary_reduce_2d(P)
        assert check_thm3(P).verdict == check_thm3(R).verdict
    return "30 one-variable and 15 two-variable operators"


@_check(7, "every returned solution has zero residual")
def test_residual_invariant():
    rng = random.Random(7)
    count = 0
    for _ in range(30):
        m = rng.randint(-2, 2)
        P = random_operator_1d(rng, m)
        f = rand_series(rng, 15 + m)
        f = Series1(tuple(ZERO if k < m else c for k, c in enumerate(f.coeffs)), f.truncation)
        out = solve_1d(P, f, 15)
        u = out.u if isinstance(out, Unique) else out.particular
        r = apply1(P, u)
        assert r.coeffs == f.coeffs[: r.truncation + 1]
        if isinstance(out, Underdetermined):
            for k in out.kernel_basis:
                assert not any(apply1(P, k).coeffs)
        count += 1
    cases = [
        ("Dt + t*Dt^2 + z*t*Dt^2*Dz", 1, "1 + z", ["0"]),
        ("Dt - Dz", 1, "t*z", ["z^2"]),
        ("Dt^2 - Dz^2", 2, "0", ["z^3", "z"]),
        ("(1 + t)*Dt + z*Dz + 2", 1, "1 + t^2*z", ["1 + z"]),
    ]
    for text, m, rhs, init in cases:
        P = parse_operator(text, dim=2)
        f = parse_expression(rhs, dim=2)
        phi = [parse_expression(p) for p in init]
        sol = solve_cauchy_2d(P, m, f, phi, 6, 6)
        r = apply2(P, sol.u)
        fs = f.to_series(r.truncation_t, r.truncation_z)
        assert r.coeffs == fs.coeffs
        for j in range(m):
            assert sol.u.derive_t(j).coeffs[0] == phi[j].to_series(sol.u.truncation_z)
        count += 1
    return f"{count} solutions re-checked"


@_check(8, "reports are byte-identical across runs without timing")
def test_determinism():
    n = 0
    for path in sorted(FIXTURES.glob("*.json")):
        for cmd in ("analyze", "solve", "polygon"):
            argv = [cmd, str(path), "--no-timing"] + (["--format", "svg"] if cmd == "polygon" else [])
            outs = []
            for _ in range(2):
                buf = io.StringIO()
                run(argv, stdout=buf)
                outs.append(buf.getvalue().encode())
            assert outs[0] == outs[1]
            n += 1
    return f"{n} reports"


if __name__ == "__main__":
    import sys

    from conftest import ACCEPTANCE

    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except Exception:
                pass
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        print(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}" + (f"  ({detail})" if detail else ""))
    sys.exit(0 if all(ok for _, ok, _ in ACCEPTANCE.values()) else 1)
