import random
from fractions import Fraction
from pathlib import Path

import pytest

from formalauto.operators import Operator1, Operator2
from formalauto.series import Poly1, Poly2, Series1

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "formalauto" / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


def fixture_path(name: str) -> str:
    return str(FIXTURES / f"{name}.json")


def rand_frac(rng: random.Random, lo=-5, hi=5, den=3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def rand_series(rng: random.Random, trunc: int) -> Series1:
    return Series1.of([rand_frac(rng) for _ in range(trunc + 1)], trunc)


def rand_poly(rng: random.Random, deg: int, low: int = 0) -> Poly1:
    return Poly1({k: rand_frac(rng) for k in range(low, deg + 1)})


def random_operator_1d(rng: random.Random, m: int, order: int = 3) -> Operator1:
    """Operator with lower ordinate exactly ``m`` and positive principal weights.

    Principal terms ``c_j z^(j+m) D^j`` with ``c_j > 0`` give a characteristic
    polynomial with positive falling-factorial coefficients, nonzero at every
    integer ``n >= max(0, -m)``.  Extra terms sit strictly above height ``m``.
    """
    terms = {}
    js = [j for j in range(order + 1) if j + m >= 0]
    # the smallest admissible order keeps W positive on every relevant integer
    principal = {js[0], rng.choice(js)}
    for j in js:
        base = j + m
        coeffs = {}
        if j in principal:
            coeffs[base] = Fraction(rng.randint(1, 4))
        if rng.random() < 0.6:
            coeffs[base + rng.randint(1, 3)] = rand_frac(rng)
        if coeffs:
            terms[j] = Poly1(coeffs)
    return Operator1(terms)


def random_operator_2d(rng: random.Random, m: int) -> Operator2:
    """``t^(j-m) c D_t^j`` principal terms plus random terms of higher t-height."""
    terms = {}
    for j in range(m, m + 2):
        for r in range(2):
            if rng.random() < 0.5 or (j == m and r == 0):
                c = Fraction(rng.randint(1, 3))
                p = Poly2({(j - m, r if j > m else 0): c})
                if rng.random() < 0.5:
                    p = p + Poly2({(j - m + rng.randint(1, 2), rng.randint(0, 2)): rand_frac(rng)})
                terms[(j, r)] = terms.get((j, r), Poly2()) + p
    return Operator2(terms)


@pytest.fixture
def rng():
    return random.Random(20261015)


ACCEPTANCE: dict = {}


def record_acceptance(number: int, title: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[number] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
