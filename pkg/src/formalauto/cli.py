"""Command-line interface: ``formalauto analyze|solve|polygon <problem.json>``.

Exit codes of ``analyze``: 0 Yes, 1 No, 2 ConditionalYes, 3 input error.
``solve`` uses 0 for a unique solution, 1 for an obstruction, 2 for an
underdetermined problem and 3 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .analysis import check_thm1, check_thm1_moment, check_thm2, check_thm3, check_thm4
from .errors import EmptyPrincipalPart, FormalAutoError
from .gevrey import DegenerateWindow, estimate_order
from .newton import VERTICAL, NewtonPolygon, polygon_1d, polygon_2d, principal_part_1d, principal_part_2d
from .operators import format_operator
from .problem import ProblemLocationError, Problem, load_problem
from .series import Series1, Series2
from .solver import Underdetermined, Unique, solve_1d, solve_cauchy_2d
from .spectral import DEFAULT_N_BOUND, CharPoly, CharPoly2, char_poly_1d, char_poly_2d

SCHEMA_VERSION = "1"
EXIT_INPUT_ERROR = 3
_VERDICT_EXIT = {"yes": 0, "no": 1, "conditional_yes": 2}
_SOLVE_EXIT = {"unique": 0, "obstructed": 1, "underdetermined": 2}
DEFAULT_TRUNCATION = 10


class UsageError(FormalAutoError, ValueError):
    pass


# ---------------------------------------------------------------------------
# report pieces


def polygon_dict(N: NewtonPolygon) -> dict:
    slope = N.first_positive_slope()
    return {
        "generators": [list(p) for p in N.generators],
        "chain": [list(p) for p in N.chain],
        "lower_ordinate": N.lower_ordinate,
        "slopes": [str(s) for s in N.slopes],
        "first_positive_slope": "vertical" if slope is VERTICAL else str(slope),
    }


def _poly_dict(W) -> dict:
    if isinstance(W, CharPoly):
        return {"text": W.format(), "coefficients": [str(c) for c in W.coeffs]}
    return {"text": W.format(), "coefficients": {f"{i},{j}": str(c) for (i, j), c in W.coeffs.items()}}


def _series_dict(u: Series1) -> dict:
    return {"truncation": u.truncation, "coefficients": [str(c) for c in u.coeffs]}


def _series2_dict(u: Series2) -> dict:
    return {
        "truncation": {"t": u.truncation_t, "z": u.truncation_z},
        "coefficients": [[str(c) for c in row.coeffs] for row in u.coeffs],
    }


def _polygon(problem: Problem) -> NewtonPolygon:
    return polygon_1d(problem.operator) if problem.dim == 1 else polygon_2d(problem.operator)


def _structure(problem: Problem) -> dict:
    P = problem.operator
    out = {"polygon": polygon_dict(_polygon(problem))}
    if problem.dim == 1:
        out["principal_part"] = format_operator(principal_part_1d(P).operator)
        out["char_poly"] = _poly_dict(char_poly_1d(P, level=0))
        out["char_poly_lower_ordinate"] = _poly_dict(char_poly_1d(P))
    else:
        if P.m >= 0:
            out["principal_part"] = format_operator(principal_part_2d(P).operator)
            try:
                out["char_poly"] = _poly_dict(char_poly_2d(P, P.m, 0))
            except EmptyPrincipalPart:
                out["char_poly"] = _poly_dict(CharPoly2())
    return out


# ---------------------------------------------------------------------------
# commands


def _resolve_space(args, problem: Problem):
    space = args.space
    s = Fraction(args.s) if args.s is not None else problem.s
    if space is None:
        space = "formal" if s is None else ("convergent" if s == 0 else "gevrey")
    if space == "convergent":
        s = Fraction(0)
    elif space == "gevrey":
        if s is None:
            raise UsageError("--space gevrey needs --s or an 's' field in the problem")
    else:
        s = None
    return space, s


def _analyze_reports(problem: Problem, space, s, n_bound):
    P = problem.operator
    if problem.dim == 1:
        if not problem.moment_z.is_factorial:
            if s is not None:
                raise UsageError("Gevrey criteria are implemented for the classical derivative")
            return [check_thm1_moment(P, problem.moment_z, n_bound)]
        if s is None:
            return [check_thm1(P)]
        return [check_thm2(P, s)]
    if problem.m is not None and problem.m != P.m:
        raise UsageError(f"problem declares m = {problem.m} but the operator has m = {P.m}")
    if s is None:
        return [check_thm3(P, n_bound)]
    return [check_thm4(P, s, n_bound)]


def cmd_analyze(problem: Problem, args) -> tuple:
    space, s = _resolve_space(args, problem)
    reports = _analyze_reports(problem, space, s, args.n_bound)
    doc = {"schema_version": SCHEMA_VERSION, "command": "analyze", "problem": problem.echo()}
    doc.update(_structure(problem))
    doc["reports"] = [r.to_dict() for r in reports]
    return doc, _VERDICT_EXIT[reports[0].verdict.kind]


def cmd_solve(problem: Problem, args) -> tuple:
    P = problem.operator
    doc = {"schema_version": SCHEMA_VERSION, "command": "solve", "problem": problem.echo()}
    doc.update(_structure(problem))
    nz = args.trunc_z if args.trunc_z is not None else (problem.truncation_z or DEFAULT_TRUNCATION)
    if problem.dim == 1:
        m = principal_part_1d(P).lower_ordinate
        f = Series1.from_poly(problem.rhs_poly(), nz + m)
        out = solve_1d(P, f, nz)
        sol = {"status": out.status}
        if isinstance(out, Unique):
            sol["u"] = _series_dict(out.u)
            sol["residual_order"] = out.residual_order
            coeffs = out.u.coeffs
        elif isinstance(out, Underdetermined):
            sol["free_indices"] = list(out.free_indices)
            sol["particular"] = _series_dict(out.particular)
            sol["kernel_basis"] = [_series_dict(k) for k in out.kernel_basis]
            sol["residual_order"] = out.residual_order
            coeffs = out.particular.coeffs
        else:
            sol["first_failed_index"] = out.first_failed_index
            sol["reason"] = out.reason
            coeffs = ()
        doc["solution"] = sol
        if len(coeffs) >= 16 and any(coeffs):
            try:
                doc["gevrey"] = estimate_order(list(coeffs)).to_dict()
            except DegenerateWindow:
                pass
        return doc, _SOLVE_EXIT[out.status]
    m = problem.m if problem.m is not None else P.m
    nt = args.trunc_t if args.trunc_t is not None else (problem.truncation_t or DEFAULT_TRUNCATION)
    out = solve_cauchy_2d(P, m, problem.rhs_poly(), problem.initial_polys(), nt, nz)
    sol = {"status": out.status, "per_n": {str(k): v for k, v in out.per_n.items()}}
    if out.u is not None:
        sol["u"] = _series2_dict(out.u)
        sol["residual_order"] = {"t": out.residual_order[0], "z": out.residual_order[1]}
    if out.free_indices:
        sol["free_indices"] = [list(x) for x in out.free_indices]
    if out.status == "obstructed":
        sol["first_failed_index"] = out.first_failed_index
        sol["reason"] = out.reason
    doc["solution"] = sol
    return doc, _SOLVE_EXIT[out.status]


# ---------------------------------------------------------------------------
# polygon rendering


def render_ascii(N: NewtonPolygon) -> str:
    """Text picture: ``O`` chain vertex, ``*`` other generator, ``.`` inside the polygon."""
    xs = [p[0] for p in N.generators]
    ys = [p[1] for p in N.generators]
    x0, x1 = min(xs + [0]) - 1, N.max_x + 1
    y0, y1 = min(ys + [0]) - 1, max(ys + [0]) + 1
    gens, chain = set(N.generators), set(N.chain)
    lines = []
    width = max(len(str(y)) for y in (y0, y1))
    for y in range(y1, y0 - 1, -1):
        row = []
        for x in range(x0, x1 + 1):
            if (x, y) in chain:
                row.append("O")
            elif (x, y) in gens:
                row.append("*")
            elif N.contains(x, y):
                row.append(".")
            else:
                row.append(" ")
        lines.append(f"{y:>{width}} |" + " ".join(row))
    lines.append(" " * width + " +" + "-" * (2 * (x1 - x0) + 1))
    lines.append(" " * width + "  " + " ".join(str(x)[-1] if x >= 0 else "-" for x in range(x0, x1 + 1)))
    slope = N.first_positive_slope()
    lines.append("chain: " + " -> ".join(f"({x},{y})" for x, y in N.chain))
    lines.append("slopes: " + (", ".join(str(s) for s in N.slopes) or "none"))
    lines.append(f"lower ordinate: {N.lower_ordinate}")
    lines.append(f"first positive slope: {'vertical' if slope is VERTICAL else slope}")
    return "\n".join(lines) + "\n"


def render_svg(N: NewtonPolygon) -> str:
    """Deterministic SVG with the shaded polygon, its rays, the generators and slope labels."""
    unit, pad = 40, 40
    xs = [p[0] for p in N.generators]
    ys = [p[1] for p in N.generators]
    x0, x1 = min(xs + [0]) - 2, N.max_x + 1
    y0, y1 = min(ys + [0]) - 1, max(ys + [0]) + 2
    W = (x1 - x0) * unit + 2 * pad
    H = (y1 - y0) * unit + 2 * pad

    def X(x):
        return pad + (x - x0) * unit

    def Y(y):
        return pad + (y1 - y) * unit

    top = max(y1, N.chain[-1][1])
    region = [(x0, top), (x0, N.lower_ordinate)] + list(N.chain) + [(N.max_x, top)]
    pts = " ".join(f"{X(x)},{Y(y)}" for x, y in region)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{X(x0)}" y1="{Y(0)}" x2="{X(x1)}" y2="{Y(0)}" stroke="#999" stroke-width="1"/>',
        f'<line x1="{X(0)}" y1="{Y(y0)}" x2="{X(0)}" y2="{Y(y1)}" stroke="#999" stroke-width="1"/>',
        f'<polygon points="{pts}" fill="#cfe2f3" stroke="none"/>',
    ]
    bx, by = N.chain[0]
    out.append(f'<line class="ray" x1="{X(x0)}" y1="{Y(by)}" x2="{X(bx)}" y2="{Y(by)}" '
               'stroke="#1f4e79" stroke-width="2"/>')
    chain = " ".join(f"{X(x)},{Y(y)}" for x, y in N.chain)
    out.append(f'<polyline class="chain" points="{chain}" fill="none" stroke="#1f4e79" stroke-width="2"/>')
    ex, ey = N.chain[-1]
    out.append(f'<line class="ray" x1="{X(ex)}" y1="{Y(ey)}" x2="{X(ex)}" y2="{Y(top)}" '
               'stroke="#1f4e79" stroke-width="2"/>')
    for (xa, ya), (xb, yb), s in zip(N.chain, N.chain[1:], N.slopes):
        out.append(f'<text class="slope" x="{(X(xa) + X(xb)) / 2 + 6}" y="{(Y(ya) + Y(yb)) / 2 + 14}" '
                   f'font-size="12">{s}</text>')
    if not N.slopes:
        out.append(f'<text class="slope" x="{X(ex) + 6}" y="{Y(top) + 14}" font-size="12">vertical</text>')
    for x, y in N.generators:
        fill = "#c00000" if (x, y) in N.chain else "#444"
        out.append(f'<circle cx="{X(x)}" cy="{Y(y)}" r="4" fill="{fill}"/>')
        out.append(f'<text x="{X(x) + 6}" y="{Y(y) - 6}" font-size="10">({x},{y})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_polygon(problem: Problem, args) -> tuple:
    N = _polygon(problem)
    fmt = args.format or "ascii"
    if fmt == "svg":
        return render_svg(N), 0
    if fmt == "ascii":
        return render_ascii(N), 0
    doc = {"schema_version": SCHEMA_VERSION, "command": "polygon", "problem": problem.echo(),
           "polygon": polygon_dict(N)}
    return doc, 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="formalauto",
                                 description="Automorphism criteria and formal solutions for linear operators.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (("analyze", "decide the automorphism property"),
                           ("solve", "compute a formal solution"),
                           ("polygon", "draw the Newton polygon")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file", help="problem file (JSON)")
        p.add_argument("--space", choices=("formal", "gevrey", "convergent"))
        p.add_argument("--s", help="Gevrey order, a rational such as 1/2")
        p.add_argument("--n-bound", type=int, default=DEFAULT_N_BOUND,
                       help="search bound for two-variable and moment non-resonance")
        p.add_argument("--trunc-t", type=int)
        p.add_argument("--trunc-z", type=int)
        p.add_argument("--format", choices=("json", "svg", "ascii"))
        p.add_argument("--no-timing", action="store_true", help="omit timing data (byte-stable output)")
    return ap


_COMMANDS = {"analyze": cmd_analyze, "solve": cmd_solve, "polygon": cmd_polygon}


def _error_doc(command, exc) -> dict:
    if isinstance(exc, ProblemLocationError):
        err = exc.to_dict()
    else:
        err = {"message": str(exc)}
        for key in ("position", "witness"):
            if hasattr(exc, key):
                err[key] = getattr(exc, key)
    err["type"] = type(exc).__name__
    return {"schema_version": SCHEMA_VERSION, "command": command, "error": err}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.s is not None:
            try:
                if Fraction(args.s) < 0:
                    raise UsageError("--s must be non-negative")
            except ValueError:
                raise UsageError(f"--s is not a rational number: {args.s!r}") from None
        if args.n_bound < 0:
            raise UsageError("--n-bound must be non-negative")
        problem = load_problem(args.file)
        result, code = _COMMANDS[args.command](problem, args)
    except (FormalAutoError, ValueError) as exc:
        doc = _error_doc(args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        stdout.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_INPUT_ERROR
    if isinstance(result, str):
        stdout.write(result)
        return code
    if not args.no_timing:
        result["timing"] = {"elapsed_seconds": round(time.perf_counter() - start, 6)}
    stdout.write(json.dumps(result, indent=2) + "\n")
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
