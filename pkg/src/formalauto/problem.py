"""Problem files: JSON documents describing an operator and optional data."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import FormalAutoError, ProblemError
from .moment import FACTORIAL, MomentSequence
from .parser import parse_expression, parse_operator
from .scalar import Scalar

__all__ = ["Problem", "ProblemLocationError", "load_problem", "parse_problem"]

_KEYS = ("name", "note", "dim", "operator", "params", "m", "rhs", "initial",
         "moment_t", "moment_z", "s", "truncation")


class ProblemLocationError(ProblemError):
    """An error inside a problem file, with the place it was found."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None,
                 column: int | None = None, field: str | None = None,
                 position: int | None = None, expected=()):
        self.path, self.line, self.column = path, line, column
        self.field, self.position, self.expected = field, position, tuple(expected)
        self.message = message
        where = ":".join(str(x) for x in (path, line, column) if x is not None)
        super().__init__(f"{where + ': ' if where else ''}{message}")

    def to_dict(self) -> dict:
        out = {"message": self.message}
        for key in ("path", "line", "column", "field", "position"):
            val = getattr(self, key)
            if val is not None:
                out["file" if key == "path" else key] = val
        if self.expected:
            out["expected"] = list(self.expected)
        return out


@dataclass
class Problem:
    dim: int
    operator_text: str
    operator: object
    params: dict = field(default_factory=dict)
    m: int | None = None
    rhs: str | None = None
    initial: list = field(default_factory=list)
    moment_t: MomentSequence = FACTORIAL
    moment_z: MomentSequence = FACTORIAL
    s: Fraction | None = None
    truncation_t: int | None = None
    truncation_z: int | None = None
    name: str | None = None

    def rhs_poly(self):
        text = self.rhs if self.rhs is not None else "0"
        return parse_expression(text, self.params, self.dim)

    def initial_polys(self) -> list:
        return [parse_expression(t, self.params, 1) for t in self.initial]

    def echo(self) -> dict:
        out = {"dim": self.dim, "operator": str(self.operator)}
        if self.name is not None:
            out = {"name": self.name, **out}
        out["params"] = {k: str(v) for k, v in sorted(self.params.items())}
        if self.m is not None:
            out["m"] = self.m
        if self.rhs is not None:
            out["rhs"] = str(self.rhs_poly())
        if self.initial:
            out["initial"] = [str(p) for p in self.initial_polys()]
        if not self.moment_z.is_factorial:
            out["moment_z"] = self.moment_z.descriptor()
        if not self.moment_t.is_factorial:
            out["moment_t"] = self.moment_t.descriptor()
        if self.s is not None:
            out["s"] = str(self.s)
        trunc = {k: v for k, v in (("t", self.truncation_t), ("z", self.truncation_z)) if v is not None}
        if trunc:
            out["truncation"] = trunc
        return out


def _line_of(text: str | None, key: str):
    if not text:
        return None
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return None


def parse_problem(data: dict, text: str | None = None, path: str | None = None) -> Problem:
    """Validate a decoded problem document."""

    def fail(message, key=None, **kw):
        raise ProblemLocationError(message, path, _line_of(text, key) if key else None, field=key, **kw)

    if not isinstance(data, dict):
        fail("a problem file must contain a JSON object")
    unknown = sorted(set(data) - set(_KEYS))
    if unknown:
        fail(f"unknown field(s): {', '.join(unknown)}", unknown[0])
    if "operator" not in data or not isinstance(data["operator"], str):
        fail("missing or non-string field 'operator'", "operator")
    dim = data.get("dim", 1)
    if dim not in (1, 2):
        fail("'dim' must be 1 or 2", "dim")
    params = {}
    for name, val in (data.get("params") or {}).items():
        try:
            params[name] = Scalar.parse(str(val))
        except (ValueError, ArithmeticError) as exc:
            fail(f"parameter {name!r}: {exc}", "params")
    try:
        moment_t = MomentSequence.from_descriptor(data.get("moment_t"))
        moment_z = MomentSequence.from_descriptor(data.get("moment_z"))
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        fail(f"moment descriptor: {exc}", "moment_z" if "moment_z" in data else "moment_t")
    try:
        op = parse_operator(data["operator"], params, dim, moment_t, moment_z)
    except FormalAutoError as exc:
        fail(str(exc), "operator", position=getattr(exc, "position", None),
             expected=getattr(exc, "expected", ()))
    if op.is_empty():
        fail("the operator is zero", "operator")
    m = data.get("m")
    if m is not None and (not isinstance(m, int) or m < 0):
        fail("'m' must be a non-negative integer", "m")
    s = data.get("s")
    if s is not None:
        try:
            s = Fraction(str(s))
        except ValueError:
            fail(f"'s' is not a rational number: {s!r}", "s")
        if s < 0:
            fail("'s' must be non-negative", "s")
    trunc = data.get("truncation") or {}
    for key in ("t", "z"):
        if key in trunc and (not isinstance(trunc[key], int) or trunc[key] < 0):
            fail(f"truncation.{key} must be a non-negative integer", "truncation")
    initial = data.get("initial") or []
    if not isinstance(initial, list) or not all(isinstance(x, str) for x in initial):
        fail("'initial' must be a list of strings", "initial")
    problem = Problem(
        dim=dim, operator_text=data["operator"], operator=op, params=params, m=m,
        rhs=data.get("rhs"), initial=list(initial), moment_t=moment_t, moment_z=moment_z,
        s=s, truncation_t=trunc.get("t"), truncation_z=trunc.get("z"), name=data.get("name"),
    )
    for key, thunk in (("rhs", problem.rhs_poly), ("initial", problem.initial_polys)):
        try:
            thunk()
        except FormalAutoError as exc:
            fail(str(exc), key, position=getattr(exc, "position", None))
    return problem


def load_problem(path) -> Problem:
    """Read and validate a problem file."""
    path = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemLocationError(f"cannot read file: {exc.strerror}", path) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemLocationError(f"invalid JSON: {exc.msg}", path, exc.lineno, exc.colno) from None
    return parse_problem(data, text, path)
