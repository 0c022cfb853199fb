"""Recursive-descent parser for operator and series expressions.

Grammar (whitespace insignificant)::

    expr     := ("+"|"-")? term (("+"|"-") term)*
    term     := factor ("*" factor)*
    factor   := atom ("^" nat)?
    atom     := rational | "i" | ident | "z" | "t"
              | "Dz" | "Dt" | "Dmz" | "Dmt" | "(" expr ")"
    rational := nat ("/" nat)?

Every product must keep derivatives to the right of the variables ``t`` and
``z``; ``Dz*z`` is rejected instead of being rewritten.
"""

from __future__ import annotations

import re

from .errors import NonNormalForm, OperatorSyntaxError, UnboundParameter
from .moment import FACTORIAL, MomentSequence
from .operators import Operator1, Operator2, format_operator
from .scalar import ONE, ZERO, I, Scalar, as_scalar
from .series import Poly1, Poly2

__all__ = ["parse_operator", "parse_expression", "pretty_print"]

_TOKEN_RE = re.compile(r"\s*(?:(?P<nat>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")

_DERIVS = {"Dt": ("t", False), "Dz": ("z", False), "Dmt": ("t", True), "Dmz": ("z", True)}


class _Value:
    """An operator under construction: ``{(dt, dz): {(t_exp, z_exp): Scalar}}``."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {k: v for k, v in terms.items() if any(v.values())}

    @classmethod
    def const(cls, c: Scalar):
        return cls({(0, 0): {(0, 0): c}})

    def is_constant(self, part) -> bool:
        return all(k == (0, 0) or not c for k, c in part.items())

    def add(self, other, sign=1):
        out = {k: dict(v) for k, v in self.terms.items()}
        for key, part in other.terms.items():
            row = out.setdefault(key, {})
            for e, c in part.items():
                row[e] = row.get(e, ZERO) + (c if sign > 0 else -c)
        return _Value({k: {e: c for e, c in v.items() if c} for k, v in out.items()})

    def mul(self, other, pos):
        out = {}
        for ka, pa in self.terms.items():
            for kb, pb in other.terms.items():
                if ka != (0, 0) and not self.is_constant(pb):
                    raise NonNormalForm("derivative to the left of a variable factor", pos)
                key = (ka[0] + kb[0], ka[1] + kb[1])
                row = out.setdefault(key, {})
                for ea, ca in pa.items():
                    for eb, cb in pb.items():
                        e = (ea[0] + eb[0], ea[1] + eb[1])
                        row[e] = row.get(e, ZERO) + ca * cb
        return _Value({k: {e: c for e, c in v.items() if c} for k, v in out.items()})


class _Parser:
    def __init__(self, text: str, params):
        self.text = text
        self.params = {k: as_scalar(v) for k, v in (params or {}).items()}
        self.tokens = self._tokenize(text)
        self.i = 0
        self.used = set()  # names of derivative / variable atoms seen

    def _tokenize(self, text):
        tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                start = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise OperatorSyntaxError(f"unexpected character {text[start]!r}", start,
                                          ("number", "identifier", "operator"), text)
            kind = m.lastgroup
            start = m.start(kind)
            tokens.append((kind, m.group(kind), start))
            pos = m.end()
        tokens.append(("end", "", len(text)))
        return tokens

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise OperatorSyntaxError(f"unexpected {val or 'end of input'!r}", pos, (repr(op),), self.text)

    def parse(self) -> _Value:
        if self.peek()[0] == "end":
            raise OperatorSyntaxError("empty expression", 0, ("term",), self.text)
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise OperatorSyntaxError(f"unexpected {val!r}", pos, ("'+'", "'-'", "'*'", "end"), self.text)
        return value

    def expr(self) -> _Value:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.next()
            sign = -1 if val == "-" else 1
        value = self.term()
        if sign < 0:
            value = _Value.const(ZERO).add(value, -1)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                value = value.add(self.term(), -1 if val == "-" else 1)
            else:
                return value

    def term(self) -> _Value:
        value = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.next()
                pos = self.peek()[2]
                value = value.mul(self.factor(), pos)
            else:
                return value

    def factor(self) -> _Value:
        start = self.peek()[2]
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "nat":
                raise OperatorSyntaxError(f"unexpected {val or 'end of input'!r}", pos,
                                          ("natural exponent",), self.text)
            result = _Value.const(ONE)
            for _ in range(int(val)):
                result = result.mul(base, start)
            return result
        return base

    def atom(self) -> _Value:
        kind, val, pos = self.next()
        if kind == "nat":
            num = int(val)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.next()
                k3, v3, p3 = self.next()
                if k3 != "nat":
                    raise OperatorSyntaxError(f"unexpected {v3 or 'end of input'!r}", p3,
                                              ("denominator",), self.text)
                if int(v3) == 0:
                    raise OperatorSyntaxError("zero denominator", p3, (), self.text)
                return _Value.const(Scalar(num) / int(v3))
            return _Value.const(Scalar(num))
        if kind == "ident":
            if val == "i":
                return _Value.const(I)
            if val == "z":
                self.used.add("z")
                return _Value({(0, 0): {(0, 1): ONE}})
            if val == "t":
                self.used.add("t")
                return _Value({(0, 0): {(1, 0): ONE}})
            if val in _DERIVS:
                self.used.add(val)
                var, _ = _DERIVS[val]
                return _Value({(1, 0) if var == "t" else (0, 1): {(0, 0): ONE}})
            if val in self.params:
                return _Value.const(self.params[val])
            raise UnboundParameter(val, pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise OperatorSyntaxError(f"unexpected {val or 'end of input'!r}", pos,
                                  ("number", "identifier", "'('"), self.text)


def _moment_for(used, classical, moment_sym, seq, var, text):
    if moment_sym in used and classical in used and not (seq or FACTORIAL).is_factorial:
        raise OperatorSyntaxError(f"mixes {classical} and {moment_sym}", 0, (), text)
    if moment_sym in used:
        return seq or FACTORIAL
    return FACTORIAL


def parse_operator(text: str, params=None, dim: int | None = None,
                   moment_t: MomentSequence | None = None,
                   moment_z: MomentSequence | None = None):
    """Parse an operator in left-normal form.

    ``params`` binds free identifiers to exact scalars.  The result is an
    :class:`Operator1` unless ``t``/``Dt``/``Dmt`` occurs or ``dim == 2``.
    ``Dmz``/``Dmt`` stand for moment derivatives with respect to
    ``moment_z``/``moment_t`` (factorial when not given).
    """
    p = _Parser(text, params)
    value = p.parse()
    two_var = bool(p.used & {"t", "Dt", "Dmt"})
    if dim == 1 and two_var:
        raise OperatorSyntaxError("t-dependence in a one-variable operator", 0, (), text)
    mz = _moment_for(p.used, "Dz", "Dmz", moment_z, "z", text)
    if dim == 2 or (dim is None and two_var):
        mt = _moment_for(p.used, "Dt", "Dmt", moment_t, "t", text)
        return Operator2({key: Poly2(part) for key, part in value.terms.items()}, mt, mz)
    return Operator1({key[1]: Poly1({e[1]: c for e, c in part.items()})
                      for key, part in value.terms.items()}, mz)


def parse_expression(text: str, params=None, dim: int = 1):
    """Parse a polynomial in ``z`` (``dim=1``) or ``(t, z)`` (``dim=2``)."""
    p = _Parser(text, params)
    value = p.parse()
    if any(k != (0, 0) for k in value.terms):
        raise OperatorSyntaxError("derivatives are not allowed in a series expression", 0, (), text)
    part = value.terms.get((0, 0), {})
    if dim == 1:
        if "t" in p.used:
            raise OperatorSyntaxError("t-dependence in a one-variable expression", 0, (), text)
        return Poly1({e[1]: c for e, c in part.items()})
    return Poly2(part)


def pretty_print(op) -> str:
    """Canonical text of an operator; ``parse_operator`` reads it back unchanged."""
    return format_operator(op)
