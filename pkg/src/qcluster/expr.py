"""A small expression language for elements of the algebra.

Atoms: ``X[m]``, ``F[n]``, ``S[n]``, ``delta``, integers, ``q``, ``q^k`` and
``q^(e/2)``.  Operators: ``^k`` (nonnegative integer power), ``*``
(noncommutative, left to right), ``+``, ``-`` and parentheses.

>>> print(evaluate("X[1]*X[3]"))
(0,0) + q^2*(0,4)
"""
from __future__ import annotations

import re
from fractions import Fraction

from .cluster import FrameLike, chebyshev, cluster_var, x_delta
from .qcoeff import qpow
from .torus import ONE_T, TorusElement

__all__ = ["ExpressionError", "evaluate", "tokenize"]


class ExpressionError(ValueError):
    pass


_TOKEN = re.compile(
    r"""\s*(?:
    (?P<var>[XFS])\[\s*(?P<idx>[+-]?\d+)\s*\]
  | (?P<delta>delta)
  | (?P<qfrac>q\^\(\s*(?P<num>[+-]?\d+)\s*/\s*(?P<den>\d+)\s*\))
  | (?P<qint>q\^(?:\(\s*(?P<pow>[+-]?\d+)\s*\)|(?P<pow2>[+-]?\d+)))
  | (?P<q>q)
  | (?P<int>\d+)
  | (?P<op>[-+*^()])
)""",
    re.VERBOSE,
)


def tokenize(text: str) -> list[tuple[str, object]]:
    pos, out = 0, []
    text = text.replace("−", "-").replace("·", "*")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"unexpected input at position {pos}: {text[pos:pos + 12]!r}")
        pos = m.end()
        if m.group("var"):
            out.append((m.group("var"), int(m.group("idx"))))
        elif m.group("delta"):
            out.append(("delta", None))
        elif m.group("qfrac"):
            half = Fraction(2 * int(m.group("num")), int(m.group("den")))
            if half.denominator != 1:
                raise ExpressionError(f"exponent {m.group('num')}/{m.group('den')} is not a multiple of 1/2")
            out.append(("scalar", int(half)))
        elif m.group("qint"):
            out.append(("scalar", 2 * int(m.group("pow") or m.group("pow2"))))
        elif m.group("q"):
            out.append(("scalar", 2))
        elif m.group("int"):
            out.append(("int", int(m.group("int"))))
        else:
            out.append((m.group("op"), None))
    return out


class _Parser:
    def __init__(self, tokens, frame):
        self.tokens = tokens
        self.i = 0
        self.frame = frame

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, kind=None):
        if self.i >= len(self.tokens):
            raise ExpressionError("unexpected end of expression")
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ExpressionError(f"expected {kind!r}, found {tok[0]!r}")
        self.i += 1
        return tok

    def expr(self) -> TorusElement:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        out = self.term().scale(sign)
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> TorusElement:
        out = self.factor()
        while self.peek() == "*":
            self.take()
            out = out * self.factor()
        return out

    def factor(self) -> TorusElement:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            _, k = self.take("int")
            out = ONE_T
            for _ in range(k):
                out = out * base
            return out
        return base

    def atom(self) -> TorusElement:
        kind, val = self.take()
        if kind == "X":
            return cluster_var(val, self.frame)
        if kind in ("F", "S"):
            return chebyshev(kind, val, self.frame)
        if kind == "delta":
            return x_delta(self.frame)
        if kind == "scalar":
            return TorusElement.scalar(qpow(val))
        if kind == "int":
            return TorusElement.scalar(val)
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ExpressionError(f"unexpected token {kind!r}")


def evaluate(text: str, frame: FrameLike = 1) -> TorusElement:
    """Torus expansion of the expression in the given frame."""
    tokens = tokenize(text)
    if not tokens:
        raise ExpressionError("empty expression")
    p = _Parser(tokens, frame)
    out = p.expr()
    if p.i != len(tokens):
        raise ExpressionError(f"trailing input starting at token {tokens[p.i][0]!r}")
    return out
