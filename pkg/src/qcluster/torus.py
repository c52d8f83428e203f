"""The rank-two based quantum torus.

Elements are finite sums ``coef * X^(a,b)`` over normalized monomials with
``X^(a,b) X^(c,d) = q^{(ad-bc)/2} X^(a+c,b+d)``.  Coefficients are
:class:`~qcluster.qcoeff.QLaurent`.
"""
from __future__ import annotations

import json
import re
from typing import Iterable, Mapping, Union

from . import _kernel
from .qcoeff import ONE, ZERO, QLaurent, kronecker_pack, kronecker_unpack, kronecker_width

__all__ = [
    "TorusElement",
    "t_monomial",
    "t_mul",
    "t_add",
    "t_bar",
    "t_min_terms",
    "t_is_positive",
]

Pair = tuple[int, int]
Scalar = Union[QLaurent, int]


def _twist(a: int, b: int, c: int, d: int) -> int:
    """Half-exponent picked up by X^(a,b) X^(c,d)."""
    return a * d - b * c


class TorusElement:
    """Immutable element of the quantum torus.

    >>> x1, x2 = t_monomial(1, 0), t_monomial(0, 1)
    >>> print(x1 * x2)
    q^(1/2)*(1,1)
    """

    __slots__ = ("_terms", "_hash", "_l1", "_rows")

    def __init__(self, terms: Mapping[Pair, Scalar] | Iterable[tuple[Pair, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Pair, QLaurent] = {}
        for (a, b), c in items:
            key = (int(a), int(b))
            acc[key] = acc.get(key, ZERO) + QLaurent.coerce(c)
        self._terms = {k: v for k, v in sorted(acc.items()) if v}
        self._hash = None
        self._l1 = None
        self._rows = None

    @classmethod
    def _raw(cls, terms: dict[Pair, QLaurent]) -> TorusElement:
        # caller guarantees nonzero coefficients
        obj = cls.__new__(cls)
        obj._terms = dict(sorted(terms.items()))
        obj._hash = None
        obj._l1 = None
        obj._rows = None
        return obj

    @classmethod
    def scalar(cls, c: Scalar) -> TorusElement:
        c = QLaurent.coerce(c)
        return cls._raw({(0, 0): c}) if c else ZERO_T

    @classmethod
    def coerce(cls, value) -> TorusElement:
        if isinstance(value, TorusElement):
            return value
        return cls.scalar(value)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Pair, QLaurent]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[Pair]:
        return list(self._terms)

    def coefficient(self, a: int, b: int) -> QLaurent:
        return self._terms.get((a, b), ZERO)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def n_flat_terms(self) -> int:
        """Number of (a, b, e) triples with nonzero coefficient."""
        return sum(len(c) for c in self._terms.values())

    def is_monomial(self) -> bool:
        return len(self._terms) == 1 and next(iter(self._terms.values())).is_monomial()

    def _l1_norm(self) -> int:
        if self._l1 is None:
            self._l1 = sum(abs(c) for f in self._terms.values() for _, c in f.items())
        return self._l1

    def _flat_form(self) -> _kernel.FlatForm:
        if self._rows is None:
            self._rows = _kernel.FlatForm(self._terms)
        return self._rows

    # -- arithmetic -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, QLaurent)):
            other = TorusElement.scalar(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other) -> TorusElement:
        try:
            other = TorusElement.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for k, c in other._terms.items():
            v = acc.get(k, ZERO) + c
            if v:
                acc[k] = v
            else:
                acc.pop(k, None)
        return TorusElement._raw(acc)

    __radd__ = __add__

    def __neg__(self) -> TorusElement:
        return TorusElement._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> TorusElement:
        try:
            other = TorusElement.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> TorusElement:
        return TorusElement.coerce(other) - self

    def scale(self, c: Scalar) -> TorusElement:
        """Multiply every coefficient by the central scalar ``c``."""
        c = QLaurent.coerce(c)
        if not c:
            return ZERO_T
        if c == ONE:
            return self
        return TorusElement._raw({k: v * c for k, v in self._terms.items()})

    def shift(self, e: int) -> TorusElement:
        """Multiply by q^(e/2)."""
        if not e:
            return self
        return TorusElement._raw({k: v.shift(e) for k, v in self._terms.items()})

    def __mul__(self, other) -> TorusElement:
        if isinstance(other, (int, QLaurent)):
            return self.scale(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return _multiply(self, other)

    def __rmul__(self, other) -> TorusElement:
        if isinstance(other, (int, QLaurent)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> TorusElement:
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE_T
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> TorusElement:
        """Inverse of a unit monomial ``+-q^(e/2) X^(a,b)``; the only division available."""
        if len(self._terms) != 1:
            raise ValueError("only single-term elements are invertible in the torus")
        ((a, b), c), = self._terms.items()
        if not c.is_unit():
            raise ValueError(f"coefficient {c} is not a unit")
        # X^(a,b) X^(-a,-b) = 1 since the twist vanishes
        return TorusElement._raw({(-a, -b): c ** -1})

    def bar(self) -> TorusElement:
        return TorusElement._raw({k: v.bar() for k, v in self._terms.items()})

    def is_bar_invariant(self) -> bool:
        return all(v.is_bar_invariant() for v in self._terms.values())

    def is_positive(self) -> bool:
        return all(v.is_positive() for v in self._terms.values())

    def at_one(self) -> dict[Pair, int]:
        """Commutative specialization q^(1/2) = 1, as exponent pair -> integer."""
        out = {}
        for k, v in self._terms.items():
            c = v.at_one()
            if c:
                out[k] = c
        return out

    def min_terms(self) -> list[Pair]:
        """Support pairs minimal for the componentwise order, in lex order."""
        if not self._terms:
            raise ValueError("the zero element has no minimal terms")
        out = []
        running = None
        # keys are lex sorted, so every earlier pair has a' <= a
        for a, b in self._terms:
            if running is None or b < running:
                out.append((a, b))
                running = b
        return out

    def max_terms(self) -> list[Pair]:
        """Support pairs maximal for the componentwise order, in lex order."""
        if not self._terms:
            raise ValueError("the zero element has no maximal terms")
        out = []
        running = None
        for a, b in reversed(self._terms):
            if running is None or b > running:
                out.append((a, b))
                running = b
        return out[::-1]

    # -- text / json ------------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(_term_text(k, c) for k, c in self._terms.items())

    __str__ = to_text

    def __repr__(self) -> str:
        return f"TorusElement({self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"a": a, "b": b, "coef": c.to_json()} for (a, b), c in self._terms.items()
            ]
        }

    @classmethod
    def from_json(cls, data) -> TorusElement:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(((t["a"], t["b"]), QLaurent.from_json(t["coef"])) for t in data["terms"])

    @classmethod
    def parse(cls, text: str) -> TorusElement:
        return _parse_torus(text)


def _term_text(k: Pair, c: QLaurent) -> str:
    pair = f"({k[0]},{k[1]})"
    if c == ONE:
        return pair
    if c == -ONE:
        return f"-{pair}"
    if c.is_monomial():
        return f"{c.to_text()}*{pair}"
    return f"({c.to_text()})*{pair}"


_PAIR_RE = re.compile(r"^(?P<coef>.*?)\s*\*?\s*\(\s*(?P<a>-?\d+)\s*,\s*(?P<b>-?\d+)\s*\)$")


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {text!r}")
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return parts


def _parse_torus(text: str) -> TorusElement:
    text = text.replace("−", "-").strip()
    if text in ("", "0"):
        return ZERO_T
    terms: dict[Pair, QLaurent] = {}
    for raw in _split_top_level(text):
        raw = raw.strip()
        m = _PAIR_RE.match(raw)
        if m is None:
            raise ValueError(f"cannot parse torus term {raw!r}")
        coef_text = m.group("coef").strip()
        if coef_text.endswith("*"):
            coef_text = coef_text[:-1].strip()
        if coef_text == "":
            coef = ONE
        elif coef_text == "-":
            coef = -ONE
        else:
            neg = coef_text.startswith("-(")
            if neg:
                coef_text = coef_text[1:]
            if coef_text.startswith("(") and coef_text.endswith(")"):
                coef_text = coef_text[1:-1]
            coef = QLaurent.parse(coef_text)
            if neg:
                coef = -coef
        key = (int(m.group("a")), int(m.group("b")))
        terms[key] = terms.get(key, ZERO) + coef
    return TorusElement(terms)


# -- multiplication ------------------------------------------------------------
#
# Three paths, all exact: a direct double loop for small operands, a compiled
# dense convolution when every partial sum fits in 63 bits, and a pair-level
# big-integer packing otherwise.  In the last one each
# coefficient polynomial is evaluated at 2**width with signed digits, so a
# product of coefficients is one integer product and the twist is a shift.

_SMALL = 2048
_DIGIT_BOUND = 1 << 62


_pack = kronecker_pack
_unpack = kronecker_unpack


def _multiply(x: TorusElement, y: TorusElement) -> TorusElement:
    if not x._terms or not y._terms:
        return ZERO_T
    if len(x._terms) == 1 and len(y._terms) == 1:
        ((a, b), f), = x._terms.items()
        ((c, d), g), = y._terms.items()
        return TorusElement._raw({(a + c, b + d): (f * g).shift(_twist(a, b, c, d))})
    if x.is_monomial() or y.is_monomial():
        return _multiply_by_monomial(x, y)
    if x.n_flat_terms() * y.n_flat_terms() <= _SMALL:
        return _multiply_direct(x, y)
    if _kernel.AVAILABLE and x._l1_norm() * y._l1_norm() < _DIGIT_BOUND:
        raw = _kernel.multiply_flat(x._flat_form(), y._flat_form())
        if raw is not None:
            return TorusElement._raw({k: QLaurent._raw(v) for k, v in raw.items()})
    return _multiply_packed(x, y)


def _multiply_direct(x: TorusElement, y: TorusElement) -> TorusElement:
    acc: dict[Pair, dict[int, int]] = {}
    for (a, b), f in x._terms.items():
        for (c, d), g in y._terms.items():
            t = a * d - b * c
            slot = acc.setdefault((a + c, b + d), {})
            for e1, c1 in f.items():
                for e2, c2 in g.items():
                    k = e1 + e2 + t
                    slot[k] = slot.get(k, 0) + c1 * c2
    out = {}
    for key, slot in acc.items():
        poly = {e: c for e, c in slot.items() if c}
        if poly:
            out[key] = QLaurent._raw(poly)
    return TorusElement._raw(out)


def _multiply_packed(x: TorusElement, y: TorusElement) -> TorusElement:
    width = kronecker_width(x._l1_norm() * y._l1_norm())
    xs = [(a, b, *_pack(f, width)) for (a, b), f in x._terms.items()]
    ys = [(c, d, *_pack(g, width)) for (c, d), g in y._terms.items()]
    acc: dict[Pair, list[tuple[int, int]]] = {}
    for a, b, e, u in xs:
        for c, d, f, v in ys:
            acc.setdefault((a + c, b + d), []).append((e + f + a * d - b * c, u * v))
    out = {}
    for key, chunks in acc.items():
        base = min(e for e, _ in chunks)
        total = 0
        for e, w in chunks:
            total += w << (width * (e - base))
        if total:
            out[key] = _unpack(total, width, base)
    return TorusElement._raw(out)


def _multiply_by_monomial(x: TorusElement, y: TorusElement) -> TorusElement:
    if x.is_monomial():
        ((a, b), f), = x._terms.items()
        (e0, c0), = f.items()
        return TorusElement._raw(
            {(a + c, b + d): (g * c0).shift(e0 + _twist(a, b, c, d)) for (c, d), g in y._terms.items()}
        )
    ((c, d), g), = y._terms.items()
    (e0, c0), = g.items()
    return TorusElement._raw(
        {(a + c, b + d): (f * c0).shift(e0 + _twist(a, b, c, d)) for (a, b), f in x._terms.items()}
    )


ZERO_T = TorusElement()
ONE_T = TorusElement({(0, 0): ONE})


def t_monomial(a: int, b: int, coef: Scalar = 1) -> TorusElement:
    """``coef * X^(a,b)``."""
    coef = QLaurent.coerce(coef)
    return TorusElement._raw({(a, b): coef}) if coef else ZERO_T


def t_mul(x: TorusElement, y: TorusElement) -> TorusElement:
    return x * y


def t_add(x: TorusElement, y: TorusElement) -> TorusElement:
    return x + y


def t_bar(x: TorusElement) -> TorusElement:
    return x.bar()


def t_min_terms(x: TorusElement) -> list[Pair]:
    return x.min_terms()


def t_is_positive(x: TorusElement) -> bool:
    return x.is_positive()
