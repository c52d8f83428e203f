"""Exact Laurent polynomials in q^{1/2} with integer coefficients.

A :class:`QLaurent` stores half-exponents: the key ``e`` stands for ``q^(e/2)``.
"""
from __future__ import annotations

import json
import re
from typing import Iterable, Mapping, Union

__all__ = [
    "QLaurent",
    "ZERO",
    "ONE",
    "QHALF",
    "ql_add",
    "ql_mul",
    "ql_bar",
    "ql_is_positive",
    "ql_at_one",
    "qpow",
]

Scalar = Union["QLaurent", int]


class QLaurent:
    """An element of Z[q^{1/2}, q^{-1/2}].

    >>> (qpow(-1) + qpow(1)) ** 2
    QLaurent('q^-1 + 2 + q')
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict[int, int] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = {e: c for e, c in sorted(acc.items()) if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> QLaurent:
        # caller guarantees nonzero coefficients
        obj = cls.__new__(cls)
        obj._terms = dict(sorted(terms.items()))
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value: Scalar) -> QLaurent:
        if isinstance(value, QLaurent):
            return value
        if isinstance(value, int):
            return cls({0: value}) if value else ZERO
        raise TypeError(f"cannot interpret {value!r} as a Laurent polynomial in q^(1/2)")

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        """Half-exponent -> coefficient, ascending in the exponent."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, e: int) -> int:
        return self._terms.get(e, 0)

    def min_exponent(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no exponents")
        return next(iter(self._terms))

    def max_exponent(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no exponents")
        return next(reversed(self._terms))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def l1_norm(self) -> int:
        return sum(abs(c) for c in self._terms.values())

    def is_unit(self) -> bool:
        """True for +-q^(e/2), the invertible elements."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    # -- arithmetic -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QLaurent.coerce(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other: Scalar) -> QLaurent:
        try:
            other = QLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            v = acc.get(e, 0) + c
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return QLaurent._raw(acc)

    __radd__ = __add__

    def __neg__(self) -> QLaurent:
        return QLaurent._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Scalar) -> QLaurent:
        try:
            other = QLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> QLaurent:
        return QLaurent.coerce(other) - self

    def __mul__(self, other: Scalar) -> QLaurent:
        if isinstance(other, int):
            if not other:
                return ZERO
            return QLaurent._raw({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, QLaurent):
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        if len(self._terms) * len(other._terms) > _KRONECKER_MIN:
            width = kronecker_width(self.l1_norm() * other.l1_norm())
            base1, v1 = kronecker_pack(self, width)
            base2, v2 = kronecker_pack(other, width)
            return kronecker_unpack(v1 * v2, width, base1 + base2)
        acc: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return QLaurent._raw({e: c for e, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QLaurent:
        if k < 0:
            if not self.is_unit():
                raise ValueError("only units q^(e/2), -q^(e/2) have inverses")
            ((e, c),) = self._terms.items()
            return QLaurent._raw({-e * (-k): c ** (-k)})
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def shift(self, e: int) -> QLaurent:
        """Multiply by q^(e/2)."""
        if not e:
            return self
        return QLaurent._raw({k + e: c for k, c in self._terms.items()})

    def bar(self) -> QLaurent:
        """The involution q^(1/2) -> q^(-1/2)."""
        return QLaurent._raw({-e: c for e, c in self._terms.items()})

    def is_bar_invariant(self) -> bool:
        return all(self._terms.get(-e) == c for e, c in self._terms.items())

    def is_positive(self) -> bool:
        """Membership in N[q^{+-1/2}]; zero counts as positive."""
        return all(c > 0 for c in self._terms.values())

    def at_one(self) -> int:
        return sum(self._terms.values())

    def in_negative_part(self) -> bool:
        """Membership in q^{-1/2} Z[q^{-1/2}]."""
        return all(e < 0 for e in self._terms)

    def split_negative(self) -> QLaurent:
        """The part with strictly negative exponents."""
        return QLaurent._raw({e: c for e, c in self._terms.items() if e < 0})

    # -- text / json ------------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(self._terms.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = _power_text(e)
                body = power if mag == 1 else f"{mag}*{power}"
            if i == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"QLaurent({self.to_text()!r})"

    def to_json(self) -> list[dict]:
        return [{"e": e, "c": str(c)} for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, data) -> QLaurent:
        if isinstance(data, str):
            data = json.loads(data)
        return cls((int(t["e"]), int(t["c"])) for t in data)

    @classmethod
    def parse(cls, text: str) -> QLaurent:
        """Inverse of :meth:`to_text`; also accepts ``q^(e/2)`` for any e."""
        return _parse_qlaurent(text)


def _power_text(e: int) -> str:
    if e % 2:
        return f"q^({e}/2)"
    k = e // 2
    return "q" if k == 1 else f"q^{k}"


_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+)\s*(?P<star>\*)?\s*)?
        (?P<q>q(?:\^(?:\((?P<num>-?\d+)(?:/(?P<den>\d+))?\)|(?P<int>-?\d+)))?)?
        \s*""",
    re.VERBOSE,
)


def _parse_qlaurent(text: str) -> QLaurent:
    text = text.strip()
    if text in ("", "0"):
        return ZERO
    pos = 0
    terms: dict[int, int] = {}
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if m is None or m.end() == pos or (m.group("coef") is None and m.group("q") is None):
            raise ValueError(f"cannot parse Laurent polynomial at {text[pos:]!r}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator before {text[pos:]!r}")
        if m.group("star") and m.group("q") is None:
            raise ValueError(f"dangling '*' in {text!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coef = int(m.group("coef")) if m.group("coef") else 1
        e = 0
        if m.group("q"):
            if m.group("num") is not None:
                num = int(m.group("num"))
                den = int(m.group("den") or 1)
                if den not in (1, 2):
                    raise ValueError(f"exponent must be a half-integer in {text!r}")
                e = num * (2 // den)
            elif m.group("int") is not None:
                e = 2 * int(m.group("int"))
            else:
                e = 2
        terms[e] = terms.get(e, 0) + sign * coef
        pos = m.end()
        first = False
    return QLaurent(terms)


def qpow(e: int, c: int = 1) -> QLaurent:
    """``c * q^(e/2)``."""
    return QLaurent({e: c})



# products with more term pairs than this go through one big-integer product
_KRONECKER_MIN = 64


def kronecker_width(bound: int) -> int:
    """Digit width in bits (a multiple of 8) holding signed values of magnitude <= bound."""
    return -(-(bound.bit_length() + 1) // 8) * 8


def kronecker_pack(f: QLaurent, width: int) -> tuple[int, int]:
    """``(min exponent, sum c * 2^(width * (e - min)))``; f must be nonzero."""
    base = f.min_exponent()
    val = 0
    for e, c in f._terms.items():
        val += c << (width * (e - base))
    return base, val


def kronecker_unpack(val: int, width: int, base: int) -> QLaurent:
    """Inverse of :func:`kronecker_pack` for signed digits of magnitude < 2^(width-1)."""
    # biasing every digit by half makes all digits nonnegative, so the bytes
    # of the biased integer are the digits
    if not val:
        return ZERO
    nbytes = width // 8
    half = 1 << (width - 1)
    ndigits = val.bit_length() // width + 2
    bias = half * (((1 << (width * ndigits)) - 1) // ((1 << width) - 1))
    raw = (val + bias).to_bytes(nbytes * ndigits, "little")
    out = {}
    frombytes = int.from_bytes
    for i in range(ndigits):
        d = frombytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        if d:
            out[base + i] = d
    return QLaurent._raw(out)


ZERO = QLaurent()
ONE = QLaurent({0: 1})
QHALF = QLaurent({1: 1})


def ql_add(f: QLaurent, g: QLaurent) -> QLaurent:
    return f + g


def ql_mul(f: QLaurent, g: QLaurent) -> QLaurent:
    return f * g


def ql_bar(f: QLaurent) -> QLaurent:
    return f.bar()


def ql_is_positive(f: QLaurent) -> bool:
    return f.is_positive()


def ql_at_one(f: QLaurent) -> int:
    return f.at_one()
