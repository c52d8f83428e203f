"""The bar-invariant bases built from cluster monomials and Chebyshev
polynomials in ``X_delta``.

Three families share the cluster monomials ``q^{-ab/2} X_m^a X_{m+1}^b`` and
differ in the imaginary part: ``F_n(X_delta)`` (family ``B``),
``S_n(X_delta)`` (family ``S``) and ``X_delta^n`` (family ``D``).
Expansion in a family peels off the element whose denominator vector matches
a minimal torus term of the residue.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .cluster import Frame, FrameLike, as_frame, chebyshev, cluster_var, x_delta
from .qcoeff import ONE, ZERO, QLaurent
from .torus import ONE_T, ZERO_T, TorusElement

__all__ = [
    "ClusterMonomial",
    "Cheb",
    "DeltaPow",
    "One",
    "Label",
    "F",
    "S",
    "label_from_json",
    "var_dvec",
    "parse_label",
    "FormalCombination",
    "Window",
    "ExpansionError",
    "FAMILIES",
    "basis_element",
    "realize",
    "denominator_vector",
    "family_labels",
    "find_label",
    "expand_in_basis",
    "check_label",
]


# -- labels ---------------------------------------------------------------------


@dataclass(frozen=True)
class One:
    """The unit element."""

    def sort_key(self):
        return (0,)

    def to_text(self) -> str:
        return "1"

    def to_json(self) -> dict:
        return {"kind": "one"}


@dataclass(frozen=True)
class ClusterMonomial:
    """``q^{-ab/2} X_m^a X_{m+1}^b``; build through :meth:`make` for canonical form."""

    m: int
    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError(f"cluster monomial exponents must be nonnegative, got ({self.a}, {self.b})")
        if self.a == 0:
            raise ValueError("use ClusterMonomial.make for non-canonical exponents")

    @staticmethod
    def make(m: int, a: int, b: int) -> Label:
        if a < 0 or b < 0:
            raise ValueError(f"cluster monomial exponents must be nonnegative, got ({a}, {b})")
        if a == 0 and b == 0:
            return One()
        if a == 0:
            return ClusterMonomial(m + 1, b, 0)
        return ClusterMonomial(m, a, b)

    def sort_key(self):
        return (1, self.m, self.a, self.b)

    def to_text(self) -> str:
        parts = [_power(f"X[{self.m}]", self.a)]
        if self.b:
            parts.append(_power(f"X[{self.m + 1}]", self.b))
        return "*".join(parts)

    def to_json(self) -> dict:
        return {"kind": "cluster", "m": self.m, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Cheb:
    """``F_n(X_delta)`` or ``S_n(X_delta)`` for n >= 1."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("F", "S"):
            raise ValueError(f"Chebyshev kind must be 'F' or 'S', got {self.kind!r}")
        if self.n < 1:
            raise ValueError("Chebyshev labels need n >= 1; index 0 is the label One")

    def sort_key(self):
        return (2 if self.kind == "F" else 3, self.n)

    def to_text(self) -> str:
        return f"{self.kind}[{self.n}]"

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True)
class DeltaPow:
    """``X_delta^n`` for n >= 1."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("delta powers need n >= 1; index 0 is the label One")

    def sort_key(self):
        return (4, self.n)

    def to_text(self) -> str:
        return "delta" if self.n == 1 else f"delta^{self.n}"

    def to_json(self) -> dict:
        return {"kind": "delta", "n": self.n}


Label = Union[One, ClusterMonomial, Cheb, DeltaPow]


def _power(base: str, k: int) -> str:
    return base if k == 1 else f"{base}^{k}"


def F(n: int) -> Label:
    """Label of ``F_n(X_delta)``; ``F_0`` is One."""
    if n < 0:
        raise ValueError("F_n vanishes for n < 0 and has no label")
    return One() if n == 0 else Cheb("F", n)


def S(n: int) -> Label:
    if n < 0:
        raise ValueError("S_n vanishes for n < 0 and has no label")
    return One() if n == 0 else Cheb("S", n)


def D(n: int) -> Label:
    if n < 0:
        raise ValueError("negative powers of delta are not basis labels")
    return One() if n == 0 else DeltaPow(n)


def label_from_json(data: Mapping) -> Label:
    kind = data["kind"]
    if kind == "one":
        return One()
    if kind == "cluster":
        return ClusterMonomial.make(int(data["m"]), int(data["a"]), int(data["b"]))
    if kind in ("F", "S"):
        return Cheb(kind, int(data["n"]))
    if kind == "delta":
        return DeltaPow(int(data["n"]))
    raise ValueError(f"unknown label kind {kind!r}")


def parse_label(text: str) -> Label:
    """Inverse of ``to_text`` on labels."""
    import re

    text = text.strip()
    if text == "1":
        return One()
    m = re.fullmatch(r"([FS])\[(\d+)\]", text)
    if m:
        return Cheb(m.group(1), int(m.group(2)))
    m = re.fullmatch(r"delta(?:\^(\d+))?", text)
    if m:
        return DeltaPow(int(m.group(1) or 1))
    m = re.fullmatch(r"X\[(-?\d+)\](?:\^(\d+))?(?:\*X\[(-?\d+)\](?:\^(\d+))?)?", text)
    if m:
        j = int(m.group(1))
        a = int(m.group(2) or 1)
        if m.group(3) is None:
            return ClusterMonomial.make(j, a, 0)
        if int(m.group(3)) != j + 1:
            raise ValueError(f"cluster monomial factors must be consecutive: {text!r}")
        return ClusterMonomial.make(j, a, int(m.group(4) or 1))
    raise ValueError(f"cannot parse basis label {text!r}")


# -- formal combinations ----------------------------------------------------------


class FormalCombination:
    """Finite sum ``coef * label`` with nonzero :class:`QLaurent` coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Label, object] | Iterable[tuple[Label, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Label, QLaurent] = {}
        for label, c in items:
            acc[label] = acc.get(label, ZERO) + QLaurent.coerce(c)
        self._terms = {k: acc[k] for k in sorted(acc, key=_label_key) if acc[k]}

    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> dict[Label, QLaurent]:
        return dict(self._terms)

    def labels(self) -> list[Label]:
        return list(self._terms)

    def coefficient(self, label: Label) -> QLaurent:
        return self._terms.get(label, ZERO)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, FormalCombination):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __add__(self, other: FormalCombination) -> FormalCombination:
        return FormalCombination([*self._terms.items(), *other._terms.items()])

    def __neg__(self) -> FormalCombination:
        return FormalCombination({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: FormalCombination) -> FormalCombination:
        return self + (-other)

    def scale(self, c) -> FormalCombination:
        c = QLaurent.coerce(c)
        return FormalCombination({k: v * c for k, v in self._terms.items()})

    def is_positive(self) -> bool:
        return all(v.is_positive() for v in self._terms.values())

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for label, c in self._terms.items():
            name = label.to_text()
            if isinstance(label, One):
                out.append(c.to_text() if c.is_monomial() else f"({c.to_text()})")
            elif c == ONE:
                out.append(name)
            elif c == -ONE:
                out.append(f"-{name}")
            elif c.is_monomial():
                out.append(f"{c.to_text()}*{name}")
            else:
                out.append(f"({c.to_text()})*{name}")
        return " + ".join(out)

    __str__ = to_text

    def __repr__(self):
        return f"FormalCombination({self.to_text()!r})"

    def to_json(self) -> list[dict]:
        return [{"label": k.to_json(), "coef": v.to_json()} for k, v in self._terms.items()]

    @classmethod
    def from_json(cls, data) -> FormalCombination:
        if isinstance(data, str):
            data = json.loads(data)
        return cls((label_from_json(t["label"]), QLaurent.from_json(t["coef"])) for t in data)


def _label_key(label: Label):
    return label.sort_key()


# -- realization ----------------------------------------------------------------------

_elements: dict[tuple[Label, Frame], TorusElement] = {}
_elements_lock = threading.RLock()


def basis_element(label: Label, frame: FrameLike = 1) -> TorusElement:
    """Torus expansion of a label; cluster monomials are literal left-to-right products."""
    frame = as_frame(frame)
    key = (label, frame)
    hit = _elements.get(key)
    if hit is not None:
        return hit
    with _elements_lock:
        hit = _elements.get(key)
        if hit is not None:
            return hit
        if isinstance(label, One):
            val = ONE_T
        elif isinstance(label, Cheb):
            val = chebyshev(label.kind, label.n, frame)
        elif isinstance(label, DeltaPow):
            val = x_delta(frame) if label.n == 1 else basis_element(DeltaPow(label.n - 1), frame) * x_delta(frame)
        elif isinstance(label, ClusterMonomial):
            m, a, b = label.m, label.a, label.b
            if b:
                # q^{-ab/2} X_m^a X_{m+1}^b = q^{-a(b-1)/2} X_m^a X_{m+1}^{b-1} * X_{m+1} * q^{-a/2}
                prev = basis_element(ClusterMonomial(m, a, b - 1), frame)
                val = (prev * cluster_var(m + 1, frame)).shift(-a)
            elif a == 1:
                val = cluster_var(m, frame)
            else:
                val = basis_element(ClusterMonomial(m, a - 1, 0), frame) * cluster_var(m, frame)
        else:
            raise TypeError(f"not a basis label: {label!r}")
        _elements[key] = val
        return val


def realize(c: FormalCombination, frame: FrameLike = 1) -> TorusElement:
    """Sum of ``coef * basis_element(label)``."""
    out = ZERO_T
    for label, coef in c.items():
        out = out + basis_element(label, frame).scale(coef)
    return out


# -- denominator vectors ------------------------------------------------------------------


def _unique_min(x: TorusElement, what: str) -> tuple[int, int]:
    mins = x.min_terms()
    if len(mins) != 1:
        raise ValueError(f"{what} has {len(mins)} minimal terms {mins}; expected exactly one")
    return mins[0]


def denominator_vector(label: Label, frame: FrameLike = 1) -> tuple[int, int]:
    """Negated unique minimal exponent of the realized label."""
    a, b = _unique_min(basis_element(label, frame), label.to_text())
    return (-a, -b)


_var_dvecs: dict[Frame, dict[int, tuple[int, int]]] = {}
_var_dvecs_lock = threading.Lock()


def var_dvec(m: int, frame: FrameLike = 1) -> tuple[int, int]:
    """Denominator vector of ``X_m`` without realizing it.

    Seeded from the realized variables ``X_{s-1} .. X_{s+2}`` and extended by
    the tropical exchange ``d_{k-1} + d_{k+1} = max(b_k d_k, 0)`` componentwise,
    with ``b_k`` the exponent in the exchange relation at ``k``.
    """
    frame = as_frame(frame)
    with _var_dvecs_lock:
        table = _var_dvecs.get(frame)
        if table is None:
            table = {}
            for k in range(frame.s - 1, frame.s + 3):
                a, b = _unique_min(cluster_var(k, frame), f"X[{k}]")
                table[k] = (-a, -b)
            _var_dvecs[frame] = table
        hi, lo = max(table), min(table)
        while m > hi:
            table[hi + 1] = _tropical_step(table[hi], table[hi - 1], hi)
            hi += 1
        while m < lo:
            table[lo - 1] = _tropical_step(table[lo], table[lo + 1], lo)
            lo -= 1
        return table[m]


def _tropical_step(dk: tuple[int, int], other: tuple[int, int], k: int) -> tuple[int, int]:
    b = 1 if k % 2 else 4
    return (max(b * dk[0], 0) - other[0], max(b * dk[1], 0) - other[1])


def _dvec_fast(label: Label, frame: Frame) -> tuple[int, int]:
    # minimal terms multiply: the product of the minimal monomials is a
    # monomial with nonzero coefficient, and every other product is larger
    if isinstance(label, One):
        return (0, 0)
    if isinstance(label, ClusterMonomial):
        a1 = b1 = a2 = b2 = 0
        if label.a:
            a1, b1 = var_dvec(label.m, frame)
        if label.b:
            a2, b2 = var_dvec(label.m + 1, frame)
        return (label.a * a1 + label.b * a2, label.a * b1 + label.b * b2)
    da, db = _unique_min(x_delta(frame), "delta")
    return (-label.n * da, -label.n * db)


# -- windows and expansion ----------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Candidate labels: cluster monomials with m in [m_lo, m_hi], a+b <= max_degree,
    and imaginary labels with 1 <= n <= max_n."""

    m_lo: int = -10
    m_hi: int = 12
    max_degree: int = 8
    max_n: int = 10


DEFAULT_WINDOW = Window()
FAMILIES = ("B", "S", "D")


def _imaginary(family: str, n: int) -> Label:
    if family == "B":
        return Cheb("F", n)
    if family == "S":
        return Cheb("S", n)
    if family == "D":
        return DeltaPow(n)
    raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")


def family_labels(family: str, window: Window = DEFAULT_WINDOW) -> list[Label]:
    labels = {One()}
    for m in range(window.m_lo, window.m_hi + 1):
        for a in range(window.max_degree + 1):
            for b in range(window.max_degree + 1 - a):
                if a or b:
                    labels.add(ClusterMonomial.make(m, a, b))
    for n in range(1, window.max_n + 1):
        labels.add(_imaginary(family, n))
    return sorted(labels, key=_label_key)


_tables: dict[tuple[str, Window, Frame], dict[tuple[int, int], Label]] = {}


def _label_table(family: str, frame: Frame, window: Window) -> dict[tuple[int, int], Label]:
    key = (family, window, frame)
    table = _tables.get(key)
    if table is None:
        table = {}
        for label in family_labels(family, window):
            d = _dvec_fast(label, frame)
            if d in table:
                raise ValueError(
                    f"denominator vector {d} shared by {table[d].to_text()} and {label.to_text()}"
                )
            table[d] = label
        _tables[key] = table
    return table


def _solve_pair(d: tuple[int, int], u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int] | None:
    # nonnegative integers (a, b) with a*u + b*v = d, if any
    det = u[0] * v[1] - u[1] * v[0]
    if det == 0:
        return None
    na = d[0] * v[1] - d[1] * v[0]
    nb = u[0] * d[1] - u[1] * d[0]
    if na % det or nb % det:
        return None
    a, b = na // det, nb // det
    return (a, b) if a >= 0 and b >= 0 else None


def find_label(d: tuple[int, int], family: str, frame: FrameLike = 1, max_distance: int = 40) -> Label | None:
    """Label of the family whose denominator vector is ``d``, searching cluster
    monomials ``X_m^a X_{m+1}^b`` by increasing distance of m from the frame."""
    return _find_first([tuple(d)], family, as_frame(frame), max_distance)


def _find_first(targets: list[tuple[int, int]], family: str, frame: Frame, max_distance: int) -> Label | None:
    # the first target, in search order, that is a denominator vector; searching
    # all targets together stops at the nearest variable that resolves any
    if (0, 0) in targets:
        return One()
    dd = _dvec_fast(_imaginary(family, 1), frame)
    for d in targets:
        if d[0] * dd[1] == d[1] * dd[0]:
            k = d[0] // dd[0] if dd[0] else d[1] // dd[1]
            if k > 0 and (k * dd[0], k * dd[1]) == d:
                return _imaginary(family, k)
    s = frame.s
    dvecs: dict[int, tuple[int, int]] = {}

    def dvec(m: int) -> tuple[int, int]:
        if m not in dvecs:
            dvecs[m] = _dvec_fast(ClusterMonomial(m, 1, 0), frame)
        return dvecs[m]

    for dist in range(max_distance + 1):
        for m in sorted({s + dist, s - dist}):
            # the pair on the far side of m needs no variable beyond distance dist
            lo = m if m <= s else m - 1
            u, v = dvec(lo), dvec(lo + 1)
            for d in targets:
                ab = _solve_pair(d, u, v)
                if ab is not None:
                    return ClusterMonomial.make(lo, *ab)
    return None


class ExpansionError(ValueError):
    """Raised when the peel cannot finish; carries the residue and the partial result."""

    def __init__(self, message: str, residue: TorusElement, partial: FormalCombination):
        super().__init__(message)
        self.residue = residue
        self.partial = partial


def expand_in_basis(
    x: TorusElement,
    family: str = "B",
    frame: FrameLike = 1,
    window: Window = DEFAULT_WINDOW,
    *,
    search: int = 0,
) -> FormalCombination:
    """Exact expansion of ``x`` in a basis family.

    Labels come from ``window``; with ``search > 0`` a denominator vector
    missing from the window is resolved by :func:`find_label` with that
    maximal distance, and the step cap grows with each label found this way.

    >>> from qcluster.cluster import cluster_var
    >>> print(expand_in_basis(cluster_var(2) * cluster_var(6)))
    q*X[4]^2 + q^(-1/2)*F[1]
    """
    frame = as_frame(frame)
    table = _label_table(family, frame, window)
    cap = 4 * len(table)
    residue = x
    acc: dict[Label, QLaurent] = {}
    steps = 0
    while steps < cap:
        steps += 1
        if not residue:
            return FormalCombination(acc)
        candidates = sorted((-a, -b) for a, b in residue.min_terms())
        label = next((table[d] for d in candidates if d in table), None)
        if label is None and search:
            label = _find_first(candidates, family, frame, search)
            if label is not None:
                cap += 4
        if label is None:
            raise ExpansionError(
                f"no window label has denominator vector in {candidates}",
                residue,
                FormalCombination(acc),
            )
        d = _dvec_fast(label, frame)
        lead = basis_element(label, frame).coefficient(-d[0], -d[1])
        if not lead.is_unit():
            raise ExpansionError(
                f"leading coefficient {lead} of {label.to_text()} is not a unit",
                residue,
                FormalCombination(acc),
            )
        c = residue.coefficient(-d[0], -d[1]) * lead ** -1
        acc[label] = acc.get(label, ZERO) + c
        residue = residue - basis_element(label, frame).scale(c)
    if not residue:
        return FormalCombination(acc)
    raise ExpansionError(f"no convergence after {cap} steps", residue, FormalCombination(acc))


def check_label(label: Label, frames: Iterable[FrameLike] = (1, 2)) -> dict:
    """Bar-invariance and positivity of the realized label in each frame."""
    per_frame = {}
    for f in frames:
        x = basis_element(label, f)
        per_frame[as_frame(f).s] = {"bar_invariant": x.bar() == x, "positive": x.is_positive()}
    return {
        "bar_invariant": all(v["bar_invariant"] for v in per_frame.values()),
        "positive": all(v["positive"] for v in per_frame.values()),
        "frames": per_frame,
    }
