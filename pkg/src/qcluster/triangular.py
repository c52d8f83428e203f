"""Standard monomials and the triangular basis.

``E_(a,b) = q^{-ab/2} X_3^{[-a]+} X_1^{[a]+} X_2^{[b]+} X_0^{[-b]+}`` is pointed
in frame 1: its unique minimal torus term is ``X^(a,b)`` with coefficient 1.
Expansion in the E family peels that term off repeatedly.  The triangular
element ``C_u`` is the unique bar-invariant element with
``C_u - E_u`` in the span of ``q^{-1/2} Z[q^{-1/2}] E_v`` over ``v < u``,
computed by the usual Kazhdan-Lusztig style correction loop.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .cluster import Frame, FrameLike, as_frame, chebyshev, cluster_var, parity_bracket
from .multiplication import Report, ReportEntry
from .qcoeff import ONE, ZERO, QLaurent, qpow
from .torus import ONE_T, ZERO_T, TorusElement

__all__ = [
    "plus_part",
    "standard_monomial",
    "aux_monomials",
    "phi",
    "psi",
    "psi_phi",
    "phi_psi",
    "alpha",
    "order_prec",
    "order_preceq",
    "height",
    "EExpansion",
    "StandardWindow",
    "expand_in_standard",
    "lusztig_C",
    "StructuralViolation",
    "sn_closed_form",
    "product_membership",
    "verify_section4",
    "Section4Window",
    "StandardExpansionError",
    "bar_defect",
    "leading_table",
    "DEFAULT_STD_WINDOW",
]

Index = tuple[int, int]


def plus_part(x: int) -> int:
    return x if x > 0 else 0


# -- monomials -------------------------------------------------------------------------


def _ordered_product(factors: Iterable[tuple[int, int]], half_shift: int, frame: FrameLike) -> TorusElement:
    out = ONE_T
    for j, k in factors:
        if k:
            x = cluster_var(j, frame)
            for _ in range(k):
                out = out * x
    return out.shift(half_shift)


_std_cache: dict[tuple[Index, Frame], TorusElement] = {}
_std_lock = threading.RLock()


def standard_monomial(a: int, b: int, frame: FrameLike = 1) -> TorusElement:
    """``q^{-ab/2} X_3^{[-a]+} X_1^{[a]+} X_2^{[b]+} X_0^{[-b]+}``."""
    frame = as_frame(frame)
    key = ((a, b), frame)
    hit = _std_cache.get(key)
    if hit is not None:
        return hit
    with _std_lock:
        val = _ordered_product(
            ((3, plus_part(-a)), (1, plus_part(a)), (2, plus_part(b)), (0, plus_part(-b))), -a * b, frame
        )
        if frame.s == 1:
            mins = val.min_terms()
            if mins != [(a, b)] or val.coefficient(a, b) != ONE:
                raise StructuralViolation(f"E_({a},{b}) is not pointed at ({a},{b}) in frame 1: minimal terms {mins}")
        _std_cache[key] = val
        return val


def aux_monomials(a: int, b: int, frame: FrameLike = 1) -> tuple[TorusElement, TorusElement]:
    """``(E'_(a,b), mu_1 E_(a,b))``:
    ``q^{-ab/2} X_2^{[-b]+} X_0^{[b]+} X_1^{[a]+} X_{-1}^{[-a]+}`` and
    ``q^{-ab/2} X_4^{[-b]+} X_2^{[b]+} X_3^{[a]+} X_1^{[-a]+}``."""
    e_prime = _ordered_product(
        ((2, plus_part(-b)), (0, plus_part(b)), (1, plus_part(a)), (-1, plus_part(-a))), -a * b, frame
    )
    mu = _ordered_product(
        ((4, plus_part(-b)), (2, plus_part(b)), (3, plus_part(a)), (1, plus_part(-a))), -a * b, frame
    )
    return e_prime, mu


# -- index maps and orders ---------------------------------------------------------------


def phi(a: int, b: int) -> Index:
    return (a, -4 * plus_part(-a) - b)


def psi(a: int, b: int) -> Index:
    return (-a - plus_part(-b), b)


def psi_phi(a: int, b: int) -> Index:
    """Index of the image of ``C_(a,b)`` under ``X_m -> X_{m+2}``."""
    return psi(*phi(a, b))


def phi_psi(a: int, b: int) -> Index:
    """Index of the image of ``C_(a,b)`` under ``X_m -> X_{m-2}``."""
    return phi(*psi(a, b))


def alpha(n: int) -> Index:
    """Lattice vector with ``C_{a1 alpha(n) + a2 alpha(n+1)} = q^{-a1 a2/2} X_n^{a1} X_{n+1}^{a2}``."""
    x, y = (2 - n, 2 * (3 - n)) if n >= 2 else (n, 2 * (n - 1))
    k = parity_bracket(n)
    if x % k or y % k:
        raise StructuralViolation(f"({x},{y}) is not divisible by {k}")
    return (x // k, y // k)


def order_prec(u: Index, v: Index) -> bool:
    """``u < v``: both negative parts strictly smaller."""
    return plus_part(-u[0]) < plus_part(-v[0]) and plus_part(-u[1]) < plus_part(-v[1])


def order_preceq(u: Index, v: Index) -> bool:
    return plus_part(-u[0]) <= plus_part(-v[0]) and plus_part(-u[1]) <= plus_part(-v[1])


def height(u: Index) -> int:
    return plus_part(-u[0]) + plus_part(-u[1])


# -- E expansions ---------------------------------------------------------------------------


class EExpansion:
    """Finite sum ``coef * E_(a,b)``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Index, object] | Iterable[tuple[Index, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Index, QLaurent] = {}
        for (a, b), c in items:
            acc[(a, b)] = acc.get((a, b), ZERO) + QLaurent.coerce(c)
        self._terms = {k: acc[k] for k in sorted(acc) if acc[k]}

    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> dict[Index, QLaurent]:
        return dict(self._terms)

    def support(self) -> list[Index]:
        return list(self._terms)

    def coefficient(self, u: Index) -> QLaurent:
        return self._terms.get(tuple(u), ZERO)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, EExpansion):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __add__(self, other: EExpansion) -> EExpansion:
        return EExpansion([*self._terms.items(), *other._terms.items()])

    def __neg__(self) -> EExpansion:
        return EExpansion({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: EExpansion) -> EExpansion:
        return self + (-other)

    def scale(self, c) -> EExpansion:
        c = QLaurent.coerce(c)
        return EExpansion({k: v * c for k, v in self._terms.items()})

    def in_negative_lattice(self) -> bool:
        """Membership in ``q^{-1/2} A_+``: every coefficient in ``q^{-1/2} Z[q^{-1/2}]``."""
        return all(c.in_negative_part() for c in self._terms.values())

    def supported_below(self, bound: Index, strict: bool = False) -> bool:
        order = order_prec if strict else order_preceq
        return all(order(u, bound) for u in self._terms)

    def realize(self, frame: FrameLike = 1) -> TorusElement:
        out = ZERO_T
        for (a, b), c in self._terms.items():
            out = out + standard_monomial(a, b, frame).scale(c)
        return out

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        out = ""
        for i, ((a, b), c) in enumerate(self._terms.items()):
            name = f"E({a},{b})"
            neg = c.is_monomial() and c.at_one() < 0
            if neg:
                c = -c
            if c == ONE:
                body = name
            elif c.is_monomial():
                body = f"{c.to_text()}*{name}"
            else:
                body = f"({c.to_text()})*{name}"
            if i == 0:
                out = ("-" if neg else "") + body
            else:
                out += (" - " if neg else " + ") + body
        return out

    __str__ = to_text

    def __repr__(self):
        return f"EExpansion({self.to_text()!r})"

    def to_json(self) -> list[dict]:
        return [{"a": a, "b": b, "coef": c.to_json()} for (a, b), c in self._terms.items()]

    @classmethod
    def from_json(cls, data) -> EExpansion:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(((t["a"], t["b"]), QLaurent.from_json(t["coef"])) for t in data)


@dataclass(frozen=True)
class StandardWindow:
    """Index box for E-expansions; grown automatically to cover the input's support."""

    a_lo: int = -6
    a_hi: int = 14
    b_lo: int = -6
    b_hi: int = 14

    def __contains__(self, u: Index) -> bool:
        return self.a_lo <= u[0] <= self.a_hi and self.b_lo <= u[1] <= self.b_hi

    def size(self) -> int:
        return (self.a_hi - self.a_lo + 1) * (self.b_hi - self.b_lo + 1)

    def covering(self, x: TorusElement) -> StandardWindow:
        if not x:
            return self
        keys = x.support()
        return StandardWindow(
            min(self.a_lo, min(a for a, _ in keys)),
            max(self.a_hi, max(a for a, _ in keys)),
            min(self.b_lo, min(b for _, b in keys)),
            max(self.b_hi, max(b for _, b in keys)),
        )

    def indices(self) -> list[Index]:
        return [(a, b) for a in range(self.a_lo, self.a_hi + 1) for b in range(self.b_lo, self.b_hi + 1)]


DEFAULT_STD_WINDOW = StandardWindow()


class StructuralViolation(RuntimeError):
    """A property the construction relies on failed to hold."""


class StandardExpansionError(ValueError):
    def __init__(self, message: str, residue: TorusElement, partial: EExpansion):
        super().__init__(message)
        self.residue = residue
        self.partial = partial


_lead_tables: dict[tuple[Frame, StandardWindow], dict[Index, Index]] = {}


def leading_table(frame: FrameLike, window: StandardWindow = DEFAULT_STD_WINDOW) -> dict[Index, Index]:
    """Leading (unique minimal) exponent of each window ``E_u`` -> ``u``; injectivity asserted."""
    frame = as_frame(frame)
    key = (frame, window)
    table = _lead_tables.get(key)
    if table is None:
        table = {}
        for u in window.indices():
            x = standard_monomial(*u, frame)
            mins = x.min_terms()
            if len(mins) != 1 or not x.coefficient(*mins[0]).is_unit():
                raise StructuralViolation(f"E_{u} is not pointed in frame {frame.s}: minimal terms {mins}")
            if mins[0] in table:
                raise StructuralViolation(f"E_{u} and E_{table[mins[0]]} share the leading exponent {mins[0]}")
            table[mins[0]] = u
        _lead_tables[key] = table
    return table


def expand_in_standard(
    x: TorusElement, frame: FrameLike = 1, window: StandardWindow | None = None
) -> EExpansion:
    """Exact expansion ``x = sum c_u E_u``.

    In frame 1 the window grows to cover the support of ``x``; in other frames
    the leading-exponent table of the given window is used.
    """
    frame = as_frame(frame)
    window = window or DEFAULT_STD_WINDOW
    if frame.s == 1:
        window = window.covering(x)
        lookup = lambda t: t if t in window else None  # noqa: E731
    else:
        table = leading_table(frame, window)
        lookup = table.get
    cap = 4 * window.size()
    residue = x
    acc: dict[Index, QLaurent] = {}
    for _ in range(cap):
        if not residue:
            return EExpansion(acc)
        mins = residue.min_terms()
        u = next((lookup(t) for t in mins if lookup(t) is not None), None)
        if u is None:
            raise StandardExpansionError(f"no window index leads at {mins}", residue, EExpansion(acc))
        e = standard_monomial(*u, frame)
        lead_exp = u if frame.s == 1 else next(t for t in mins if lookup(t) == u)
        c = residue.coefficient(*lead_exp) * e.coefficient(*lead_exp) ** -1
        acc[u] = acc.get(u, ZERO) + c
        residue = residue - e.scale(c)
    if not residue:
        return EExpansion(acc)
    raise StandardExpansionError(f"no convergence after {cap} steps", residue, EExpansion(acc))


# -- Lusztig's lemma --------------------------------------------------------------------------

_bar_defect: dict[Index, EExpansion] = {}
_bar_lock = threading.RLock()


def bar_defect(u: Index) -> EExpansion:
    """E-expansion of ``bar(E_u) - E_u`` in frame 1 (zero outside the negative quadrant)."""
    hit = _bar_defect.get(u)
    if hit is not None:
        return hit
    with _bar_lock:
        if u[0] < 0 and u[1] < 0:
            e = standard_monomial(*u, 1)
            val = expand_in_standard(e.bar() - e, 1)
        else:
            val = EExpansion()
        _bar_defect[u] = val
        return val


def _antisymmetric_part(delta: QLaurent) -> QLaurent:
    """``p`` in ``q^{-1/2} Z[q^{-1/2}]`` with ``p - bar(p) = delta``; needs ``bar(delta) = -delta``."""
    if delta.bar() != -delta:
        raise StructuralViolation(f"correction coefficient {delta} is not antisymmetric under bar")
    return delta.split_negative()


def lusztig_C(
    a: int,
    b: int,
    frame: FrameLike = 1,
    window: StandardWindow | None = None,
    *,
    tie_break: str = "lex",
) -> tuple[TorusElement, EExpansion]:
    """The triangular basis element ``C_(a,b)``: its torus expansion in ``frame`` and its E-expansion.

    ``tie_break`` ("lex" or "revlex") fixes the order among indices of equal
    height; the result does not depend on it.
    """
    u = (a, b)
    if a >= 0 or b >= 0:
        # nothing lies strictly below u
        coeffs = EExpansion({u: ONE})
        return coeffs.realize(frame), coeffs
    if tie_break not in ("lex", "revlex"):
        raise ValueError(f"tie_break must be 'lex' or 'revlex', got {tie_break!r}")

    corrections: dict[Index, QLaurent] = {}
    defect: dict[Index, QLaurent] = dict(bar_defect(u).items())
    for v in defect:
        if not order_prec(v, u):
            raise StructuralViolation(f"bar(E_{u}) - E_{u} has a term at {v}, which is not below {u}")
    sign = 1 if tie_break == "lex" else -1
    while defect:
        top = max(height(v) for v in defect)
        level = sorted((v for v in defect if height(v) == top), key=lambda v: (sign * v[0], sign * v[1]))
        v = level[0]
        delta = defect.pop(v)
        p = _antisymmetric_part(delta)
        if p:
            corrections[v] = corrections.get(v, ZERO) + p
            # new defect: d + (bar(p) - p) E_v + bar(p) R_v, and (bar(p) - p) = -delta
            for w, r in bar_defect(v).items():
                val = defect.get(w, ZERO) + p.bar() * r
                if val:
                    defect[w] = val
                else:
                    defect.pop(w, None)
    coeffs = EExpansion({u: ONE, **corrections})
    for v, c in corrections.items():
        if not order_prec(v, u) or not c.in_negative_part():
            raise StructuralViolation(f"correction {c} at {v} violates the triangularity condition for {u}")
    return coeffs.realize(frame), coeffs


# -- closed forms and memberships -----------------------------------------------------------------


def sn_closed_form(n: int, frame: FrameLike = 1) -> TorusElement:
    """Right-hand side of the closed expression of ``S_n(X_delta)`` in the cluster variables, n >= 1."""
    if n < 1:
        raise ValueError("closed form is stated for n >= 1")
    x = lambda j: cluster_var(j, frame)  # noqa: E731
    qq = qpow(-1) + qpow(1)
    out = (x(n + 2) ** parity_bracket(n) * x(0) * x(0)).shift(-2 * n)
    out = out - (x(n + 1) ** parity_bracket(n + 1) * x(1)).shift(-2 * (n + 2))
    tail = ZERO_T
    for k in range(1, n // 2 + 2):
        tail = tail + x(n + 3 - 2 * k) ** parity_bracket(n + 1)
    out = out - tail.scale(qq).shift(-2 * (n + 1))
    for k in range(1, n // 2 + 1):
        out = out - chebyshev("S", n - 2 * k, frame).scale(qq * qq * k).shift(-4 * k)
    return out


def product_membership(part: int, a: int, b: int) -> tuple[bool, EExpansion, Index] | None:
    """Check one of the six crystal-lattice memberships for products of ``E_(a,b)``
    with ``X_0``, ``X_3``, ``X_1``, ``X_4``.

    Returns ``(holds, expansion, bound)`` or None when ``(a, b)`` is outside the
    part's hypothesis.
    """
    e = standard_monomial(a, b, 1)
    x = lambda j: cluster_var(j, 1)  # noqa: E731
    if part == 1:
        expr, bound = (e * x(0)).shift(a) - standard_monomial(a, b - 1), (a + 1, b - 1)
    elif part == 2:
        expr, bound = (x(3) * e).shift(b) - standard_monomial(a - 1, b), (a - 1, b + 4)
    elif part == 3:
        expr, bound = (e * x(1)).shift(b) - standard_monomial(a + 1, b), (a + 1, b + 4)
    elif part == 4:
        if not b > 0:
            return None
        expr, bound = (x(4) * e).shift(-a) - standard_monomial(a, b - 1), (a - 1, b - 1)
    elif part == 5:
        if not (a > 0 and b <= 0):
            return None
        expr, bound = (x(4) * e).shift(-(a - b)) - standard_monomial(a - 1, b - 1), (a - 1, b + 3)
    elif part == 6:
        if not (a <= 0 and b <= 0):
            return None
        expr, bound = (x(4) * e).shift(-(a - b)) - standard_monomial(a - 1, b - 1), (a, b)
    else:
        raise ValueError(f"part must be 1..6, got {part}")
    exp = expand_in_standard(expr, 1)
    return exp.in_negative_lattice() and exp.supported_below(bound), exp, bound


# -- verification ---------------------------------------------------------------------------------


def _entry(check: str, ok: bool, m: int = 0, n: int = 0, diff: TorusElement = ZERO_T, note: str = "") -> ReportEntry:
    return ReportEntry(check, m, n, 1, "pass" if ok else "fail", diff, note)


@dataclass(frozen=True)
class Section4Window:
    """Instance ranges for :func:`verify_section4`.

    ``box`` bounds ``|a|, |b|`` for the membership, bar-defect, tie-order and
    shift checks; ``sn_max`` bounds n in ``C_(-n,-2n) = S_n``; the lattice
    check covers ``a1 alpha(n) + a2 alpha(n+1)`` for n in ``lattice_n`` and
    ``0 <= a1, a2 <= lattice_max``.
    """

    box: int = 4
    sn_max: int = 6
    closed_form_max: int = 8
    lattice_n: tuple[int, int] = (-3, 5)
    lattice_max: int = 3

    def box_indices(self) -> list[Index]:
        r = range(-self.box, self.box + 1)
        return [(a, b) for a in r for b in r]


def verify_section4(window: Section4Window | None = None) -> Report:
    """Instance checks of the triangular-basis statements; failures are report entries."""
    w = window or Section4Window()
    report = Report()

    for n in range(0, w.sn_max + 1):
        c, _ = lusztig_C(-n, -2 * n)
        diff = c - chebyshev("S", n, 1)
        report.add(_entry("C=S_n", not diff, n=n, diff=diff, note=f"C({-n},{-2 * n})"))

    for n in range(w.lattice_n[0], w.lattice_n[1] + 1):
        an, an1 = alpha(n), alpha(n + 1)
        for a1 in range(w.lattice_max + 1):
            for a2 in range(w.lattice_max + 1):
                u = (a1 * an[0] + a2 * an1[0], a1 * an[1] + a2 * an1[1])
                c, _ = lusztig_C(*u)
                mono = (cluster_var(n, 1) ** a1 * cluster_var(n + 1, 1) ** a2).shift(-a1 * a2)
                diff = c - mono
                report.add(_entry("C=cluster-monomial", not diff, m=n, n=10 * a1 + a2, diff=diff,
                                  note=f"a1={a1},a2={a2},u={u}"))

    for n in range(1, w.closed_form_max + 1):
        diff = chebyshev("S", n, 1) - sn_closed_form(n, 1)
        report.add(_entry("S_n-closed-form", not diff, n=n, diff=diff))

    for a, b in w.box_indices():
        note = f"({a},{b})"
        e_prime, mu = aux_monomials(a, b, 1)
        d1 = expand_in_standard(e_prime - standard_monomial(*phi(a, b)))
        d2 = expand_in_standard(mu - standard_monomial(*psi(a, b)))
        report.add(_entry("E'-E_phi", d1.in_negative_lattice(), m=a, n=b, note=note))
        report.add(_entry("muE-E_psi", d2.in_negative_lattice(), m=a, n=b, note=note))
        report.add(_entry("bar-defect-below", bar_defect((a, b)).supported_below((a, b), strict=True),
                          m=a, n=b, note=note))
        for part in range(1, 7):
            res = product_membership(part, a, b)
            if res is not None:
                report.add(_entry(f"membership-{part}", res[0], m=a, n=b, note=note))

        c, exp = lusztig_C(a, b)
        c_rev, exp_rev = lusztig_C(a, b, tie_break="revlex")
        report.add(_entry("tie-order", exp == exp_rev and c == c_rev, m=a, n=b, note=note))
        up = exp.realize(-1)  # image under X_m -> X_{m+2}, read in frame 1
        c_up, _ = lusztig_C(*psi_phi(a, b))
        report.add(_entry("shift+2", not (up - c_up), m=a, n=b, diff=up - c_up, note=note))
        down = exp.realize(3)  # image under X_m -> X_{m-2}
        c_down, _ = lusztig_C(*phi_psi(a, b))
        report.add(_entry("shift-2", not (down - c_down), m=a, n=b, diff=down - c_down, note=note))
    return report
