"""Closed forms for products of cluster variables and ``F_n(X_delta)``, and an
exact verifier that compares them with direct torus products.

Cases (operand order on the left is literal, the algebra is noncommutative):

``1a``  ``X_m F_n``          m even
``1b``  ``X_m F_n``          m odd
``2``   ``X_m X_{m+2n}``     m even
``3a``  ``X_{m-n} X_m``      m even, n odd
``3b``  ``X_{m+n} X_m``      m even, n odd
``4``   ``X_m X_{m+2n}``     m odd
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .bases import ClusterMonomial, F, FormalCombination, Label, basis_element, realize
from .cluster import FrameLike, as_frame, chebyshev, cluster_var, parity_bracket
from .qcoeff import ZERO, QLaurent, qpow
from .torus import TorusElement

__all__ = [
    "TheoremCase",
    "parity_bracket",
    "coef_ab",
    "coef_c",
    "inner_sum_p",
    "equation7_sides",
    "theorem2_rhs",
    "theorem2_lhs",
    "admissible",
    "ReportEntry",
    "Report",
    "verify_theorem2",
    "realize",
]


class TheoremCase(str, Enum):
    C1A = "1a"
    C1B = "1b"
    C2 = "2"
    C3A = "3a"
    C3B = "3b"
    C4 = "4"

    @classmethod
    def parse(cls, tag) -> TheoremCase:
        if isinstance(tag, TheoremCase):
            return tag
        try:
            return cls(str(tag))
        except ValueError:
            raise ValueError(f"unknown case {tag!r}; expected one of {[c.value for c in cls]}") from None


ALL_CASES = tuple(TheoremCase)


def admissible(case: TheoremCase, m: int, n: int) -> bool:
    """Parity hypotheses of each case; n must be positive."""
    case = TheoremCase.parse(case)
    if n < 1:
        return False
    if case in (TheoremCase.C1B, TheoremCase.C4):
        return m % 2 == 1
    if case in (TheoremCase.C3A, TheoremCase.C3B):
        return m % 2 == 0 and n % 2 == 1
    return m % 2 == 0


# -- coefficients ---------------------------------------------------------------------


def coef_ab(j: int) -> tuple[int, int]:
    """``(j(j-1)/2, j(j-1)/2 + ceil(j/2))``."""
    if j < 1:
        raise ValueError(f"coefficient index must be positive, got {j}")
    tri = j * (j - 1) // 2
    return tri, tri + (j + 1) // 2


def coef_c(n: int, k: int) -> QLaurent:
    """Coefficient of ``F_{2n-2k}`` in ``X_m X_{m+2n}`` for odd m; ``1 <= k <= n``."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    acc: dict[int, int] = {}

    def add(half_exp: int, c: int):
        acc[half_exp] = acc.get(half_exp, 0) + c

    for i in range(1, k + 1):
        a_i, _ = coef_ab(i)
        add(2 * (-2 * (n - i) - 1), a_i)
        add(2 * (4 * k - 2 * (n + i) + 1), a_i)
    for i in range(1, k):
        _, b_i = coef_ab(i)
        add(2 * (-2 * (n - i)), b_i)
        add(2 * (4 * k - 2 * (n + i)), b_i)
    add(2 * (-2 * (n - k)), coef_ab(k)[1])
    return QLaurent(acc)


def inner_sum_p(n: int) -> QLaurent:
    """``sum_{k=1}^{n-1} sum_{l=1}^{4 min(k,n-k)} (q^{l-4} + q^{l-3} + q^{l-2} + q^{l-1})``."""
    acc: dict[int, int] = {}
    for k in range(1, n):
        for l in range(1, 4 * min(k, n - k) + 1):
            for s in (4, 3, 2, 1):
                acc[2 * (l - s)] = acc.get(2 * (l - s), 0) + 1
    return QLaurent(acc)


def equation7_sides(n: int) -> tuple[QLaurent, QLaurent]:
    """``(q^{2n-4} + q^{2n} + inner_sum_p(n) + c_{n+1,n-1}, c_{n+1,n+1})``.

    The two sides agree for even ``n >= 2``, the parity for which the constant
    term of ``X_1 X_{3+2n}`` takes this form.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    lhs = qpow(4 * n - 8) + qpow(4 * n) + inner_sum_p(n) + coef_c(n + 1, n - 1)
    return lhs, coef_c(n + 1, n + 1)


def _geometric(first: int, count: int, step: int = 2) -> QLaurent:
    """``sum_{i<count} q^{(first + i*step)/2}``."""
    return QLaurent({first + i * step: 1 for i in range(count)})


# -- right-hand sides -------------------------------------------------------------------


def _var_power(j: int, e: int) -> Label:
    return ClusterMonomial.make(j, e, 0)


def theorem2_rhs(case, m: int, n: int, *, case3_bound: str = "n-2k") -> FormalCombination:
    """Closed-form right-hand side as a combination of basis labels.

    ``case3_bound`` selects the upper limit of the inner sum in cases 3a/3b:
    ``"n-2k"`` (the normative form) or ``"n-4k"`` (the alternative, kept so the
    two can be compared by brute force).

    >>> print(theorem2_rhs("2", 2, 2))
    q*X[4]^2 + q^(-1/2)*F[1]
    """
    case = TheoremCase.parse(case)
    if not admissible(case, m, n):
        raise ValueError(f"case {case.value} does not admit m={m}, n={n}")
    terms: list[tuple[Label, QLaurent]] = []

    if case is TheoremCase.C1A:
        terms.append((_var_power(m - 2 * n, 1), qpow(-n)))
        terms.append((_var_power(m + 2 * n, 1), qpow(n)))

    elif case is TheoremCase.C1B:
        terms.append((_var_power(m - n, parity_bracket(m - n)), qpow(-2 * n)))
        terms.append((_var_power(m + n, parity_bracket(m + n)), qpow(2 * n)))
        for k in range(1, n // 2 + 1):
            inner = ZERO
            for l in range(1, k + 1):
                inner += qpow(-(4 * l - 1)) + qpow(-(4 * l - 3)) + qpow(4 * l - 3) + qpow(4 * l - 1)
            terms.append((F(n - 2 * k), inner))

    elif case is TheoremCase.C2:
        terms.append((_var_power(m + n, parity_bracket(m + n)), qpow(n)))
        for k in range(1, (n + 1) // 2 + 1):
            # sum_{l=1}^{2k-1} q^{-(n+1)/2 + l}
            terms.append((F(n - 2 * k + 1), _geometric(-(n + 1) + 2, 2 * k - 1)))

    elif case in (TheoremCase.C3A, TheoremCase.C3B):
        sign = -1 if case is TheoremCase.C3A else 1
        for k in range(1, (n + 1) // 2):
            if case3_bound == "n-2k":
                top = min(4 * k, n - 2 * k)
            elif case3_bound == "n-4k":
                top = min(4 * k, n - 4 * k)
            else:
                raise ValueError(f"unknown case3_bound {case3_bound!r}")
            if top < 1:
                continue
            if case is TheoremCase.C3A:
                # q^{-1/2 - k + l}
                coef = _geometric(-1 - 2 * k + 2, top)
            else:
                # q^{1/2 + k - l}
                coef = _geometric(1 + 2 * k - 2 * top, top)
            terms.append((_var_power(m + sign * 4 * k, 1), coef))
        if n % 3 == 0:
            terms.append((_var_power(m + sign * (2 * n // 3), 3), qpow(-sign * n)))
        else:
            j = (3 * m + sign * 2 * n) // 3  # floor of m -+ 2n/3
            # q^r X_j X_{j+1} = q^{r + 1/2} (q^{-1/2} X_j X_{j+1})
            r = n - 1 if case is TheoremCase.C3A else -(n + 1)
            terms.append((ClusterMonomial(j, 1, 1), qpow(r + 1)))

    elif case is TheoremCase.C4:
        terms.append((_var_power(m + n, 2 * parity_bracket(m + n)), qpow(4 * n)))
        for k in range(1, n):
            terms.append((_var_power(m + 2 * n - 2 * k, 1), _geometric(-1 + 2, 4 * min(k, n - k))))
        for k in range(1, n + 1):
            terms.append((F(2 * n - 2 * k), coef_c(n, k)))

    return FormalCombination(terms)


def theorem2_lhs(case, m: int, n: int, frame: FrameLike = 1) -> TorusElement:
    """Direct torus product of the left-hand side, in the literal operand order."""
    case = TheoremCase.parse(case)
    x = lambda j: cluster_var(j, frame)  # noqa: E731
    if case in (TheoremCase.C1A, TheoremCase.C1B):
        return x(m) * chebyshev("F", n, frame)
    if case in (TheoremCase.C2, TheoremCase.C4):
        return x(m) * x(m + 2 * n)
    if case is TheoremCase.C3A:
        return x(m - n) * x(m)
    return x(m + n) * x(m)


# -- reports ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ReportEntry:
    case: str
    m: int
    n: int
    frame: int
    status: str
    diff: TorusElement = field(default_factory=TorusElement)
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def first_difference(self):
        """``((a, b), coefficient)`` of the lex-first differing term, or None."""
        if not self.diff:
            return None
        key, coef = next(iter(self.diff.items()))
        return key, coef

    def to_json(self) -> dict:
        out = {
            "case": self.case,
            "m": self.m,
            "n": self.n,
            "frame": self.frame,
            "status": self.status,
            "diff": self.diff.to_json(),
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    entries: list[ReportEntry] = field(default_factory=list)

    def add(self, entry: ReportEntry) -> None:
        self.entries.append(entry)

    def extend(self, other: Report) -> None:
        self.entries.extend(other.entries)

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[ReportEntry]:
        return [e for e in self.entries if not e.passed]

    def __len__(self):
        return len(self.entries)

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in sorted(self.entries, key=_entry_key)]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    def summary(self) -> str:
        bad = self.failures()
        return f"{len(self.entries) - len(bad)}/{len(self.entries)} passed"


def _entry_key(e: ReportEntry):
    return (e.case, e.m, e.n, e.frame, e.note)


def compare(lhs: TorusElement, rhs: TorusElement, *, case: str, m: int, n: int, frame: int, note: str = "") -> ReportEntry:
    diff = lhs - rhs
    return ReportEntry(case, m, n, frame, "pass" if not diff else "fail", diff, note)


def perturb(x: TorusElement, delta: int = 1) -> TorusElement:
    """Add ``delta`` to the constant part of the lex-first coefficient (negative control)."""
    if not x:
        return TorusElement.scalar(delta)
    key, coef = next(iter(x.items()))
    return x + TorusElement({key: QLaurent({0: delta})})


def verify_theorem2(
    m_range: Iterable[int],
    n_range: Iterable[int],
    frames: Sequence[FrameLike] = (1, 2),
    cases: Iterable = ALL_CASES,
    *,
    perturbation: int = 0,
    case3_bound: str = "n-2k",
) -> Report:
    """Compare every admissible closed form with the direct product, exactly.

    A nonzero ``perturbation`` is added to one coefficient of every right-hand
    side before comparing, which must make every instance fail.
    """
    cases = [TheoremCase.parse(c) for c in cases]
    m_values = list(m_range)
    n_values = list(n_range)
    report = Report()
    for frame in frames:
        s = as_frame(frame).s
        for case in cases:
            for m in m_values:
                for n in n_values:
                    if not admissible(case, m, n):
                        continue
                    lhs = theorem2_lhs(case, m, n, frame)
                    rhs = realize(theorem2_rhs(case, m, n, case3_bound=case3_bound), frame)
                    if perturbation:
                        rhs = perturb(rhs, perturbation)
                    report.add(compare(lhs, rhs, case=case.value, m=m, n=n, frame=s))
    return report


def rhs_structure_constants_positive(case, m: int, n: int) -> bool:
    """Every coefficient of the closed form lies in N[q^{+-1/2}]."""
    return theorem2_rhs(case, m, n).is_positive()


__all__ += ["compare", "perturb", "rhs_structure_constants_positive", "basis_element", "ALL_CASES"]
