"""Instance verifiers for the structural identities and for positivity.

Every check compares two exactly computed torus elements (or coefficient
sets) and records a :class:`ReportEntry`; nothing is sampled numerically.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .bases import (
    DEFAULT_WINDOW,
    FAMILIES,
    Cheb,
    ClusterMonomial,
    ExpansionError,
    Label,
    One,
    Window,
    basis_element,
    expand_in_basis,
    family_labels,
)
from .cluster import FrameLike, as_frame, chebyshev, cluster_var, exchange_rhs, x_delta, x_delta_from_window
from .expr import evaluate
from .fixtures import PRODUCT_FIXTURES, TORUS_FIXTURES
from .multiplication import Report, ReportEntry, perturb
from .qcoeff import QLaurent
from .torus import ONE_T, ZERO_T, TorusElement

__all__ = [
    "IdentityWindow",
    "verify_identities",
    "specialize",
    "commutative_product",
    "verify_specialization",
    "random_torus_element",
    "verify_bar_antiautomorphism",
    "PositivityConfig",
    "verify_positivity",
    "verify_product_positivity",
    "verify_unitriangular",
]


def _compare(check: str, lhs: TorusElement, rhs: TorusElement, *, m: int = 0, n: int = 0, frame: int = 1,
             note: str = "", perturbation: int = 0) -> ReportEntry:
    if perturbation:
        rhs = perturb(rhs, perturbation)
    diff = lhs - rhs
    return ReportEntry(check, m, n, frame, "pass" if not diff else "fail", diff, note)


def _flag(check: str, ok: bool, *, m: int = 0, n: int = 0, frame: int = 1, note: str = "") -> ReportEntry:
    return ReportEntry(check, m, n, frame, "pass" if ok else "fail", ZERO_T, note)


# -- structural identities ---------------------------------------------------------------


@dataclass(frozen=True)
class IdentityWindow:
    """Index ranges (inclusive) for :func:`verify_identities`."""

    commute: tuple[int, int] = (-8, 10)
    exchange: tuple[int, int] = (-7, 9)
    shift: tuple[int, int] = (-8, 10)
    ladder: tuple[int, int] = (-4, 5)
    cheb_max: int = 6
    frames: tuple[int, ...] = (1, 2)


def _span(r: tuple[int, int]) -> range:
    return range(r[0], r[1] + 1)


def verify_identities(window: IdentityWindow | None = None, *, perturbation: int = 0) -> Report:
    """Exchange relations, q-commutation, frame-shift consistency, the even ladder,
    Chebyshev products, the four-window formula for ``X_delta``, bar-invariance,
    the specialization at ``q = 1`` and the reference fixtures.

    A nonzero ``perturbation`` is added to one coefficient of every right-hand
    side; every torus comparison must then fail.
    """
    w = window or IdentityWindow()
    report = Report()
    p = perturbation
    for f in w.frames:
        s = as_frame(f).s
        x = lambda j: cluster_var(j, f)  # noqa: E731
        delta = x_delta(f)
        for k in _span(w.exchange):
            report.add(_compare("exchange", x(k - 1) * x(k + 1), exchange_rhs(k, x(k)), m=k, frame=s, perturbation=p))
        for m in _span(w.commute):
            report.add(_compare("q-commute", x(m) * x(m + 1), (x(m + 1) * x(m)).shift(2), m=m, frame=s, perturbation=p))
        for m in _span(w.shift):
            report.add(_compare("frame-shift", x(m), cluster_var(m + 2, s + 2), m=m, frame=s, perturbation=p))
        report.add(_compare("frame-shift-delta", delta, x_delta(s + 2), frame=s, perturbation=p))
        for n in _span(w.ladder):
            lhs = x(2 * n) * delta
            rhs = x(2 * n - 2).shift(-1) + x(2 * n + 2).shift(1)
            report.add(_compare("ladder", lhs, rhs, m=2 * n, frame=s, perturbation=p))
        for t in _span(w.exchange):
            report.add(_compare("window-delta", x_delta_from_window(t, f), delta, m=t, frame=s, perturbation=p))
        for n in range(1, w.cheb_max + 1):
            fn = chebyshev("F", n, f)
            for m in range(n + 1, w.cheb_max + 1):
                rhs = chebyshev("F", m + n, f) + chebyshev("F", m - n, f)
                report.add(_compare("F-product", fn * chebyshev("F", m, f), rhs, m=m, n=n, frame=s, perturbation=p))
            rhs = chebyshev("F", 2 * n, f) + ONE_T.scale(2)
            report.add(_compare("F-square", fn * fn, rhs, n=n, frame=s, perturbation=p))
        for m in _span(w.commute):
            report.add(_compare("bar-invariant", x(m), x(m).bar(), m=m, frame=s, perturbation=p))
        report.add(_compare("bar-invariant-delta", delta, delta.bar(), frame=s, perturbation=p))
        if s == 1:
            for fx in TORUS_FIXTURES:
                report.add(_compare("fixture", fx.computed(), fx.expected(), frame=s, note=fx.name, perturbation=p))
        for pf in PRODUCT_FIXTURES:
            report.add(_compare("product-fixture", evaluate(pf.lhs, f), evaluate(pf.rhs, f), frame=s, note=pf.name,
                                perturbation=p))
    report.extend(verify_specialization(_span(w.exchange), w.frames))
    return report


# -- specialization at q = 1 ---------------------------------------------------------------


def specialize(x: TorusElement) -> dict[tuple[int, int], int]:
    """``x`` at ``q = 1`` as a commutative Laurent polynomial ``(a, b) -> coefficient``."""
    return x.at_one()


def commutative_product(f: dict, g: dict) -> dict[tuple[int, int], int]:
    """Product of commutative Laurent polynomials in two variables.

    Packs ``x^a y^b`` into ``t^(a W + b - b_min)`` with ``W`` above the
    product's b-span, so one big-integer univariate product does the work.
    """
    if not f or not g:
        return {}
    fb = [b for _, b in f]
    gb = [b for _, b in g]
    lo = min(fb) + min(gb)
    width = max(fb) + max(gb) - lo + 1
    f_lo, g_lo = min(fb), min(gb)
    pf = QLaurent({a * width + b - f_lo: c for (a, b), c in f.items()})
    pg = QLaurent({a * width + b - g_lo: c for (a, b), c in g.items()})
    out = {}
    for e, c in (pf * pg).items():
        a, r = divmod(e, width)
        out[(a, r + lo)] = c
    return out


def _commutative_add_one(f: dict) -> dict:
    out = dict(f)
    out[(0, 0)] = out.get((0, 0), 0) + 1
    return {k: v for k, v in out.items() if v}


def _commutative_exchange_rhs(k: int, xk: dict) -> dict:
    if k % 2:
        return _commutative_add_one(xk)
    sq = commutative_product(xk, xk)
    return _commutative_add_one(commutative_product(sq, sq))


def verify_specialization(ks: Iterable[int], frames: Sequence[FrameLike] = (1, 2)) -> Report:
    """At ``q = 1`` the variables satisfy ``x_{k-1} x_{k+1} = x_k + 1`` (k odd) and ``x_k^4 + 1`` (k even)."""
    report = Report()
    for f in frames:
        s = as_frame(f).s
        for k in ks:
            lhs = commutative_product(specialize(cluster_var(k - 1, f)), specialize(cluster_var(k + 1, f)))
            rhs = _commutative_exchange_rhs(k, specialize(cluster_var(k, f)))
            report.add(_flag("q=1-exchange", lhs == rhs, m=k, frame=s))
    return report


# -- bar anti-automorphism --------------------------------------------------------------


def random_torus_element(rng: random.Random, max_terms: int = 4, box: int = 3, max_e: int = 4) -> TorusElement:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        key = (rng.randint(-box, box), rng.randint(-box, box))
        coef = QLaurent({rng.randint(-max_e, max_e): rng.choice([-2, -1, 1, 2, 3])})
        terms[key] = terms.get(key, QLaurent()) + coef
    return TorusElement(terms)


def verify_bar_antiautomorphism(count: int = 500, seed: int = 0) -> Report:
    """``bar(x y) = bar(y) bar(x)`` on seeded random torus elements."""
    rng = random.Random(seed)
    report = Report()
    for i in range(count):
        x, y = random_torus_element(rng), random_torus_element(rng)
        report.add(_compare("bar-anti", (x * y).bar(), y.bar() * x.bar(), n=i))
    return report


# -- positivity ----------------------------------------------------------------------------


@dataclass(frozen=True)
class PositivityConfig:
    """``direct_budget`` bounds ``(a+b)^3 * max(size of X_m, X_{m+1})`` for cluster
    monomials realized term by term; larger ones are certified from their factors."""

    window: Window = DEFAULT_WINDOW
    frames: tuple[int, ...] = (1, 2)
    families: tuple[str, ...] = FAMILIES
    direct_budget: int = 100_000


def _check_element(x: TorusElement) -> tuple[bool, bool]:
    return x.bar() == x, x.is_positive()


def verify_positivity(config: PositivityConfig | None = None) -> Report:
    """Bar-invariance and positivity of every window label in each frame.

    Cluster monomials above the budget are certified instead of expanded: both
    factors are realized and checked bar-invariant and positive, and
    ``X_m X_{m+1} = q X_{m+1} X_m`` is checked on the realized factors.  The
    normalized product is then bar-invariant, and products of positive
    elements are positive because the torus product only multiplies
    coefficients by powers of ``q^(1/2)``.
    """
    cfg = config or PositivityConfig()
    report = Report()
    for f in cfg.frames:
        s = as_frame(f).s
        imaginary: set[Label] = {One()}
        for fam in cfg.families:
            imaginary |= {lab for lab in family_labels(fam, cfg.window) if not isinstance(lab, ClusterMonomial)}
        for lab in sorted(imaginary, key=lambda lab: lab.sort_key()):
            bi, pos = _check_element(basis_element(lab, f))
            report.add(_flag("label", bi and pos, frame=s, note=f"{lab.to_text()} direct"))
        factor_ok: dict[int, bool] = {}
        for m in range(cfg.window.m_lo, cfg.window.m_hi + 2):
            bi, pos = _check_element(cluster_var(m, f))
            factor_ok[m] = bi and pos
        commute_ok: dict[int, bool] = {}
        for m in range(cfg.window.m_lo, cfg.window.m_hi + 1):
            xm, xm1 = cluster_var(m, f), cluster_var(m + 1, f)
            commute_ok[m] = xm * xm1 == (xm1 * xm).shift(2)
        for m in range(cfg.window.m_lo, cfg.window.m_hi + 1):
            xm, xm1 = cluster_var(m, f), cluster_var(m + 1, f)
            size_m, size_m1 = xm.n_flat_terms(), xm1.n_flat_terms()
            cost = lambda a, b: (a + b) ** 3 * max(size_m, size_m1 if b else 0)  # noqa: E731
            power = ONE_T
            for a in range(1, cfg.window.max_degree + 1):
                power = power * xm if power is not None and cost(a, 0) <= cfg.direct_budget else None
                mono = power
                for b in range(0, cfg.window.max_degree + 1 - a):
                    if b:
                        mono = mono * xm1 if mono is not None and cost(a, b) <= cfg.direct_budget else None
                    label = ClusterMonomial(m, a, b)
                    if mono is not None:
                        bi, pos = _check_element(mono.shift(-a * b))
                        report.add(_flag("label", bi and pos, m=m, n=a + b, frame=s, note=f"{label.to_text()} direct"))
                    else:
                        ok = factor_ok[m] and (not b or (factor_ok[m + 1] and commute_ok[m]))
                        report.add(_flag("label", ok, m=m, n=a + b, frame=s, note=f"{label.to_text()} certified"))
    return report


def _central_frame(l1: Label, l2: Label) -> int:
    # the expansion is frame independent; a frame between the factors keeps
    # the torus expansions of the labels involved small
    ms = [l.m for l in (l1, l2) if isinstance(l, ClusterMonomial)]
    return (min(ms) + max(ms)) // 2 if ms else 1


def verify_product_positivity(
    m_range: tuple[int, int] = (-4, 6), max_degree: int = 3, max_n: int = 4,
    expansion_window: Window = Window(m_lo=-12, m_hi=12, max_degree=12, max_n=12), search: int = 80,
) -> Report:
    """B-expansions of all ordered pairwise products of small B-labels have coefficients in N[q^(+-1/2)].

    Each product is expanded in the frame centred between its factors, with
    ``expansion_window`` shifted to that frame and labels outside it found by
    denominator-vector search up to distance ``search``.
    """
    labels: list[Label] = []
    for m in range(m_range[0], m_range[1] + 1):
        for a in range(1, max_degree + 1):
            for b in range(0, max_degree + 1 - a):
                labels.append(ClusterMonomial(m, a, b))
    labels += [Cheb("F", n) for n in range(1, max_n + 1)]
    report = Report()
    for i, l1 in enumerate(labels):
        for j, l2 in enumerate(labels):
            s = _central_frame(l1, l2)
            w = replace(expansion_window, m_lo=expansion_window.m_lo + s, m_hi=expansion_window.m_hi + s)
            note = f"{l1.to_text()} * {l2.to_text()}"
            try:
                exp = expand_in_basis(basis_element(l1, s) * basis_element(l2, s), "B", s, w, search=search)
            except ExpansionError as err:
                report.add(ReportEntry("product-positive", i, j, s, "fail", err.residue, f"{note}: {err}"))
                continue
            report.add(_flag("product-positive", exp.is_positive(), m=i, n=j, frame=s, note=f"{note} = {exp.to_text()}"))
    return report


def verify_unitriangular(n_max: int = 8, frame: FrameLike = 1) -> Report:
    """Changes of basis among ``X_delta^n``, ``F_n`` and ``S_n`` are unipotent:
    each element of one family is its counterpart in the other plus lower-index terms."""
    from .bases import D, F, S

    makers = {"B": F, "S": S, "D": D}
    report = Report()
    s = as_frame(frame).s
    for src, dst in (("D", "B"), ("B", "D"), ("S", "B"), ("B", "S"), ("D", "S"), ("S", "D")):
        for n in range(1, n_max + 1):
            x = basis_element(makers[src](n), frame)
            exp = expand_in_basis(x, dst, frame)
            lead = makers[dst](n)
            ok = exp.coefficient(lead) == QLaurent({0: 1})
            for lab, c in exp.items():
                if lab == lead:
                    continue
                if isinstance(lab, ClusterMonomial):
                    ok = False
                elif isinstance(lab, One):
                    ok = ok and c.is_monomial() and c.min_exponent() == 0
                else:
                    ok = ok and lab.n < n and c.is_monomial() and c.min_exponent() == 0
            report.add(_flag(f"unipotent-{src}->{dst}", ok, n=n, frame=s, note=exp.to_text()))
    return report

