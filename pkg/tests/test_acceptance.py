"""Acceptance suite: one PASS/FAIL line per criterion, written straight to the terminal.

Run with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""
import random
import sys
import time

import pytest

from qcluster.bases import (
    ClusterMonomial,
    D,
    F,
    FormalCombination,
    One,
    S,
    expand_in_basis,
    realize,
)
from qcluster.cluster import cluster_var
from qcluster.expr import evaluate
from qcluster.fixtures import PRODUCT_FIXTURES, TORUS_FIXTURES
from qcluster.multiplication import coef_c, equation7_sides, verify_theorem2
from qcluster.qcoeff import QLaurent, qpow
from qcluster.triangular import verify_section4
from qcluster.verify import (
    IdentityWindow,
    verify_bar_antiautomorphism,
    verify_identities,
    verify_positivity,
    verify_product_positivity,
    verify_specialization,
    verify_unitriangular,
)

_capsys_ref = {}


@pytest.fixture(autouse=True)
def _terminal(capsys):
    _capsys_ref["c"] = capsys
    yield
    _capsys_ref.pop("c", None)


def _line(k: int, ok: bool, detail: str) -> None:
    text = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    cap = _capsys_ref.get("c")
    if cap is None:
        print(text)
    else:
        with cap.disabled():
            print("\n" + text)
    assert ok, text


def _first_failure(report) -> str:
    bad = report.failures()
    if not bad:
        return ""
    e = bad[0]
    first = e.first_difference()
    where = f" first difference {first[1].to_text()} at {first[0]}" if first else ""
    return f"; first failure {e.case} m={e.m} n={e.n} frame={e.frame} {e.note}{where}"


def test_criterion_1_theorem_wide():
    t = time.perf_counter()
    report = verify_theorem2(range(-6, 9), range(1, 9), (1, 2))
    elapsed = time.perf_counter() - t
    ok = report.ok and len(report) > 0 and elapsed < 120
    _line(1, ok, f"closed forms vs direct products {report.summary()} in {elapsed:.1f}s (budget 120s)"
          + _first_failure(report))


def test_criterion_2_fixtures():
    bad = [fx.name for fx in TORUS_FIXTURES if fx.computed() != fx.expected()]
    bad += [pf.name for pf in PRODUCT_FIXTURES if pf.difference(1)]
    x1x5 = expand_in_basis(evaluate("X[1]*X[5]"), "B", 1)
    if x1x5.coefficient(One()) != QLaurent.parse("q^-2 + q^-1 + 2 + q + q^2"):
        bad.append("X1X5 constant term")
    total = len(TORUS_FIXTURES) + len(PRODUCT_FIXTURES) + 1
    _line(2, not bad, f"{total - len(bad)}/{total} fixtures bit-exact" + (f"; mismatched {bad}" if bad else ""))


def test_criterion_3_coefficients():
    problems = []
    if coef_c(2, 1) != qpow(-4):
        problems.append("c_{2,1}")
    if coef_c(2, 2) != QLaurent.parse("q^-2 + q^-1 + 2 + q + q^2"):
        problems.append("c_{2,2}")
    # the recursion for c_{n+1,n+1} is stated for even n; every n is confirmed by brute force below
    for n in range(2, 9, 2):
        lhs, rhs = equation7_sides(n)
        if lhs != rhs:
            problems.append(f"recursion n={n}")
    for n in range(2, 9):
        comb = expand_in_basis(cluster_var(1) * cluster_var(3 + 2 * n), "B", 1, search=20)
        if comb.coefficient(One()) != coef_c(n + 1, n + 1):
            problems.append(f"brute-force c_{{{n + 1},{n + 1}}}")
    _line(3, not problems, "c_{2,1}, c_{2,2}, recursion at even n in [2,8], "
          "c_{n+1,n+1} = constant term of X_1 X_{3+2n} for n in [2,8]" + (f"; failed {problems}" if problems else ""))


def _random_combination(rng: random.Random, family: str) -> FormalCombination:
    imaginary = {"B": F, "S": S, "D": D}[family]
    out = {}
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.25:
            label = imaginary(rng.randint(1, 3))
        else:
            a = rng.randint(0, 2)
            label = ClusterMonomial.make(rng.randint(-3, 4), a, rng.randint(0, 2 - a))
        coef = QLaurent({rng.randint(-3, 3): rng.randint(-3, 3) for _ in range(rng.randint(1, 2))})
        if coef:
            out[label] = coef
    return FormalCombination(out)


def test_criterion_4_bases():
    positivity = verify_positivity()
    rng = random.Random(4)
    trips = bad_trips = 0
    for i in range(200):
        family, frame = ("B", "S", "D")[i % 3], 1 + (i // 3) % 2
        c = _random_combination(rng, family)
        trips += 1
        if expand_in_basis(realize(c, frame), family, frame) != c:
            bad_trips += 1
    unipotent = verify_unitriangular(8)
    ok = positivity.ok and bad_trips == 0 and unipotent.ok
    _line(4, ok, f"bar-invariant and positive labels {positivity.summary()}; round trips {trips - bad_trips}/{trips}; "
          f"unipotent changes of basis {unipotent.summary()}" + _first_failure(positivity) + _first_failure(unipotent))


def test_criterion_5_product_positivity():
    t = time.perf_counter()
    report = verify_product_positivity()
    elapsed = time.perf_counter() - t
    detail = f"B-expansions of label products with coefficients in N[q^(+-1/2)] {report.summary()} in {elapsed:.0f}s"
    bad = report.failures()
    _line(5, report.ok and len(report) > 0, detail + (f"; first failure {bad[0].note[:160]}" if bad else ""))


def test_criterion_6_triangular():
    report = verify_section4()
    _line(6, report.ok and len(report) > 0, f"triangular-basis instances {report.summary()}" + _first_failure(report))


def test_criterion_7_structure():
    identities = verify_identities(IdentityWindow())
    bar = verify_bar_antiautomorphism(500)
    kinds = {e.case for e in identities.entries}
    needed = {"exchange", "q-commute", "frame-shift", "F-product", "F-square"}
    ok = identities.ok and bar.ok and needed <= kinds and len(bar) == 500
    _line(7, ok, f"identities {identities.summary()}; bar anti-automorphism {bar.summary()}"
          + _first_failure(identities) + _first_failure(bar))


def test_criterion_8_negative_controls():
    problems = []
    for delta in (1, -1, 3):
        theorem = verify_theorem2(range(-2, 4), range(1, 5), (1, 2), perturbation=delta)
        identities = verify_identities(IdentityWindow(commute=(-2, 3), exchange=(-2, 3), shift=(-2, 3),
                                                      ladder=(-1, 2), cheb_max=3), perturbation=delta)
        torus = theorem.entries + [e for e in identities.entries if e.case != "q=1-exchange"]
        for e in torus:
            first = e.first_difference()
            if e.passed or first is None or abs(first[1].at_one()) != abs(delta):
                problems.append(f"{e.case} m={e.m} n={e.n} frame={e.frame} perturbation {delta}")
    _line(8, not problems and bool(torus), f"every perturbed comparison fails and names its differing term "
          f"(perturbations +1, -1, +3)" + (f"; undetected {problems[:3]}" if problems else ""))


def test_criterion_9_specialization():
    report = verify_specialization(range(-7, 10), (1, 2))
    _line(9, report.ok and len(report) > 0, f"q=1 exchange relations of A(1,4) {report.summary()}"
          + _first_failure(report))


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
