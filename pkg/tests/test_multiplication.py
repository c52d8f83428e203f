import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcluster.bases import F, ClusterMonomial, One, basis_element, expand_in_basis, realize
from qcluster.cluster import cluster_var
from qcluster.multiplication import (
    ALL_CASES,
    TheoremCase,
    admissible,
    coef_ab,
    coef_c,
    equation7_sides,
    inner_sum_p,
    parity_bracket,
    perturb,
    rhs_structure_constants_positive,
    theorem2_lhs,
    theorem2_rhs,
    verify_theorem2,
)
from qcluster.qcoeff import QLaurent

P = QLaurent.parse


def test_parity_bracket():
    assert [parity_bracket(n) for n in (-2, -1, 0, 1, 2, 3)] == [2, 1, 2, 1, 2, 1]


def test_coef_ab_examples():
    assert coef_ab(1) == (0, 1)
    assert coef_ab(2) == (1, 2)
    assert coef_ab(4) == (6, 8)
    with pytest.raises(ValueError):
        coef_ab(0)


def test_coef_c_examples():
    assert coef_c(2, 1) == P("q^-2")
    assert coef_c(2, 2) == P("q^-2 + q^-1 + 2 + q + q^2")
    assert coef_c(3, 1) == P("q^-4")
    assert coef_c(5, 3) == P("q^-8 + q^-7 + 2*q^-6 + 3*q^-5 + 5*q^-4 + 3*q^-3 + 2*q^-2 + q^-1 + 1")
    for bad in ((2, 0), (2, 3)):
        with pytest.raises(ValueError):
            coef_c(*bad)


def test_coef_c_matches_brute_force_expansion():
    # F_{2n-2k} coefficient of X_1 X_{1+2n} for n = 5, k = 3
    comb = expand_in_basis(cluster_var(1) * cluster_var(11), "B", 1)
    assert comb.coefficient(F(4)) == coef_c(5, 3)


def test_inner_sum_examples():
    assert inner_sum_p(2) == P("q^-3 + 2*q^-2 + 3*q^-1 + 4 + 3*q + 2*q^2 + q^3")
    assert inner_sum_p(4) == P("3*q^-3 + 6*q^-2 + 9*q^-1 + 12 + 10*q + 8*q^2 + 6*q^3 + 4*q^4 + 3*q^5 + 2*q^6 + q^7")


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_equation7_even(n):
    lhs, rhs = equation7_sides(n)
    assert lhs == rhs


@pytest.mark.parametrize("n", [3, 5, 7])
def test_equation7_printed_form_needs_even_n(n):
    lhs, rhs = equation7_sides(n)
    assert lhs != rhs


@pytest.mark.parametrize("n", range(2, 9))
def test_top_coefficient_matches_constant_term_of_product(n):
    # c_{n+1,n+1} is the constant term of X_1 X_{3+2n}
    comb = expand_in_basis(cluster_var(1) * cluster_var(3 + 2 * n), "B", 1, search=20)
    assert comb.coefficient(One()) == coef_c(n + 1, n + 1)


def test_case_parse_and_admissibility():
    assert TheoremCase.parse("3a") is TheoremCase.C3A
    with pytest.raises(ValueError):
        TheoremCase.parse("5")
    assert admissible("1a", 2, 3) and not admissible("1a", 1, 3)
    assert admissible("4", 1, 2) and not admissible("4", 2, 2)
    assert admissible("3b", 4, 3) and not admissible("3b", 4, 2)
    assert not admissible("2", 2, 0)


def test_rhs_examples():
    assert theorem2_rhs("2", 2, 2).to_text() == "q*X[4]^2 + q^(-1/2)*F[1]"
    assert theorem2_rhs("3a", 4, 3).to_text() == "q^(-1/2)*X[0] + q^(3/2)*X[2]^3"
    rhs = theorem2_rhs("4", 1, 2)
    assert rhs.coefficient(ClusterMonomial(3, 2, 0)) == P("q^4")
    assert rhs.coefficient(ClusterMonomial(3, 1, 0)) == P("q^(1/2) + q^(3/2) + q^(5/2) + q^(7/2)")
    assert rhs.coefficient(F(2)) == P("q^-2")
    assert rhs.coefficient(One()) == P("q^-2 + q^-1 + 2 + q + q^2")


def test_case_1b_coefficients_x1_f2():
    rhs = theorem2_rhs("1b", 1, 2)
    assert rhs.coefficient(ClusterMonomial(-1, 1, 0)) == P("q^-2")
    assert rhs.coefficient(ClusterMonomial(3, 1, 0)) == P("q^2")
    assert rhs.coefficient(One()) == P("q^(-3/2) + q^(-1/2) + q^(1/2) + q^(3/2)")


def test_realize_examples():
    assert not realize(theorem2_rhs("2", 2, 2).__class__())
    assert realize(theorem2_rhs("2", 2, 2), 1) == cluster_var(2) * cluster_var(6)


def test_rhs_rejects_inadmissible():
    with pytest.raises(ValueError):
        theorem2_rhs("4", 2, 2)


@pytest.mark.parametrize("case", [c.value for c in ALL_CASES])
def test_theorem_small_window(case):
    report = verify_theorem2(range(-4, 6), range(1, 6), cases=[case])
    assert len(report) > 0
    assert report.ok, [e.to_json() for e in report.failures()][:1]


def test_perturbation_is_detected():
    report = verify_theorem2(range(0, 3), range(1, 3), perturbation=1)
    assert len(report) > 0 and not any(e.passed for e in report.entries)
    first = report.failures()[0].first_difference()
    assert first is not None and first[1] == P("-1")


def test_inadmissible_range_gives_empty_report():
    assert len(verify_theorem2([1, 3], [1, 2], cases=["2", "3a"])) == 0


@pytest.mark.parametrize("n", [2, 3])
def test_case4_sum_must_include_k_equal_n(n):
    # dropping the k = n term (c_{n,n} F_0) breaks the identity
    full = theorem2_rhs("4", 1, n)
    truncated = full - full.__class__({One(): coef_c(n, n)})
    lhs = theorem2_lhs("4", 1, n, 1)
    assert lhs == realize(full, 1)
    assert lhs != realize(truncated, 1)


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11, 13])
def test_case3_alternative_bound_fails(n):
    lhs = theorem2_lhs("3a", 2, n, 1)
    assert lhs == realize(theorem2_rhs("3a", 2, n), 1)
    assert lhs != realize(theorem2_rhs("3a", 2, n, case3_bound="n-4k"), 1)


@given(st.sampled_from([c.value for c in ALL_CASES]), st.integers(-6, 8), st.integers(1, 8))
def test_structure_constants_positive(case, m, n):
    if admissible(case, m, n):
        assert rhs_structure_constants_positive(case, m, n)


@pytest.mark.parametrize("m,n", [(1, n) for n in range(1, 6)] + [(2, n) for n in range(1, 6)])
def test_case1_inner_sums_bar_symmetric(m, n):
    case = "1b" if m % 2 else "1a"
    for label, coef in theorem2_rhs(case, m, n).items():
        if not isinstance(label, ClusterMonomial) or label.a == 0:
            assert coef.bar() == coef


def test_report_json_shape():
    report = verify_theorem2([2], [1], frames=[1])
    data = json.loads(report.dumps())
    assert set(data[0]) == {"case", "m", "n", "frame", "status", "diff"}
    assert data[0]["status"] == "pass" and data[0]["diff"] == {"terms": []}


def test_perturb_changes_one_coefficient():
    x = basis_element(F(1))
    d = perturb(x) - x
    assert len(d) == 1
