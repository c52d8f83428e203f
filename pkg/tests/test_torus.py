import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcluster.cluster import cluster_var, x_delta
from qcluster.fixtures import TORUS_FIXTURES
from qcluster.qcoeff import QLaurent, qpow
from qcluster.torus import TorusElement, t_add, t_bar, t_is_positive, t_min_terms, t_monomial, t_mul
from strategies import torus_elements

ONE = QLaurent({0: 1})


def fixture(name: str) -> TorusElement:
    return next(f for f in TORUS_FIXTURES if f.name == name).expected()


def test_monomial_examples():
    assert t_monomial(1, 0, 1).terms == {(1, 0): ONE}
    assert t_monomial(0, -1, 1).support() == [(0, -1)]
    assert t_monomial(0, 0, qpow(1)) == TorusElement.scalar(qpow(1))


def test_mul_examples():
    assert t_mul(t_monomial(1, 0), t_monomial(0, 1)) == t_monomial(1, 1, qpow(1))
    assert t_mul(t_monomial(0, 1), t_monomial(1, 0)) == t_monomial(1, 1, qpow(-1))
    assert t_mul(t_monomial(2, -3), t_monomial(-2, 3)) == TorusElement.scalar(1)


def test_generators_q_commute():
    x1, x2 = t_monomial(1, 0), t_monomial(0, 1)
    assert x1 * x2 == (x2 * x1).shift(2)


def test_add_examples():
    assert t_add(t_monomial(1, -1), t_monomial(0, -1)) == cluster_var(0, 1)
    x = t_monomial(2, 1, 3)
    assert t_add(x, TorusElement()) == x
    assert not t_add(t_monomial(1, 0), t_monomial(1, 0, -1))


def test_bar_examples():
    assert t_bar(t_monomial(1, 1, qpow(1))) == t_monomial(1, 1, qpow(-1))
    assert t_bar(x_delta(1)) == x_delta(1)
    assert t_bar(TorusElement()) == TorusElement()


def test_min_terms_examples():
    assert t_min_terms(fixture("X3")) == [(-1, 0)]
    assert t_min_terms(fixture("delta")) == [(-1, -2)]
    assert sorted(t_min_terms(t_monomial(1, 0) + t_monomial(0, 1))) == [(0, 1), (1, 0)]
    with pytest.raises(ValueError):
        t_min_terms(TorusElement())


def test_positivity_examples():
    assert t_is_positive(fixture("delta"))
    assert not t_is_positive(t_monomial(1, 0) - t_monomial(0, 1))
    assert t_is_positive(fixture("F2"))


def test_text_and_json_forms():
    x3 = fixture("X3")
    assert x3.to_text() == "(-1,0) + (-1,4)"
    assert TorusElement.parse("(-1,4) + (-1,0)") == x3
    data = json.loads(json.dumps(x3.to_json()))
    assert data == {"terms": [{"a": -1, "b": 0, "coef": [{"e": 0, "c": "1"}]}, {"a": -1, "b": 4, "coef": [{"e": 0, "c": "1"}]}]}
    assert TorusElement.from_json(data) == x3


def test_inverse_only_for_monomials():
    m = t_monomial(3, -2, qpow(5, -1))
    assert m * m.inverse() == TorusElement.scalar(1)
    with pytest.raises(ValueError):
        fixture("X3").inverse()


@given(torus_elements(), torus_elements(), torus_elements())
def test_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(torus_elements(), torus_elements(), torus_elements())
def test_distributive(x, y, z):
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z


@given(torus_elements(), torus_elements())
def test_bar_anti_automorphism(x, y):
    assert (x * y).bar() == y.bar() * x.bar()
    assert x.bar().bar() == x


@given(*[st.integers(-6, 6) for _ in range(4)])
def test_triple_monomial_product_is_scalar(a, b, c, d):
    p = t_monomial(a, b) * t_monomial(c, d) * t_monomial(-a - c, -b - d)
    assert p.support() == [(0, 0)] and p.coefficient(0, 0).is_monomial()


def _commutative(f: dict, g: dict) -> dict:
    out: dict = {}
    for (a, b), c in f.items():
        for (e, d), k in g.items():
            key = (a + e, b + d)
            out[key] = out.get(key, 0) + c * k
    return {k: v for k, v in out.items() if v}


@given(torus_elements(), torus_elements())
def test_specialization_is_commutative_product(x, y):
    assert (x * y).at_one() == _commutative(x.at_one(), y.at_one())


@given(torus_elements())
def test_text_round_trip(x):
    assert TorusElement.parse(x.to_text()) == x


def _direct(x: TorusElement, y: TorusElement) -> TorusElement:
    out = TorusElement()
    for (a, b), c in x.items():
        for (e, d), k in y.items():
            out = out + TorusElement({(a + e, b + d): (c * k).shift(a * d - b * e)})
    return out


def test_large_products_match_naive_rule():
    x, y = cluster_var(-4, 1), cluster_var(7, 1)
    assert x * y == _direct(x, y)
