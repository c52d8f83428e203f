import json

import pytest
from hypothesis import given

from qcluster.qcoeff import (
    QLaurent,
    kronecker_pack,
    kronecker_unpack,
    kronecker_width,
    ql_add,
    ql_at_one,
    ql_bar,
    ql_is_positive,
    ql_mul,
    qpow,
)
from strategies import positive_qlaurents, qlaurents

ZERO = QLaurent()
ONE = QLaurent({0: 1})
SYM = QLaurent({-1: 1, 1: 1})
FIVE_TERM = QLaurent({-4: 1, -2: 1, 0: 2, 2: 1, 4: 1})


def test_add_examples():
    assert ql_add(SYM, ZERO) == SYM
    assert ql_add(qpow(-1), qpow(1)) == SYM
    assert ql_add(qpow(2), qpow(2, -1)) == ZERO
    assert len(ql_add(qpow(2), qpow(2, -1))) == 0


def test_mul_examples():
    assert ql_mul(SYM, SYM) == QLaurent({-2: 1, 0: 2, 2: 1})
    assert ql_mul(qpow(1), qpow(-1)) == ONE
    q_plus_inv = QLaurent({-2: 1, 2: 1})
    assert ql_mul(q_plus_inv, q_plus_inv) == QLaurent({-4: 1, 0: 2, 4: 1})


def test_bar_examples():
    assert ql_bar(qpow(3)) == qpow(-3)
    assert ql_bar(SYM) == SYM
    assert ql_bar(QLaurent({0: 5})) == QLaurent({0: 5})


def test_positivity_examples():
    assert ql_is_positive(FIVE_TERM)
    assert not ql_is_positive(QLaurent({2: 1, 0: -1}))
    assert ql_is_positive(ZERO)


def test_at_one_examples():
    assert ql_at_one(SYM) == 2
    assert ql_at_one(FIVE_TERM) == 6
    assert ql_at_one(ZERO) == 0


def test_no_zero_coefficients_stored():
    f = QLaurent({0: 0, 1: 3, 2: 0})
    assert f.terms == {1: 3}


def test_text_and_json_forms():
    assert SYM.to_text() == "q^(-1/2) + q^(1/2)"
    assert json.dumps(SYM.to_json()) == '[{"e": -1, "c": "1"}, {"e": 1, "c": "1"}]'
    assert QLaurent.from_json(SYM.to_json()) == SYM
    assert QLaurent.parse(FIVE_TERM.to_text()) == FIVE_TERM


def test_big_coefficients_are_exact():
    big = QLaurent({0: 2**200 + 1, 3: -(3**150)})
    sq = big * big
    assert sq.coefficient(0) == (2**200 + 1) ** 2
    assert sq.coefficient(6) == 3**300
    assert QLaurent.from_json(json.loads(json.dumps(sq.to_json()))) == sq


def _dict_product(f: QLaurent, g: QLaurent) -> QLaurent:
    acc: dict[int, int] = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
    return QLaurent(acc)


@given(qlaurents(20, 40, 10**6), qlaurents(20, 40, 10**6))
def test_product_matches_convolution(f, g):
    assert f * g == _dict_product(f, g)


@given(qlaurents(12, 30, 10**30).filter(bool))
def test_kronecker_round_trip(f):
    width = kronecker_width(f.l1_norm() + 1)
    base, val = kronecker_pack(f, width)
    assert kronecker_unpack(val, width, base) == f


@given(qlaurents())
def test_bar_is_involution(f):
    assert f.bar().bar() == f


@given(qlaurents(), qlaurents())
def test_bar_is_ring_morphism(f, g):
    assert (f * g).bar() == f.bar() * g.bar()
    assert (f + g).bar() == f.bar() + g.bar()


@given(positive_qlaurents(), positive_qlaurents())
def test_positivity_closed(f, g):
    assert (f + g).is_positive()
    assert (f * g).is_positive()


@given(qlaurents(), qlaurents())
def test_at_one_is_ring_morphism(f, g):
    assert (f * g).at_one() == f.at_one() * g.at_one()
    assert (f + g).at_one() == f.at_one() + g.at_one()


@given(qlaurents())
def test_text_round_trip(f):
    assert QLaurent.parse(f.to_text()) == f


def test_negative_power_only_for_units():
    assert qpow(3) ** -1 == qpow(-3)
    with pytest.raises((ValueError, ZeroDivisionError)):
        SYM ** -1


def test_zero_has_no_exponents():
    with pytest.raises(ValueError):
        ZERO.min_exponent()
