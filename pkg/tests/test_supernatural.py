from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mvstone.algebra import boolean_algebra, full_product
from mvstone.supernatural import (
    OMEGA,
    Supernatural,
    format_multiset,
    from_natural,
    in_basic_open,
    multiset_of,
    sn_join,
    sn_leq,
    sn_meet,
)

from oracles import divides

exponent = st.one_of(st.integers(0, 3), st.just(OMEGA))
supernaturals = st.builds(lambda a, b, c: Supernatural({2: a, 3: b, 5: c}), exponent, exponent, exponent)


def test_factorization_example():
    assert from_natural(12) == Supernatural({2: 2, 3: 1})
    assert str(from_natural(12)) == "2^2*3"
    assert from_natural(1) == Supernatural()
    with pytest.raises(ValueError):
        from_natural(0)


def test_lattice_examples():
    x = Supernatural.parse("2^w*3")
    y = Supernatural.parse("2^2*3*5")
    assert sn_join(x, y) == Supernatural({2: OMEGA, 3: 1, 5: 1})
    assert str(sn_join(x, y)) == "2^w*3*5"
    assert sn_meet(x, y) == from_natural(12)
    assert sn_leq(x, x)


def test_parse_and_validation():
    assert Supernatural.parse("1") == Supernatural()
    assert Supernatural.parse("2^ω") == Supernatural({2: OMEGA})
    with pytest.raises(ValueError):
        Supernatural({4: 1})
    with pytest.raises(ValueError):
        Supernatural.parse("2*2")
    with pytest.raises(ValueError):
        Supernatural({2: -1})


def test_basic_open_examples():
    assert in_basic_open(from_natural(12), 6)
    for n in (1, 6, 12, 30):
        assert not in_basic_open(from_natural(n), n)
    assert in_basic_open(Supernatural.parse("2^w"), 8)
    assert not in_basic_open(Supernatural.parse("2^w"), 3)


@given(st.integers(1, 400), st.integers(1, 400))
def test_divisibility_embedding(m, n):
    assert sn_leq(from_natural(m), from_natural(n)) == divides(m, n)


@given(st.integers(1, 300), st.integers(1, 300))
def test_lcm_and_gcd(m, n):
    from math import gcd
    assert sn_meet(from_natural(m), from_natural(n)) == from_natural(gcd(m, n))
    assert sn_join(from_natural(m), from_natural(n)) == from_natural(m * n // gcd(m, n))


@given(supernaturals, supernaturals, supernaturals)
def test_distributive_lattice_laws(x, y, z):
    assert sn_join(x, sn_meet(x, y)) == x
    assert sn_meet(x, sn_join(x, y)) == x
    assert sn_meet(x, sn_join(y, z)) == sn_join(sn_meet(x, y), sn_meet(x, z))
    assert sn_join(x, sn_meet(y, z)) == sn_meet(sn_join(x, y), sn_join(x, z))
    assert sn_leq(x, y) == (sn_join(x, y) == y)


def test_multiset_examples():
    assert multiset_of(full_product(3)) == Counter({2: 1})
    assert multiset_of(boolean_algebra(4)) == Counter({1: 4})
    ms = multiset_of(full_product(2, 3, 3))
    assert ms == Counter({1: 1, 2: 2})
    assert format_multiset(ms) == "{1: 1, 2: 2}"
