from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gve.groups import (
    GenPoly,
    GroupAutomorphism,
    KindMismatch,
    ValueGroup,
    ValueVector,
    quotient_valuation,
    valuation,
    vec_cmp,
    vec_twist,
)
from gve.scalars import PI, Ordering, PiLinear

import oracles

small_q = st.fractions(min_value=-6, max_value=6, max_denominator=6)
entries = st.builds(PiLinear, small_q, st.integers(-2, 2))
indices = st.fractions(min_value=-3, max_value=3, max_denominator=4)
lex_vecs = st.dictionaries(indices, entries, max_size=4).map(ValueVector)
twisted_vecs = st.builds(
    lambda z, rest: ValueVector(list(rest.entries) + [("z", z)]),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    lex_vecs,
)
Z_GROUP = ValueGroup("lex", z_tier=True)


def oracle_cmp(a, b):
    keys = sorted({k for k, _ in a.entries} | {k for k, _ in b.entries})
    for k in keys:
        x, y = a.get(k), b.get(k)
        c = oracles.cmp_real(oracles.real(x.a, x.b), oracles.real(y.a, y.b))
        if c:
            return c
    return 0


def test_vec_cmp_examples():
    assert vec_cmp(ValueVector(), ValueVector()) is Ordering.EQUAL
    assert vec_cmp(ValueVector({0: 1}), ValueVector({1: 100})) is Ordering.GREATER
    assert vec_cmp(ValueVector({0: PI}), ValueVector({0: 3})) is Ordering.GREATER


def test_vec_twist_examples():
    assert vec_twist(ValueVector(), GroupAutomorphism(5)) == ValueVector()
    assert vec_twist(ValueVector({1: 2}), GroupAutomorphism(1)) == ValueVector({0: 2})
    got = vec_twist(ValueVector({0: PI, 2: -1}), GroupAutomorphism(-1))
    assert got == ValueVector({1: PI, 3: -1})


def test_valuation_examples():
    assert valuation(GenPoly.constant(1)) == ValueVector()
    p = GenPoly.monomial({0: 3}) + GenPoly.monomial({0: Fraction(1, 2)})
    assert valuation(p) == ValueVector({0: Fraction(1, 2)})
    q = GenPoly.monomial({0: PI}) + GenPoly.monomial({1: -5})
    assert valuation(q) == ValueVector({1: -5})


def test_quotient_valuation_examples():
    p = GenPoly.monomial({0: 2})
    assert quotient_valuation(p, p) == ValueVector()
    assert quotient_valuation(p, GenPoly.monomial({0: Fraction(1, 2)})) == ValueVector({0: Fraction(3, 2)})
    assert quotient_valuation(GenPoly.constant(1), GenPoly.monomial({0: PI})) == ValueVector({0: -PI})


def test_zero_polynomial_has_no_valuation():
    with pytest.raises(ZeroDivisionError):
        valuation(GenPoly())


def test_group_membership():
    rz = ValueGroup("rational", ("Q", "Z"))
    assert rz.contains(ValueVector({0: Fraction(1, 3), 1: 2}))
    assert not rz.contains(ValueVector({1: Fraction(1, 2)}))
    assert not rz.contains(ValueVector({0: PI}))
    with pytest.raises(KindMismatch):
        rz.check(ValueVector({2: 1}))
    h = ValueGroup("lex", h0=1)
    assert h.contains(ValueVector({Fraction(1, 2): PiLinear(1, 3)}))
    assert not h.contains(ValueVector({0: PiLinear(0, Fraction(1, 2))}))


def test_bad_group_specs():
    with pytest.raises(ValueError):
        ValueGroup("rational", ("QPI",))
    with pytest.raises(ValueError):
        ValueGroup("lex", h0=-1)
    with pytest.raises(ValueError):
        ValueGroup("rational", z_tier=True)


@given(lex_vecs, lex_vecs)
def test_cmp_matches_oracle(a, b):
    assert int(vec_cmp(a, b)) == oracle_cmp(a, b)


@given(lex_vecs, lex_vecs, lex_vecs)
def test_order_translation_invariant(a, b, c):
    assert vec_cmp(a + c, b + c) == vec_cmp(a, b)


@given(lex_vecs, lex_vecs, small_q)
def test_twist_preserves_order(a, b, t):
    tau = GroupAutomorphism(t)
    assert vec_cmp(tau(a), tau(b)) == vec_cmp(a, b)


@given(lex_vecs, small_q, small_q)
def test_twist_composes(a, s, t):
    assert GroupAutomorphism(s)(GroupAutomorphism(t)(a)) == GroupAutomorphism(s).compose(GroupAutomorphism(t))(a)


@given(twisted_vecs, twisted_vecs, twisted_vecs)
def test_twisted_law_associative(a, b, c):
    G = Z_GROUP
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))


@given(twisted_vecs)
def test_twisted_inverse(a):
    G = Z_GROUP
    assert G.mul(a, G.inv(a)) == G.identity()
    assert G.mul(G.inv(a), a) == G.identity()


@given(twisted_vecs, twisted_vecs, twisted_vecs)
def test_twisted_order_bi_invariant(a, b, c):
    G = Z_GROUP
    assert vec_cmp(G.mul(c, a), G.mul(c, b)) == vec_cmp(a, b)
    assert vec_cmp(G.mul(a, c), G.mul(b, c)) == vec_cmp(a, b)


def test_twisted_law_not_commutative():
    G = Z_GROUP
    a, b = ValueVector({"z": 1}), ValueVector({0: 1})
    assert G.mul(a, b) != G.mul(b, a)


monos = st.dictionaries(st.integers(0, 1), small_q, max_size=2).map(ValueVector)
polys = st.lists(st.tuples(monos, st.integers(-3, 3)), min_size=1, max_size=4).map(GenPoly).filter(
    lambda p: not p.is_zero())


@given(polys, polys)
def test_valuation_is_a_valuation(p, q):
    assert valuation(p * q) == valuation(p) + valuation(q)
    s = p + q
    if not s.is_zero():
        assert valuation(s) >= min(valuation(p), valuation(q))
