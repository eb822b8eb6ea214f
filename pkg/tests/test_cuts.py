from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from gve.cuts import (
    Cut,
    CutError,
    co_inverse,
    cut_closure,
    cut_le,
    cut_member,
    cut_sum,
    cut_twist,
    is_idempotent,
    is_principal,
    o_left,
    radical,
    residual_left,
    residual_right,
)
from gve.groups import END, GroupAutomorphism, ValueGroup, ValueVector
from gve.scalars import PI, PiLinear

import oracles

QLINE = ValueGroup("rational", ("Q",))
ZLINE = ValueGroup("rational", ("Z",))
PILINE = ValueGroup("pi", ("QPI",))
LEX = ValueGroup("lex")
ZLEX = ValueGroup("lex", z_tier=True)


def q(x):
    return ValueVector({0: x})


def open_at(x, group=QLINE):
    return Cut.open(group, q(x))


# ---- examples ---------------------------------------------------------------

def test_member_examples():
    V, JV = Cut.closed(QLINE), Cut.open(QLINE)
    assert cut_member(V, ValueVector())
    assert not cut_member(JV, ValueVector())
    assert cut_member(open_at(-PI), q(-3))


def test_sum_examples():
    assert cut_sum(Cut.closed(QLINE, q(1)), Cut.closed(QLINE, q(2))) == Cut.closed(QLINE, q(3))
    assert cut_sum(Cut.open(QLINE), Cut.closed(QLINE)) == Cut.open(QLINE)


@given(st.fractions(min_value=-4, max_value=4, max_denominator=5),
       st.fractions(min_value=-4, max_value=4, max_denominator=5))
def test_sum_of_irrational_open_cuts(r, s):
    assume(r and s)
    got = cut_sum(open_at(-r * PI), open_at(-s * PI))
    assert got == open_at(-(r + s) * PI)
    # sampled sums u + w of members land inside; points just above -(r+s)pi split
    target = oracles.real(0, -(r + s))
    for num in range(-40, 41):
        x = Fraction(num, 7)
        assert cut_member(got, q(x)) == (oracles.real(x) > target)


def test_twist_examples():
    c = Cut.closed(LEX, ValueVector({1: 2}))
    assert cut_twist(c, GroupAutomorphism(0)) == c
    assert cut_twist(c, 1) == Cut.closed(LEX, ValueVector({0: 2}))
    W0 = Cut.ring(LEX, (1, Fraction(0), 1))
    for r in (Fraction(1, 2), Fraction(3)):
        Wr = cut_twist(W0, -r)
        assert Wr == Cut.ring(LEX, (1, r, 1))
        assert cut_le(Wr, W0) and Wr != W0


def test_closure_examples():
    assert Cut.open(ZLINE) == Cut.closed(ZLINE, q(1))
    c = open_at(-PI)
    assert cut_closure(c) == c
    assert cut_closure(Cut.open(QLINE)) == Cut.closed(QLINE)


def test_o_left_examples():
    V = Cut.closed(QLINE)
    assert o_left(Cut.closed(QLINE, q(7))) == V
    assert o_left(open_at(-PI)) == V
    H = ValueGroup("lex", h0=1, z_tier=True)
    a_off = Cut.closed(H, ValueVector({"z": Fraction(-1, 2), 0: -PI / 2}))
    assert o_left(a_off) == Cut.ring(H, (1, Fraction(0), 1))


def test_residual_examples():
    V = Cut.closed(QLINE)
    assert residual_left(V, V) == V
    assert residual_left(V, Cut.closed(QLINE, q(5))) == Cut.closed(QLINE, q(-5))
    assert residual_left(V, open_at(-PI)) == open_at(PI)


def test_principal_examples():
    ok, w = is_principal(Cut.closed(QLINE, q(3)))
    assert ok and w == q(3)
    assert is_principal(open_at(-PI)) == (False, None)
    H = ValueGroup("lex", h0=1, z_tier=True)
    W = Cut.ring(H, (1, Fraction(0), 1))
    assert not is_principal(radical(W))[0]


def test_radical_examples():
    V = Cut.closed(QLINE)
    assert radical(V) == Cut.open(QLINE) and is_idempotent(radical(V))
    Vz = Cut.closed(ZLINE)
    assert radical(Vz) == Cut.closed(ZLINE, q(1)) and not is_idempotent(radical(Vz))
    W = Cut.ring(ValueGroup("lex", h0=1, z_tier=True), (1, Fraction(0), 1))
    assert is_idempotent(radical(W))


def test_radical_needs_ring():
    with pytest.raises(CutError):
        radical(Cut.closed(QLINE, q(1)))


def test_closure_over_wrong_ring_rejected():
    with pytest.raises(CutError):
        cut_closure(open_at(-PI), over=Cut.ring(LEX))


def test_irrational_head_in_rational_group_canonical():
    assert Cut.closed(QLINE, q(-PI)) == Cut.open(QLINE, q(-PI))


# ---- properties ---------------------------------------------------------------

idx = st.sampled_from([Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1)])
val = st.builds(PiLinear, st.fractions(min_value=-3, max_value=3, max_denominator=3), st.integers(-1, 1))
heads = st.dictionaries(idx, val, max_size=3).map(ValueVector)
points = st.one_of(st.just(END), st.builds(lambda i, s: (1, i, s), idx, st.sampled_from([-1, 1])))
lex_cuts = st.builds(lambda h, s, p: Cut(LEX, h, s, p), heads, st.sampled_from([-1, 1]), points)

zheads = st.builds(lambda h, z: h + ValueVector({"z": z}), heads,
                   st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(-1)]))
zpoints = st.one_of(points, st.just((0, Fraction(0), 1)))
zlex_cuts = st.builds(lambda h, s, p: Cut(ZLEX, h, s, p), zheads, st.sampled_from([-1, 1]), zpoints)


def near(c, eps_list=(0, Fraction(1, 1000), -Fraction(1, 1000), 1, -1)):
    out = []
    keys = [(1, Fraction(-1)), (1, Fraction(0)), (1, Fraction(1, 2)), (1, Fraction(1)), (1, Fraction(2))]
    if c.group.z_tier:
        keys.append((0, Fraction(0)))
    for k in keys:
        for e in eps_list:
            out.append(c.head + ValueVector({k: e}))
    return out


@given(lex_cuts, lex_cuts)
def test_sum_is_sound_on_samples(a, b):
    s = cut_sum(a, b)
    for x in near(a):
        if cut_member(a, x):
            for y in near(b):
                if cut_member(b, y):
                    assert cut_member(s, x + y)


@given(zlex_cuts, zlex_cuts)
def test_twisted_sum_is_sound_on_samples(a, b):
    s = cut_sum(a, b)
    G = ZLEX
    for x in near(a):
        if cut_member(a, x):
            for y in near(b):
                if cut_member(b, y):
                    assert cut_member(s, G.mul(x, y))


@given(lex_cuts, lex_cuts)
def test_sum_commutes_without_twist(a, b):
    assert cut_sum(a, b) == cut_sum(b, a)


@given(zlex_cuts, zlex_cuts, zlex_cuts)
def test_sum_associative(a, b, c):
    assert cut_sum(cut_sum(a, b), c) == cut_sum(a, cut_sum(b, c))


@given(zlex_cuts, zlex_cuts, zlex_cuts)
def test_residual_adjunctions(x, i, j):
    # x*i <= j  iff  x <= (j : i) on the left; i*x <= j iff x <= (j : i) on the right
    assert cut_le(cut_sum(x, i), j) == cut_le(x, residual_left(j, i))
    assert cut_le(cut_sum(i, x), j) == cut_le(x, residual_right(j, i))


@given(zlex_cuts, zlex_cuts)
def test_order_is_monotone_for_sum(a, b):
    if cut_le(a, b):
        c = Cut.ring(ZLEX, (1, Fraction(0), 1))
        assert cut_le(cut_sum(a, c), cut_sum(b, c))


@given(zlex_cuts)
def test_o_left_is_a_ring(c):
    w = o_left(c)
    assert w.is_ring()
    assert cut_sum(w, c) == c


@given(zlex_cuts)
def test_co_inverse_is_complement_of_inverse(c):
    d = co_inverse(c)
    for x in near(c):
        assert cut_member(d, x) != cut_member(c, ZLEX.inv(x))


@given(lex_cuts)
def test_closure_contains_and_idempotent(c):
    cl = cut_closure(c)
    assert cut_le(c, cl)
    assert cut_closure(cl) == cl


@given(zlex_cuts, st.sampled_from([Fraction(1, 2), Fraction(-1), Fraction(2)]))
def test_twist_is_automorphism(c, t):
    back = cut_twist(cut_twist(c, t), -t)
    assert back == c
    for x in near(c):
        assert cut_member(c, x) == cut_member(cut_twist(c, t), ZLEX.twist(x, t))
