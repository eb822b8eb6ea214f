from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gve.maps import (
    Candidate,
    Family,
    GradedMap,
    GradedMapTable,
    InconsistentTable,
    Interval,
    check_graded_map,
    classify_table,
    enumerate_graded_tables,
    farey_grid,
    is_nice_map,
    lemma46_check,
    lemma413_shift_check,
    smallest_sum_zero,
)
from gve.scalars import PI, PiLinear

import oracles

F = Fraction
ORACLE_FAMILY = {Family.FD: oracles.fd, Family.FD1: oracles.fd1, Family.FDM1: oracles.fdm1}

params = st.one_of(
    st.builds(PiLinear, st.fractions(min_value=-6, max_value=6, max_denominator=6)),
    st.builds(PiLinear, st.integers(-3, 3), st.integers(-2, 2)),
)
maps = st.builds(GradedMap, st.sampled_from(list(Family)), params)
grades = st.fractions(min_value=-8, max_value=8, max_denominator=9)


def table(d):
    return GradedMapTable({F(k): v for k, v in d.items()})


# ---- eval -----------------------------------------------------------------------

def test_eval_examples():
    assert all(GradedMap(Family.FD, 0).eval(r) == 0 for r in (1, F(-7, 3), F(5, 2)))
    f1 = GradedMap(Family.FD1, 0)
    assert f1.eval(1) == -1 and f1.eval(-1) == 0
    fm = GradedMap(Family.FDM1, PI)
    assert fm.eval(2) == 6 and fm.eval(-2) == -7


@given(maps, grades)
def test_eval_matches_oracle(f, r):
    assert f.eval(r) == ORACLE_FAMILY[f.family](f.d.a, f.d.b, r)


@given(maps, grades)
def test_negation_rule(f, r):
    s = f.eval(r) + f.eval(-r)
    if f.family is Family.FD:
        assert s in (-1, 0)
    elif r != 0:
        assert s == -1


# ---- graded check -----------------------------------------------------------------

def test_check_examples():
    grid = [0, F(1, 2), F(-1, 2), 1, -1, F(3, 2), F(-3, 2), 2, -2, 3, -3]
    assert check_graded_map(GradedMap(Family.FD, F(1, 3)), grid)
    rep = check_graded_map(table({0: 0, 1: 1, -1: -3}))
    assert not rep and rep.s == 1
    assert check_graded_map(GradedMap(Family.FD1, PI), farey_grid(7, 5))


@given(maps)
def test_every_family_member_is_graded(f):
    assert check_graded_map(f, farey_grid(5, 5))


def test_check_rejects_bad_grid():
    with pytest.raises(ValueError):
        check_graded_map(GradedMap(Family.FD, 1), [0, 1])


def test_superadditivity_failure_reports_pair():
    t = table({0: 0, F(1, 2): 1, F(-1, 2): -1, 1: 1, -1: -2})
    rep = check_graded_map(t)
    assert not rep and (rep.s, rep.t) == (F(1, 2), F(1, 2))


def test_table_must_close_under_negation():
    with pytest.raises(ValueError):
        table({0: 0, 1: 0})
    with pytest.raises(ValueError):
        table({0: 1})


# ---- enumeration against a brute-force oracle --------------------------------------

@pytest.mark.parametrize("grid, bound", [
    (farey_grid(1, 2), 3),
    ((F(0), F(1, 3), F(-1, 3), F(2, 3), F(-2, 3), F(1), F(-1)), 3),
    ((F(0), F(1), F(-1), F(2), F(-2), F(3), F(-3)), 3),
])
def test_enumerator_matches_itertools(grid, bound):
    got = {tuple(sorted(t.entries.items())) for t in enumerate_graded_tables(grid, bound)}
    want = {tuple(sorted(t.items())) for t in oracles.brute_tables(list(grid), bound)}
    assert got == want


def test_enumerator_limit():
    assert len(enumerate_graded_tables(farey_grid(2, 2), 4, limit=5)) == 5


# ---- nice maps ----------------------------------------------------------------------

def test_nice_examples():
    assert is_nice_map(GradedMap(Family.FDM1, 0), 1)
    assert not is_nice_map(GradedMap(Family.FD, 1), 1)
    assert is_nice_map(GradedMap(Family.FD, F(1, 2)), 1)


def test_nice_needs_positive_r():
    with pytest.raises(ValueError):
        is_nice_map(GradedMap(Family.FD, 1), 0)


# ---- classify_table -------------------------------------------------------------------

def test_classify_examples():
    cands = classify_table(table({0: 0, 1: 0, -1: -1}))
    by = {c.family: c.interval for c in cands}
    assert set(by) == set(Family)
    # f(-1) = -1 excludes d = 0 for fd
    assert by[Family.FD] == Interval(F(0), F(1), False, False)
    assert by[Family.FD1] == Interval(F(0), F(1), False, True)
    assert by[Family.FDM1] == Interval(F(0), F(1), True, False)
    cands = classify_table(table({0: 0, 1: 3, -1: -3}))
    assert [c.family for c in cands] == [Family.FD]
    assert cands[0].interval.point() == 3
    cands = classify_table(table({0: 0}))
    assert {c.family for c in cands} == set(Family)
    assert all(c.interval == Interval() for c in cands)


def test_classify_inconsistent():
    with pytest.raises(InconsistentTable):
        classify_table(table({0: 0, 1: 0, -1: 0, 2: 3, -2: -3}))


@given(maps)
def test_classify_round_trip(f):
    t = GradedMapTable.restrict(f, farey_grid(6, 6))
    cands = classify_table(t)
    assert any(c.contains(f) for c in cands)
    for c in cands:
        d = c.interval.point()
        if d is not None:
            g = GradedMap(c.family, d)
            assert GradedMapTable.restrict(g, farey_grid(6, 6)) == t


def test_interval_contains_irrational():
    iv = Interval(F(3), F(22, 7), False, False)
    assert iv.contains(PI)
    assert not Interval(F(22, 7), F(4), True, True).contains(PI)


# ---- smallest_sum_zero -------------------------------------------------------------------

def scan_first_zero_sum(f, grid):
    for r in sorted(x for x in grid if x > 0):
        if f.eval(r) + f.eval(-r) == 0:
            return r
    return None


def test_smallest_sum_zero_examples():
    f = GradedMap(Family.FD, 3)
    assert smallest_sum_zero(f) == F(1, 3) == scan_first_zero_sum(f, farey_grid(4, 12))
    assert smallest_sum_zero(GradedMap(Family.FD, PI)) is None
    assert smallest_sum_zero(GradedMap(Family.FD1, F(5, 2))) is None
    with pytest.raises(ValueError):
        smallest_sum_zero(GradedMap(Family.FD, 0))


@given(st.fractions(min_value=-5, max_value=5, max_denominator=5).filter(bool))
def test_smallest_sum_zero_matches_scan(d):
    f = GradedMap(Family.FD, d)
    assert smallest_sum_zero(f) == scan_first_zero_sum(f, farey_grid(6, 30))


# ---- growth and shift checks-----------------------------------------------------------------

def test_growth_bound_examples():
    assert lemma46_check(GradedMap(Family.FD, 0), 1, 10)
    assert lemma46_check(GradedMap(Family.FD, PI), F(1, 2), 50)
    assert lemma46_check(GradedMap(Family.FDM1, -2), 1, 20)


@given(maps, st.fractions(min_value=F(1, 9), max_value=4, max_denominator=9))
def test_growth_bound_holds_for_families(f, r):
    assert lemma46_check(f, r, 25)


def test_shift_additivity_examples():
    assert lemma413_shift_check(GradedMap(Family.FD, 1), 1, farey_grid(4, 4))
    assert lemma413_shift_check(GradedMap(Family.FD, 3), F(1, 3), farey_grid(6, 6))
    with pytest.raises(ValueError):
        lemma413_shift_check(GradedMap(Family.FD, 1), F(1, 2), farey_grid(4, 4))


def test_candidate_contains():
    c = Candidate(Family.FD1, Interval(F(0), F(1), False, True))
    assert c.contains(GradedMap(Family.FD1, 1))
    assert not c.contains(GradedMap(Family.FD, F(1, 2)))
