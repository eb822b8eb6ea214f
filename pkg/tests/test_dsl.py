from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gve.cuts import Cut
from gve.dsl import DslError, load, parse, parse_pilinear, print_doc
from gve.fixtures import FIXTURE_NAMES, FIXTURE_TEXT, make_fixture
from gve.groups import ValueGroup, ValueVector
from gve.scalars import PI, PiLinear

QLINE = ValueGroup("rational", ("Q",))
HEADER = "valuegroup rational levels Q\n"


def both(expr):
    return HEADER + f"family A:\n  grade g>0 -> {expr}\n  grade g<0 -> {expr}\n"


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_round_trip(name):
    fx = make_fixture(name)
    again = parse(fx.text)
    assert again == fx.instance.doc
    assert print_doc(again) == fx.text


def test_emitted_text_reloads_to_same_cuts():
    fx = make_fixture("5.1.1")
    inst = load(fx.text)
    for r in (Fraction(1, 3), Fraction(-2)):
        assert inst.family.cut(r) == fx.family.cut(r)


def test_open_cut_at_minus_pi():
    inst = load(both("cut(> -1*pi)"))
    assert inst.family.cut(1) == Cut.open(QLINE, ValueVector({0: -PI}))


def test_grade_variable_in_cut():
    inst = load(both("cut(> -g*pi)"))
    assert inst.family.cut(Fraction(1, 2)) == Cut.open(QLINE, ValueVector({0: -PI / 2}))
    assert inst.family.cut(-3) == Cut.open(QLINE, ValueVector({0: 3 * PI}))


def test_missing_negative_case_is_rejected():
    with pytest.raises(DslError, match="total"):
        load(HEADER + "family A:\n  grade r>0 -> cut(> -r*pi)\n")


def test_overlapping_cases_rejected():
    with pytest.raises(DslError):
        load(HEADER + "family A:\n  grade g>0 -> V\n  grade g>0 -> V\n  grade g<0 -> V\n")


def test_undeclared_name_position():
    with pytest.raises(DslError) as e:
        load(HEADER + "family A:\n  grade g>0 -> V\n  grade g<0 -> W\n")
    assert (e.value.line, e.value.col) == (4, 16)
    assert str(e.value).startswith("4:16:")


def test_syntax_error_position():
    with pytest.raises(DslError) as e:
        load(HEADER + "family A:\n  grade g>0 -> cut(>= )\n  grade g<0 -> V\n")
    assert e.value.line == 3 and e.value.token == ")"


def test_noncommutative_rejected_with_position():
    with pytest.raises(DslError) as e:
        load(HEADER + "coefficients noncommutative\n" + both("V").split("\n", 1)[1])
    assert e.value.line == 2


def test_in_h_requires_declared_subgroup():
    with pytest.raises(DslError, match="H="):
        load(HEADER + "family A:\n  grade g>0 in H -> V\n  grade g<0 -> V\n")


def test_v_is_reserved():
    with pytest.raises(DslError):
        load(HEADER + "ring V = ring(end)\n" + both("V").split("\n", 1)[1])


def test_table_family():
    inst = load(HEADER + "family A:\n  grade 1 -> cut(>= 1)\n  grade -1 -> cut(>= -1)\n")
    assert inst.family.cut(1) == Cut.closed(QLINE, ValueVector({0: 1}))
    assert inst.family.default_grid() == (Fraction(-1), Fraction(0), Fraction(1))


def test_table_must_close_under_negation():
    with pytest.raises(DslError):
        load(HEADER + "family A:\n  grade 1 -> cut(>= 1)\n")


def test_closedform_declaration():
    text = ("valuegroup rational levels Q,Z\nelem b = vec{1: -1}\n"
            "family A = closedform(V, b, fd(1))\n")
    inst = load(text)
    ref = make_fixture("5.1.3").family
    for r in (Fraction(3, 2), Fraction(-5, 2)):
        assert inst.family.cut(r) == ref.cut(r)
    assert print_doc(parse(text)) == text


def test_comments_and_blank_lines_ignored():
    text = "# header\n\n" + both("V") + "\n# trailing\n"
    assert load(text).family.cut(1) == Cut.closed(QLINE)


@pytest.mark.parametrize("text, want", [
    ("1/3", PiLinear(Fraction(1, 3))),
    ("pi", PI),
    ("2-pi", PiLinear(2, -1)),
    ("-3*pi", PiLinear(0, -3)),
])
def test_parse_pilinear(text, want):
    assert parse_pilinear(text) == want


@given(st.fractions(min_value=-20, max_value=20, max_denominator=12),
       st.fractions(min_value=-5, max_value=5, max_denominator=6))
def test_pilinear_text_round_trip(a, b):
    x = PiLinear(a, b)
    assert parse_pilinear(str(x)) == x


def test_fixture_texts_match_registry():
    assert set(FIXTURE_TEXT) == set(FIXTURE_NAMES)
    with pytest.raises(KeyError):
        make_fixture("9.9")


def test_table_family_checks_and_classifies():
    from gve.extensions import check_axioms, classify_global
    inst = load(HEADER + "family A:\n  grade 1 -> cut(>= 1)\n  grade -1 -> cut(>= -1)\n")
    assert check_axioms(inst.family)
    assert classify_global(inst.family).letter == "a"
