"""The nine reference instances and their expected types.

Each fixture is stored as ``.gve`` text, so what ``gve example`` emits is
exactly what the regression suite classifies.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .dsl import Instance, load, parse, print_doc
from .extensions import DEFAULT_BOUND, GradedFamily, TypeVerdict, Witness, check_axioms, classify_global

__all__ = ["FIXTURE_NAMES", "FIXTURE_TEXT", "Fixture", "FixtureRow", "make_fixture", "run_all"]

FIXTURE_TEXT = {
    "5.1.1": """\
# every graded piece is V
valuegroup rational levels Q,Z
expect a
family A:
  grade g>0 -> V
  grade g<0 -> V
""",
    "5.1.2": """\
# W is the overring killing the discrete level; positive pieces are J(W)
valuegroup rational levels Q,Z
ring W = ring(before 1)
expect f
family A:
  grade g>0 -> radical(W)
  grade g<0 -> W
""",
    "5.1.3": """\
# A_r = V b^floor(r) with J(V) = b^-1 V
valuegroup rational levels Q,Z
elem b = vec{1: -1}
expect e
family A:
  grade g>0 -> V * b^(fd(1))
  grade g<0 -> V * b^(fd(1))
""",
    "5.2": """\
# open cuts at -r*pi over the rational line
valuegroup rational levels Q
expect g
family A:
  grade g>0 -> cut(> -g*pi)
  grade g<0 -> cut(> -g*pi)
""",
    "5.3.1": """\
valuegroup lex z
sigma rate 1
expect d
family A:
  grade g>0 -> cut(>= vec{z: g})
  grade g<0 -> cut(> vec{z: g})
""",
    "5.3.2": """\
valuegroup lex z
sigma rate 1
expect f
family A:
  grade g>0 -> cut(> vec{z: g})
  grade g<0 -> cut(>= vec{z: g})
""",
    "5.4": """\
# A_r = W_0 Z^(-2r) for r > 0
valuegroup lex z
sigma rate 1
expect b
family A:
  grade g>0 -> cut(> vec{z: -2*g} tail -inf before 0)
  grade g<0 -> cut(> vec{z: -2*g} tail +inf before g)
""",
    "5.5": """\
# A_r = W_(-2r) Z^r for r > 0
valuegroup lex z
sigma rate 1
expect c
family A:
  grade g>0 -> cut(> vec{z: g} tail -inf before -2*g)
  grade g<0 -> cut(> vec{z: g} tail +inf before 0)
""",
    "5.6": """\
# H = Z; on H the pieces are principal, off H they are closed but not finitely generated
valuegroup lex z H=1
sigma rate 1
expect h
designate t = 1/2
family A:
  grade g>0 in H -> cut(>= vec{z: -g, 0: -g*pi})
  grade g>0 notin H -> cut(>= vec{z: -g, 0: -g*pi})
  grade g<0 -> cut(> vec{z: -g, 0: -g*pi})
""",
}

FIXTURE_NAMES = tuple(FIXTURE_TEXT)


@dataclass
class Fixture:
    name: str
    instance: Instance
    expected: str

    @property
    def family(self) -> GradedFamily:
        return self.instance.family

    @property
    def text(self) -> str:
        return print_doc(self.instance.doc)


def make_fixture(name: str) -> Fixture:
    if name not in FIXTURE_TEXT:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")
    inst = load(FIXTURE_TEXT[name])
    return Fixture(name, inst, inst.doc.expect)


@dataclass
class FixtureRow:
    name: str
    expected: str
    verdict: TypeVerdict | None
    ok: bool
    seconds: float
    error: str = ""
    axioms_ok: bool = True
    witnesses: list = field(default_factory=list)

    def label(self) -> str:
        if self.verdict is None:
            return "error"
        return self.verdict.label()


def run_all(bound: int = DEFAULT_BOUND, overrides: dict | None = None) -> list[FixtureRow]:
    """Classify every fixture; failures are rows, never exceptions."""
    rows = []
    for name in FIXTURE_NAMES:
        t0 = time.perf_counter()
        try:
            fx = (overrides or {}).get(name) or make_fixture(name)
            rep = check_axioms(fx.family)
            v = classify_global(fx.family, N=bound)
            v.axioms = rep.summary()
            ok = bool(rep) and v.letter == fx.expected
            wits = list(v.witnesses)
            if not rep:
                cuts = tuple(f"{label} = {c}" for label, c in rep.cuts)
                wits.insert(0, Witness(rep.grades, f"axiom ({rep.axiom}) fails: {rep.message}", cuts))
            rows.append(FixtureRow(name, fx.expected, v, ok, time.perf_counter() - t0,
                                   axioms_ok=bool(rep), witnesses=wits))
        except Exception as e:  # a broken fixture is a failed row
            exp = FIXTURE_TEXT.get(name) and parse(FIXTURE_TEXT[name]).expect
            rows.append(FixtureRow(name, exp, None, False, time.perf_counter() - t0, error=str(e)))
    return rows
