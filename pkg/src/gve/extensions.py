"""Graded families ``A = sum A_r X^r`` of cut ideals over a valuation ring V.

A family assigns to every rational grade a cut of the value group, with
``A_0 = V``.  The twisting automorphism ``sigma(r)`` shifts rational indices by
``r * rate``.  This module checks the graded-extension axioms on a finite
grade grid, classifies families into the letter types (a) to (h), and builds
the closed-form families of types (e) and (h).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .cuts import (
    Cut,
    co_inverse,
    cut_closure,
    cut_le,
    cut_sum,
    cut_twist,
    is_idempotent,
    is_principal,
    o_left,
    o_right,
    radical,
    residual_right,
)
from .groups import GroupAutomorphism, ValueGroup, ValueVector
from .maps import GradedMap, check_graded_map, farey_grid, smallest_sum_zero
from .scalars import as_fraction

__all__ = [
    "SigmaAction",
    "GradedFamily",
    "ClosedFormData",
    "CyclicSlice",
    "TypeVerdict",
    "Witness",
    "AxiomReport",
    "FamilyError",
    "SandwichError",
    "ClassificationError",
    "TYPE_I_LETTERS",
    "TYPE_II_LETTERS",
    "DEFAULT_BOUND",
    "default_grid",
    "check_axioms",
    "extract_slice",
    "classify_cyclic",
    "classify_global",
    "m_family",
    "build_type_e",
    "build_type_h",
    "TypeHResult",
    "sup_diagnostics",
    "SupDiagnostics",
    "certify_divergence",
]

TYPE_I_LETTERS = frozenset("abcdfg")
TYPE_II_LETTERS = frozenset("eh")
DEFAULT_BOUND = 16


class FamilyError(ValueError):
    """Malformed family or a failed builder precondition."""


class SandwichError(FamilyError):
    pass


class ClassificationError(ValueError):
    """A slice fits no type, or sampled slices disagree."""


@dataclass(frozen=True)
class SigmaAction:
    """Grade ``r`` acts on values by shifting rational indices by ``r * rate``."""

    rate: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "rate", as_fraction(self.rate))

    def shift(self, r) -> Fraction:
        return as_fraction(r) * self.rate

    def automorphism(self, r) -> GroupAutomorphism:
        return GroupAutomorphism(self.shift(r))

    def act(self, c: Cut, r) -> Cut:
        s = self.shift(r)
        return c if s == 0 else cut_twist(c, s)

    def act_value(self, group: ValueGroup, v: ValueVector, r) -> ValueVector:
        return group.twist(v, self.shift(r))


@dataclass(frozen=True)
class ClosedFormData:
    W: Cut
    b_val: ValueVector
    f: object
    alpha: ValueVector
    k: Fraction | None = None
    exceptional: Mapping | None = None

    def alpha_at(self, r) -> ValueVector:
        return self.alpha.scale(r)

    def base_value(self, group: ValueGroup, r, shift: int = 0) -> ValueVector:
        return group.mul(self.b_val.scale(self.f.eval(r) + shift), self.alpha_at(r))


class GradedFamily:
    """Grade-indexed cuts.  ``rule`` gives ``A_r`` for ``r != 0``; ``A_0`` is V."""

    def __init__(
        self,
        group: ValueGroup,
        rule: Callable[[Fraction], Cut] | None = None,
        sigma: SigmaAction | None = None,
        *,
        kind: str = "rule",
        name: str = "A",
        table: Mapping | None = None,
        h0=None,
        closed_form: ClosedFormData | None = None,
        named_grades: Iterable = (),
        designated=None,
        expected: str | None = None,
    ):
        if kind not in ("rule", "table", "closedform"):
            raise FamilyError(f"unknown family kind {kind!r}")
        if rule is None and table is None:
            raise FamilyError("a family needs a rule or a table")
        self.group = group
        self.sigma = sigma or SigmaAction()
        self.kind = kind
        self.name = name
        self.rule = rule
        self.table = {as_fraction(k): v for k, v in (table or {}).items()}
        self.h0 = None if h0 is None else as_fraction(h0)
        self.closed_form = closed_form
        self.designated = None if designated is None else as_fraction(designated)
        self.expected = expected
        self.V = Cut.closed(group)
        named = {as_fraction(g) for g in named_grades} | set(self.table)
        if self.designated is not None:
            named.add(self.designated)
        self.named_grades = tuple(sorted(named))
        self._cache: dict = {Fraction(0): self.V}
        if Fraction(0) in self.table and self.table[Fraction(0)] != self.V:
            raise FamilyError("A_0 must be V")

    def in_H(self, r) -> bool:
        if self.h0 is None:
            raise FamilyError("family declares no subgroup H")
        return (as_fraction(r) / self.h0).denominator == 1

    def cut(self, r) -> Cut:
        r = as_fraction(r)
        c = self._cache.get(r)
        if c is not None:
            return c
        if r in self.table:
            c = self.table[r]
        elif self.rule is None:
            raise FamilyError(f"grade {r} outside the table of {self.name}")
        else:
            c = self.rule(r)
        if not isinstance(c, Cut) or c.group != self.group:
            raise FamilyError(f"{self.name}_{r} is not a cut over {self.group.describe()}")
        self._cache[r] = c
        return c

    __getitem__ = cut

    def twisted(self, r, by) -> Cut:
        return self.sigma.act(self.cut(r), by)

    def with_overrides(self, overrides: Mapping) -> "GradedFamily":
        """Copy with some cuts replaced (used to build mutants)."""
        over = {as_fraction(k): v for k, v in overrides.items()}
        base = self

        def rule(r):
            return over[r] if r in over else base.cut(r)

        fam = GradedFamily(
            self.group, rule, self.sigma, kind="rule", name=self.name, h0=self.h0,
            named_grades=set(self.named_grades) | set(over), designated=self.designated,
            expected=self.expected,
        )
        if self.rule is None:
            fam.grid_override = self.default_grid()
        return fam

    def default_grid(self) -> tuple:
        if getattr(self, "grid_override", None):
            return self.grid_override
        if self.rule is None:
            return tuple(sorted(set(self.table) | {Fraction(0)}))
        return default_grid(self.named_grades)


def default_grid(named: Iterable = (), P: int = 6, Q: int = 6) -> tuple:
    """Farey grid ``P, Q`` plus the named grades, closed under negation."""
    pts = set(farey_grid(P, Q))
    for g in named:
        g = as_fraction(g)
        pts.update((g, -g))
    pts.add(Fraction(0))
    return tuple(sorted(pts))


def _grid_for(F: GradedFamily, grid) -> tuple:
    if grid is None:
        return F.default_grid()
    g = sorted({as_fraction(x) for x in grid})
    gs = set(g)
    if Fraction(0) not in gs:
        raise FamilyError("grade grid must contain 0")
    for x in g:
        if -x not in gs:
            raise FamilyError(f"grade grid not closed under negation (missing {-x})")
    return tuple(g)


# --- verdicts ---------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    grades: tuple
    relation: str
    cuts: tuple = ()

    def to_json(self) -> dict:
        return {
            "grades": [str(g) for g in self.grades],
            "relation": self.relation,
            "cuts": [str(c) for c in self.cuts],
        }

    def __str__(self):
        g = ", ".join(str(x) for x in self.grades)
        body = f"({g}) {self.relation}"
        return body + "".join(f"\n    {c}" for c in self.cuts)


@dataclass
class TypeVerdict:
    kind: str
    letter: str
    bound: int = DEFAULT_BOUND
    witnesses: list = field(default_factory=list)
    caveat: str = ""
    axioms: dict | None = None
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        if self.letter not in TYPE_I_LETTERS | TYPE_II_LETTERS:
            raise ValueError(f"unknown type letter {self.letter!r}")
        want = "I" if self.letter in TYPE_I_LETTERS else "II"
        if self.kind != want:
            raise ValueError(f"letter {self.letter} forces kind {want}, got {self.kind}")
        if self.letter == "g" and not self.caveat:
            self.caveat = f"letter g is certified only up to bound {self.bound}"

    @classmethod
    def of(cls, letter: str, **kw) -> "TypeVerdict":
        return cls("I" if letter in TYPE_I_LETTERS else "II", letter, **kw)

    def label(self) -> str:
        return f"g up to {self.bound}" if self.letter == "g" else self.letter

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "letter": self.letter,
            "bound": self.bound,
            "witnesses": [w.to_json() for w in self.witnesses],
            "axioms": self.axioms or {},
        }
        if self.caveat:
            out["caveat"] = self.caveat
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


@dataclass
class AxiomReport:
    ok: bool
    checked_ii: int = 0
    checked_iii: int = 0
    axiom: str = ""
    grades: tuple = ()
    cuts: tuple = ()
    message: str = ""

    def __bool__(self):
        return self.ok

    def summary(self) -> dict:
        ii = "pass" if self.ok or self.axiom != "ii" else "fail"
        iii = "pass" if self.ok else ("fail" if self.axiom == "iii" else "not checked")
        if not self.ok and self.axiom == "ii":
            iii = "not checked"
        return {"ii": ii, "iii": iii, "checked_ii": self.checked_ii, "checked_iii": self.checked_iii}

    def to_json(self) -> dict:
        out = {"ok": self.ok, **self.summary()}
        if not self.ok:
            out["failure"] = {
                "axiom": self.axiom,
                "grades": [str(g) for g in self.grades],
                "message": self.message,
                "cuts": [f"{label} = {c}" for label, c in self.cuts],
            }
        return out

    def __str__(self):
        if self.ok:
            return f"axioms pass ({self.checked_ii} reflection checks, {self.checked_iii} product checks)"
        g = ", ".join(str(x) for x in self.grades)
        lines = [f"axiom ({self.axiom}) fails at (g, h) = ({g}): {self.message}"]
        lines += [f"  {label} = {c}" for label, c in self.cuts]
        return "\n".join(lines)


def _pairs(grid):
    # smallest grades first so a reported failure is the most local one
    return sorted(((g, h) for g in grid for h in grid), key=lambda p: (max(abs(p[0]), abs(p[1])), p))


def check_axioms(F: GradedFamily, grid=None) -> AxiomReport:
    """Reflection axiom on every grid grade, product axiom on every grid pair
    whose sum stays in the grid; pairs are visited in sorted order."""
    grid = _grid_for(F, grid)
    if F.cut(0) != F.V:
        raise FamilyError("A_0 must be V")
    gs = set(grid)
    rep = AxiomReport(True)
    for g in sorted(grid, key=lambda x: (abs(x), x)):
        Ag, Am = F.cut(g), F.cut(-g)
        lhs = co_inverse(F.sigma.act(Am, g))
        rep.checked_ii += 1
        if not cut_le(lhs, Ag):
            return AxiomReport(
                False, rep.checked_ii, rep.checked_iii, "ii", (g, -g),
                ((f"A_{g}", Ag), (f"A_{-g}", Am), ("co-inverse of twisted A_-g", lhs)),
                "some value lies outside A_g while its twisted inverse lies outside A_-g",
            )
    for g, h in _pairs(grid):
        s = g + h
        if s not in gs:
            continue
        Ag = F.cut(g)
        rep.checked_iii += 1
        prod = cut_sum(Ag, F.twisted(h, g))
        As = F.cut(s)
        if not cut_le(prod, As):
            return AxiomReport(
                False, rep.checked_ii, rep.checked_iii, "iii", (g, h),
                ((f"A_{g}", Ag), (f"A_{h}", F.cut(h)), (f"A_{g} * A_{h}^sigma", prod), (f"A_{s}", As)),
                "product of the graded pieces escapes A_(g+h)",
            )
    return rep


# --- slices and classification -----------------------------------------------

@dataclass
class CyclicSlice:
    family: GradedFamily
    r: Fraction
    window: int

    @property
    def cuts(self) -> dict:
        return {i: self.family.cut(i * self.r) for i in range(-self.window, self.window + 1)}


def extract_slice(F: GradedFamily, r, N: int = DEFAULT_BOUND) -> CyclicSlice:
    r = as_fraction(r)
    if r <= 0:
        raise FamilyError("slices are taken at positive grades")
    return CyclicSlice(F, r, N)


def m_family(F: GradedFamily, r, N: int = DEFAULT_BOUND) -> dict:
    """``M_{ir}`` for ``|i| <= N``: twisted products of ``A_r`` and their residual duals."""
    r = as_fraction(r)
    if r <= 0:
        raise FamilyError("m_family needs r > 0")
    out = {0: F.V}
    cur = F.V
    for i in range(1, N + 1):
        cur = cut_sum(cur, F.twisted(r, (i - 1) * r))
        out[i] = cur
        out[-i] = F.sigma.act(residual_right(F.V, cur), -i * r)
    return out


def _twisted_inverse(F: GradedFamily, a: ValueVector, r) -> ValueVector:
    g = F.group
    return F.sigma.act_value(g, g.inv(a), -r)


def classify_cyclic(S: CyclicSlice, N: int | None = None) -> TypeVerdict:
    F, r = S.family, S.r
    N = S.window if N is None else N
    if N < 1:
        raise ClassificationError("the slice decision needs a window of at least N = 1")
    g = F.group
    A, Am = F.cut(r), F.cut(-r)
    W = o_left(A)
    closure = cut_closure(A)
    if closure != A:
        return TypeVerdict.of("f", bound=N, witnesses=[
            Witness((r,), "closure of A_r strictly contains A_r", (closure, A))])
    principal, a = is_principal(A)
    if principal:
        Wa = cut_sum(W, Cut.closed(g, a))
        aW = cut_sum(Cut.closed(g, a), F.sigma.act(W, r))
        if Wa != aW:
            letter = "b" if cut_le(aW, Wa) else "c"
            rel = "W a strictly contains a W^sigma" if letter == "b" else "W a strictly inside a W^sigma"
            return TypeVerdict.of(letter, bound=N, witnesses=[Witness((r,), rel, (Wa, aW))])
        inv = Cut.closed(g, _twisted_inverse(F, a, r))
        if W == F.V and Am == inv:
            return TypeVerdict.of("a", bound=N)
        J = radical(W)
        if Am == cut_sum(J, inv):
            if is_idempotent(J):
                letter, rel = "d", "A_-r = J(W) a^-1 with J(W) idempotent"
            elif is_principal(J)[0]:
                letter, rel = "e", "A_-r = J(W) a^-1 with J(W) principal"
            else:
                raise ClassificationError(f"J(W) = {J} is neither idempotent nor principal")
            return TypeVerdict.of(letter, bound=N, witnesses=[Witness((r, -r), rel, (A, Am, J))])
        raise ClassificationError(
            f"slice at r={r}: A_r = W a but A_-r = {Am} matches neither V a^-1 nor J(W) a^-1"
        )
    M = A
    for i in range(1, N + 1):
        if i > 1:
            M = cut_sum(M, F.twisted(r, (i - 1) * r))
        cM = cut_closure(M)
        if is_principal(cM)[0]:
            return TypeVerdict.of("h", bound=N, witnesses=[
                Witness((i * r,), f"closure of M_{i}r is principal", (M, cM))])
    return TypeVerdict.of("g", bound=N, witnesses=[
        Witness((r,), f"closure of M_ir not principal for i <= {N}", (A,))])


def _slice_grades(F: GradedFamily, grid: tuple, count: int = 6) -> list:
    pos = [x for x in grid if x > 0]
    named = [x for x in F.named_grades if x > 0 and x in pos]
    rest = sorted(pos, key=lambda x: (x.denominator, x))
    out = []
    for x in named + rest:
        if x not in out:
            out.append(x)
    return out[:max(count, len(named))]


def _max_ring(rings: Iterable[Cut]) -> Cut:
    best = None
    for w in rings:
        if best is None or cut_le(best, w):
            best = w
    return best


def classify_global(F: GradedFamily, grid=None, N: int = DEFAULT_BOUND) -> TypeVerdict:
    grid = _grid_for(F, grid)
    gs = set(grid)
    pos = [x for x in grid if x > 0]
    strict = None
    for r in pos:
        for s in pos:
            if s < r or r + s not in gs:
                continue
            for sg in (1, -1):
                a, b = sg * r, sg * s
                prod = cut_sum(F.cut(a), F.twisted(b, a))
                if prod != F.cut(a + b):
                    strict = Witness((a, b), "A_g * A_h^sigma strictly inside A_(g+h)", (prod, F.cut(a + b)))
                    break
            if strict:
                break
        if strict:
            break
    if strict is None:
        verdicts = {}
        for r in _slice_grades(F, grid):
            verdicts[r] = classify_cyclic(extract_slice(F, r, N), N)
        letters = {v.letter for v in verdicts.values()}
        if len(letters) > 1:
            detail = ", ".join(f"r={r}: {v.letter}" for r, v in verdicts.items())
            raise ClassificationError(f"slices disagree ({detail})")
        first = next(iter(verdicts.values()))
        first.bound = N
        return first
    rings = {r: o_left(F.cut(r)) for r in grid}
    W = _max_ring(rings.values())
    J = radical(W)
    warnings = []
    if F.designated is not None:
        if rings.get(F.designated, o_left(F.cut(F.designated))) != W:
            warnings.append(f"designated grade {F.designated} does not have O_l(A_t) = W")
    elif not any(w == W for r, w in rings.items() if r != 0):
        warnings.append("no grid grade t with O_l(A_t) = W; the type (II) analysis assumes one exists")
    if is_principal(J)[0]:
        letter, rel = "e", "J(W) is principal"
    elif is_idempotent(J):
        letter, rel = "h", "J(W) is idempotent"
    else:
        raise ClassificationError(f"J(W) = {J} is neither principal nor idempotent")
    return TypeVerdict.of(letter, bound=N, warnings=warnings,
                          witnesses=[strict, Witness((), rel, (W, J))])


# --- builders ----------------------------------------------------------------

def _ring_checks(W: Cut, V: Cut):
    if not W.is_ring():
        raise FamilyError(f"{W} is not an overring")
    if not cut_le(V, W):
        raise FamilyError("W must contain V")


def build_type_e(W: Cut, b_val: ValueVector, f, alpha: ValueVector | None = None,
                 exceptional: Mapping | None = None, *, sigma: SigmaAction | None = None,
                 grid=None, name: str = "A") -> GradedFamily:
    """``A_r = W b^f(r) alpha_r``, with an explicit sub-extension on ``k Z`` when required."""
    group = W.group
    sigma = sigma or SigmaAction()
    V = Cut.closed(group)
    alpha = alpha if alpha is not None else ValueVector()
    _ring_checks(W, V)
    if f.is_zero():
        raise FamilyError("the graded map must be nonzero")
    ex_grades = [as_fraction(k) for k in (exceptional or {})]
    ggrid = default_grid(ex_grades) if grid is None else tuple(sorted({as_fraction(x) for x in grid}))
    map_grid = sorted(set(farey_grid(8, 8)) | set(ggrid))
    rep = check_graded_map(f, map_grid)
    if not rep:
        raise FamilyError(f"not a graded map: {rep}")
    J = radical(W)
    binv = group.inv(b_val)
    if J != cut_sum(W, Cut.closed(group, binv)):
        raise FamilyError(f"v(b^-1) = {binv} does not generate J(W) = {J}")
    pos = [x for x in ggrid if x > 0]
    gs = set(ggrid)

    def wa(r):
        return cut_sum(W, Cut.closed(group, alpha.scale(r)))

    for r in pos:
        if wa(r) != cut_sum(Cut.closed(group, alpha.scale(r)), sigma.act(W, r)):
            raise FamilyError(f"W alpha_r != alpha_r W^sigma at r={r}")
        for s in pos:
            if r + s in gs and cut_sum(wa(r), sigma.act(wa(s), r)) != wa(r + s):
                raise FamilyError(f"alpha is not a grade homomorphism at ({r}, {s})")
    k = smallest_sum_zero(f) if isinstance(f, GradedMap) else None
    case_b = W != V and k is not None
    cf = ClosedFormData(W, b_val, f, alpha, k if case_b else None, None)
    if case_b:
        if not exceptional:
            raise FamilyError(f"W != V and f(k) + f(-k) = 0 at k = {k}: exceptional data on kZ is required")
        ex = {as_fraction(g): c for g, c in exceptional.items()}
        for g, c in ex.items():
            if g == 0 or (g / k).denominator != 1:
                raise FamilyError(f"exceptional grade {g} is not a nonzero multiple of k = {k}")
            lower = cut_sum(W, Cut.closed(group, cf.base_value(group, g, -1)))
            upper = cut_sum(W, Cut.closed(group, cf.base_value(group, g)))
            if not (cut_le(lower, c) and cut_le(c, upper)):
                raise SandwichError(f"exceptional A_{g} = {c} violates W b^(f-1) alpha <= A <= W b^f alpha")
        for g in ggrid:
            if g != 0 and (g / k).denominator == 1 and g not in ex:
                raise FamilyError(f"exceptional data missing at grade {g}")
        cf = ClosedFormData(W, b_val, f, alpha, k, ex)
    elif exceptional:
        raise FamilyError("exceptional data only applies when W != V and f(k) + f(-k) = 0 for some k")

    def rule(r):
        if cf.exceptional and (r / cf.k).denominator == 1:
            if r not in cf.exceptional:
                raise FamilyError(f"grade {r} lies on kZ outside the exceptional table")
            return cf.exceptional[r]
        return cut_sum(W, Cut.closed(group, cf.base_value(group, r)))

    F = GradedFamily(group, rule, sigma, kind="closedform", name=name, closed_form=cf,
                     named_grades=ex_grades)
    rep = check_axioms(F, ggrid)
    if not rep:
        raise FamilyError(f"closed form fails the axioms:\n{rep}")
    return F


@dataclass
class TypeHResult:
    A: GradedFamily
    M: GradedFamily
    warnings: list


def build_type_h(W: Cut, h0, c: Callable[[Fraction], ValueVector], on_H: Callable[[Fraction], Cut],
                 off_H: Callable[[Fraction], Cut], *, sigma: SigmaAction | None = None,
                 grid=None, name: str = "A", designated=None) -> TypeHResult:
    """Assemble ``A`` from its pieces on and off ``H = h0 Z`` and the companion ``M``;
    every structural condition is verified on the grade grid."""
    group = W.group
    sigma = sigma or SigmaAction()
    V = Cut.closed(group)
    _ring_checks(W, V)
    if h0 is None:
        raise FamilyError("H = Q is not a proper subgroup")
    h0 = as_fraction(h0)
    if h0 == 0:
        raise FamilyError("H = {0} is not allowed")
    h0 = abs(h0)
    J = radical(W)
    if not is_idempotent(J):
        raise FamilyError("J(W) is principal; type (h) needs an idempotent J(W)")

    def inH(r):
        return (r / h0).denominator == 1

    def rule(r):
        return on_H(r) if inH(r) else off_H(r)

    ggrid = default_grid([h0, designated] if designated is not None else [h0]) if grid is None \
        else tuple(sorted({as_fraction(x) for x in grid}))
    A = GradedFamily(group, rule, sigma, kind="rule", name=name, h0=h0,
                     named_grades=[h0], designated=designated)
    Hg = [s for s in ggrid if inH(s)]
    Hs = set(Hg)

    def Wc(s):
        return cut_sum(W, Cut.closed(group, c(s)))

    for s in Hg:
        if s == 0:
            continue
        if cut_closure(cut_sum(J, A.cut(s))) != Wc(s):
            raise FamilyError(f"closure of J(W) A_s is not W c_s at s={s}")
        if Wc(s) != cut_sum(Cut.closed(group, c(s)), sigma.act(W, s)):
            raise FamilyError(f"W c_s != c_s W^sigma at s={s}")
        if Wc(-s) != cut_sum(W, Cut.closed(group, _twisted_inverse(A, c(s), s))):
            raise FamilyError(f"W c_-s is not the twisted inverse of W c_s at s={s}")
        for t in Hg:
            if s + t in Hs and t != 0:
                if cut_sum(Wc(s), sigma.act(Wc(t), s)) != Wc(s + t):
                    raise FamilyError(f"W c is not multiplicative at ({s}, {t})")
    for s in ggrid:
        if inH(s):
            continue
        As = A.cut(s)
        if cut_closure(As) != As or cut_sum(W, As) != As:
            raise FamilyError(f"A_s is not a closed W-ideal at s={s} off H")
        if is_principal(As)[0]:
            raise FamilyError(f"A_s is principal at s={s} off H")
        if o_right(As) != sigma.act(W, s):
            raise FamilyError(f"O_r(A_s) != W^sigma(s) at s={s}")
        if is_principal(cut_closure(cut_sum(J, As)))[0]:
            raise FamilyError(f"closure of J(W) A_s is principal at s={s} although s is off H")
    B = GradedFamily(group, A.cut, sigma, name=name + "|H", h0=h0)
    rep = check_axioms(B, Hg)
    if not rep:
        raise FamilyError(f"restriction to H fails the axioms:\n{rep}")
    rep = check_axioms(A, ggrid)
    if not rep:
        raise FamilyError(f"family fails the axioms:\n{rep}")

    def m_rule(r):
        if not inH(r):
            return A.cut(r)
        return cut_sum(J, Cut.closed(group, c(r))) if r > 0 else Wc(r)

    M = GradedFamily(group, m_rule, sigma, name="M", h0=h0, named_grades=[h0])
    rep = check_axioms(M, ggrid)
    if not rep:
        raise FamilyError(f"companion M fails the axioms:\n{rep}")
    warnings = []
    rings = [o_left(A.cut(t)) for t in ggrid if t != 0]
    Wg = _max_ring(rings)
    if Wg != W:
        raise FamilyError(f"union of left orders is {Wg}, not W = {W}")
    if designated is None and not any(w == W for w in rings):
        warnings.append("no grid grade t with O_l(A_t) = W")
    return TypeHResult(A, M, warnings)


# --- sup diagnostics -----------------------------------------------------------

@dataclass
class SupDiagnostics:
    r: Fraction
    q: int
    g_values: list
    h_values: list
    l_running: list
    k_running: list
    trend: str

    @property
    def l_estimate(self):
        return self.l_running[-1]

    @property
    def k_estimate(self):
        return self.k_running[-1]

    def to_json(self) -> dict:
        return {
            "r": str(self.r), "q": self.q, "l_estimate": self.l_estimate,
            "k_estimate": self.k_estimate, "trend": self.trend,
            "l_running": self.l_running, "k_running": self.k_running,
        }


def _running_max(xs):
    out, m = [], None
    for x in xs:
        m = x if m is None else max(m, x)
        out.append(m)
    return out


def _settles(run: list) -> bool:
    half = len(run) // 2
    return len(run) >= 4 and run[half] == run[-1]


def _nice_values(f, r: Fraction, q: int, n: int) -> tuple[int, int]:
    step = Fraction(1, n * q)
    i = r / step
    g = f.eval(r) - int(i) * f.eval(step)
    h = f.eval(-r) - int(i) * f.eval(-step)
    return g, h


def sup_diagnostics(F: GradedFamily, r, N_sup: int = 64) -> SupDiagnostics:
    """Values of the nice maps at ``r`` on the refining lattices ``Z/(nq)``."""
    if F.closed_form is None:
        raise FamilyError("sup diagnostics need a closed-form family")
    r = as_fraction(r)
    if r <= 0:
        raise FamilyError("sup diagnostics are taken at r > 0")
    f = F.closed_form.f
    q = r.denominator
    gs, hs = [], []
    for n in range(1, N_sup + 1):
        g, h = _nice_values(f, r, q, n)
        gs.append(g)
        hs.append(h)
    lr, kr = _running_max(gs), _running_max(hs)
    l_fin, k_fin = _settles(lr), _settles(kr)
    if l_fin and not k_fin:
        trend = "l finite, k diverges"
    elif k_fin and not l_fin:
        trend = "k finite, l diverges"
    elif l_fin and k_fin:
        trend = "both settle"
    else:
        trend = "both grow"
    return SupDiagnostics(r, q, gs, hs, lr, kr, trend)


def certify_divergence(F: GradedFamily, diag: SupDiagnostics, thresholds: Iterable[int]) -> list:
    """For each threshold ``M`` evaluate the dual nice map at ``n = M + m + 2`` and
    check it against the lower bound ``n * numerator(r) - m - 1 > M``, where ``m``
    is the settled value of the finite side.  Returns ``(M, n, value, bound, ok)``."""
    f = F.closed_form.f
    if diag.trend.startswith("l finite"):
        m, pick = diag.l_estimate, 1
    elif diag.trend.startswith("k finite"):
        m, pick = diag.k_estimate, 0
    else:
        raise FamilyError(f"no finite side to certify from (trend: {diag.trend})")
    out = []
    for M in thresholds:
        n = M + max(m, 0) + 2
        val = _nice_values(f, diag.r, diag.q, n)[pick]
        bound = n * diag.r.numerator - m - 1
        out.append((M, n, val, bound, val >= bound and val > M))
    return out
