"""The ``.gve`` instance language: parser, printer and family builder.

A document names a value group, optional declarations and one family::

    valuegroup lex z H=1
    sigma rate 1
    expect h
    family A:
      grade g>0 -> cut(>= vec{z: -g, 0: -g*pi})
      grade g<0 -> cut(> vec{z: -g, 0: -g*pi})

Cut expressions are products of factors: ``cut(>= HEAD)``, ``cut(> HEAD)``,
``cut(> HEAD tail -inf before IDX)``, ``ring(after IDX)``, ``radical(W)``, a
declared ring name (``V`` is built in), or an element power ``b^(fd(1))`` /
``alpha^g``.  Scalars are linear in the grade variable and ``pi``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .cuts import Cut, CutError, cut_sum, radical
from .extensions import FamilyError, GradedFamily, SigmaAction, build_type_e
from .groups import END, KindMismatch, ValueGroup, ValueVector
from .maps import Family, GradedMap
from .scalars import PiLinear, format_pilinear

__all__ = [
    "DslError",
    "Lin",
    "Document",
    "Instance",
    "parse",
    "print_doc",
    "build",
    "load",
    "parse_pilinear",
]

LETTERS = "abcdefgh"


class DslError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, token: str = ""):
        super().__init__(message)
        self.message, self.line, self.col, self.token = message, line, col, token

    def __str__(self):
        where = f"{self.line}:{self.col}: " if self.line else ""
        tok = f" (at {self.token!r})" if self.token else ""
        return f"{where}{self.message}{tok}"


# --- tokens -------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>->|>=|[><*^(){},:=+\-/])"
)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DslError("unexpected character", line, pos - start + 1, text[pos])
        kind = m.lastgroup
        if kind == "nl":
            toks.append(Tok("nl", "\n", line, pos - start + 1))
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    toks.append(Tok("nl", "\n", line, pos - start + 1))
    toks.append(Tok("eof", "", line, pos - start + 1))
    return toks


# --- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Lin:
    """``const + coef * var`` with ``a + b*pi`` coefficients."""

    const: PiLinear = PiLinear()
    coef: PiLinear = PiLinear()

    def at(self, g) -> PiLinear:
        return self.const + self.coef * Fraction(g)

    def is_const(self) -> bool:
        return self.coef.is_zero()

    def __add__(self, o):
        return Lin(self.const + o.const, self.coef + o.coef)

    def __neg__(self):
        return Lin(-self.const, -self.coef)


@dataclass(frozen=True)
class VecHead:
    entries: tuple  # ((key, Lin), ...) with key "z" or Fraction


@dataclass(frozen=True)
class ScalarHead:
    value: Lin


@dataclass(frozen=True)
class Tail:
    sign: int
    side: int
    index: object  # "z" or Lin


@dataclass(frozen=True)
class CutLit:
    strict: bool
    head: object
    tail: Tail | None = None


@dataclass(frozen=True)
class RingLit:
    side: int = 0
    index: object = None  # None means end


@dataclass(frozen=True)
class Ref:
    name: str
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Radical:
    name: str
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class MapCall:
    family: str
    d: Lin


@dataclass(frozen=True)
class Power:
    name: str
    exponent: object  # MapCall or Lin
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Pattern:
    var: str
    sign: int
    hmode: str = ""  # "", "in", "notin"


@dataclass(frozen=True)
class Case:
    pattern: object  # Pattern or Fraction
    expr: Product
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class FamilyDecl:
    name: str
    cases: tuple
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ClosedFormDecl:
    name: str
    ring: str
    elem: str
    map: MapCall
    alpha: str | None = None
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Header:
    kind: str
    levels: tuple = ()
    z_tier: bool = False
    h0: Fraction | None = None


@dataclass(frozen=True)
class Document:
    header: Header
    family: object
    sigma: Fraction | None = None
    rings: tuple = ()
    elems: tuple = ()
    expect: str | None = None
    designate: Fraction | None = None
    coefficients: str | None = None


# --- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def err(self, msg: str, tok: Tok | None = None):
        t = tok or self.tok
        raise DslError(msg, t.line, t.col, t.text if t.kind != "nl" else "end of line")

    def next(self) -> Tok:
        t = self.tok
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "name")

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.err(f"expected {text!r}")
        return self.next()

    def name(self) -> Tok:
        if self.tok.kind != "name":
            self.err("expected a name")
        return self.next()

    def skip_nl(self):
        while self.tok.kind == "nl":
            self.next()

    def end_line(self):
        if self.tok.kind not in ("nl", "eof"):
            self.err("unexpected token")
        self.skip_nl()

    # numbers and linear expressions
    def rat(self) -> Fraction:
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        if self.tok.kind != "int":
            self.err("expected a number")
        v = Fraction(int(self.next().text))
        if self.at("/"):
            self.next()
            if self.tok.kind != "int":
                self.err("expected a denominator")
            t = self.tok
            den = int(self.next().text)
            if den == 0:
                self.err("zero denominator", t)
            v /= den
        return -v if neg else v

    def lin(self, var: str | None) -> Lin:
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        elif self.at("+"):
            self.next()
        out = self.term(var)
        if neg:
            out = -out
        while self.at("+") or self.at("-"):
            sgn = self.next().text
            t = self.term(var)
            out = out + (t if sgn == "+" else -t)
        return out

    def term(self, var: str | None) -> Lin:
        c, npi, nvar = Fraction(1), 0, 0
        while True:
            t = self.tok
            if t.kind == "int":
                c *= self.rat()
            elif t.kind == "name" and t.text == "pi":
                self.next()
                npi += 1
            elif t.kind == "name" and var is not None and t.text == var:
                self.next()
                nvar += 1
            elif t.kind == "name":
                self.err("unknown symbol in expression" if var else "no grade variable here")
            else:
                self.err("expected a number, pi or the grade variable")
            if npi > 1 or nvar > 1:
                self.err("expression is not linear", t)
            if not self.at("*") or self.toks[self.i + 1].kind not in ("int", "name"):
                break
            nxt = self.toks[self.i + 1]
            if nxt.kind == "name" and nxt.text != "pi" and nxt.text != var:
                break
            self.next()
        val = PiLinear(0, c) if npi else PiLinear(c)
        return Lin(PiLinear(), val) if nvar else Lin(val)

    def const_lin(self) -> Lin:
        lin = self.lin(None)
        return lin

    # heads, points, cuts
    def key(self):
        if self.at("z"):
            self.next()
            return "z"
        return self.rat()

    def head(self, var):
        if self.at("vec"):
            self.next()
            self.expect("{")
            entries = []
            seen = set()
            while not self.at("}"):
                t = self.tok
                k = self.key()
                if k in seen:
                    self.err("index repeated", t)
                seen.add(k)
                self.expect(":")
                entries.append((k, self.lin(var)))
                if not self.at("}"):
                    self.expect(",")
            self.next()
            return VecHead(tuple(entries))
        return ScalarHead(self.lin(var))

    def index(self, var):
        if self.at("z"):
            self.next()
            return "z"
        t = self.tok
        lin = self.lin(var)
        if not (lin.const.is_rational and lin.coef.is_rational):
            self.err("an index must be rational", t)
        return lin

    def side(self) -> int:
        if self.at("before"):
            self.next()
            return -1
        if self.at("after"):
            self.next()
            return 1
        self.err("expected 'before' or 'after'")

    def factor(self, var):
        t = self.tok
        if self.at("cut"):
            self.next()
            self.expect("(")
            if self.at(">="):
                strict = False
            elif self.at(">"):
                strict = True
            else:
                self.err("expected '>=' or '>'")
            self.next()
            head = self.head(var)
            tail = None
            if self.at("tail"):
                if not strict:
                    self.err("a tail cut is written with '>'", t)
                self.next()
                if self.at("-"):
                    sign = -1
                elif self.at("+"):
                    sign = 1
                else:
                    self.err("expected '-inf' or '+inf'")
                self.next()
                self.expect("inf")
                side = self.side()
                tail = Tail(sign, side, self.index(var))
            self.expect(")")
            return CutLit(strict, head, tail)
        if self.at("ring"):
            self.next()
            self.expect("(")
            if self.at("end"):
                self.next()
                lit = RingLit()
            else:
                side = self.side()
                lit = RingLit(side, self.index(var))
            self.expect(")")
            return lit
        if self.at("radical"):
            self.next()
            self.expect("(")
            n = self.name()
            self.expect(")")
            return Radical(n.text, (n.line, n.col))
        n = self.name()
        if self.at("^"):
            self.next()
            if self.at("("):
                self.next()
                if self.tok.text in [f.value for f in Family]:
                    exp = self.mapcall()
                else:
                    exp = self.lin(var)
                self.expect(")")
            elif self.tok.kind == "int":
                exp = Lin(PiLinear(self.rat()))
            elif var is not None and self.at(var):
                self.next()
                exp = Lin(PiLinear(), PiLinear(1))
            else:
                self.err("expected an exponent")
            return Power(n.text, exp, (n.line, n.col))
        return Ref(n.text, (n.line, n.col))

    def mapcall(self) -> MapCall:
        t = self.name()
        if t.text not in [f.value for f in Family]:
            self.err("expected fd, fd1 or fdm1", t)
        self.expect("(")
        d = self.const_lin()
        self.expect(")")
        return MapCall(t.text, d)

    def product(self, var) -> Product:
        fs = [self.factor(var)]
        while self.at("*"):
            self.next()
            fs.append(self.factor(var))
        return Product(tuple(fs))

    # statements
    def header(self) -> Header:
        self.skip_nl()
        self.expect("valuegroup")
        t = self.name()
        kind = t.text
        if kind in ("rational", "pi"):
            self.expect("levels")
            levels = [self.name().text]
            while self.at(","):
                self.next()
                levels.append(self.name().text)
            allowed = {"Q", "Z"} if kind == "rational" else {"Q", "Z", "QPI"}
            bad = [l for l in levels if l not in allowed]
            if bad:
                self.err(f"level must be one of {sorted(allowed)}", self.toks[self.i - 1])
            h = Header(kind, tuple(levels))
        elif kind == "lex":
            z, h0 = False, None
            if self.at("z"):
                self.next()
                z = True
            if self.at("H"):
                self.next()
                self.expect("=")
                t2 = self.tok
                h0 = self.rat()
                if h0 <= 0:
                    self.err("H generator must be positive", t2)
            h = Header("lex", (), z, h0)
        else:
            self.err("value group kind must be rational, pi or lex", t)
        self.end_line()
        return h

    def document(self) -> Document:
        header = self.header()
        decl = dict(sigma=None, rings=[], elems=[], expect=None, designate=None, coefficients=None)
        family = None
        while self.tok.kind != "eof":
            t = self.tok
            if self.at("sigma"):
                self.next()
                self.expect("rate")
                if decl["sigma"] is not None:
                    self.err("sigma declared twice", t)
                decl["sigma"] = self.rat()
                self.end_line()
            elif self.at("ring"):
                self.next()
                n = self.name()
                self.expect("=")
                decl["rings"].append((n.text, self.product(None), (n.line, n.col)))
                self.end_line()
            elif self.at("elem"):
                self.next()
                n = self.name()
                self.expect("=")
                decl["elems"].append((n.text, self.head(None), (n.line, n.col)))
                self.end_line()
            elif self.at("expect"):
                self.next()
                n = self.name()
                if n.text not in LETTERS or len(n.text) != 1:
                    self.err("expected a type letter a..h", n)
                decl["expect"] = n.text
                self.end_line()
            elif self.at("designate"):
                self.next()
                self.expect("t")
                self.expect("=")
                decl["designate"] = self.rat()
                self.end_line()
            elif self.at("coefficients"):
                self.next()
                n = self.name()
                if n.text not in ("commutative", "noncommutative"):
                    self.err("expected 'commutative' or 'noncommutative'", n)
                if n.text == "noncommutative":
                    self.err("noncommutative coefficient division rings are not supported", n)
                decl["coefficients"] = n.text
                self.end_line()
            elif self.at("family"):
                if family is not None:
                    self.err("only one family per document", t)
                family = self.family()
            else:
                self.err("expected a declaration")
        if family is None:
            self.err("document declares no family")
        return Document(
            header, family, decl["sigma"],
            tuple((n, e) for n, e, _ in decl["rings"]),
            tuple((n, h) for n, h, _ in decl["elems"]),
            decl["expect"], decl["designate"], decl["coefficients"],
        ), decl

    def family(self):
        t = self.expect("family")
        n = self.name()
        if self.at("="):
            self.next()
            self.expect("closedform")
            self.expect("(")
            ring = self.name().text
            self.expect(",")
            elem = self.name().text
            self.expect(",")
            mc = self.mapcall()
            alpha = None
            if self.at(","):
                self.next()
                alpha = self.name().text
            self.expect(")")
            self.end_line()
            return ClosedFormDecl(n.text, ring, elem, mc, alpha, (t.line, t.col))
        self.expect(":")
        self.end_line()
        cases = []
        while self.at("grade"):
            ct = self.next()
            if self.tok.kind == "name":
                vt = self.next()
                var = vt.text
                if var in ("pi", "z", "H", "vec", "inf"):
                    self.err("reserved word used as the grade variable", vt)
                if self.at(">"):
                    sign = 1
                elif self.at("<"):
                    sign = -1
                else:
                    self.err("expected '>' or '<'")
                self.next()
                zt = self.tok
                if self.rat() != 0:
                    self.err("patterns compare the grade with 0", zt)
                hmode = ""
                if self.at("in") or self.at("notin"):
                    hmode = self.next().text
                    self.expect("H")
                pat = Pattern(var, sign, hmode)
            else:
                var = None
                pt = self.tok
                pat = self.rat()
                if pat == 0:
                    self.err("A_0 is always V", pt)
            self.expect("->")
            cases.append(Case(pat, self.product(var), (ct.line, ct.col)))
            self.end_line()
        if not cases:
            self.err("family needs at least one 'grade' case")
        return FamilyDecl(n.text, tuple(cases), (t.line, t.col))


def parse(text: str) -> Document:
    doc, _ = _Parser(text).document()
    _validate(doc)
    return doc


# --- validation -----------------------------------------------------------------

def _validate(doc: Document):
    names = {"V"}
    for n, _ in doc.rings:
        if n == "V":
            raise DslError("V is the base ring and cannot be redeclared", token=n)
        if n in names:
            raise DslError(f"name {n} declared twice", token=n)
        names.add(n)
    elems = set()
    for n, _ in doc.elems:
        if n in names or n in elems:
            raise DslError(f"name {n} declared twice", token=n)
        elems.add(n)
    if doc.coefficients == "noncommutative":
        raise DslError("noncommutative coefficient division rings are not supported", token="noncommutative")
    fam = doc.family
    if isinstance(fam, ClosedFormDecl):
        for n, pool in ((fam.ring, names), (fam.elem, elems)):
            if n not in pool:
                raise DslError(f"undeclared name {n}", *fam.pos, n)
        if fam.alpha is not None and fam.alpha not in elems:
            raise DslError(f"undeclared name {fam.alpha}", *fam.pos, fam.alpha)
        return
    for i, (n, prod) in enumerate(doc.rings):
        _check_refs(prod, {"V"} | {m for m, _ in doc.rings[:i]}, elems)
    pats = []
    for case in fam.cases:
        _check_refs(case.expr, names, elems)
        if isinstance(case.pattern, Pattern):
            if case.pattern.hmode and doc.header.h0 is None:
                raise DslError("'in H' needs a value group declared with H=", *case.pos, "H")
            pats.append(case)
    if pats:
        for sign in (1, -1):
            modes = {c.pattern.hmode for c in pats if c.pattern.sign == sign}
            if "" not in modes and modes != {"in", "notin"}:
                side = "g>0" if sign > 0 else "g<0"
                raise DslError(f"family is not total: no case covers {side}", *fam.pos, fam.name)
        seen: dict = {}
        for c in pats:
            modes = seen.setdefault(c.pattern.sign, set())
            if c.pattern.hmode in modes or "" in modes or (modes and c.pattern.hmode == ""):
                raise DslError("overlapping grade cases", *c.pos, "grade")
            modes.add(c.pattern.hmode)
    lits = [c.pattern for c in fam.cases if not isinstance(c.pattern, Pattern)]
    if len(set(lits)) != len(lits):
        raise DslError("grade listed twice", *fam.pos, fam.name)
    if not pats:
        missing = [g for g in lits if -g not in lits]
        if missing:
            raise DslError(f"table is not closed under negation (missing {-missing[0]})", *fam.pos, fam.name)


def _check_refs(prod: Product, rings: set, elems: set):
    for f in prod.factors:
        if isinstance(f, (Ref, Radical)) and f.name not in rings:
            raise DslError(f"undeclared ring {f.name}", *f.pos, f.name)
        if isinstance(f, Power) and f.name not in elems:
            raise DslError(f"undeclared element {f.name}", *f.pos, f.name)


# --- printer ------------------------------------------------------------------

def _fmt_rat(x: Fraction) -> str:
    return str(x)


def _fmt_lin(lin: Lin, var: str | None) -> str:
    parts = []

    def add(c: Fraction, sym: str):
        if c == 0:
            return
        mag = abs(c)
        body = sym if (mag == 1 and sym) else (f"{mag}*{sym}" if sym else str(mag))
        parts.append(("-" if c < 0 else "+", body))

    add(lin.const.a, "")
    add(lin.const.b, "pi")
    if var is not None:
        add(lin.coef.a, var)
        add(lin.coef.b, f"{var}*pi")
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


def _fmt_key(k) -> str:
    return "z" if k == "z" else _fmt_rat(k)


def _fmt_head(h, var) -> str:
    if isinstance(h, ScalarHead):
        return _fmt_lin(h.value, var)
    return "vec{" + ", ".join(f"{_fmt_key(k)}: {_fmt_lin(v, var)}" for k, v in h.entries) + "}"


def _fmt_index(idx, var) -> str:
    return "z" if idx == "z" else _fmt_lin(idx, var)


def _fmt_factor(f, var) -> str:
    if isinstance(f, CutLit):
        rel = ">" if f.strict else ">="
        s = f"cut({rel} {_fmt_head(f.head, var)}"
        if f.tail is not None:
            side = "before" if f.tail.side < 0 else "after"
            s += f" tail {'-' if f.tail.sign < 0 else '+'}inf {side} {_fmt_index(f.tail.index, var)}"
        return s + ")"
    if isinstance(f, RingLit):
        if f.index is None:
            return "ring(end)"
        return f"ring({'before' if f.side < 0 else 'after'} {_fmt_index(f.index, var)})"
    if isinstance(f, Radical):
        return f"radical({f.name})"
    if isinstance(f, Ref):
        return f.name
    if isinstance(f, Power):
        if isinstance(f.exponent, MapCall):
            return f"{f.name}^({_fmt_mapcall(f.exponent)})"
        return f"{f.name}^({_fmt_lin(f.exponent, var)})"
    raise TypeError(f)


def _fmt_mapcall(m: MapCall) -> str:
    return f"{m.family}({_fmt_lin(m.d, None)})"


def _fmt_product(p: Product, var) -> str:
    return " * ".join(_fmt_factor(f, var) for f in p.factors)


def print_doc(doc: Document) -> str:
    h = doc.header
    if h.kind == "lex":
        head = "valuegroup lex" + (" z" if h.z_tier else "") + (f" H={h.h0}" if h.h0 is not None else "")
    else:
        head = f"valuegroup {h.kind} levels {','.join(h.levels)}"
    lines = [head]
    if doc.coefficients:
        lines.append(f"coefficients {doc.coefficients}")
    if doc.sigma is not None:
        lines.append(f"sigma rate {doc.sigma}")
    for n, hd in doc.elems:
        lines.append(f"elem {n} = {_fmt_head(hd, None)}")
    for n, p in doc.rings:
        lines.append(f"ring {n} = {_fmt_product(p, None)}")
    if doc.expect:
        lines.append(f"expect {doc.expect}")
    if doc.designate is not None:
        lines.append(f"designate t = {doc.designate}")
    fam = doc.family
    if isinstance(fam, ClosedFormDecl):
        extra = f", {fam.alpha}" if fam.alpha else ""
        lines.append(f"family {fam.name} = closedform({fam.ring}, {fam.elem}, {_fmt_mapcall(fam.map)}{extra})")
    else:
        lines.append(f"family {fam.name}:")
        for c in fam.cases:
            if isinstance(c.pattern, Pattern):
                p = c.pattern
                pat = f"{p.var}{'>' if p.sign > 0 else '<'}0" + (f" {p.hmode} H" if p.hmode else "")
                var = p.var
            else:
                pat, var = _fmt_rat(c.pattern), None
            lines.append(f"  grade {pat} -> {_fmt_product(c.expr, var)}")
    return "\n".join(lines) + "\n"


# --- evaluation -----------------------------------------------------------------

@dataclass
class Instance:
    doc: Document
    group: ValueGroup
    family: GradedFamily
    rings: dict
    elems: dict

    @property
    def expected(self):
        return self.doc.expect


def _group(h: Header) -> ValueGroup:
    if h.kind == "lex":
        return ValueGroup("lex", (), h.h0, h.z_tier)
    return ValueGroup(h.kind, h.levels)


def _key(k):
    return "z" if k == "z" else k


def _head_value(group: ValueGroup, h, g) -> ValueVector:
    if isinstance(h, ScalarHead):
        return ValueVector({0: h.value.at(g)})
    return ValueVector({_key(k): v.at(g) for k, v in h.entries})


def _point(idx, side, g):
    if idx == "z":
        return (0, Fraction(0), side)
    v = idx.at(g)
    return (1, v.a, side)


def _ring_cut(group, lit: RingLit, g):
    if lit.index is None:
        return Cut.ring(group, END)
    return Cut.ring(group, _point(lit.index, lit.side, g))


def _eval_product(inst_rings, elems, group, prod: Product, g, fmaps) -> Cut:
    acc = None
    for f in prod.factors:
        if isinstance(f, CutLit):
            head = _head_value(group, f.head, g)
            if f.tail is None:
                c = Cut(group, head, 1 if f.strict else -1, END)
            else:
                c = Cut(group, head, f.tail.sign, _point(f.tail.index, f.tail.side, g))
        elif isinstance(f, RingLit):
            c = _ring_cut(group, f, g)
        elif isinstance(f, Radical):
            c = radical(inst_rings[f.name])
        elif isinstance(f, Ref):
            c = inst_rings[f.name]
        else:
            base = elems[f.name]
            if isinstance(f.exponent, MapCall):
                n = fmaps[f.exponent].eval(g)
            else:
                e = f.exponent.at(g)
                if not e.is_rational:
                    raise DslError("element exponents must be rational", *f.pos, f.name)
                n = e.a
            if base.z != 0 and Fraction(n).denominator != 1:
                raise DslError("fractional power of an element with a z part", *f.pos, f.name)
            c = Cut.closed(group, _power(group, base, n))
        acc = c if acc is None else cut_sum(acc, c)
    return acc


def _power(group: ValueGroup, base: ValueVector, n) -> ValueVector:
    if base.z == 0 or not group.z_tier:
        return base.scale(n)
    n = int(n)
    b = base if n >= 0 else group.inv(base)
    out = group.identity()
    for _ in range(abs(n)):
        out = group.mul(out, b)
    return out


def _mapcall(m: MapCall) -> GradedMap:
    return GradedMap(Family(m.family), m.d.const)


def build(doc: Document) -> Instance:
    try:
        group = _group(doc.header)
    except ValueError as e:
        raise DslError(str(e)) from None
    sigma = SigmaAction(doc.sigma or 0)
    if doc.sigma and group.is_line:
        raise DslError("a nonzero sigma rate needs a lex value group", token="sigma")
    elems, rings = {}, {"V": Cut.closed(group)}
    try:
        for n, h in doc.elems:
            v = _head_value(group, h, 0)
            group.check(v)
            if not group.contains(v):
                raise DslError(f"element {n} = {v} is not a value of {group.describe()}", token=n)
            elems[n] = v
        for n, prod in doc.rings:
            c = _eval_product(rings, elems, group, prod, 0, {})
            if not c.is_ring():
                raise DslError(f"{n} = {c} is not a ring cut", token=n)
            rings[n] = c
    except (KindMismatch, CutError) as e:
        raise DslError(str(e)) from None
    fam = doc.family
    if isinstance(fam, ClosedFormDecl):
        try:
            F = build_type_e(rings[fam.ring], elems[fam.elem], _mapcall(fam.map),
                             elems.get(fam.alpha), sigma=sigma, name=fam.name)
        except FamilyError as e:
            raise DslError(str(e), *fam.pos, fam.name) from None
        F.expected = doc.expect
        F.designated = doc.designate
        return Instance(doc, group, F, rings, elems)
    fmaps = {}
    for c in fam.cases:
        for f in c.expr.factors:
            if isinstance(f, Power) and isinstance(f.exponent, MapCall):
                fmaps[f.exponent] = _mapcall(f.exponent)
    lits = {c.pattern: c for c in fam.cases if not isinstance(c.pattern, Pattern)}
    pats = [c for c in fam.cases if isinstance(c.pattern, Pattern)]
    h0 = doc.header.h0

    def pick(r):
        if r in lits:
            return lits[r]
        for c in pats:
            p = c.pattern
            if (r > 0) != (p.sign > 0):
                continue
            if p.hmode:
                inH = (r / h0).denominator == 1
                if (p.hmode == "in") != inH:
                    continue
            return c
        return None

    def rule(r):
        c = pick(r)
        if c is None:
            raise FamilyError(f"grade {r} outside the table of {fam.name}")
        try:
            return _eval_product(rings, elems, group, c.expr, r, fmaps)
        except (KindMismatch, CutError) as e:
            raise DslError(f"grade {r}: {e}", *c.pos, "grade") from None

    if pats:
        F = GradedFamily(group, rule, sigma, kind="rule", name=fam.name, h0=h0,
                         named_grades=list(lits), designated=doc.designate, expected=doc.expect)
    else:
        table = {r: rule(r) for r in lits}
        F = GradedFamily(group, None, sigma, kind="table", name=fam.name, table=table, h0=h0,
                         designated=doc.designate, expected=doc.expect)
    return Instance(doc, group, F, rings, elems)


def load(text: str) -> Instance:
    return build(parse(text))


def parse_pilinear(text: str) -> PiLinear:
    """Parse a constant such as ``1/3``, ``pi``, ``2 - 1/2*pi``."""
    p = _Parser(text)
    lin = p.lin(None)
    if p.tok.kind not in ("nl", "eof"):
        p.err("unexpected token")
    return lin.const


def format_constant(x: PiLinear) -> str:
    return format_pilinear(x)
