"""Totally ordered value groups and their elements.

Three shapes of group are supported:

``rational``
    finitely many lexicographic levels, each with values in Q or Z
    (``levels=("Q",)`` is the rational line, ``("Q", "Z")`` a rank-two group
    whose bottom level is discrete).
``pi``
    like ``rational`` but level entries may be any ``a + b*pi``.
``lex``
    finite-support vectors indexed by Q, smallest index dominant.  Entries live
    in ``Q + H*pi`` with ``H = h0*Z`` (or all of ``Q + Q*pi``).  With
    ``z_tier=True`` a further coordinate ``z`` dominates every rational index;
    it records the degree in the skew variable Z, and the group law twists the
    right factor by the index shift of the left factor's ``z``.

Indices are stored as sort keys ``(tier, idx)``: ``z`` is ``(0, 0)``, a
rational index ``q`` (or a level number) is ``(1, q)``.  Cut boundaries refer
to *points* between indices, ``(tier, idx, side)`` with ``side`` -1 (just
before) or +1 (just after); :data:`END` lies after every index.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .scalars import Ordering, PiLinear, as_fraction, format_pilinear, pilinear_cmp

__all__ = [
    "END",
    "Z_KEY",
    "KindMismatch",
    "ValueGroup",
    "ValueVector",
    "GroupAutomorphism",
    "GenPoly",
    "vec_cmp",
    "vec_twist",
    "valuation",
    "quotient_valuation",
]

Z_KEY = (0, Fraction(0))
END = (2, Fraction(0), 0)


class KindMismatch(ValueError):
    pass


def make_key(k) -> tuple[int, Fraction]:
    if isinstance(k, tuple):
        return k
    if k == "z":
        return Z_KEY
    return (1, as_fraction(k))


def key_label(key) -> str:
    return "z" if key[0] == 0 else str(key[1])


class ValueVector:
    """Finite-support element of a value group."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Mapping | Iterable = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        acc: dict = {}
        for k, v in entries:
            key = make_key(k)
            acc[key] = acc.get(key, PiLinear()) + PiLinear.coerce(v)
        items = tuple(sorted((k, v) for k, v in acc.items() if not v.is_zero()))
        object.__setattr__(self, "entries", items)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ValueVector is immutable")

    @classmethod
    def scalar(cls, x) -> "ValueVector":
        return cls({0: x})

    def as_dict(self) -> dict:
        return dict(self.entries)

    def get(self, key) -> PiLinear:
        key = make_key(key)
        for k, v in self.entries:
            if k == key:
                return v
        return PiLinear()

    @property
    def z(self) -> Fraction:
        v = self.get(Z_KEY)
        return v.a

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "ValueVector") -> "ValueVector":
        return ValueVector(list(self.entries) + list(other.entries))

    def __neg__(self) -> "ValueVector":
        return ValueVector((k, -v) for k, v in self.entries)

    def __sub__(self, other: "ValueVector") -> "ValueVector":
        return self + (-other)

    def scale(self, c) -> "ValueVector":
        c = as_fraction(c)
        return ValueVector((k, v * c) for k, v in self.entries)

    def shifted(self, t) -> "ValueVector":
        """Move every rational index ``i`` to ``i - t``; ``z`` is fixed."""
        t = as_fraction(t)
        if t == 0:
            return self
        return ValueVector(((k[0], k[1] - t) if k[0] == 1 else k, v) for k, v in self.entries)

    def truncated(self, point) -> "ValueVector":
        return ValueVector((k, v) for k, v in self.entries if (k[0], k[1], 0) < point)

    def __eq__(self, other):
        if not isinstance(other, ValueVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.entries)
            object.__setattr__(self, "_hash", h)
        return h

    def __lt__(self, other):
        return vec_cmp(self, other) < 0

    def __le__(self, other):
        return vec_cmp(self, other) <= 0

    def __gt__(self, other):
        return vec_cmp(self, other) > 0

    def __ge__(self, other):
        return vec_cmp(self, other) >= 0

    def __repr__(self):
        return f"ValueVector({self})"

    def __str__(self):
        if not self.entries:
            return "vec{}"
        body = ", ".join(f"{key_label(k)}: {format_pilinear(v)}" for k, v in self.entries)
        return "vec{" + body + "}"


def compare_upto(a: ValueVector, b: ValueVector, point=END) -> Ordering:
    """Lexicographic comparison over the indices lying before ``point``."""
    da, db = dict(a.entries), dict(b.entries)
    for key in sorted(set(da) | set(db)):
        if (key[0], key[1], 0) > point:
            break
        x, y = da.get(key), db.get(key)
        if x == y:
            continue
        c = pilinear_cmp(x if x is not None else PiLinear(), y if y is not None else PiLinear())
        if c:
            return c
    return Ordering.EQUAL


def vec_cmp(g1: ValueVector, g2: ValueVector, group: "ValueGroup | None" = None) -> Ordering:
    """Total order: at the smallest index where the vectors differ, the larger entry wins."""
    if group is not None:
        group.check(g1)
        group.check(g2)
    return compare_upto(g1, g2)


@dataclass(frozen=True)
class GroupAutomorphism:
    """Index translation by ``shift``: index ``r`` moves to ``r - shift``."""

    shift: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "shift", as_fraction(self.shift))

    def __call__(self, g: ValueVector) -> ValueVector:
        return g.shifted(self.shift)

    def compose(self, other: "GroupAutomorphism") -> "GroupAutomorphism":
        return GroupAutomorphism(self.shift + other.shift)

    @property
    def is_identity(self) -> bool:
        return self.shift == 0


def vec_twist(g: ValueVector, tau: GroupAutomorphism) -> ValueVector:
    return tau(g)


@dataclass(frozen=True)
class ValueGroup:
    kind: str = "rational"
    levels: tuple = ("Q",)
    h0: Fraction | None = None
    z_tier: bool = False

    def __post_init__(self):
        if self.kind not in ("rational", "pi", "lex"):
            raise ValueError(f"unknown value group kind {self.kind!r}")
        if self.kind == "lex":
            object.__setattr__(self, "levels", ())
            if self.h0 is not None:
                h0 = as_fraction(self.h0)
                if h0 <= 0:
                    raise ValueError("H generator must be positive")
                object.__setattr__(self, "h0", h0)
        else:
            levels = tuple(self.levels)
            allowed = {"Q", "Z"} if self.kind == "rational" else {"Q", "Z", "QPI"}
            if not levels or any(l not in allowed for l in levels):
                raise ValueError(f"bad levels {levels!r} for kind {self.kind}")
            object.__setattr__(self, "levels", levels)
            if self.z_tier or self.h0 is not None:
                raise ValueError("z tier and H only apply to lex groups")

    # -- structure -------------------------------------------------------
    @property
    def is_line(self) -> bool:
        return self.kind != "lex"

    @property
    def twisted(self) -> bool:
        return self.z_tier

    def domain(self, key) -> str:
        if key[0] == 0:
            return "Q"
        if self.is_line:
            return self.levels[int(key[1])]
        return "QPI" if self.h0 is None else "QH"

    def in_domain(self, key, v: PiLinear) -> bool:
        dom = self.domain(key)
        if dom == "QPI":
            return True
        if dom == "Q":
            return v.b == 0
        if dom == "Z":
            return v.b == 0 and v.a.denominator == 1
        return (v.b / self.h0).denominator == 1

    def check(self, g: ValueVector) -> ValueVector:
        for key, _ in g.entries:
            if key[0] == 0:
                if not self.z_tier:
                    raise KindMismatch(f"index z is not part of {self.describe()}")
            elif self.is_line:
                idx = key[1]
                if idx.denominator != 1 or not 0 <= idx < len(self.levels):
                    raise KindMismatch(f"level {idx} is not part of {self.describe()}")
        return g

    def contains(self, g: ValueVector) -> bool:
        try:
            self.check(g)
        except KindMismatch:
            return False
        return all(self.in_domain(k, v) for k, v in g.entries)

    def describe(self) -> str:
        if self.is_line:
            return f"{self.kind} group levels {','.join(self.levels)}"
        extra = (" z" if self.z_tier else "") + (f" H={self.h0}" if self.h0 is not None else "")
        return f"lex group{extra}"

    # -- points ------------------------------------------------------------
    def whole_point(self):
        """The point lying before every index (its -inf cut is all of K)."""
        return (0, Fraction(0), -1) if self.z_tier else (1, Fraction(0), -1) if self.is_line else None

    def canon_point(self, p):
        if p == END:
            return p
        tier, idx, side = p
        if self.is_line and tier == 1:
            if side == 1:
                idx, side = idx + 1, -1
            if idx >= len(self.levels):
                return END
            return (1, Fraction(idx), -1)
        return (tier, Fraction(idx), side)

    def key_before(self, p):
        """The index immediately preceding ``p``, if the index set has one."""
        if self.is_line:
            n = len(self.levels) if p == END else int(p[1])
            return (1, Fraction(n - 1)) if n >= 1 else None
        if p == END or p[2] != 1:
            return None
        return (p[0], p[1])

    def twist_point(self, p, t):
        t = as_fraction(t)
        if self.is_line or t == 0 or p == END or p[0] != 1:
            return p
        return (1, p[1] - t, p[2])

    # -- group law ---------------------------------------------------------
    def twist(self, g: ValueVector, t) -> ValueVector:
        if self.is_line:
            return g
        return g.shifted(t)

    def mul(self, a: ValueVector, b: ValueVector) -> ValueVector:
        if not self.z_tier:
            return a + b
        return a + b.shifted(a.z)

    def inv(self, a: ValueVector) -> ValueVector:
        if not self.z_tier:
            return -a
        return -(a.shifted(-a.z))

    def identity(self) -> ValueVector:
        return ValueVector()


class GenPoly:
    """Polynomial with rational coefficients in commuting monomials ``Y^gamma``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        if isinstance(terms, Mapping):
            terms = terms.items()
        acc: dict[ValueVector, Fraction] = {}
        for mono, coeff in terms:
            if not isinstance(mono, ValueVector):
                mono = ValueVector(mono)
            acc[mono] = acc.get(mono, Fraction(0)) + as_fraction(coeff)
        self.terms = {m: c for m, c in acc.items() if c != 0}

    @classmethod
    def monomial(cls, exponent, coeff=1) -> "GenPoly":
        if not isinstance(exponent, ValueVector):
            exponent = ValueVector(exponent)
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c) -> "GenPoly":
        return cls({ValueVector(): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GenPoly") -> "GenPoly":
        return GenPoly(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self):
        return GenPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "GenPoly") -> "GenPoly":
        out = []
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out.append((m1 + m2, c1 * c2))
        return GenPoly(out)

    def __eq__(self, other):
        return isinstance(other, GenPoly) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "GenPoly(0)"
        return "GenPoly(" + " + ".join(f"{c}*Y^{m}" for m, c in self.terms.items()) + ")"


def valuation(p: GenPoly) -> ValueVector:
    """Smallest exponent vector among the nonzero terms."""
    if p.is_zero():
        raise ZeroDivisionError("the zero polynomial has no valuation")
    best = None
    for mono in p.terms:
        if best is None or vec_cmp(mono, best) < 0:
            best = mono
    return best


def quotient_valuation(p: GenPoly, q: GenPoly) -> ValueVector:
    if p.is_zero() or q.is_zero():
        raise ZeroDivisionError("valuation of a quotient needs nonzero numerator and denominator")
    return valuation(p) - valuation(q)
