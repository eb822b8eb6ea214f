"""Valuation ideals represented as cuts of a value group.

A cut is an upward-closed set of group values.  Its boundary is a head vector
``h`` followed by a sentinel ``sign*inf`` placed at a point ``p`` between
indices.  Membership of ``x`` means: ``x`` restricted to the indices before
``p`` is lexicographically ``>= h`` (sign -1) or ``> h`` (sign +1).  With
``p == END`` this is the familiar closed cut ``{x >= h}`` / open cut
``{x > h}``; an interior ``p`` leaves every index after it unconstrained,
which is how overrings (convex subgroups) and their radicals appear.

Cuts are kept in a canonical form so that equality of ideals is equality of
representations:

* head entries at or after ``p`` are dropped;
* an entry outside the group (e.g. ``-pi`` in a rational level) truncates the
  head there and forces ``+inf`` just after it, both signs giving the same set;
* strict inequalities at a discrete (integer) level are rewritten as ``>=``.
"""
from __future__ import annotations

from fractions import Fraction

from .groups import END, KindMismatch, ValueGroup, ValueVector, compare_upto, key_label
from .scalars import Ordering, PiLinear, format_pilinear

__all__ = [
    "Cut",
    "CutError",
    "cut_member",
    "cut_sum",
    "cut_twist",
    "cut_closure",
    "o_left",
    "o_right",
    "residual_left",
    "residual_right",
    "is_principal",
    "radical",
    "is_idempotent",
    "co_inverse",
    "cut_le",
    "left_translate",
    "right_translate",
]


class CutError(ValueError):
    pass


def _canon(group: ValueGroup, head: ValueVector, sign: int, point):
    group.check(head)
    point = group.canon_point(point)
    head = head.truncated(point)
    for key, v in head.entries:
        if group.in_domain(key, v):
            continue
        keep = [(k, x) for k, x in head.entries if k < key]
        point = group.canon_point((key[0], key[1], 1))
        if group.domain(key) == "Z":
            keep.append((key, PiLinear(v.floor() + 1)))
            sign = -1
        else:
            keep.append((key, v))
            sign = 1
        head = ValueVector(keep)
        break
    if sign == 1:
        k = group.key_before(point)
        if k is not None and group.domain(k) == "Z":
            head = head + ValueVector({k: 1})
            sign = -1
    return head, sign, point


class Cut:
    """Canonical cut ideal; immutable and hashable."""

    __slots__ = ("group", "head", "sign", "point")

    def __init__(self, group: ValueGroup, head=None, sign: int = -1, point=END):
        if head is None:
            head = ValueVector()
        elif not isinstance(head, ValueVector):
            head = ValueVector.scalar(head) if not isinstance(head, dict) else ValueVector(head)
        if sign not in (-1, 1):
            raise CutError("sign must be -1 (-inf / >=) or +1 (+inf / >)")
        head, sign, point = _canon(group, head, sign, point)
        wp = group.whole_point()
        if wp is not None and point == group.canon_point(wp):
            raise CutError("a cut with no constrained index is all of K or empty, not an ideal of V")
        for name, value in (("group", group), ("head", head), ("sign", sign), ("point", point)):
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("Cut is immutable")

    # constructors ------------------------------------------------------------
    @classmethod
    def closed(cls, group, head=None) -> "Cut":
        return cls(group, head, -1, END)

    @classmethod
    def open(cls, group, head=None) -> "Cut":
        return cls(group, head, 1, END)

    @classmethod
    def ring(cls, group, point=END) -> "Cut":
        """The overring whose units have zero entries before ``point``."""
        return cls(group, None, -1, point)

    # properties ------------------------------------------------------------
    @property
    def is_closed(self) -> bool:
        return self.point == END and self.sign == -1

    @property
    def is_open(self) -> bool:
        return self.point == END and self.sign == 1

    @property
    def attained(self) -> bool:
        """Whether the head is an element of the group."""
        return all(self.group.in_domain(k, v) for k, v in self.head.entries)

    def is_ring(self) -> bool:
        return self.sign == -1 and self.head.is_zero()

    def _key(self):
        return (self.group, self.head, self.sign, self.point)

    def __eq__(self, other):
        if not isinstance(other, Cut):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __contains__(self, gamma: ValueVector) -> bool:
        return cut_member(self, gamma)

    def __le__(self, other: "Cut") -> bool:
        return cut_le(self, other)

    def __lt__(self, other: "Cut") -> bool:
        return cut_le(self, other) and self != other

    def __ge__(self, other: "Cut") -> bool:
        return cut_le(other, self)

    def __gt__(self, other: "Cut") -> bool:
        return cut_le(other, self) and self != other

    def __mul__(self, other: "Cut") -> "Cut":
        return cut_sum(self, other)

    def __repr__(self):
        return f"Cut({self})"

    def __str__(self):
        return format_cut(self)


def format_point(group: ValueGroup, p) -> str:
    if p == END:
        return "end"
    if p[0] == 0:
        return ("before" if p[2] < 0 else "after") + " z"
    return ("before" if p[2] < 0 else "after") + f" {p[1]}"


def format_head(group: ValueGroup, head: ValueVector) -> str:
    if group.is_line and len(group.levels) == 1:
        return format_pilinear(head.get((1, Fraction(0))))
    if not head.entries:
        return "0"
    return "vec{" + ", ".join(f"{key_label(k)}: {format_pilinear(v)}" for k, v in head.entries) + "}"


def format_cut(c: Cut) -> str:
    if c.point == END:
        rel = ">=" if c.sign < 0 else ">"
        return f"cut({rel} {format_head(c.group, c.head)})"
    inf = "-inf" if c.sign < 0 else "+inf"
    return f"cut(> {format_head(c.group, c.head)} tail {inf} {format_point(c.group, c.point)})"


def _same_group(*cuts: Cut) -> ValueGroup:
    g = cuts[0].group
    for c in cuts[1:]:
        if c.group != g:
            raise KindMismatch(f"cuts over different groups: {g.describe()} vs {c.group.describe()}")
    return g


def compare_boundaries(c1: Cut, c2: Cut) -> Ordering:
    """Order of boundaries; a larger boundary means a smaller ideal."""
    _same_group(c1, c2)
    p = min(c1.point, c2.point)
    c = compare_upto(c1.head, c2.head, p)
    if c:
        return c
    if c1.point == c2.point:
        return Ordering((c1.sign > c2.sign) - (c1.sign < c2.sign))
    if c1.point < c2.point:
        return Ordering(c1.sign)
    return Ordering(-c2.sign)


def cut_le(c1: Cut, c2: Cut) -> bool:
    """``c1`` is contained in ``c2``."""
    return compare_boundaries(c1, c2) >= 0


def cut_member(c: Cut, gamma: ValueVector) -> bool:
    c.group.check(gamma)
    cmp = compare_upto(gamma, c.head, c.point)
    if cmp:
        return cmp > 0
    return c.sign < 0


def cut_sum(c1: Cut, c2: Cut) -> Cut:
    """The cut of the product ideal ``c1 * c2`` (values add under the group law)."""
    g = _same_group(c1, c2)
    head = g.mul(c1.head, c2.head)
    p2 = g.twist_point(c2.point, c1.head.z)
    if c1.point < p2:
        sign, point = c1.sign, c1.point
    elif p2 < c1.point:
        sign, point = c2.sign, p2
    else:
        sign, point = (1 if 1 in (c1.sign, c2.sign) else -1), p2
    return Cut(g, head, sign, point)


def cut_twist(c: Cut, t) -> Cut:
    """Image of the ideal under the automorphism shifting indices by ``t``."""
    shift = getattr(t, "shift", t)
    g = c.group
    return Cut(g, g.twist(c.head, shift), c.sign, g.twist_point(c.point, shift))


def left_translate(a: ValueVector, c: Cut) -> Cut:
    """``a * c``."""
    return cut_sum(Cut.closed(c.group, a), c)


def right_translate(c: Cut, a: ValueVector) -> Cut:
    """``c * a``."""
    return cut_sum(c, Cut.closed(c.group, a))


def _residual_tail(sj, pj, si, pi):
    if pj < pi:
        return sj, pj
    if pi < pj:
        return -si, pi
    return (1 if (si < 0 and sj > 0) else -1), pj


def residual_left(J: Cut, I: Cut) -> Cut:
    """``{a : a*I subset J}``."""
    g = _same_group(J, I)
    head = g.mul(J.head, g.inv(I.head))
    pi = g.twist_point(I.point, head.z)
    sign, point = _residual_tail(J.sign, J.point, I.sign, pi)
    return Cut(g, head, sign, point)


def residual_right(J: Cut, I: Cut) -> Cut:
    """``{a : I*a subset J}``."""
    g = _same_group(J, I)
    head = g.mul(g.inv(I.head), J.head)
    sign, point = _residual_tail(J.sign, J.point, I.sign, I.point)
    return Cut(g, head, sign, g.twist_point(point, -I.head.z))


def o_left(c: Cut) -> Cut:
    return residual_left(c, c)


def o_right(c: Cut) -> Cut:
    return residual_right(c, c)


def co_inverse(c: Cut) -> Cut:
    """``{x : x^-1 not in c}``: the complement of the inverse set."""
    g = c.group
    return Cut(g, g.inv(c.head), -c.sign, g.twist_point(c.point, -c.head.z))


def cut_closure(c: Cut, over: Cut | None = None) -> Cut:
    """Intersection of the principal ``W``-ideals containing ``c``, ``W = o_left(c)``."""
    if over is not None and over != o_left(c):
        raise CutError("closure must be taken over the left order of the ideal")
    if c.sign > 0 and c.attained:
        return Cut(c.group, c.head, -1, c.point)
    return c


def is_principal(c: Cut, over: Cut | None = None):
    """Return ``(True, v(generator))`` when ``c = W*a`` with ``W = o_left(c)``, else ``(False, None)``."""
    if over is not None and over != o_left(c):
        raise CutError("principality is tested over the left order of the ideal")
    if c.sign < 0 and c.attained:
        return True, c.head
    return False, None


def radical(w: Cut) -> Cut:
    """Jacobson radical of an overring: its non-units."""
    if not w.is_ring():
        raise CutError(f"{w} is not a ring cut")
    return Cut(w.group, None, 1, w.point)


def is_idempotent(c: Cut) -> bool:
    return cut_sum(c, c) == c
