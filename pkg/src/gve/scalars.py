"""Exact scalars: rationals and numbers of the form a + b*pi.

pi is carried as a formal symbol.  Whenever an ordering or a floor depends on
its numerical value, a rational enclosure ``lo < pi < hi`` is refined until
the question is decided.  Nothing here ever touches floating point.
"""
from __future__ import annotations

import math
import os
import threading
from enum import IntEnum
from fractions import Fraction
from numbers import Rational as _RationalABC

from mpmath.libmp import mpf_pi

__all__ = [
    "Ordering",
    "PiLinear",
    "PI",
    "PiPrecisionError",
    "as_fraction",
    "pi_enclosure",
    "pilinear_cmp",
    "floor_mul",
    "max_pi_bits_used",
    "pi_bits_cap",
]

HARD_CAP_BITS = 1_000_000
_SEED_LO = Fraction(333, 106)
_SEED_HI = Fraction(355, 113)
_FIRST_BITS = 32


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class PiPrecisionError(ArithmeticError):
    """Raised when deciding a comparison would need more bits of pi than allowed."""


def pi_bits_cap() -> int:
    raw = os.environ.get("GVE_PI_BITS")
    if not raw:
        return HARD_CAP_BITS
    return min(int(raw), HARD_CAP_BITS)


class _PiCache:
    # monotone, append-only: a level once stored is never replaced
    def __init__(self):
        self._lock = threading.Lock()
        self._levels: dict[int, tuple[Fraction, Fraction]] = {0: (_SEED_LO, _SEED_HI)}
        self.max_bits = 0

    def get(self, bits: int) -> tuple[Fraction, Fraction]:
        if bits == 0:
            return self._levels[0]
        if bits > pi_bits_cap():
            raise PiPrecisionError(f"pi enclosure would need {bits} bits (cap {pi_bits_cap()})")
        with self._lock:
            hit = self._levels.get(bits)
            if hit is None:
                _, man, exp, _ = mpf_pi(bits + 8)
                # mpf_pi is accurate to within one ulp; widen by two for safety
                scale = Fraction(2) ** exp
                hit = (Fraction(man - 2) * scale, Fraction(man + 2) * scale)
                self._levels[bits] = hit
            self.max_bits = max(self.max_bits, bits)
            return hit


_CACHE = _PiCache()


def _levels():
    yield 0
    bits = _FIRST_BITS
    while True:
        yield bits
        bits *= 2


def pi_enclosure(bits: int = 0) -> tuple[Fraction, Fraction]:
    """Return rationals ``(lo, hi)`` with ``lo < pi < hi``; ``bits=0`` gives the seed."""
    return _CACHE.get(bits)


def max_pi_bits_used() -> int:
    return _CACHE.max_bits


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


class PiLinear:
    """The real number ``a + b*pi`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", as_fraction(a))
        object.__setattr__(self, "b", as_fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("PiLinear is immutable")

    @classmethod
    def coerce(cls, x) -> "PiLinear":
        if isinstance(x, PiLinear):
            return x
        return cls(as_fraction(x), 0)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __add__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return PiLinear(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return PiLinear(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return PiLinear(-self.a, -self.b)

    def __mul__(self, k):
        # scalar multiplication only: pi*pi is not representable
        if isinstance(k, PiLinear):
            if k.b == 0:
                k = k.a
            elif self.b == 0:
                return k * self.a
            else:
                raise ValueError("product of two irrational PiLinear values is not PiLinear")
        try:
            k = as_fraction(k)
        except TypeError:
            return NotImplemented
        return PiLinear(self.a * k, self.b * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = as_fraction(k)
        return PiLinear(self.a / k, self.b / k)

    def __eq__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        return pilinear_cmp(self, PiLinear.coerce(other)) < 0

    def __le__(self, other):
        return pilinear_cmp(self, PiLinear.coerce(other)) <= 0

    def __gt__(self, other):
        return pilinear_cmp(self, PiLinear.coerce(other)) > 0

    def __ge__(self, other):
        return pilinear_cmp(self, PiLinear.coerce(other)) >= 0

    def sign(self) -> int:
        return int(pilinear_cmp(self, ZERO))

    def enclose(self, bits: int = 0) -> tuple[Fraction, Fraction]:
        """Rational bounds for the value using the pi enclosure at ``bits``."""
        if self.b == 0:
            return self.a, self.a
        lo, hi = pi_enclosure(bits)
        u, v = self.a + self.b * lo, self.a + self.b * hi
        return (u, v) if u <= v else (v, u)

    def floor(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        for bits in _levels():
            lo, hi = self.enclose(bits)
            # value is irrational, so lo < x < hi strictly
            f = math.floor(lo)
            if hi <= f + 1:
                return f
        raise AssertionError("unreachable")

    def __repr__(self):
        return f"PiLinear({self.a}, {self.b})"

    def __str__(self):
        return format_pilinear(self)


def _maybe(x):
    if isinstance(x, PiLinear):
        return x
    try:
        return PiLinear(as_fraction(x), 0)
    except TypeError:
        return None


ZERO = PiLinear(0, 0)
PI = PiLinear(0, 1)


def format_pilinear(x: PiLinear) -> str:
    if x.b == 0:
        return str(x.a)
    if x.b == 1:
        pi_part = "pi"
    elif x.b == -1:
        pi_part = "-pi"
    else:
        pi_part = f"{x.b}*pi"
    if x.a == 0:
        return pi_part
    if pi_part.startswith("-"):
        return f"{x.a} - {pi_part[1:]}"
    return f"{x.a} + {pi_part}"


def pilinear_cmp(x: PiLinear, y: PiLinear) -> Ordering:
    """Exact comparison of two numbers ``a + b*pi``."""
    x, y = PiLinear.coerce(x), PiLinear.coerce(y)
    da, db = x.a - y.a, x.b - y.b
    if db == 0:
        return Ordering((da > 0) - (da < 0))
    # sign(da + db*pi): compare pi against t = -da/db
    t = -da / db
    s = 1 if db > 0 else -1
    for bits in _levels():
        lo, hi = pi_enclosure(bits)
        if lo >= t:
            return Ordering(s)
        if hi <= t:
            return Ordering(-s)
    raise AssertionError("unreachable")


def floor_mul(r, d) -> int:
    """``floor(r*d)`` for rational ``r`` and ``d = a + b*pi``."""
    return (PiLinear.coerce(d) * as_fraction(r)).floor()
