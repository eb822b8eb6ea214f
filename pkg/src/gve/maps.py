"""Graded maps Q -> Z: the three parametric families, axiom checks, tables.

A graded map satisfies ``f(0) = 0``, ``f(s) + f(t) <= f(s + t)`` and
``f(s) + f(-s) >= -1``.  Every one of them is ``f_d``, ``f_d^(1)`` or
``f_d^(-1)`` for a real ``d``; here ``d`` ranges over ``a + b*pi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .scalars import PiLinear, as_fraction, floor_mul, format_pilinear, pilinear_cmp

__all__ = [
    "Family",
    "GradedMap",
    "GradedMapTable",
    "OverriddenMap",
    "MapReport",
    "Interval",
    "Candidate",
    "InconsistentTable",
    "farey_grid",
    "check_graded_map",
    "is_nice_map",
    "classify_table",
    "smallest_sum_zero",
    "lemma46_check",
    "lemma413_shift_check",
    "enumerate_graded_tables",
]


class Family(str, Enum):
    FD = "fd"
    FD1 = "fd1"
    FDM1 = "fdm1"


class InconsistentTable(ValueError):
    pass


@dataclass(frozen=True)
class GradedMap:
    family: Family
    d: PiLinear

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "d", PiLinear.coerce(self.d))

    def __call__(self, r) -> int:
        return self.eval(r)

    def eval(self, r) -> int:
        r = as_fraction(r)
        if self.family is Family.FD:
            return floor_mul(r, self.d)
        if r == 0:
            return 0
        if r < 0:
            return -self.eval(-r) - 1
        if self.family is Family.FDM1:
            return floor_mul(r, self.d)
        # the integer in [rd - 1, rd); rd itself when integral is excluded
        x = self.d * r
        if x.is_rational and x.a.denominator == 1:
            return int(x.a) - 1
        return x.floor()

    def is_zero(self) -> bool:
        return self.family is Family.FD and self.d.is_zero()

    def __str__(self):
        return f"{self.family.value}({format_pilinear(self.d)})"


@dataclass(frozen=True)
class OverriddenMap:
    """A map that agrees with ``base`` except at finitely many grades."""

    base: object
    overrides: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "overrides", {as_fraction(k): int(v) for k, v in dict(self.overrides).items()})

    def __call__(self, r) -> int:
        return self.eval(r)

    def eval(self, r) -> int:
        r = as_fraction(r)
        if r in self.overrides:
            return self.overrides[r]
        return self.base.eval(r)

    def is_zero(self) -> bool:
        return False

    def __str__(self):
        return f"{self.base} with {dict(self.overrides)}"


class GradedMapTable:
    """Finite table of values, domain closed under negation and containing 0."""

    def __init__(self, entries: Mapping):
        self.entries = {as_fraction(k): int(v) for k, v in dict(entries).items()}
        if self.entries.get(Fraction(0), 0) != 0:
            raise ValueError("a graded map sends 0 to 0")
        self.entries[Fraction(0)] = 0
        missing = [r for r in self.entries if -r not in self.entries]
        if missing:
            raise ValueError(f"table domain not closed under negation (missing {-missing[0]})")

    def __call__(self, r) -> int:
        return self.eval(r)

    def eval(self, r) -> int:
        return self.entries[as_fraction(r)]

    @property
    def domain(self) -> list[Fraction]:
        return sorted(self.entries)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.entries.values())

    @classmethod
    def restrict(cls, f, grid: Iterable) -> "GradedMapTable":
        return cls({r: f.eval(r) for r in grid})

    def __eq__(self, other):
        return isinstance(other, GradedMapTable) and self.entries == other.entries

    def __repr__(self):
        return f"GradedMapTable({ {str(k): v for k, v in sorted(self.entries.items())} })"


@lru_cache(maxsize=64)
def farey_grid(P: int = 8, Q: int = 8) -> tuple[Fraction, ...]:
    """``{p/q : |p| <= P, 1 <= q <= Q}`` in increasing order."""
    return tuple(sorted({Fraction(p, q) for p in range(-P, P + 1) for q in range(1, Q + 1)}))


@lru_cache(maxsize=64)
def _grid_tables(grid: tuple) -> tuple[np.ndarray, np.ndarray]:
    index = {r: i for i, r in enumerate(grid)}
    n = len(grid)
    sums = np.full((n, n), -1, dtype=np.int32)
    for i, s in enumerate(grid):
        for j in range(i, n):
            k = index.get(s + grid[j])
            if k is not None:
                sums[i, j] = k
    neg = np.array([index[-r] for r in grid], dtype=np.int32)
    return sums, neg


@dataclass
class MapReport:
    ok: bool
    reason: str = ""
    s: Fraction | None = None
    t: Fraction | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "pass"
        where = f" at s={self.s}" + (f", t={self.t}" if self.t is not None else "")
        return f"fail{where}: {self.reason}"


def _normalize_grid(grid) -> tuple:
    g = tuple(sorted({as_fraction(r) for r in grid} | {Fraction(0)}))
    gs = set(g)
    for r in g:
        if -r not in gs:
            raise ValueError(f"grid not closed under negation (missing {-r})")
    return g


def check_graded_map(f, grid=None) -> MapReport:
    """Check the graded-map axioms on every grid pair whose sum is in the grid."""
    if grid is None:
        grid = f.domain if isinstance(f, GradedMapTable) else farey_grid(8, 8)
    grid = _normalize_grid(grid)
    if isinstance(f, GradedMapTable):
        absent = [r for r in grid if r not in f.entries]
        if absent:
            raise ValueError(f"grid point {absent[0]} outside the table's domain")
    vals = np.array([f.eval(r) for r in grid], dtype=np.int64)
    z = grid.index(Fraction(0))
    if vals[z] != 0:
        return MapReport(False, "f(0) != 0", Fraction(0))
    sums, neg = _grid_tables(grid)
    i = _kernels.negation_violation(vals, neg)
    if i >= 0:
        s = grid[i]
        s = max(s, -s)
        return MapReport(False, f"f(s) + f(-s) = {f.eval(s) + f.eval(-s)} < -1", s)
    i, j = _kernels.superadditivity_violation(vals, sums)
    if i >= 0:
        s, t = grid[i], grid[j]
        return MapReport(
            False, f"f(s) + f(t) = {int(vals[i] + vals[j])} > f(s+t) = {f.eval(s + t)}", s, t
        )
    return MapReport(True)


def is_nice_map(f, r, N: int = 8) -> bool:
    r = as_fraction(r)
    if r <= 0:
        raise ValueError("nice maps are defined for r > 0")
    if f.eval(r) != 0 or f.eval(-r) != -1:
        return False
    return bool(check_graded_map(f, [i * r for i in range(-N, N + 1)]))


@dataclass(frozen=True)
class Interval:
    """Real interval with rational (or infinite, ``None``) endpoints."""

    lo: Fraction | None = None
    hi: Fraction | None = None
    lo_closed: bool = False
    hi_closed: bool = False

    def is_empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def intersect(self, other: "Interval") -> "Interval":
        lo, lc = self.lo, self.lo_closed
        if other.lo is not None and (lo is None or other.lo > lo or (other.lo == lo and not other.lo_closed)):
            lo, lc = other.lo, other.lo_closed
        hi, hc = self.hi, self.hi_closed
        if other.hi is not None and (hi is None or other.hi < hi or (other.hi == hi and not other.hi_closed)):
            hi, hc = other.hi, other.hi_closed
        return Interval(lo, hi, lc, hc)

    def contains(self, d) -> bool:
        d = PiLinear.coerce(d)
        if self.lo is not None:
            c = pilinear_cmp(d, PiLinear(self.lo))
            if c < 0 or (c == 0 and not self.lo_closed):
                return False
        if self.hi is not None:
            c = pilinear_cmp(d, PiLinear(self.hi))
            if c > 0 or (c == 0 and not self.hi_closed):
                return False
        return True

    def point(self) -> Fraction | None:
        if self.lo is not None and self.lo == self.hi and not self.is_empty():
            return self.lo
        return None

    def __str__(self):
        if self.point() is not None:
            return f"{{{self.point()}}}"
        lo = "(-inf" if self.lo is None else ("[" if self.lo_closed else "(") + str(self.lo)
        hi = "+inf)" if self.hi is None else str(self.hi) + ("]" if self.hi_closed else ")")
        return f"{lo}, {hi}"


@dataclass(frozen=True)
class Candidate:
    family: Family
    interval: Interval

    def contains(self, f: GradedMap) -> bool:
        return f.family is self.family and self.interval.contains(f.d)

    def __str__(self):
        return f"{self.family.value}: d in {self.interval}"


def _floor_interval(r: Fraction, v: int, strict_lower: bool) -> Interval:
    # constraint on d from v <= r*d < v+1 (or v < r*d <= v+1 when strict_lower)
    lo, hi = Fraction(v) / r, Fraction(v + 1) / r
    if r > 0:
        return Interval(lo, hi, not strict_lower, strict_lower)
    return Interval(hi, lo, strict_lower, not strict_lower)


def classify_table(t: GradedMapTable) -> list[Candidate]:
    """Every family and parameter interval consistent with all table entries."""
    out = []
    for fam in Family:
        iv = Interval()
        ok = True
        for r, v in t.entries.items():
            if r == 0:
                continue
            if fam is Family.FD:
                iv = iv.intersect(_floor_interval(r, v, False))
            elif r > 0:
                iv = iv.intersect(_floor_interval(r, v, fam is Family.FD1))
            elif t.entries[-r] + v != -1:
                ok = False
                break
            if iv.is_empty():
                ok = False
                break
        if ok:
            out.append(Candidate(fam, iv))
    if not out:
        raise InconsistentTable("no graded-map family restricts to this table")
    return out


def smallest_sum_zero(f) -> Fraction | None:
    """Smallest ``k > 0`` with ``f(k) + f(-k) = 0``, or ``None`` if there is none."""
    if f.is_zero():
        raise ValueError("the zero map has f(k) + f(-k) = 0 for every k")
    if not isinstance(f, GradedMap):
        raise TypeError("smallest_sum_zero needs a parametric graded map")
    if f.family is not Family.FD or not f.d.is_rational:
        return None
    return 1 / abs(f.d.a)


def lemma46_check(f, r, N: int) -> MapReport:
    """``f(n r) < n (f(r) + 1)`` for ``n = 1..N``."""
    r = as_fraction(r)
    if r <= 0 or N < 1:
        raise ValueError("need r > 0 and N >= 1")
    fr = f.eval(r)
    for n in range(1, N + 1):
        if not f.eval(n * r) < n * (fr + 1):
            return MapReport(False, f"f({n}r) = {f.eval(n * r)} >= {n * (fr + 1)}", Fraction(n) * r)
    return MapReport(True)


def lemma413_shift_check(f, k, grid) -> MapReport:
    """Additivity along ``k``: ``f(s+k) = f(s)+f(k)`` and ``f(s-k) = f(s)+f(-k)``."""
    k = as_fraction(k)
    k0 = smallest_sum_zero(f)
    if k0 is None or (k / k0).denominator != 1:
        raise ValueError(f"{k} is not a multiple of the smallest k with f(k) + f(-k) = 0")
    fk, fmk = f.eval(k), f.eval(-k)
    for s in grid:
        s = as_fraction(s)
        if f.eval(s + k) != f.eval(s) + fk:
            return MapReport(False, "f(s+k) != f(s) + f(k)", s, k)
        if f.eval(s - k) != f.eval(s) + fmk:
            return MapReport(False, "f(s-k) != f(s) + f(-k)", s, -k)
    return MapReport(True)


def _plans(grid: tuple):
    index = {r: i for i, r in enumerate(grid)}
    nz = [i for i, r in enumerate(grid) if r != 0]
    order = sorted(nz, key=lambda i: (grid[i].denominator, abs(grid[i]), grid[i] < 0))
    pos = {v: p for p, v in enumerate(order)}
    plans: list[list[tuple[int, int, int]]] = [[] for _ in order]
    for a, i in enumerate(nz):
        for j in nz[a:]:
            s = grid[i] + grid[j]
            k = index.get(s)
            if k is None or s == 0:
                continue
            last = max(pos[i], pos[j], pos[k])
            x = order[last]
            if x == k:
                plans[last].append((0, i, j))
            elif i == j:
                plans[last].append((2, k, k))
            elif x == i:
                plans[last].append((1, k, j))
            else:
                plans[last].append((1, k, i))
    for i in nz:
        j = index[-grid[i]]
        if pos[i] > pos[j]:
            plans[pos[i]].append((3, j, j))
    return order, plans


def enumerate_graded_tables(grid, bound: int, limit: int = 0) -> list[GradedMapTable]:
    """Brute-force every integer assignment on ``grid`` with ``|f| <= bound`` that
    satisfies the graded-map axioms on in-grid pairs."""
    grid = _normalize_grid(grid)
    order, plans = _plans(grid)
    rows = _kernels.enumerate_tables(order, plans, int(bound), len(grid), int(limit))
    return [GradedMapTable(dict(zip(grid, row))) for row in rows]
