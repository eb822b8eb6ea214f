"""Pure-Python versions of the integer kernels (reference and fallback)."""
from __future__ import annotations


def superadditivity_violation(vals, sum_idx):
    """First ``(i, j)`` with ``vals[i] + vals[j] > vals[sum_idx[i][j]]``, else ``(-1, -1)``."""
    n = len(vals)
    for i in range(n):
        vi = vals[i]
        row = sum_idx[i]
        for j in range(i, n):
            k = row[j]
            if k >= 0 and vi + vals[j] > vals[k]:
                return i, j
    return -1, -1


def negation_violation(vals, neg_idx):
    """First ``i`` with ``vals[i] + vals[-i] < -1``, else ``-1``."""
    for i in range(len(vals)):
        if vals[i] + vals[neg_idx[i]] < -1:
            return i
    return -1


def enumerate_tables(order, plans, bound, n, limit):
    """All integer assignments satisfying the compiled constraint plans.

    ``order[pos]`` is the grid index assigned at depth ``pos``.  ``plans[pos]``
    lists constraints whose other variables are already assigned, encoded as
    ``(kind, a, b)``:

    * ``0``: ``f[x] >= f[a] + f[b]``
    * ``1``: ``f[x] <= f[a] - f[b]``
    * ``2``: ``2*f[x] <= f[a]``
    * ``3``: ``f[x] >= -1 - f[a]``

    Returns a list of tuples indexed by grid position (unassigned entries 0).
    """
    f = [0] * n
    out = []
    depth = len(order)
    lo_stack = [0] * (depth + 1)
    cur = [0] * (depth + 1)
    hi_stack = [0] * (depth + 1)

    def bounds(pos):
        lo, hi = -bound, bound
        for kind, a, b in plans[pos]:
            if kind == 0:
                v = f[a] + f[b]
                if v > lo:
                    lo = v
            elif kind == 1:
                v = f[a] - f[b]
                if v < hi:
                    hi = v
            elif kind == 2:
                v = f[a] // 2
                if v < hi:
                    hi = v
            else:
                v = -1 - f[a]
                if v > lo:
                    lo = v
        return lo, hi

    if depth == 0:
        return [tuple(f)]
    pos = 0
    lo, hi = bounds(0)
    lo_stack[0], hi_stack[0], cur[0] = lo, hi, lo
    while pos >= 0:
        if cur[pos] > hi_stack[pos]:
            pos -= 1
            if pos >= 0:
                cur[pos] += 1
            continue
        f[order[pos]] = cur[pos]
        if pos == depth - 1:
            out.append(tuple(f))
            if limit and len(out) >= limit:
                return out
            cur[pos] += 1
            continue
        pos += 1
        lo, hi = bounds(pos)
        lo_stack[pos], hi_stack[pos], cur[pos] = lo, hi, lo
    return out
