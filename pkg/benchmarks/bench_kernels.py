"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from gve._kernels import _pure
from gve.maps import GradedMap, Family, _grid_tables, _plans, farey_grid
from gve.scalars import PI

try:
    from gve._kernels import _ckernels
except ImportError:
    _ckernels = None


def cases():
    for P, Q in ((8, 8), (12, 12), (16, 16)):
        grid = farey_grid(P, Q)
        sums, neg = _grid_tables(grid)
        vals = np.array([GradedMap(Family.FD1, PI).eval(r) for r in grid], dtype=np.int64)
        yield f"graded check, Farey {P},{Q} ({len(grid)} pts)", \
            lambda k, v=vals, s=sums: k.superadditivity_violation(v, s)
    for P, Q, bound in ((4, 4, 4), (5, 5, 6)):
        grid = farey_grid(P, Q)
        order, plans = _plans(grid)
        yield f"enumerate tables, Farey {P},{Q}, |f| <= {bound}", \
            lambda k, o=order, p=plans, b=bound, n=len(grid): k.enumerate_tables(o, p, b, n, 0)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; only the fallback can be timed")
    print(f"{'case':<44} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, fn in cases():
        t_py = min(timeit.repeat(lambda: fn(_pure), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:<44} {t_py:>10.2f} {'-':>10} {'-':>8}")
            continue
        assert fn(_pure) == fn(_ckernels) or np.array_equal(fn(_pure), fn(_ckernels))
        t_c = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<44} {t_py:>10.2f} {t_c:>10.2f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
