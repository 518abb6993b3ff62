"""Times the pure and compiled kernels on identical inputs.

Run as `python benchmarks/bench_backends.py`.  Work items cover the
three kernel entry points: monotone-pair comparability scans, exhaustive
labeling search, and annealing chains.  Both backends walk bit-identical
trajectories, so the comparison is pure speed.
"""

import time

from sperner.search import _kernels_py as pure
from sperner.search.engine import (
    _ALPHA,
    _RESTART,
    _T0,
    _best_construction,
    _cmp_forward,
    _reflect_bits,
    _upset_bits,
    _usable_order,
    _variants,
)

try:
    from sperner.search import _kernels as compiled
except ImportError:
    compiled = None


def comp_args(n):
    total = 1 << n
    ups = _upset_bits(n)
    usizes = [b.bit_count() for b in ups]
    downs = [_reflect_bits(b, total) for b in ups]
    return ups, usizes, downs, usizes, total


def exact_args(n, k):
    masks = _usable_order(n)
    fwd = _cmp_forward(masks)
    floor, _ = _best_construction(n, k, True)
    return len(masks), k, True, masks, fwd, floor, 0, 0, 0.0


def anneal_args(n, k, steps):
    variants = _variants(n, k, True, 0)
    usable = list(range(1, (1 << n) - 1))
    return (n, k, True, usable, variants, 1, steps,
            _T0, _ALPHA, _RESTART, 0, 0.0)


def measure(fn, args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    jobs = [
        ("comp scan n=4", "comp_scan", comp_args(4)),
        ("comp scan n=5", "comp_scan", comp_args(5)),
        ("exact product (4,2)", "exact_search", exact_args(4, 2)),
        ("exact product (4,3)", "exact_search", exact_args(4, 3)),
        ("exact product (5,2)", "exact_search", exact_args(5, 2)),
        ("anneal 20k steps (5,3)", "anneal_chain", anneal_args(5, 3, 20_000)),
        ("anneal 20k steps (6,3)", "anneal_chain", anneal_args(6, 3, 20_000)),
    ]
    width = max(len(name) for name, _, _ in jobs)
    header = f"{'task':<{width}}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, entry, args in jobs:
        t_pure, out_pure = measure(getattr(pure, entry), args)
        if compiled is None:
            print(f"{name:<{width}}  {t_pure:>9.4f}s  {'n/a':>10}  {'n/a':>8}")
            continue
        t_fast, out_fast = measure(getattr(compiled, entry), args)
        assert out_pure == out_fast, f"backend mismatch on {name}"
        print(
            f"{name:<{width}}  {t_pure:>9.4f}s  {t_fast:>9.4f}s  "
            f"{t_pure / t_fast:>7.1f}x"
        )
    if compiled is None:
        print("\ncompiled backend not built; showing pure timings only")


if __name__ == "__main__":
    main()
