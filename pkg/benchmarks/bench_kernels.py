"""Compare the compiled and pure-Python bitmask kernels.

Run with ``python benchmarks/bench_kernels.py``; prints one line per kernel
with the best-of-five wall time of each backend and the speedup.
"""

import itertools
import sys
import timeit

from foundry import _kernels_py as pure
from foundry.matroid_catalog import named_matroid

try:
    from foundry import _kernels as compiled
except ImportError:
    compiled = None


def _minor_workload(mod, M):
    def run():
        total = 0
        for C in (0, 1, 3, 5):
            for Dt in itertools.combinations(range(2, M.n), 2):
                D = (1 << Dt[0]) | (1 << Dt[1])
                total += mod.count_minor_bases(M.bases, C, D & ~C)
        return total

    return run


def _rank_workload(mod, M):
    indep = M.independent_sets
    return lambda: mod.subset_ranks(M.n, indep)


def main():
    if compiled is None:
        print("compiled kernels are not built; only the fallback is available")
        return 1
    cases = [
        ("count_minor_bases", _minor_workload, named_matroid("AG23_minus_e")),
        ("subset_ranks", _rank_workload, named_matroid("T8")),
        ("subset_ranks", _rank_workload, named_matroid("U(5,12)")),
    ]
    for name, make, M in cases:
        a, b = make(pure, M), make(compiled, M)
        assert a() == b(), name
        tp = min(timeit.repeat(a, number=3, repeat=5)) / 3
        tc = min(timeit.repeat(b, number=3, repeat=5)) / 3
        print(f"{name:18s} n={M.n:2d}  python {tp * 1e3:8.2f} ms  cython {tc * 1e3:8.2f} ms  speedup {tp / tc:6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
