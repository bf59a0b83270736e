"""Time the compiled and pure-Python completion kernels on the same systems.

    python benchmarks/bench_cdsearch.py [--repeat N]
"""
from __future__ import annotations

import argparse
import random
import time

from semistab import _cdsearch
from semistab.diophantine import _equilibrate

try:
    from semistab import _cdsearch_ext
except ImportError:  # extension not built
    _cdsearch_ext = None


def systems() -> list[tuple[str, list[list[int]]]]:
    rng = random.Random(2024)
    out = [
        ("x+y=2z", [[1], [1], [-2]]),
        ("2x+3y=5z+7w", [[2], [3], [-5], [-7]]),
        ("two rows, 5 vars", [[1, 2], [2, -1], [-3, 1], [1, -2], [-1, 0]]),
    ]
    for k in range(3):
        rows, n = 2, 6
        mat = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rows)]
        out.append((f"random 2x6 #{k}", [list(c) for c in zip(*mat)]))
    for k in range(2):
        rows, n = 3, 7
        mat = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(rows)]
        out.append((f"random 3x7 #{k}", [list(c) for c in zip(*mat)]))
    out.append(("3 rows, 10 vars", [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1], [-1, -1, -1], [2, -1, 0], [0, 2, -1]]))
    # relation system of a semistable monoid over <2,7>
    fq = [(-2, 0, 0), (-7, 0, 0)]
    p = [(-14, -1, -1), (0, 1, 0), (0, 0, 1)]
    gens = fq + p
    out.append(("semistable relations", [list(g) for g in gens] + [[-x for x in g] for g in gens]))
    return out


def run(kernel, cols, repeat: int) -> tuple[float, int]:
    cols, rhs = _equilibrate(cols, [0] * len(cols[0]))
    n = len(cols)
    starts = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    best = float("inf")
    size = 0
    for _ in range(repeat):
        t = time.perf_counter()
        sols, _ = kernel.cd_search(cols, rhs, starts, None, None, 10**7, [])
        best = min(best, time.perf_counter() - t)
        size = len(sols)
    return best, size


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'system':<24}{'basis':>6}{'python ms':>12}{'compiled ms':>13}{'speedup':>9}")
    for name, cols in systems():
        tp, size = run(_cdsearch, cols, args.repeat)
        if _cdsearch_ext is None:
            print(f"{name:<24}{size:>6}{tp * 1e3:>12.2f}{'n/a':>13}{'':>9}")
            continue
        tc, size2 = run(_cdsearch_ext, cols, args.repeat)
        assert size == size2, "kernels disagree"
        print(f"{name:<24}{size:>6}{tp * 1e3:>12.2f}{tc * 1e3:>13.2f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
