"""Regenerate the frozen oracle tables in tests/data.

    python tests/oracles/freeze.py

Every value is produced by the brute-force code in ``brute.py``.
"""
from __future__ import annotations

import itertools
import json
import os
import random
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from oracles.brute import LatticeMonoid, apply_linear, integrality_search, minimal_solutions  # noqa: E402

DATA = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")


def hilbert_catalog() -> list[dict]:
    fixed = [
        [[1, -1]],
        [[1, 1, -2]],
        [[2, 3, -1]],
        [[2, -3]],
        [[1, 2, -3]],
        [[3, -2, -1]],
        [[1, 1, -1, -1]],
        [[1, -1, 0], [0, 1, -1]],
        [[1, 1, -2, 0], [0, 1, 1, -2]],
        [[2, 1, -3, 0]],
    ]
    rng = random.Random(1234)
    seen = {json.dumps(m) for m in fixed}
    out = list(fixed)
    while len(out) < 50:
        nvars = rng.randint(2, 4)
        rows = rng.randint(1, 2)
        m = [[rng.randint(-3, 3) for _ in range(nvars)] for _ in range(rows)]
        if any(not any(r) for r in m) or json.dumps(m) in seen:
            continue
        seen.add(json.dumps(m))
        out.append(m)
    return [{"matrix": m, "basis": [list(v) for v in minimal_solutions(m, [0] * len(m), len(m[0]))]} for m in out]


SOURCES = [
    [[1]],
    [[2], [3]],
    [[1, 0], [0, 1]],
    [[1, 0], [1, 1]],
    [[1, 0], [1, 1], [1, 2]],
]
TARGETS = [
    [[1]],
    [[2], [3]],
    [[1, 0], [0, 1]],
    [[1, 0], [1, 1]],
    [[1, 0], [1, 2]],
    [[2, 0], [1, 1], [0, 2]],
    [[1, 0], [1, 1], [1, 2]],
    [[1, 0], [0, 1], [1, 1]],
]


def integrality_catalog() -> list[dict]:
    cases = []
    for qg, pg in itertools.product(SOURCES, TARGETS):
        dq, dp = len(qg[0]), len(pg[0])
        P = LatticeMonoid(pg)
        for flat in itertools.product(range(3), repeat=dq * dp):
            mat = [list(flat[r * dq : (r + 1) * dq]) for r in range(dp)]
            images = [apply_linear(mat, g) for g in qg]
            if all(P.contains(x) for x in images):
                cases.append((qg, pg, mat, [list(x) for x in images]))
    rng = random.Random(99)
    rng.shuffle(cases)
    must = ([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 1], [0, 1]])
    chosen = [c for c in cases if (c[0], c[1], c[2]) == must][:1]
    chosen += [c for c in cases if c not in chosen][:139]
    out = []
    for qg, pg, mat, images in chosen:
        cex = integrality_search(qg, pg, mat, degree=8)
        out.append({"source": qg, "target": pg, "matrix": mat, "images": images, "integral": cex is None, "counterexample": cex})
    return out


def main() -> None:
    os.makedirs(DATA, exist_ok=True)
    for name, fn in (("hilbert_catalog", hilbert_catalog), ("integrality_catalog", integrality_catalog)):
        rows = fn()
        with open(os.path.join(DATA, f"{name}.json"), "w") as fh:
            json.dump(rows, fh, indent=1, sort_keys=True)
            fh.write("\n")
        print(name, len(rows))


if __name__ == "__main__":
    main()
