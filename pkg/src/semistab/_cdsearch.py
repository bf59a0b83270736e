"""Pure-Python Contejean-Devie completion search (reference backend).

``cd_search`` explores states ``x`` in N^n breadth-first by degree. A state
is extended by ``e_j`` only when ``<A x - b, A e_j> < 0``; states dominating
an already-found solution are pruned. The compiled backend in
``_cdsearch_ext.pyx`` implements the same contract.
"""


def cd_search(cols, rhs, starts, weights, bound, cap, prune=()):
    """Minimal solutions of ``sum_j x_j cols[j] = rhs`` reachable from ``starts``.

    cols    -- list of n integer columns, each of length R
    rhs     -- right-hand side of length R
    starts  -- list of initial states (tuples of length n)
    weights -- per-variable nonnegative weights, or None
    bound   -- maximal weighted degree of explored states, or None
    cap     -- maximal number of generated states
    prune   -- extra vectors; states dominating one of them are dropped

    Returns ``(solutions, visited)``; raises ``RuntimeError('cap')`` when
    ``cap`` is hit.
    """
    n = len(cols)
    gram = [[sum(a * b for a, b in zip(cols[i], cols[j])) for j in range(n)] for i in range(n)]
    bdot = [sum(a * b for a, b in zip(c, rhs)) for c in cols]
    bnorm = sum(b * b for b in rhs)
    rng = range(n)

    def init(x):
        v = [-bdot[j] for j in rng]
        for i in rng:
            xi = x[i]
            if xi:
                gi = gram[i]
                for j in rng:
                    v[j] += xi * gi[j]
        # |Ax - b|^2 = x.(v - bdot) + |b|^2
        norm = sum(x[i] * (v[i] - bdot[i]) for i in rng) + bnorm
        w = sum(weights[i] * x[i] for i in rng) if weights is not None else 0
        return tuple(v), norm, w

    solutions = []
    frontier = {}
    for s in starts:
        s = tuple(s)
        if s not in frontier:
            frontier[s] = init(s)
    visited = len(frontier)

    blockers = [tuple(p) for p in prune]

    def dominated(y):
        for sol in blockers:
            for a, b in zip(y, sol):
                if a < b:
                    break
            else:
                return True
        for sol in solutions:
            for a, b in zip(y, sol):
                if a < b:
                    break
            else:
                return True
        return False

    while frontier:
        found = []
        for x, (v, norm, w) in frontier.items():
            if norm == 0 and not dominated(x):
                found.append(x)
        solutions.extend(found)
        nxt = {}
        for x, (v, norm, w) in frontier.items():
            if norm == 0:
                continue
            for j in rng:
                vj = v[j]
                if vj >= 0:
                    continue
                nw = w + weights[j] if weights is not None else 0
                if bound is not None and nw > bound:
                    continue
                y = x[:j] + (x[j] + 1,) + x[j + 1:]
                if y in nxt or dominated(y):
                    continue
                gj = gram[j]
                nxt[y] = (tuple(a + b for a, b in zip(v, gj)), norm + 2 * vj + gj[j], nw)
                visited += 1
                if visited > cap:
                    raise RuntimeError("cap")
        frontier = nxt
    return solutions, visited
