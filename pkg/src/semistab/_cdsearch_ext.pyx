# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Contejean-Devie completion search.

Same contract as ``_cdsearch.cd_search``; states live in flat int64 buffers
with layout ``x[0:n] | v[0:n] | norm | weight``. Callers route inputs that
could overflow int64 to the Python kernel.
"""
from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memcpy

ctypedef long long i64


cdef struct Buf:
    i64* data
    Py_ssize_t size
    Py_ssize_t capacity


cdef int buf_reserve(Buf* b, Py_ssize_t extra) except -1:
    cdef Py_ssize_t need = b.size + extra
    cdef Py_ssize_t cap = b.capacity if b.capacity else 64
    cdef i64* p
    if need <= b.capacity:
        return 0
    while cap < need:
        cap *= 2
    p = <i64*>realloc(b.data, cap * sizeof(i64))
    if p == NULL:
        raise MemoryError()
    b.data = p
    b.capacity = cap
    return 0


cdef inline bint dominates_any(const i64* y, const i64* sols, Py_ssize_t count, Py_ssize_t n) nogil:
    cdef Py_ssize_t s, i
    cdef const i64* row
    for s in range(count):
        row = sols + s * n
        for i in range(n):
            if y[i] < row[i]:
                break
        else:
            return True
    return False


def cd_search(cols, rhs, starts, weights, bound, cap, prune=()):
    cdef Py_ssize_t n = len(cols)
    cdef Py_ssize_t R = len(rhs)
    cdef Py_ssize_t stride = 2 * n + 2
    cdef Py_ssize_t i, j, k, s, nfront, nsol, nprune
    cdef i64 vj, nw, ibound = 0, icap = cap, visited = 0
    cdef bint has_w = weights is not None
    cdef bint has_bound = bound is not None
    cdef i64* gram = <i64*>malloc(max(n * n, 1) * sizeof(i64))
    cdef i64* bdot = <i64*>malloc(max(n, 1) * sizeof(i64))
    cdef i64* wts = <i64*>malloc(max(n, 1) * sizeof(i64))
    cdef i64* y = <i64*>malloc(max(n, 1) * sizeof(i64))
    cdef i64* st
    cdef i64* gj
    cdef i64 bnorm = 0, norm
    cdef Buf front, nxt, sols, blockers
    front.data = NULL; front.size = 0; front.capacity = 0
    nxt.data = NULL; nxt.size = 0; nxt.capacity = 0
    sols.data = NULL; sols.size = 0; sols.capacity = 0
    blockers.data = NULL; blockers.size = 0; blockers.capacity = 0
    if has_bound:
        ibound = bound
    try:
        for i in range(n):
            wts[i] = weights[i] if has_w else 0
            bdot[i] = 0
            for k in range(R):
                bdot[i] += <i64>cols[i][k] * <i64>rhs[k]
            for j in range(n):
                gram[i * n + j] = 0
                for k in range(R):
                    gram[i * n + j] += <i64>cols[i][k] * <i64>cols[j][k]
        for k in range(R):
            bnorm += <i64>rhs[k] * <i64>rhs[k]
        for p in prune:
            buf_reserve(&blockers, n)
            for i in range(n):
                blockers.data[blockers.size + i] = p[i]
            blockers.size += n
        nprune = blockers.size // n if n else 0

        seen = set()
        for x0 in starts:
            key = tuple(x0)
            if key in seen:
                continue
            seen.add(key)
            buf_reserve(&front, stride)
            st = front.data + front.size
            for i in range(n):
                st[i] = x0[i]
            for j in range(n):
                st[n + j] = -bdot[j]
            for i in range(n):
                if st[i]:
                    for j in range(n):
                        st[n + j] += st[i] * gram[i * n + j]
            norm = bnorm
            for i in range(n):
                norm += st[i] * (st[n + i] - bdot[i])
            st[2 * n] = norm
            st[2 * n + 1] = 0
            for i in range(n):
                st[2 * n + 1] += wts[i] * st[i]
            front.size += stride
            visited += 1

        while front.size:
            nfront = front.size // stride
            # harvest solutions of this level
            nsol = sols.size // n if n else 0
            for s in range(nfront):
                st = front.data + s * stride
                if st[2 * n] == 0 and not dominates_any(st, sols.data, nsol, n):
                    buf_reserve(&sols, n)
                    memcpy(sols.data + sols.size, st, n * sizeof(i64))
                    sols.size += n
            nsol = sols.size // n if n else 0
            nxt.size = 0
            level = set()
            for s in range(nfront):
                st = front.data + s * stride
                if st[2 * n] == 0:
                    continue
                for j in range(n):
                    vj = st[n + j]
                    if vj >= 0:
                        continue
                    nw = st[2 * n + 1] + wts[j]
                    if has_bound and nw > ibound:
                        continue
                    memcpy(y, st, n * sizeof(i64))
                    y[j] += 1
                    if dominates_any(y, blockers.data, nprune, n) or dominates_any(y, sols.data, nsol, n):
                        continue
                    key = PyBytes_FromStringAndSize(<char*>y, n * sizeof(i64))
                    if key in level:
                        continue
                    level.add(key)
                    buf_reserve(&nxt, stride)
                    # buf_reserve may move nxt only; st points into front
                    gj = gram + j * n
                    memcpy(nxt.data + nxt.size, y, n * sizeof(i64))
                    for i in range(n):
                        nxt.data[nxt.size + n + i] = st[n + i] + gj[i]
                    nxt.data[nxt.size + 2 * n] = st[2 * n] + 2 * vj + gj[j]
                    nxt.data[nxt.size + 2 * n + 1] = nw
                    nxt.size += stride
                    visited += 1
                    if visited > icap:
                        raise RuntimeError("cap")
            front, nxt = nxt, front

        out = []
        nsol = sols.size // n if n else 0
        for s in range(nsol):
            out.append(tuple(sols.data[s * n + i] for i in range(n)))
        return out, visited
    finally:
        free(gram); free(bdot); free(wts); free(y)
        free(front.data); free(nxt.data); free(sols.data); free(blockers.data)
