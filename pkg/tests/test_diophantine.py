import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_data
from oracles.brute import minimal_solutions
from semistab import _cdsearch, diophantine
from semistab.diophantine import (
    canonical_key,
    grlex_greater,
    hilbert_basis,
    is_minimal_set,
    nonneg_solve,
    state_cap,
)
from semistab.errors import DimensionError, ResourceLimitExceeded
from semistab.exactlin import IntMatrix


def hb(rows):
    m = rows if isinstance(rows, IntMatrix) else IntMatrix(rows)
    return [tuple(v) for v in hilbert_basis(m)]


def test_examples(backend):
    assert hb([[1, -1]]) == [(1, 1)]
    assert sorted(hb([[1, 1, -2]])) == [(0, 2, 1), (1, 1, 1), (2, 0, 1)]
    assert hb(IntMatrix.zeros(0, 3)) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_nonneg_solve_examples(backend):
    assert nonneg_solve(IntMatrix([[2, 3]]), [7]) == [(2, 1)]
    assert nonneg_solve(IntMatrix([[2, 3]]), [1]) == []
    assert nonneg_solve(IntMatrix([[1]]), [0]) == [(0,)]


def test_output_is_canonically_ordered(backend):
    basis = hb([[1, 1, -2]])
    assert basis == sorted(basis, key=canonical_key)
    assert basis[0] == (1, 1, 1) or sum(basis[0]) <= sum(basis[1])


def test_canonical_key_lists_e1_first():
    assert sorted([(0, 1), (1, 0)], key=canonical_key) == [(1, 0), (0, 1)]
    assert grlex_greater((2, 0), (0, 1))
    assert not grlex_greater((0, 1), (1, 0))


def test_frozen_catalog_matches(backend):
    for case in load_data("hilbert_catalog.json"):
        assert sorted(hb(case["matrix"])) == sorted(tuple(v) for v in case["basis"]), case["matrix"]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=3), st.integers(0, 6))
def test_inhomogeneous_against_brute_force(coeffs, rhs):
    got = nonneg_solve(IntMatrix([coeffs]), [rhs])
    if rhs == 0:
        assert got == [(0,) * len(coeffs)]
        return
    expected = minimal_solutions([coeffs], [rhs], len(coeffs), box=10)
    # the box can cut off large solutions; every brute-force one must be found
    assert set(expected) <= set(got)
    assert all(sum(c * x for c, x in zip(coeffs, s)) == rhs for s in got)
    assert is_minimal_set(got)


def test_bounded_search_respects_grading(backend):
    sols = nonneg_solve(IntMatrix([[1, 1]]), [3], bound=3, grading=[1, 1])
    assert sorted(sols) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert nonneg_solve(IntMatrix([[1, 1]]), [3], bound=2) == []


def test_cap_raises_and_never_truncates(backend):
    rows = [[3, 5, -7, -11]]
    with pytest.raises(ResourceLimitExceeded):
        hilbert_basis(IntMatrix(rows), cap=3)
    with state_cap(3):
        with pytest.raises(ResourceLimitExceeded):
            hilbert_basis(IntMatrix(rows))
    assert len(hilbert_basis(IntMatrix(rows))) > 0


def test_dimension_errors():
    with pytest.raises(DimensionError):
        nonneg_solve(IntMatrix([[1, 2]]), [1, 2])
    with pytest.raises(ValueError):
        nonneg_solve(IntMatrix([[1, 2]]), [1], bound=-1)


def test_backends_agree_on_random_systems():
    if diophantine.BACKEND != "compiled":
        pytest.skip("compiled kernel not built")
    from semistab import _cdsearch_ext

    rng = random.Random(17)
    for _ in range(120):
        n = rng.randint(2, 6)
        r = rng.randint(1, 2)
        cols = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(n)]
        starts = [tuple(int(i == j) for i in range(n)) for j in range(n)]
        a, _ = _cdsearch.cd_search(cols, [0] * r, starts, None, None, 10**6, [])
        b, _ = _cdsearch_ext.cd_search(cols, [0] * r, starts, None, None, 10**6, [])
        assert sorted(map(tuple, a)) == sorted(map(tuple, b))


def test_large_entries_use_python_kernel(backend):
    big = 1 << 40
    assert nonneg_solve(IntMatrix([[big, -big]]), [0]) == [(0, 0)]
    assert hb([[big, -big]]) == [(1, 1)]


def test_exhaustive_tiny_systems(backend):
    # every 1x2 and 1x3 system with coefficients in -2..2
    for coeffs in itertools.product(range(-2, 3), repeat=3):
        if not any(coeffs):
            continue
        assert sorted(hb([list(coeffs)])) == minimal_solutions([coeffs], [0], 3, box=6)
