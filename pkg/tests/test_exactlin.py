import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix

from semistab.errors import DimensionError
from semistab.exactlin import (
    FgAbelianGroup,
    IntMatrix,
    cokernel,
    determinant,
    integer_kernel,
    smith_normal_form,
    solve_integer,
)


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def rows(m: IntMatrix):
    return [list(m.row(i)) for i in range(m.rows)]


def assert_snf(data):
    m = IntMatrix(data)
    u, d, v = smith_normal_form(m)
    assert matmul(matmul(rows(u), data), rows(v)) == rows(d)
    assert abs(Matrix(rows(u)).det()) == 1
    assert abs(Matrix(rows(v)).det()) == 1
    diag = [rows(d)[i][i] for i in range(min(m.rows, m.cols))]
    for i in range(m.rows):
        for j in range(m.cols):
            if i != j:
                assert rows(d)[i][j] == 0
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[: len(nz)] == nz, "zeros must trail"
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0


def test_snf_identity():
    u, d, v = smith_normal_form(IntMatrix([[1, 0], [0, 1]]))
    assert rows(d) == [[1, 0], [0, 1]]
    assert rows(u) == [[1, 0], [0, 1]] and rows(v) == [[1, 0], [0, 1]]


def test_snf_diag_2_3():
    _, d, _ = smith_normal_form(IntMatrix([[2, 0], [0, 3]]))
    assert rows(d) == [[1, 0], [0, 6]]
    assert_snf([[2, 0], [0, 3]])


def test_snf_row():
    _, d, _ = smith_normal_form(IntMatrix([[1, 1]]))
    assert rows(d) == [[1, 0]]


def test_snf_zero_and_empty_shapes():
    assert_snf([[0, 0], [0, 0]])
    u, d, v = smith_normal_form(IntMatrix.zeros(2, 0))
    assert d.rows == 2 and d.cols == 0


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-10, 10), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_properties(data):
    assert_snf(data)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_sympy(data):
    assert determinant(IntMatrix(data)) == Matrix(data).det()


def test_cokernel_examples():
    g = cokernel(IntMatrix([[1], [1]]))
    assert (g.free_rank, g.torsion) == (1, ())
    g = cokernel(IntMatrix([[2]]))
    assert (g.free_rank, g.torsion) == (0, (2,))
    g = cokernel(IntMatrix([[2, 0], [0, 2]]))
    assert (g.free_rank, g.torsion) == (0, (2, 2))


def test_cokernel_order_matches_coset_count():
    # Z^2 / <(2,0),(0,2)>: count cosets of the box 0..3 by brute force
    gens = [(2, 0), (0, 2)]
    reps = set()
    for x, y in itertools.product(range(4), repeat=2):
        reps.add((x % 2, y % 2))
    assert cokernel(IntMatrix([list(c) for c in zip(*gens)])).torsion_order == len(reps)


def test_solve_integer_examples():
    x, ker = solve_integer(IntMatrix([[2]]), [4])
    assert list(x) == [2] and not ker
    assert solve_integer(IntMatrix([[2]]), [3]) is None
    x, ker = solve_integer(IntMatrix([[1, 1]]), [0])
    assert list(x) == [0, 0]
    assert [list(k) for k in ker] in ([[1, -1]], [[-1, 1]])


def test_solve_integer_dimension_check():
    with pytest.raises(DimensionError):
        solve_integer(IntMatrix([[1, 1]]), [1, 2])


@settings(max_examples=100, deadline=None)
@given(matrices, st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_solve_integer_solutions_are_exact(data, xs):
    m = IntMatrix(data)
    x0 = xs[: m.cols]
    b = [sum(a * c for a, c in zip(row, x0)) for row in data]
    sol = solve_integer(m, b)
    assert sol is not None
    x, ker = sol
    assert [sum(a * c for a, c in zip(row, x)) for row in data] == b
    for k in ker:
        assert all(sum(a * c for a, c in zip(row, k)) == 0 for row in data)
    assert len(ker) == m.cols - Matrix(data).rank()


def test_integer_kernel_rank():
    rng = random.Random(5)
    for _ in range(30):
        data = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(2)]
        assert len(integer_kernel(IntMatrix(data))) == 4 - Matrix(data).rank()


def test_group_arithmetic_reduces_torsion():
    g = FgAbelianGroup(1, (2, 6))
    a = g.element([1, 1, 5])
    assert (a + a).coords == (2, 0, 4)
    assert (a * 6).coords == (6, 0, 0)
    assert (a - a).is_zero()
    assert g.torsion_order == 12


def test_group_rejects_non_chain():
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (2, 3))
