import sympy as sp
import pytest
from hypothesis import given, strategies as st

from pvalab.exact_linalg import (
    Echelon, Q, SparseMatrix, pm, rank, rank_kernel, solve_in_rowspace, vec_add,
)

small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(c)] for _ in range(r)]


@given(matrices())
def test_rank_matches_sympy(data):
    m = SparseMatrix.from_dense(data)
    r, ker = rank_kernel(m)
    assert r == sp.Matrix(data).rank()
    assert len(ker) == m.ncols - r
    for v in ker:
        assert not m.apply(v)


@given(matrices())
def test_kernel_vectors_independent(data):
    m = SparseMatrix.from_dense(data)
    _, ker = rank_kernel(m)
    assert rank(ker) == len(ker)


@given(matrices(), st.lists(small, min_size=6, max_size=6))
def test_solve_in_rowspace(data, coeffs):
    m = SparseMatrix.from_dense(data)
    target = {}
    for i, row in enumerate(m.rows):
        target = vec_add(target, row, coeffs[i % len(coeffs)])
    sol = solve_in_rowspace(m, target)
    assert sol is not None
    back = {}
    for i, c in sol.items():
        back = vec_add(back, m.rows[i], c)
    assert back == target


def test_solve_outside_rowspace():
    m = SparseMatrix.from_dense([[1, 1, 0], [0, 0, 0]])
    assert solve_in_rowspace(m, [1, 0, 0]) is None


def test_echelon_express_and_residual():
    e = Echelon()
    assert e.add({0: 1, 1: 2}, {"a": 1})
    assert e.add({1: 1}, {"b": 1})
    assert not e.add({0: 2, 1: 5})
    assert e.residual({0: 1, 1: 2, 2: 7}) == {2: 7}
    combo = e.express({0: 1, 1: 3})
    assert combo == {"a": 1, "b": 1}


def test_matmul_and_transpose():
    a = SparseMatrix.from_dense([[1, 2], [0, 1]])
    b = SparseMatrix.from_dense([[1, -2], [0, 1]])
    assert (a @ b).to_dense() == [[1, 0], [0, 1]]
    assert a.transpose().to_dense() == [[1, 0], [2, 1]]


def test_exact_rationals():
    assert Q(1, 3) + Q(2, 3) == 1
    with pytest.raises(TypeError):
        Q(0.5)


@given(st.integers(-50, 50))
def test_pm(k):
    assert pm(k) == (-1) ** (k % 2)
    assert isinstance(pm(k), int)


def test_column_bounds():
    with pytest.raises(ValueError):
        SparseMatrix(1, 2, [{5: 1}])
