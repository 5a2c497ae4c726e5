"""
測試精確線性代數

測試內容：
1. 純量解析與格式化（拒絕浮點數與布林值）
2. Matrix 的建立、column-major 展平
3. rref、kernel_basis、solve（自由變數取 0 的標準解）
4. Subspace 的標準化、和、交集、包含
5. LinearSystem 的稀疏核空間
6. 以無分數消去法（Bareiss）作為秩的獨立驗證
"""
import random
from fractions import Fraction

import pytest

from liederiv.errors import InputError
from liederiv.exact import (
    LinearSystem,
    Matrix,
    Subspace,
    format_scalar,
    kernel_basis,
    parse_scalar,
    rref,
    solve,
)


def bareiss_rank(rows):
    """
    無分數消去法計算秩

    與 sympy 的 rref 完全無關的實作，作為秩的對照。
    """
    m = [[Fraction(x) for x in row] for row in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = Fraction(1)
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                m[r][c] = (m[r][c] * m[rank][col] - m[r][col] * m[rank][c]) / prev
            m[r][col] = Fraction(0)
        prev = m[rank][col]
        rank += 1
        if rank == nrows:
            break
    return rank


def test_parse_scalar_accepts_exact_forms():
    """整數、'p/q' 與 'p' 字串都轉為最簡分數"""
    assert parse_scalar(2) == Fraction(2)
    assert parse_scalar('3/6') == Fraction(1, 2)
    assert parse_scalar('-4') == Fraction(-4)
    assert parse_scalar(' 1/2 ') == Fraction(1, 2)
    assert parse_scalar(Fraction(2, 3)) == Fraction(2, 3)


@pytest.mark.parametrize('value', [0.5, True, '1.5', '1e3', '1/0', None, [1]])
def test_parse_scalar_rejects_inexact(value):
    """浮點數、布林值與格式錯誤的字串都是 malformed-scalar"""
    with pytest.raises(InputError) as exc_info:
        parse_scalar(value)
    assert exc_info.value.code == 'malformed-scalar'


def test_format_scalar():
    assert format_scalar(Fraction(2, 4)) == '1/2'
    assert format_scalar(Fraction(3)) == '3'
    assert format_scalar(Fraction(-1, 3)) == '-1/3'


def test_matrix_from_rows_checks_shape():
    with pytest.raises(InputError) as exc_info:
        Matrix.from_rows([[1, 2], [3]])
    assert exc_info.value.code == 'dimension-mismatch'


def test_flatten_is_column_major():
    """
    展平慣例：第 j 欄（e_j 的像）連續存放
    """
    m = Matrix.from_rows([[1, 2], [3, 4]])
    assert m.flatten() == (1, 3, 2, 4)
    assert Matrix.from_flat(m.flatten(), 2, 2) == m
    assert m.column(1) == (2, 4)
    assert m.apply((0, 1)) == (2, 4)


def test_rref_and_pivots():
    reduced, pivots = rref(Matrix.from_rows([[1, 2], [2, 4]]))
    assert reduced == Matrix.from_rows([[1, 2], [0, 0]])
    assert pivots == [0]


def test_kernel_basis_dimension():
    m = Matrix.from_rows([[1, 2, 3]])
    kernel = kernel_basis(m)
    assert kernel.dim == 2
    for v in kernel.vectors():
        assert m.apply(v) == (0,)


def test_solve_unique_and_inconsistent():
    assert solve(Matrix.from_rows([[1, 1], [1, -1]]), (3, 1)) == (2, 1)
    assert solve(Matrix.from_rows([[1, 1], [2, 2]]), (1, 3)) is None


def test_solve_sets_free_variables_to_zero():
    """標準解：自由變數取 0，所以結果是確定的"""
    assert solve(Matrix.from_rows([[1, 1]]), (2,)) == (2, 0)


def test_solve_checks_rhs_length():
    with pytest.raises(InputError) as exc_info:
        solve(Matrix.from_rows([[1, 1]]), (1, 2))
    assert exc_info.value.code == 'dimension-mismatch'


def test_subspace_canonical_form():
    """相同的子空間永遠有相同的表示"""
    assert Subspace.from_vectors(2, [(1, 1)]) == Subspace.from_vectors(2, [(2, 2), (0, 0)])
    assert Subspace.from_vectors(3, []).dim == 0


def test_subspace_sum_intersect_contains():
    u = Subspace.from_vectors(3, [(1, 0, 0), (0, 1, 0)])
    v = Subspace.from_vectors(3, [(0, 1, 0), (0, 0, 1)])
    assert u.sum(v).dim == 3
    meet = u.intersect(v)
    assert meet.dim == 1
    assert meet.contains((0, 5, 0))
    assert not meet.contains((1, 0, 0))
    assert meet.is_subspace_of(u) and meet.is_subspace_of(v)
    assert u.coordinates((2, 3, 0)) == (2, 3)
    assert u.coordinates((0, 0, 1)) is None


def test_subspace_ambient_mismatch():
    with pytest.raises(InputError) as exc_info:
        Subspace.full(2).sum(Subspace.full(3))
    assert exc_info.value.code == 'ambient-mismatch'


def test_linear_system_kernel():
    system = LinearSystem(3)
    system.add_row({0: Fraction(1), 1: Fraction(1)})
    # 全零列會被略過
    system.add_row({2: Fraction(0)})
    assert system.nrows == 1
    kernel = system.kernel()
    assert kernel.dim == 2
    assert kernel.contains((1, -1, 7))
    assert LinearSystem(4).kernel() == Subspace.full(4)


def test_rank_matches_bareiss_oracle():
    """
    隨機整數矩陣的秩：rref 的主元數與 Bareiss 消去法一致，
    核空間維度等於欄數減去秩
    """
    rng = random.Random(7)
    for _ in range(25):
        rows, cols = rng.randint(1, 5), rng.randint(1, 6)
        # 用小範圍的係數，讓秩不足的情況經常出現
        data = [[rng.randint(-2, 2) for _ in range(cols)] for _ in range(rows)]
        m = Matrix.from_rows(data)
        _, pivots = rref(m)
        rank = bareiss_rank(data)
        assert len(pivots) == rank
        kernel = kernel_basis(m)
        assert kernel.dim == cols - rank
        for v in kernel.vectors():
            assert not any(m.apply(v))
