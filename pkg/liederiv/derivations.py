"""
導子空間

這個模組計算 Der(A)、LieDer(A)、內導子，以及 A⋉X 上線性映射的區塊分解
L(a, x) = (L_A(a) + T(x), L_X(a) + S(x))，並提供區塊條件的檢查。

展平慣例（整個套件固定使用）：
- n x n 映射 D 以 column-major 展平為長度 n² 的向量
- 索引 s * n + r 對應 D(e_s) 在 e_r 上的係數

Library 說明：
- functools.lru_cache: 以參數為鍵快取函數結果；StructureAlgebra 是 frozen dataclass，
  可以雜湊，所以同一個代數的 Der、LieDer 只解一次方程組
- dataclasses: LinearEndomap、BlockDecomposition 與條件報告都是不可變的 dataclass
"""
import logging
from dataclasses import dataclass
# lru_cache: 最近最少使用快取，maxsize 是保留的結果數量
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple, Union

from .algebra import Bimodule, StructureAlgebra, Tensor
from .errors import ConsistencyError, InputError
from .exact import LinearSystem, Matrix, Subspace, Vector, is_zero_vector, sub_vectors, unit_vector
from .extension import StarContext, TrivialExtension

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearEndomap:
    """
    代數或模座標空間之間的線性映射

    方陣是自映射；模值映射（例如 L_X: A → X）使用長方形矩陣。
    """
    matrix: Matrix

    @property
    def rows(self) -> int:
        """值域的維度"""
        return self.matrix.rows

    @property
    def cols(self) -> int:
        """定義域的維度"""
        return self.matrix.cols

    @classmethod
    def identity(cls, n: int) -> 'LinearEndomap':
        """恆等映射"""
        return cls(Matrix.identity(n))

    @classmethod
    def zero(cls, rows: int, cols: int) -> 'LinearEndomap':
        """零映射"""
        return cls(Matrix.zeros(rows, cols))

    @classmethod
    def from_flat(cls, vector: Sequence, rows: int, cols: int = None) -> 'LinearEndomap':
        """由 column-major 展平向量還原映射；cols 省略時視為方陣"""
        return cls(Matrix.from_flat(vector, rows, rows if cols is None else cols))

    def apply(self, v: Sequence) -> Vector:
        """計算 L(v)"""
        return self.matrix.apply(v)

    def flatten(self) -> Vector:
        """column-major 展平，和映射空間的座標一致"""
        return self.matrix.flatten()

    # __add__ 與 __sub__ 讓兩個映射可以直接用 + 和 - 運算
    def __add__(self, other: 'LinearEndomap') -> 'LinearEndomap':
        return LinearEndomap(self.matrix + other.matrix)

    def __sub__(self, other: 'LinearEndomap') -> 'LinearEndomap':
        return LinearEndomap(self.matrix - other.matrix)


def space_maps(space: Subspace, rows: int, cols: int = None) -> List[LinearEndomap]:
    """把映射空間的基底向量還原為映射列表"""
    return [LinearEndomap.from_flat(v, rows, cols) for v in space.vectors()]


def _leibniz_system(tensor: Tensor, n: int, pairs: Sequence[Tuple[int, int]]) -> LinearSystem:
    """
    雙線性運算 β 的 Leibniz 方程組

    對每個 (i, j) 與座標 k：
        D(β(e_i, e_j))_k - β(D e_i, e_j)_k - β(e_i, D e_j)_k = 0
    未知數 D(e_s) 在 e_r 上的係數索引為 s * n + r。
    """
    # n² 個未知數：D 的每一個矩陣元素
    system = LinearSystem(n * n)
    for i, j in pairs:
        target = tensor[i][j]
        # 每個 (i, j) 對每個輸出座標 k 產生一列方程
        for k in range(n):
            # 稀疏列：{未知數索引: 係數}
            row: Dict[int, object] = {}
            # D(β(e_i, e_j))_k = Σ_s β(e_i, e_j)_s · D[s*n + k]
            for s, c in enumerate(target):
                if c:
                    # 同一個未知數可能出現多次，係數要累加
                    row[s * n + k] = row.get(s * n + k, 0) + c
            for r in range(n):
                # -β(D e_i, e_j)_k = -Σ_r D[i*n + r] · β(e_r, e_j)_k
                c = tensor[r][j][k]
                if c:
                    row[i * n + r] = row.get(i * n + r, 0) - c
                # -β(e_i, D e_j)_k = -Σ_r D[j*n + r] · β(e_i, e_r)_k
                c = tensor[i][r][k]
                if c:
                    row[j * n + r] = row.get(j * n + r, 0) - c
            # 全零的列由 LinearSystem 忽略
            system.add_row(row)
    return system


@lru_cache(maxsize=128)
def derivation_space(a: StructureAlgebra) -> Subspace:
    """
    Der(A) = {D : D(ab) = D(a)b + aD(b)}

    非交換代數的 D(e_i e_j) 與 D(e_j e_i) 是不同的方程，所以使用所有有序基底對。

    Returns:
        Subspace: n² 維映射空間中的子空間
    """
    pairs = [(i, j) for i in range(a.dim) for j in range(a.dim)]
    # β 是代數乘法，解空間就是 Der(A)
    space = _leibniz_system(a.mul, a.dim, pairs).kernel()
    logger.debug(f"Der: 維度 {space.dim} (代數維度 {a.dim})")
    return space


@lru_cache(maxsize=128)
def lie_derivation_space(a: StructureAlgebra, full_range: bool = False) -> Subspace:
    """
    LieDer(A) = {L : L[a,b] = [L(a),b] + [a,L(b)]}

    括號反對稱，所以預設只用 i < j 的基底對；full_range=True 使用所有有序對，
    兩種設定必須得到相同的空間（供檢查慣例錯誤使用）。
    """
    n = a.dim
    # i == j 時 [e_i, e_i] = 0，方程恆成立；(j, i) 的方程是 (i, j) 的負值
    if full_range:
        pairs = [(i, j) for i in range(n) for j in range(n)]
    else:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    # β 換成交換子 [-, -]，同一套 Leibniz 方程
    space = _leibniz_system(a.brackets, n, pairs).kernel()
    logger.debug(f"LieDer: 維度 {space.dim} (代數維度 {n})")
    return space


def ad_map(a: StructureAlgebra, u: Sequence) -> LinearEndomap:
    """內導子 ad_u = [u, -]"""
    # [u, x] = ux - xu，所以矩陣是左乘矩陣減右乘矩陣
    return LinearEndomap(a.left_matrix(u) - a.right_matrix(u))


@lru_cache(maxsize=128)
def inner_derivations(a: StructureAlgebra) -> Subspace:
    """內導子空間 span{ad_{e_i}}，維度等於 dim A - dim Z(A)"""
    # ad 是線性的，只需取基底的 ad；核是中心
    return Subspace.from_vectors(a.dim * a.dim, [ad_map(a, a.basis_vector(i)).flatten() for i in range(a.dim)])


@dataclass(frozen=True)
class BlockDecomposition:
    """
    A⋉X 上映射的區塊分解

    Attributes:
        l_a: n x n，A → A
        l_x: m x n，A → X
        t: n x m，X → A
        s: m x m，X → X
    """
    l_a: Matrix
    l_x: Matrix
    t: Matrix
    s: Matrix

    def reassemble(self) -> Matrix:
        """重組為 (n+m) x (n+m) 的矩陣 [[L_A, T], [L_X, S]]"""
        # tuple 相加是串接：每一列左半是 L_A 或 L_X，右半是 T 或 S
        top = [self.l_a.row(i) + self.t.row(i) for i in range(self.l_a.rows)]
        bottom = [self.l_x.row(i) + self.s.row(i) for i in range(self.l_x.rows)]
        return Matrix.from_rows(top + bottom, self.l_a.cols + self.t.cols)


def decompose_map(ext: TrivialExtension, mapping: Union[LinearEndomap, Matrix]) -> BlockDecomposition:
    """
    把 A⋉X 上的映射切成四個區塊

    Raises:
        InputError: 映射形狀不是 (n+m) x (n+m)（代碼 dimension-mismatch）
    """
    # 同時接受 LinearEndomap 與 Matrix
    matrix = mapping.matrix if isinstance(mapping, LinearEndomap) else mapping
    # A⋉X 的基底順序是 (A 的基底, X 的基底)
    n, m = ext.n, ext.m
    if matrix.rows != n + m or matrix.cols != n + m:
        raise InputError('dimension-mismatch', f"映射形狀 {matrix.rows}x{matrix.cols} 應為 {n + m}x{n + m}")
    # block(列起點, 列終點, 欄起點, 欄終點)；欄是定義域，列是值域
    return BlockDecomposition(
        matrix.block(0, n, 0, n),
        matrix.block(n, n + m, 0, n),
        matrix.block(0, n, n, n + m),
        matrix.block(n, n + m, n, n + m),
    )


# 條件名稱：Lie 導子的區塊條件
LIE_CONDITIONS = ('base-lie', 'module-lie', 't-commutes', 't-symmetric', 's-bracket')

# 條件名稱：導子的區塊條件
DERIVATION_CONDITIONS = (
    'base-derivation', 'module-derivation', 't-left-linear', 't-right-linear', 't-annihilates', 's-left', 's-right',
)

# (條件名稱, 基底索引, 殘差向量)；條件成立 ⇔ 殘差為零
Residual = Tuple[str, Tuple[int, ...], Vector]


def _x_bracket(x: Bimodule, v: Sequence, b: Sequence) -> Vector:
    """X 中的元素與 A 中的元素的括號 [v, b] = vb - bv"""
    # Bimodule.commutator 計算的是 [b, v]，這裡的順序相反
    return sub_vectors(x.act_right(v, b), x.act_left(b, v))


def _lie_residuals(ext: TrivialExtension, d: BlockDecomposition) -> List[Residual]:
    """
    Lie 區塊條件在基底上的殘差

    每個殘差對 (L_A, L_X, T, S) 是線性的，_residual_kernel 依賴這一點。
    """
    a, x = ext.base, ext.module
    # 取出四個區塊的 apply 方法，之後直接當函數呼叫
    la, lx, t, s = d.l_a.apply, d.l_x.apply, d.t.apply, d.s.apply
    es = [a.basis_vector(i) for i in range(a.dim)]
    xs = [x.basis_vector(j) for j in range(x.dim)]
    out: List[Residual] = []
    # 兩個 A 的基底向量：括號反對稱，只取 i < j
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            bracket = a.brackets[i][j]
            # L_A[e_i, e_j] - [L_A e_i, e_j] - [e_i, L_A e_j]
            base = sub_vectors(sub_vectors(la(bracket), a.commutator(la(es[i]), es[j])), a.commutator(es[i], la(es[j])))
            out.append(('base-lie', (i, j), base))
            # L_X[e_i, e_j] - [L_X e_i, e_j] - [e_i, L_X e_j]
            lhs = lx(bracket)
            rhs1 = _x_bracket(x, lx(es[i]), es[j])
            rhs2 = x.commutator(es[i], lx(es[j]))
            out.append(('module-lie', (i, j), sub_vectors(sub_vectors(lhs, rhs1), rhs2)))
    # 一個 A 的基底向量與一個 X 的基底向量
    for i in range(a.dim):
        for j in range(x.dim):
            ax = x.commutator(es[i], xs[j])
            out.append(('t-commutes', (i, j), sub_vectors(t(ax), a.commutator(es[i], t(xs[j])))))
            rhs = x.commutator(la(es[i]), xs[j])
            out.append(('s-bracket', (i, j), sub_vectors(sub_vectors(s(ax), rhs), x.commutator(es[i], s(xs[j])))))
    # 兩個 X 的基底向量：[x, y] = 0，只剩 T 的對稱條件
    for j in range(x.dim):
        for k in range(j + 1, x.dim):
            out.append(('t-symmetric', (j, k), sub_vectors(x.commutator(t(xs[j]), xs[k]), x.commutator(t(xs[k]), xs[j]))))
    return out


def _derivation_residuals(ext: TrivialExtension, d: BlockDecomposition) -> List[Residual]:
    """導子區塊條件在基底上的殘差；乘法不對稱，使用所有有序對"""
    a, x = ext.base, ext.module
    la, lx, t, s = d.l_a.apply, d.l_x.apply, d.t.apply, d.s.apply
    es = [a.basis_vector(i) for i in range(a.dim)]
    xs = [x.basis_vector(j) for j in range(x.dim)]
    out: List[Residual] = []
    for i in range(a.dim):
        for j in range(a.dim):
            # e_i e_j 的座標
            ab = a.mul[i][j]
            base = sub_vectors(sub_vectors(la(ab), a.product(la(es[i]), es[j])), a.product(es[i], la(es[j])))
            out.append(('base-derivation', (i, j), base))
            module = sub_vectors(sub_vectors(lx(ab), x.act_right(lx(es[i]), es[j])), x.act_left(es[i], lx(es[j])))
            out.append(('module-derivation', (i, j), module))
    for i in range(a.dim):
        for j in range(x.dim):
            # 左右作用分開，導子條件不能合併成括號
            ax = x.act_left(es[i], xs[j])
            xa = x.act_right(xs[j], es[i])
            out.append(('t-left-linear', (i, j), sub_vectors(t(ax), a.product(es[i], t(xs[j])))))
            out.append(('t-right-linear', (i, j), sub_vectors(t(xa), a.product(t(xs[j]), es[i]))))
            left = sub_vectors(sub_vectors(s(ax), x.act_left(es[i], s(xs[j]))), x.act_left(la(es[i]), xs[j]))
            out.append(('s-left', (i, j), left))
            right = sub_vectors(sub_vectors(s(xa), x.act_right(s(xs[j]), es[i])), x.act_right(xs[j], la(es[i])))
            out.append(('s-right', (i, j), right))
    for j in range(x.dim):
        for k in range(x.dim):
            # D(xy) = 0 展開後的 X 分量：x T(y) + T(x) y
            residual = [u + v for u, v in zip(x.act_right(xs[j], t(xs[k])), x.act_left(t(xs[j]), xs[k]))]
            out.append(('t-annihilates', (j, k), tuple(residual)))
    return out


@dataclass(frozen=True)
class ConditionFailure:
    """一個不成立的區塊條件，indices 是第一個失敗的基底索引"""
    condition: str
    indices: Tuple[int, ...]


@dataclass(frozen=True)
class ConditionReport:
    """
    區塊條件檢查報告

    Attributes:
        checked: 檢查過的條件名稱
        failures: 每個不成立的條件各一筆（含第一個失敗的索引）
    """
    checked: Tuple[str, ...]
    failures: Tuple[ConditionFailure, ...] = ()

    @property
    def ok(self) -> bool:
        """所有條件都成立"""
        return not self.failures

    def failed_conditions(self) -> List[str]:
        """不成立的條件名稱"""
        return [f.condition for f in self.failures]

    def passed_conditions(self) -> List[str]:
        """成立的條件名稱，順序與 checked 相同"""
        # set 的成員查詢是 O(1)
        failed = set(self.failed_conditions())
        return [c for c in self.checked if c not in failed]


def _report(names: Sequence[str], residuals: List[Residual]) -> ConditionReport:
    """把殘差整理成報告：每個條件只記錄第一個非零殘差的索引"""
    first: Dict[str, Tuple[int, ...]] = {}
    for name, indices, vector in residuals:
        if name not in first and not is_zero_vector(vector):
            first[name] = indices
    # 依 names 的固定順序輸出
    failures = tuple(ConditionFailure(name, first[name]) for name in names if name in first)
    return ConditionReport(tuple(names), failures)


def _extension_of(ext_or_ctx: Union[TrivialExtension, StarContext]) -> TrivialExtension:
    """StarContext 取出其中的平凡擴張"""
    return ext_or_ctx.extension if isinstance(ext_or_ctx, StarContext) else ext_or_ctx


def check_lie_conditions(ext_or_ctx: Union[TrivialExtension, StarContext], d: BlockDecomposition,
                         cross_check: bool = True) -> ConditionReport:
    """
    檢查 Lie 導子的區塊條件

    條件：
    - base-lie: L_A 是 A 上的 Lie 導子
    - module-lie: L_X[a,b] = [L_X(a),b] + [a,L_X(b)]
    - t-commutes: T([a,x]) = [a,T(x)]
    - t-symmetric: [T(x),y] = [T(y),x]
    - s-bracket: S([a,x]) = [L_A(a),x] + [a,S(x)]

    Args:
        ext_or_ctx: 平凡擴張或 StarContext
        d: 區塊分解
        cross_check: 是否與直接的 LieDer(A⋉X) 成員判定比對

    Raises:
        ConsistencyError: 區塊條件的結果與直接判定不一致
    """
    ext = _extension_of(ext_or_ctx)
    report = _report(LIE_CONDITIONS, _lie_residuals(ext, d))
    # 交叉驗證：把區塊重組成完整矩陣，直接檢查是否屬於 LieDer(A⋉X)
    if cross_check:
        direct = lie_derivation_space(ext.total).contains(d.reassemble().flatten())
        if direct != report.ok:
            raise ConsistencyError('block-lie-equivalence', "區塊條件與 LieDer(A⋉X) 的成員判定不一致",
                                   {'failed': report.failed_conditions(), 'direct': direct})
    return report


def check_derivation_conditions(ext_or_ctx: Union[TrivialExtension, StarContext], d: BlockDecomposition,
                                cross_check: bool = True) -> ConditionReport:
    """
    檢查導子的區塊條件

    條件：
    - base-derivation / module-derivation: L_A 與 L_X 滿足 Leibniz 規則
    - t-left-linear: T(ax) = aT(x)；t-right-linear: T(xa) = T(x)a
    - t-annihilates: xT(y) + T(x)y = 0
    - s-left: S(ax) = aS(x) + L_A(a)x；s-right: S(xa) = S(x)a + xL_A(a)

    Raises:
        ConsistencyError: 區塊條件的結果與直接的 Der(A⋉X) 成員判定不一致
    """
    ext = _extension_of(ext_or_ctx)
    report = _report(DERIVATION_CONDITIONS, _derivation_residuals(ext, d))
    # 同樣和直接的 Der(A⋉X) 成員判定比對
    if cross_check:
        direct = derivation_space(ext.total).contains(d.reassemble().flatten())
        if direct != report.ok:
            raise ConsistencyError('block-derivation-equivalence', "區塊條件與 Der(A⋉X) 的成員判定不一致",
                                   {'failed': report.failed_conditions(), 'direct': direct})
    return report


def _residual_kernel(ext: TrivialExtension,
                     residuals: Callable[[TrivialExtension, BlockDecomposition], List[Residual]]) -> Subspace:
    """
    區塊條件切出的映射子空間

    殘差對映射是線性的：對每個基底映射求值得到約束矩陣的一欄，再取核空間。
    """
    size = ext.total.dim
    unknowns = size * size
    columns: List[Vector] = []
    for v in range(unknowns):
        # 第 v 個基底映射只有一個矩陣元素是 1
        basis_map = Matrix.from_flat(unit_vector(unknowns, v), size, size)
        # 把所有殘差向量接成一欄
        flat: List = []
        for _, _, vector in residuals(ext, decompose_map(ext, basis_map)):
            flat.extend(vector)
        columns.append(tuple(flat))
    # 轉置：第 r 列收集每一欄的第 r 個元素
    system = LinearSystem(unknowns)
    for r in range(len(columns[0]) if columns else 0):
        system.add_row({v: columns[v][r] for v in range(unknowns)})
    return system.kernel()


@lru_cache(maxsize=64)
def lemma_lie_space(ext: TrivialExtension) -> Subspace:
    """由 Lie 區塊條件切出的 End(A⋉X) 子空間，應與 lie_derivation_space(total) 相等"""
    return _residual_kernel(ext, _lie_residuals)


@lru_cache(maxsize=64)
def lemma_derivation_space(ext: TrivialExtension) -> Subspace:
    """由導子區塊條件切出的 End(A⋉X) 子空間，應與 derivation_space(total) 相等"""
    return _residual_kernel(ext, _derivation_residuals)
