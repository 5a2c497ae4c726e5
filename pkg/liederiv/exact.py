"""
精確有理數線性代數 - 所有模組的計算基礎

這個模組提供了精確的有理數運算與稠密線性代數：
- Scalar: 有理數（fractions.Fraction，永遠是最簡分數，分母為正）
- Matrix: 不可變的稠密矩陣（row-major 儲存）
- Subspace: 以簡化列梯形（RREF）為標準代表的子空間
- LinearSystem: 稀疏的線性方程組，用於產生大型約束系統的核空間

Library 說明：
- fractions.Fraction: Python 標準庫的有理數型別，運算結果永遠精確
- sympy.polys.matrices.DomainMatrix: sympy 的精確矩陣型別
  - 在 QQ（有理數體）上做 rref()，回傳 (簡化列梯形矩陣, 主元欄位)
  - 傳入字典時會建立稀疏矩陣（SDM），適合大多數係數為 0 的約束系統
- re: 正規表示式，檢查純量字串的格式
- dataclasses: frozen=True 的 dataclass 讓 Matrix 與 Subspace 不可變、可以雜湊
"""
# 匯入 logging 模組用於記錄日誌
import logging

# 匯入 re 模組（正規表示式），用來檢查 "p/q" 字串格式
import re

# 從 dataclasses 匯入 dataclass 裝飾器
# dataclass 會自動產生 __init__、__eq__、__repr__；frozen=True 另外產生 __hash__
from dataclasses import dataclass

# Fraction 是精確的有理數型別，例如 Fraction(1, 3) + Fraction(1, 6) == Fraction(1, 2)
from fractions import Fraction

# 從 typing 模組匯入型別提示
# Iterable: 可迭代物件；Sequence: 可以用索引存取的序列（list、tuple）
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

# QQ 是 sympy 的有理數體；DomainMatrix 是定義在某個體上的精確矩陣
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import InputError

# 建立這個模組的 logger，__name__ 是 'liederiv.exact'
logger = logging.getLogger(__name__)

# 型別別名：純量就是 Fraction，向量是 Fraction 的 tuple（不可變）
Scalar = Fraction
Vector = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

# "p/q" 或 "p" 形式，不接受小數點與指數
# ^ 與 $ 錨定整個字串；[+-]? 允許一個正負號；(/\d+)? 是可省略的分母
_SCALAR_PATTERN = re.compile(r'^[+-]?\d+(/\d+)?$')


def parse_scalar(value: Any) -> Fraction:
    """
    將輸入轉換為精確的有理數

    Args:
        value: int、Fraction 或 "p/q"、"p" 形式的字串

    Returns:
        Fraction: 最簡分數

    Raises:
        InputError: 浮點數、布林值或格式錯誤的字串（代碼 malformed-scalar）
    """
    # 已經是 Fraction 就直接回傳（Fraction 建立時已經約分）
    if isinstance(value, Fraction):
        return value
    # bool 是 int 的子類別，必須先排除
    if isinstance(value, bool):
        raise InputError('malformed-scalar', f"不接受布林值作為純量: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _SCALAR_PATTERN.match(text):
            raise InputError('malformed-scalar', f"純量必須是 'p/q' 或 'p' 形式: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            # "1/0" 通過了格式檢查，但 Fraction 會拋出 ZeroDivisionError
            raise InputError('malformed-scalar', f"分母不可為 0: {value!r}")
    # float 也走到這裡：浮點數不精確，一律拒絕
    raise InputError('malformed-scalar', f"不支援的純量型別: {type(value).__name__}")


def format_scalar(value: Fraction) -> str:
    """
    將有理數格式化為 "p/q"（分母為 1 時為 "p"）

    Fraction.__str__ 本身就是這個格式，這裡包一層是為了固定輸出介面。
    """
    return str(Fraction(value))


def to_vector(values: Iterable[Any]) -> Vector:
    """將任意可迭代物件轉換為 Fraction 向量"""
    # 生成器表達式逐一轉換，tuple() 收集成不可變的向量
    return tuple(parse_scalar(v) for v in values)


def zero_vector(n: int) -> Vector:
    """長度 n 的零向量"""
    # (ZERO,) * n 重複 tuple 的元素 n 次
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    """第 i 個標準基底向量 e_i"""
    return tuple(ONE if k == i else ZERO for k in range(n))


def add_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    """
    逐項相加 u + v

    zip 以較短的序列為準，呼叫端負責保證兩者長度相同。
    """
    return tuple(a + b for a, b in zip(u, v))


def sub_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    """逐項相減 u - v"""
    return tuple(a - b for a, b in zip(u, v))


def scale_vector(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in v)


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    # any() 在遇到第一個非零項時就停止；Fraction(0) 的布林值是 False
    return not any(v)


def linear_combination(coefficients: Sequence[Fraction],
                       vectors: Sequence[Sequence[Fraction]],
                       dim: int) -> Vector:
    """
    計算線性組合 Σ c_i v_i

    Args:
        coefficients: 係數列表
        vectors: 向量列表（長度需與係數相同）
        dim: 向量維度（vectors 為空時也能回傳正確長度的零向量）
    """
    out = [ZERO] * dim
    for c, v in zip(coefficients, vectors):
        # 跳過零係數與零項目，Fraction 乘法比整數慢很多
        if c:
            for k, x in enumerate(v):
                if x:
                    out[k] += c * x
    return tuple(out)


def _to_qq(x: Fraction):
    # QQ(p, q) 建立 sympy 的有理數元素（底層可能是 gmpy2 的 mpq）
    return QQ(x.numerator, x.denominator)


def _from_qq(x) -> Fraction:
    # QQ.numer / QQ.denom 對 PythonMPQ 與 gmpy2.mpq 都適用
    return Fraction(int(QQ.numer(x)), int(QQ.denom(x)))


@dataclass(frozen=True)
class Matrix:
    """
    不可變的稠密有理數矩陣

    entries 以 row-major 順序儲存，長度必須等於 rows * cols。
    frozen=True 讓矩陣可以當作字典鍵、可以安全地在執行緒間共享。
    """
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        # __post_init__ 在 dataclass 自動產生的 __init__ 結束後被呼叫
        if len(self.entries) != self.rows * self.cols:
            raise InputError(
                'dimension-mismatch',
                f"矩陣項目數 {len(self.entries)} 與形狀 {self.rows}x{self.cols} 不符",
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> 'Matrix':
        """
        由列（row）列表建立矩陣

        Args:
            rows: 每一列是一個純量序列
            cols: 欄數；rows 為空時必須提供
        """
        parsed = [tuple(parse_scalar(x) for x in row) for row in rows]
        if cols is None:
            cols = len(parsed[0]) if parsed else 0
        for row in parsed:
            if len(row) != cols:
                raise InputError('dimension-mismatch', f"列長度 {len(row)} 與欄數 {cols} 不符")
        # 巢狀的生成器把二維列表攤平成 row-major 的一維 tuple
        return cls(len(parsed), cols, tuple(x for row in parsed for x in row))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Fraction]], rows: int) -> 'Matrix':
        """由欄（column）列表建立矩陣；columns 為空時得到 rows x 0 矩陣"""
        cols = len(columns)
        for column in columns:
            if len(column) != rows:
                raise InputError('dimension-mismatch', f"欄長度 {len(column)} 與列數 {rows} 不符")
        # 外層迴圈跑列 i、內層跑欄 j，結果就是 row-major 順序
        entries = tuple(columns[j][i] for i in range(rows) for j in range(cols))
        return cls(rows, cols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'Matrix':
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> 'Matrix':
        return cls(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @classmethod
    def from_flat(cls, vector: Sequence[Fraction], rows: int, cols: int) -> 'Matrix':
        """
        由 column-major 展平的向量還原矩陣

        展平慣例：索引 j * rows + i 對應矩陣項目 (i, j)，也就是第 j 欄（e_j 的像）連續存放。
        """
        if len(vector) != rows * cols:
            raise InputError('dimension-mismatch', f"向量長度 {len(vector)} 無法還原為 {rows}x{cols} 矩陣")
        return cls(rows, cols, tuple(vector[j * rows + i] for i in range(rows) for j in range(cols)))

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        # 支援 m[i, j] 語法；Python 會把 i, j 包成一個 tuple 傳進來
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        # row-major 儲存，第 i 列是連續的一段切片
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def flatten(self) -> Vector:
        """column-major 展平（與 from_flat 互為反運算）"""
        return tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows))

    def transpose(self) -> 'Matrix':
        # 原矩陣的列就是轉置矩陣的欄
        return Matrix.from_columns(self.to_rows(), self.cols)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        """
        矩陣乘向量 M·v

        跳過 v 與 M 中的零項目；對只有少數非零項的映射（例如單位矩陣 E_rs）特別快。
        """
        if len(v) != self.cols:
            raise InputError('dimension-mismatch', f"向量長度 {len(v)} 與欄數 {self.cols} 不符")
        out = [ZERO] * self.rows
        # 以欄的方式累加：M·v = Σ_j v_j · (第 j 欄)
        for j, vj in enumerate(v):
            if vj:
                for i in range(self.rows):
                    mij = self.entries[i * self.cols + j]
                    if mij:
                        out[i] += mij * vj
        return tuple(out)

    def matmul(self, other: 'Matrix') -> 'Matrix':
        if self.cols != other.rows:
            raise InputError('dimension-mismatch', f"無法相乘 {self.rows}x{self.cols} 與 {other.rows}x{other.cols}")
        # (AB) 的第 j 欄等於 A 乘上 B 的第 j 欄
        return Matrix.from_columns([self.apply(c) for c in other.columns()], self.rows)

    def _check_same_shape(self, other: 'Matrix'):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError('dimension-mismatch', "矩陣形狀不同")

    def __add__(self, other: 'Matrix') -> 'Matrix':
        # 定義 __add__ 之後可以直接寫 m1 + m2
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, add_vectors(self.entries, other.entries))

    def __sub__(self, other: 'Matrix') -> 'Matrix':
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, sub_vectors(self.entries, other.entries))

    def scale(self, c: Fraction) -> 'Matrix':
        return Matrix(self.rows, self.cols, scale_vector(c, self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def block(self, row_start: int, row_stop: int, col_start: int, col_stop: int) -> 'Matrix':
        """取出子區塊 [row_start, row_stop) x [col_start, col_stop)"""
        rows = [self.row(i)[col_start:col_stop] for i in range(row_start, row_stop)]
        return Matrix(row_stop - row_start, col_stop - col_start, tuple(x for r in rows for x in r))

    def to_domain(self) -> DomainMatrix:
        """轉換為 sympy 的 DomainMatrix（定義在 QQ 上）"""
        # DomainMatrix(列表的列表, (列數, 欄數), 體)
        return DomainMatrix([[_to_qq(x) for x in row] for row in self.to_rows()], (self.rows, self.cols), QQ)

    @classmethod
    def from_domain(cls, dm: DomainMatrix) -> 'Matrix':
        """由 DomainMatrix 轉回 Matrix"""
        rows, cols = dm.shape
        # to_list() 回傳稠密的列表的列表，元素是 QQ 的有理數
        return cls(rows, cols, tuple(_from_qq(x) for row in dm.to_list() for x in row))


def _kernel_vectors(reduced_rows: Sequence[Sequence[Fraction]],
                    pivots: Sequence[int],
                    ncols: int) -> List[Vector]:
    # 每個自由變數設為 1、其餘自由變數設為 0，主元變數由 RREF 讀出
    # set 讓「是不是主元欄位」的查詢是 O(1)
    pivot_set = set(pivots)
    vectors = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        # 第 r 列：x_{pivot_r} + Σ_free R[r][free] x_free = 0
        for r, pc in enumerate(pivots):
            v[pc] = -reduced_rows[r][free]
        vectors.append(tuple(v))
    return vectors


def rref(m: Matrix) -> Tuple[Matrix, List[int]]:
    """
    簡化列梯形（reduced row echelon form）

    Args:
        m: 任意有理數矩陣

    Returns:
        (RREF 矩陣, 嚴格遞增的主元欄位列表)；RREF 與 m 形狀相同，零列排在最後
    """
    # 空矩陣本身就是 RREF，sympy 對 0 列或 0 欄的矩陣處理不一致
    if m.rows == 0 or m.cols == 0:
        return m, []
    # DomainMatrix.rref() 回傳 (RREF 矩陣, 主元欄位的 tuple)
    reduced, pivots = m.to_domain().rref()
    return Matrix.from_domain(reduced), list(pivots)


def kernel_basis(m: Matrix) -> 'Subspace':
    """
    核空間 {v : m·v = 0}

    Returns:
        Subspace: 維度為 cols - rank(m) 的標準化子空間
    """
    # 沒有任何方程時，每個向量都是解
    if m.rows == 0:
        return Subspace.full(m.cols)
    reduced, pivots = rref(m)
    return Subspace.from_vectors(m.cols, _kernel_vectors(reduced.to_rows(), pivots, m.cols))


def solve(m: Matrix, b: Sequence[Fraction]) -> Optional[Vector]:
    """
    解線性方程組 m·v = b

    回傳的解在所有自由變數上取 0，所以相同輸入永遠得到相同的解（標準化見證）。

    Args:
        m: 係數矩陣
        b: 右手邊向量，長度必須等於 m.rows

    Returns:
        解向量；若 b 不在 m 的欄空間中則回傳 None

    Raises:
        InputError: b 的長度與 m.rows 不符（代碼 dimension-mismatch）
    """
    if len(b) != m.rows:
        raise InputError('dimension-mismatch', f"右手邊長度 {len(b)} 與列數 {m.rows} 不符")
    if m.rows == 0:
        return zero_vector(m.cols)
    # 增廣矩陣 [m | b]：每一列後面接上 b 的對應項
    augmented = Matrix.from_rows([m.row(i) + (b[i],) for i in range(m.rows)], m.cols + 1)
    reduced, pivots = rref(augmented)
    # 主元出現在增廣欄代表方程組矛盾
    if pivots and pivots[-1] == m.cols:
        return None
    # 自由變數留在 0，主元變數等於 RREF 的增廣欄
    x = [ZERO] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = reduced[r, m.cols]
    return tuple(x)


@dataclass(frozen=True)
class Subspace:
    """
    ℚ^d 的子空間

    basis 是沒有零列的 RREF 矩陣，因此相同的子空間永遠有相同的表示，
    兩個 Subspace 可以直接用 == 比較。
    """
    ambient_dim: int
    basis: Matrix
    pivots: Tuple[int, ...]

    @classmethod
    def zero(cls, ambient_dim: int) -> 'Subspace':
        """零子空間：0 x ambient_dim 的基底矩陣"""
        return cls(ambient_dim, Matrix(0, ambient_dim, ()), ())

    @classmethod
    def full(cls, ambient_dim: int) -> 'Subspace':
        # 單位矩陣本身就是 RREF
        return cls(ambient_dim, Matrix.identity(ambient_dim), tuple(range(ambient_dim)))

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[Sequence[Fraction]]) -> 'Subspace':
        """
        由任意張成集合建立標準化的子空間

        Raises:
            InputError: 向量長度與 ambient_dim 不符（代碼 ambient-mismatch）
        """
        nonzero = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise InputError('ambient-mismatch', f"向量長度 {len(v)} 與外圍維度 {ambient_dim} 不符")
            # 零向量對張成沒有貢獻，先濾掉
            if any(v):
                nonzero.append(tuple(v))
        if not nonzero:
            return cls.zero(ambient_dim)
        stacked = Matrix(len(nonzero), ambient_dim, tuple(x for v in nonzero for x in v))
        reduced, pivots = rref(stacked)
        # 只保留前 rank 列（RREF 的零列在最後）
        rank = len(pivots)
        return cls(ambient_dim, reduced.block(0, rank, 0, ambient_dim), tuple(pivots))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> List[Vector]:
        """RREF 基底向量"""
        return self.basis.to_rows()

    def _check_vector(self, v: Sequence[Fraction]):
        if len(v) != self.ambient_dim:
            raise InputError('ambient-mismatch', f"向量長度 {len(v)} 與外圍維度 {self.ambient_dim} 不符")

    def _check_ambient(self, other: 'Subspace'):
        if self.ambient_dim != other.ambient_dim:
            raise InputError('ambient-mismatch', f"外圍維度不同: {self.ambient_dim} 與 {other.ambient_dim}")

    def combine(self, coefficients: Sequence[Fraction]) -> Vector:
        """以基底座標組合出向量"""
        return linear_combination(coefficients, self.vectors(), self.ambient_dim)

    def coordinates(self, v: Sequence[Fraction]) -> Optional[Vector]:
        """
        向量在 RREF 基底下的座標

        RREF 基底的特性：座標恰好是 v 在各主元欄位上的值。

        Returns:
            座標 tuple；v 不在子空間中時回傳 None
        """
        self._check_vector(v)
        coords = tuple(v[pc] for pc in self.pivots)
        # 組合回去不等於 v，代表 v 在子空間之外
        if self.combine(coords) != tuple(v):
            return None
        return coords

    def contains(self, v: Sequence[Fraction]) -> bool:
        return self.coordinates(v) is not None

    def sum(self, other: 'Subspace') -> 'Subspace':
        self._check_ambient(other)
        # 兩組基底合在一起的張成就是 U + V
        return Subspace.from_vectors(self.ambient_dim, self.vectors() + other.vectors())

    def intersect(self, other: 'Subspace') -> 'Subspace':
        """
        子空間交集

        解 Σ a_i u_i - Σ b_j v_j = 0，再把 (a, b) 映回 Σ a_i u_i。
        """
        self._check_ambient(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        columns = self.vectors() + [scale_vector(-ONE, v) for v in other.vectors()]
        relations = kernel_basis(Matrix.from_columns(columns, self.ambient_dim))
        # k[:self.dim] 是 U 這一側的係數 a
        return Subspace.from_vectors(
            self.ambient_dim,
            [self.combine(k[:self.dim]) for k in relations.vectors()],
        )

    def is_subspace_of(self, other: 'Subspace') -> bool:
        self._check_ambient(other)
        # all() 在第一個不包含的基底向量就回傳 False
        return all(other.contains(v) for v in self.vectors())

    def image(self, m: Matrix) -> 'Subspace':
        """線性映射 m 下的像 m(U)"""
        if m.cols != self.ambient_dim:
            raise InputError('dimension-mismatch', f"映射定義域維度 {m.cols} 與外圍維度 {self.ambient_dim} 不符")
        return Subspace.from_vectors(m.rows, [m.apply(v) for v in self.vectors()])


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    return u.sum(v)


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    return u.intersect(v)


def subspace_contains(u: Subspace, vector: Sequence[Fraction]) -> bool:
    return u.contains(vector)


class LinearSystem:
    """
    稀疏齊次線性方程組

    約束逐列加入（每列是 {欄位: 係數} 的字典），最後一次求出核空間。
    導子空間這類系統有上千列但每列只有少數非零項，
    用字典建立的 DomainMatrix 會使用稀疏格式（SDM），比稠密矩陣省很多記憶體。

    使用方式：
        system = LinearSystem(n * n)
        system.add_row({0: 1, 5: -1})
        space = system.kernel()
    """

    def __init__(self, ncols: int):
        """
        初始化方程組

        Args:
            ncols: 未知數個數
        """
        self.ncols = ncols
        # 每一列是 {欄位索引: 係數}，只存非零項
        self._rows: List[Dict[int, Fraction]] = []

    @property
    def nrows(self) -> int:
        return len(self._rows)

    def add_row(self, coefficients: Dict[int, Fraction]):
        """加入一條方程 Σ c_j v_j = 0；全零的列直接略過"""
        # 字典推導式過濾掉係數為 0 的項
        row = {j: c for j, c in coefficients.items() if c}
        if row:
            self._rows.append(row)

    def add_dense_row(self, coefficients: Sequence[Fraction]):
        """以稠密序列加入一條方程"""
        self.add_row({j: c for j, c in enumerate(coefficients) if c})

    def kernel(self) -> Subspace:
        """
        方程組的解空間

        Returns:
            Subspace: ℚ^ncols 中的核空間
        """
        if not self._rows:
            return Subspace.full(self.ncols)
        logger.debug(f"求解稀疏系統: {self.nrows} 列 x {self.ncols} 欄")
        # {列: {欄: 係數}} 的巢狀字典讓 DomainMatrix 建立稀疏格式
        data = {i: {j: _to_qq(c) for j, c in row.items()} for i, row in enumerate(self._rows)}
        reduced, pivots = DomainMatrix(data, (self.nrows, self.ncols), QQ).rref()
        rank = len(pivots)
        # 只有前 rank 列非零；轉成稠密列表後再換回 Fraction
        dense = reduced.to_list()[:rank]
        reduced_rows = [[_from_qq(x) for x in row] for row in dense]
        return Subspace.from_vectors(self.ncols, _kernel_vectors(reduced_rows, list(pivots), self.ncols))
