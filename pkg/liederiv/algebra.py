"""
結構常數代數 - 代數核心

這個模組提供了有限維單位結合代數與雙模的表示，以及定理所量化的各種子物件：
中心、交換子子空間、角代數（corner）、子代數閉包、冪等元與 W 子代數。

主要類別：
- StructureAlgebra: 以結構常數張量 c[i][j][k] 給定的代數（e_i·e_j = Σ_k c[i][j][k] e_k）
- Bimodule: 以左右作用張量給定的雙模
- Idempotent: 經過驗證的冪等元
- Corner: 角代數 pAp，本身是一個完整的 StructureAlgebra，加上嵌入矩陣

所有類別都是 frozen dataclass，建立後不可變，可以在執行緒之間共享。

Library 說明：
- dataclasses: @dataclass(frozen=True) 自動產生 __init__、__eq__ 與 __hash__，欄位不可再被指派
- functools.cached_property: 第一次存取時計算並存進實例，之後直接讀取
  （frozen dataclass 仍可使用，因為它直接寫入實例的 __dict__）
- itertools.product: 笛卡兒積，product(range(n), repeat=2) 等同兩層 for 迴圈
- fractions: Fraction 提供精確的有理數運算，所有結構常數都是 Fraction
"""
import logging
# dataclass: 自動產生建構子與比較方法的裝飾器
from dataclasses import dataclass
# Fraction: 精確的有理數，1/3 不會變成 0.333...
from fractions import Fraction
# cached_property: 只計算一次的屬性（交換子張量、非零項索引）
from functools import cached_property
# 改名成 cartesian，避免和代數乘法 product() 混淆
from itertools import product as cartesian
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .errors import InputError
# 精確線性代數的基本工具，全部在 exact.py 中定義
from .exact import (
    ONE,
    ZERO,
    LinearSystem,
    Matrix,
    Subspace,
    Vector,
    add_vectors,
    is_zero_vector,
    kernel_basis,
    parse_scalar,
    solve,
    sub_vectors,
    unit_vector,
    zero_vector,
)

# 建立模組專用的 logger
# __name__ 是 'liederiv.algebra'，日誌等級由 LIEDERIV_LOG 控制
logger = logging.getLogger(__name__)

# 三階張量：tensor[i][j] 是一個向量
Tensor = Tuple[Tuple[Vector, ...], ...]

# 冪等元搜尋的預設圖樣預算
DEFAULT_IDEMPOTENT_BUDGET = 256


def _freeze_tensor(data: Sequence[Sequence[Sequence[Any]]], shape: Tuple[int, int, int], name: str) -> Tensor:
    """把巢狀列表轉成不可變的 Fraction 張量，同時檢查形狀"""
    d0, d1, d2 = shape
    # 逐層檢查長度，錯誤訊息指出是哪一個索引的形狀不對
    if len(data) != d0:
        raise InputError('dimension-mismatch', f"{name} 第一維應為 {d0}，實際為 {len(data)}")
    # 外層用 list 收集，最後轉成 tuple；tuple 不可變，才能放進 frozen dataclass 並被雜湊
    frozen = []
    for i, plane in enumerate(data):
        if len(plane) != d1:
            raise InputError('dimension-mismatch', f"{name}[{i}] 應有 {d1} 項，實際為 {len(plane)}")
        rows = []
        for j, vector in enumerate(plane):
            if len(vector) != d2:
                raise InputError('dimension-mismatch', f"{name}[{i}][{j}] 應有 {d2} 項，實際為 {len(vector)}")
            # parse_scalar 接受 int、Fraction 與 "p/q" 字串
            rows.append(tuple(parse_scalar(x) for x in vector))
        frozen.append(tuple(rows))
    return tuple(frozen)


def _default_labels(prefix: str, n: int) -> Tuple[str, ...]:
    """預設基底名稱 prefix0, prefix1, ..."""
    return tuple(f"{prefix}{i}" for i in range(n))


@dataclass(frozen=True)
class StructureAlgebra:
    """
    有限維單位結合代數

    Attributes:
        dim: 維度 n
        labels: n 個基底名稱
        mul: 結構常數 mul[i][j][k]，e_i·e_j = Σ_k mul[i][j][k] e_k
        unit: 單位元的座標
    """
    dim: int
    labels: Tuple[str, ...]
    mul: Tensor
    unit: Vector

    @classmethod
    def create(cls, mul: Sequence[Sequence[Sequence[Any]]], unit: Sequence[Any],
               labels: Optional[Sequence[str]] = None) -> 'StructureAlgebra':
        """
        由原始資料建立代數（會解析純量並檢查形狀，但不檢查結合律）

        Args:
            mul: 巢狀列表形式的結構常數
            unit: 單位元座標
            labels: 基底名稱；省略時使用 e0, e1, ...

        Raises:
            InputError: 形狀不一致（代碼 dimension-mismatch）
        """
        # 維度由單位元的長度決定，mul 必須是 n x n x n
        n = len(unit)
        if labels is None:
            labels = _default_labels('e', n)
        if len(labels) != n:
            raise InputError('dimension-mismatch', f"標籤數 {len(labels)} 與維度 {n} 不符")
        # cls(...) 呼叫 dataclass 自動產生的 __init__
        # 結合律不在這裡檢查，呼叫端需要時再用 validate_algebra()
        return cls(n, tuple(labels), _freeze_tensor(mul, (n, n, n), 'mul'), tuple(parse_scalar(x) for x in unit))

    @cached_property
    def _terms(self) -> Tuple[Tuple[Tuple[Tuple[int, Fraction], ...], ...], ...]:
        # e_i·e_j 的非零項 (k, c)；大部分結構常數為零，乘法只走訪非零項
        # 三層巢狀的生成器表達式：最外層 i，中間 j，最內層 (k, c)
        # `if c` 過濾掉 Fraction(0)，因為 Fraction(0) 的真值是 False
        return tuple(
            tuple(tuple((k, c) for k, c in enumerate(self.mul[i][j]) if c) for j in range(self.dim))
            for i in range(self.dim)
        )

    @cached_property
    def brackets(self) -> Tensor:
        """交換子張量 K[i][j] = [e_i, e_j] 的座標"""
        # [e_i, e_j] = e_i e_j - e_j e_i，中心與 Lie 導子的方程都用到它
        # cached_property 讓整個張量只算一次
        return tuple(
            tuple(sub_vectors(self.mul[i][j], self.mul[j][i]) for j in range(self.dim))
            for i in range(self.dim)
        )

    def basis_vector(self, i: int) -> Vector:
        """第 i 個標準基底向量 e_i"""
        return unit_vector(self.dim, i)

    def product(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        """代數乘法 u·v"""
        # u·v = Σ_{i,j} u_i v_j (e_i·e_j)，係數為 0 的項直接跳過
        out = [ZERO] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self._terms[i]
            for j, vj in enumerate(v):
                if not vj:
                    continue
                coeff = ui * vj
                # row[j] 只包含 e_i·e_j 的非零座標
                for k, c in row[j]:
                    out[k] += coeff * c
        # 回傳 tuple，和其他向量一樣不可變
        return tuple(out)

    def commutator(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        """Lie 括號 [u, v] = uv - vu"""
        return sub_vectors(self.product(u, v), self.product(v, u))

    def left_matrix(self, u: Sequence[Fraction]) -> Matrix:
        """左乘映射 x ↦ u·x 的矩陣"""
        # 第 j 欄是 u·e_j，和攤平慣例一致（欄 s 是 e_s 的像）
        return Matrix.from_columns([self.product(u, self.basis_vector(j)) for j in range(self.dim)], self.dim)

    def right_matrix(self, u: Sequence[Fraction]) -> Matrix:
        """右乘映射 x ↦ x·u 的矩陣"""
        return Matrix.from_columns([self.product(self.basis_vector(j), u) for j in range(self.dim)], self.dim)

    def is_commutative(self) -> bool:
        """所有基底交換子都為零時代數是交換的"""
        # 只需檢查 i < j：[e_j, e_i] = -[e_i, e_j]，[e_i, e_i] = 0
        return all(is_zero_vector(self.brackets[i][j]) for i in range(self.dim) for j in range(i + 1, self.dim))


@dataclass(frozen=True)
class Bimodule:
    """
    有限維雙模

    左作用屬於 left_dim 維的代數，右作用屬於 right_dim 維的代數；
    一般的 A-雙模兩者相同，三角代數的 (A, B)-雙模則不同。

    Attributes:
        dim: 模的維度 m
        left_dim: 左作用代數的維度
        right_dim: 右作用代數的維度
        left: left[i][j][k]，e_i·x_j = Σ_k left[i][j][k] x_k
        right: right[j][i][k]，x_j·e_i = Σ_k right[j][i][k] x_k
        labels: 模基底名稱
    """
    dim: int
    left_dim: int
    right_dim: int
    left: Tensor
    right: Tensor
    labels: Tuple[str, ...] = ()

    @classmethod
    def create(cls, left: Sequence[Sequence[Sequence[Any]]], right: Sequence[Sequence[Sequence[Any]]],
               dim: Optional[int] = None, left_dim: Optional[int] = None, right_dim: Optional[int] = None,
               labels: Optional[Sequence[str]] = None) -> 'Bimodule':
        """
        由原始張量建立雙模

        零維模的 right 張量是空列表，無法推出右作用代數的維度，這時 right_dim 預設等於 left_dim。

        Raises:
            InputError: 形狀不一致（代碼 dimension-mismatch）
        """
        # 未指定的維度從張量形狀推出
        if left_dim is None:
            left_dim = len(left)
        if dim is None:
            dim = len(left[0]) if left else len(right)
        if right_dim is None:
            right_dim = len(right[0]) if right and dim else left_dim
        if labels is None:
            labels = _default_labels('x', dim)
        # 標籤數必須和模維度相同，否則輸出的 JSON 會對不上
        if len(labels) != dim:
            raise InputError('dimension-mismatch', f"模標籤數 {len(labels)} 與維度 {dim} 不符")
        return cls(
            dim,
            left_dim,
            right_dim,
            _freeze_tensor(left, (left_dim, dim, dim), 'left'),
            _freeze_tensor(right, (dim, right_dim, dim), 'right'),
            tuple(labels),
        )

    @classmethod
    def regular(cls, a: StructureAlgebra) -> 'Bimodule':
        """正則雙模 X = A，左右作用都是代數乘法"""
        # e_i·x_j = e_i·e_j
        left = tuple(tuple(a.mul[i][j] for j in range(a.dim)) for i in range(a.dim))
        # x_j·e_i = e_j·e_i，注意 right 的索引順序是 [j][i]
        right = tuple(tuple(a.mul[j][i] for i in range(a.dim)) for j in range(a.dim))
        return cls(a.dim, a.dim, a.dim, left, right, a.labels)

    @classmethod
    def zero(cls, a: StructureAlgebra, right: Optional[StructureAlgebra] = None) -> 'Bimodule':
        """零雙模 X = 0；此時 A⋉X 就是 A 本身"""
        right_dim = (right or a).dim
        # 每個 left[i] 都是空的 tuple，right 本身也是空的
        return cls(0, a.dim, right_dim, tuple(() for _ in range(a.dim)), (), ())

    def basis_vector(self, j: int) -> Vector:
        """模的第 j 個基底向量 x_j"""
        return unit_vector(self.dim, j)

    def act_left(self, a: Sequence[Fraction], x: Sequence[Fraction]) -> Vector:
        """左作用 a·x"""
        # a·x = Σ_{i,j} a_i x_j (e_i·x_j)，和 StructureAlgebra.product 同一種寫法
        out = [ZERO] * self.dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, xj in enumerate(x):
                if not xj:
                    continue
                coeff = ai * xj
                for k, c in enumerate(self.left[i][j]):
                    if c:
                        out[k] += coeff * c
        return tuple(out)

    def act_right(self, x: Sequence[Fraction], a: Sequence[Fraction]) -> Vector:
        """右作用 x·a"""
        # x·a = Σ_{j,i} x_j a_i (x_j·e_i)，right 張量的索引順序是 [j][i]
        out = [ZERO] * self.dim
        for j, xj in enumerate(x):
            if not xj:
                continue
            for i, ai in enumerate(a):
                if not ai:
                    continue
                coeff = xj * ai
                for k, c in enumerate(self.right[j][i]):
                    if c:
                        out[k] += coeff * c
        return tuple(out)

    def commutator(self, a: Sequence[Fraction], x: Sequence[Fraction]) -> Vector:
        """[a, x] = ax - xa"""
        # 平凡擴張中 [(a, 0), (0, x)] 的 X 分量就是這個值
        return sub_vectors(self.act_left(a, x), self.act_right(x, a))

    def left_matrix(self, a: Sequence[Fraction]) -> Matrix:
        """左作用 x ↦ a·x 的 m x m 矩陣"""
        return Matrix.from_columns([self.act_left(a, self.basis_vector(j)) for j in range(self.dim)], self.dim)

    def right_matrix(self, a: Sequence[Fraction]) -> Matrix:
        """右作用 x ↦ x·a 的 m x m 矩陣"""
        return Matrix.from_columns([self.act_right(self.basis_vector(j), a) for j in range(self.dim)], self.dim)


@dataclass(frozen=True)
class Violation:
    """
    一條不成立的恆等式

    Attributes:
        identity: 恆等式名稱，例如 'associativity'、'left-unit'
        indices: 基底索引（結合律是四元組 (i, j, k, l)，l 是不相等的座標）
        detail: 補充說明
    """
    identity: str
    indices: Tuple[int, ...]
    detail: str = ''


@dataclass(frozen=True)
class ValidationReport:
    """驗證報告；violations 為空代表通過"""
    violations: Tuple[Violation, ...] = ()

    # @property 讓 report.ok 可以像屬性一樣讀取，不需要加括號
    @property
    def ok(self) -> bool:
        """沒有任何不成立的恆等式"""
        return not self.violations

    def identities(self) -> List[str]:
        """不成立的恆等式名稱（去除重複，保持順序）"""
        # dict.fromkeys 保留第一次出現的順序，比 set 更適合輸出
        return list(dict.fromkeys(v.identity for v in self.violations))


def _compare(identity: str, lhs: Vector, rhs: Vector, prefix: Tuple[int, ...], out: List[Violation]):
    """逐座標比較兩邊，每個不相等的座標 l 記錄一條 Violation（索引為 prefix + (l,)）"""
    # Fraction 的比較是精確的，不需要容許誤差
    for l, (x, y) in enumerate(zip(lhs, rhs)):
        if x != y:
            out.append(Violation(identity, prefix + (l,), f"{x} != {y}"))


def validate_algebra(a: StructureAlgebra) -> ValidationReport:
    """
    檢查結合律與單位元公理

    結合律：對所有 (i, j, k) 比較 (e_i e_j) e_k 與 e_i (e_j e_k) 的每個座標 l。

    Args:
        a: 要檢查的代數

    Returns:
        ValidationReport: 列出每一條不成立的恆等式
    """
    violations: List[Violation] = []
    n = a.dim
    # 直接建構（不經過 create）的代數可能形狀不一致，先檢查再計算
    if len(a.unit) != n or len(a.labels) != n or len(a.mul) != n:
        violations.append(Violation('shape', (n,), "unit、labels 或 mul 的長度與維度不符"))
        return ValidationReport(tuple(violations))

    basis = [a.basis_vector(i) for i in range(n)]
    # (e_i e_j) e_k 與 e_i (e_j e_k)；a.mul[i][j] 就是 e_i e_j 的座標
    for i, j in cartesian(range(n), repeat=2):
        left = a.mul[i][j]
        for k in range(n):
            _compare('associativity', a.product(left, basis[k]), a.product(basis[i], a.mul[j][k]), (i, j, k), violations)

    # 單位元：1·e_i = e_i = e_i·1
    for i in range(n):
        _compare('left-unit', a.product(a.unit, basis[i]), basis[i], (i,), violations)
        _compare('right-unit', a.product(basis[i], a.unit), basis[i], (i,), violations)

    if violations:
        logger.info(f"代數驗證失敗: {len(violations)} 條恆等式不成立")
    return ValidationReport(tuple(violations))


def validate_bimodule(a: StructureAlgebra, x: Bimodule, right_algebra: Optional[StructureAlgebra] = None) -> ValidationReport:
    """
    檢查雙模公理：(ab)x = a(bx)、x(ab) = (xa)b、(ax)b = a(xb)、1·x = x = x·1

    Args:
        a: 左作用代數
        x: 雙模
        right_algebra: 右作用代數；省略時與 a 相同

    Returns:
        ValidationReport: 列出每一條不成立的恆等式
    """
    b = right_algebra or a
    violations: List[Violation] = []
    # 維度不符時後面的作用無法計算，直接回報
    if x.left_dim != a.dim or x.right_dim != b.dim:
        violations.append(Violation('shape', (x.left_dim, x.right_dim), f"作用代數維度應為 ({a.dim}, {b.dim})"))
        return ValidationReport(tuple(violations))

    xs = [x.basis_vector(k) for k in range(x.dim)]
    # 對模的每個基底向量 x_k 檢查全部五條恆等式
    for k in range(x.dim):
        # (e_i e_j) x = e_i (e_j x)
        for i, j in cartesian(range(a.dim), repeat=2):
            lhs = x.act_left(a.mul[i][j], xs[k])
            rhs = x.act_left(a.basis_vector(i), x.act_left(a.basis_vector(j), xs[k]))
            _compare('left-associativity', lhs, rhs, (i, j, k), violations)
        # x (f_i f_j) = (x f_i) f_j，右作用代數是 b
        for i, j in cartesian(range(b.dim), repeat=2):
            lhs = x.act_right(xs[k], b.mul[i][j])
            rhs = x.act_right(x.act_right(xs[k], b.basis_vector(i)), b.basis_vector(j))
            _compare('right-associativity', lhs, rhs, (i, j, k), violations)
        # (e_i x) f_j = e_i (x f_j)：左右作用互相交換
        for i in range(a.dim):
            left = x.act_left(a.basis_vector(i), xs[k])
            for j in range(b.dim):
                lhs = x.act_right(left, b.basis_vector(j))
                rhs = x.act_left(a.basis_vector(i), x.act_right(xs[k], b.basis_vector(j)))
                _compare('middle-associativity', lhs, rhs, (i, j, k), violations)
        _compare('left-unit', x.act_left(a.unit, xs[k]), xs[k], (k,), violations)
        _compare('right-unit', x.act_right(xs[k], b.unit), xs[k], (k,), violations)

    if violations:
        logger.info(f"雙模驗證失敗: {len(violations)} 條恆等式不成立")
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class Idempotent:
    """
    經過驗證的冪等元 p（p·p = p）

    互補冪等元 q = 1 - p 永遠由 complement() 即時計算，不另外儲存。
    """
    vector: Vector
    nontrivial: bool

    @classmethod
    def of(cls, a: StructureAlgebra, vector: Sequence[Any]) -> 'Idempotent':
        """
        驗證並建立冪等元

        Raises:
            InputError: 長度不符（dimension-mismatch）或 p·p ≠ p（not-idempotent）
        """
        p = tuple(parse_scalar(v) for v in vector)
        # 先檢查長度，否則 product() 會靜默截斷
        if len(p) != a.dim:
            raise InputError('dimension-mismatch', f"冪等元長度 {len(p)} 與代數維度 {a.dim} 不符")
        if a.product(p, p) != p:
            raise InputError('not-idempotent', "p·p ≠ p", vector=[str(v) for v in p])
        # 0 與 1 是平凡冪等元
        return cls(p, not is_zero_vector(p) and p != a.unit)

    def complement(self, a: StructureAlgebra) -> Vector:
        """互補冪等元 q = 1 - p"""
        return sub_vectors(a.unit, self.vector)


def _as_idempotent(a: StructureAlgebra, p: Union[Idempotent, Sequence[Any]]) -> Idempotent:
    """把座標或 Idempotent 轉成針對 a 驗證過的 Idempotent（已建立的也重新驗證，避免混用代數）"""
    if isinstance(p, Idempotent):
        return Idempotent.of(a, p.vector)
    return Idempotent.of(a, p)


def center(a: StructureAlgebra) -> Subspace:
    """
    代數的中心 Z(A) = {z : [z, e_i] = 0 對所有 i}

    對每個 i 與座標 k 產生一條方程 Σ_r z_r [e_r, e_i]_k = 0。
    """
    # 未知數是 z 的 n 個座標，共 n*n 條方程
    system = LinearSystem(a.dim)
    for i in range(a.dim):
        for k in range(a.dim):
            system.add_row({r: a.brackets[r][i][k] for r in range(a.dim)})
    # 解空間就是中心
    return system.kernel()


def commutator_subspace(a: StructureAlgebra) -> Subspace:
    """交換子子空間 [A, A] = span{[e_i, e_j] : i < j}"""
    # 只取 i < j：其餘交換子是這些的負值或零
    # from_vectors 會做 RREF，相依的向量自動去除
    return Subspace.from_vectors(
        a.dim,
        [a.brackets[i][j] for i in range(a.dim) for j in range(i + 1, a.dim)],
    )


def peirce_piece(a: StructureAlgebra, left: Sequence[Fraction], right: Sequence[Fraction]) -> Subspace:
    """Peirce 分量 left·A·right = span{left·e_i·right}"""
    # left·x·right 對 x 是線性的，所以只需要取基底的像
    return Subspace.from_vectors(
        a.dim,
        [a.product(a.product(left, a.basis_vector(i)), right) for i in range(a.dim)],
    )


@dataclass(frozen=True)
class Corner:
    """
    角代數 pAp

    Attributes:
        algebra: 以 pAp 的 RREF 基底重新建立的代數，單位元是 p
        embedding: dim(A) x dim(pAp) 的嵌入矩陣
        subspace: pAp 在 A 中的子空間
        idempotent: 使用的冪等元 p
    """
    algebra: StructureAlgebra
    embedding: Matrix
    subspace: Subspace
    idempotent: Idempotent

    def embed(self, v: Sequence[Fraction]) -> Vector:
        """角代數座標 v 對應到 A 中的元素"""
        return self.embedding.apply(v)

    def compress(self, a: StructureAlgebra, v: Sequence[Fraction]) -> Vector:
        """把 A 中的元素 v 映到 pvp 在角代數中的座標"""
        p = self.idempotent.vector
        # 先算 p·v 再乘 p
        coords = self.subspace.coordinates(a.product(a.product(p, v), p))
        # pvp 必定在 pAp 中
        assert coords is not None
        return coords

    def restrict(self, v: Sequence[Fraction]) -> Optional[Vector]:
        """v 若在 pAp 中則回傳其角代數座標，否則回傳 None"""
        return self.subspace.coordinates(v)


def corner(a: StructureAlgebra, p: Union[Idempotent, Sequence[Any]]) -> Corner:
    """
    建立角代數 pAp

    基底取 pAp 的 RREF 基底；若某個基底向量恰好是 A 的標準基底向量，沿用 A 的標籤。

    Args:
        a: 代數
        p: 冪等元（Idempotent 或座標）

    Returns:
        Corner: 角代數與嵌入

    Raises:
        InputError: p 不是冪等元（代碼 not-idempotent）
    """
    idem = _as_idempotent(a, p)
    # pAp 的 RREF 基底；p 是標準基底向量的和時這就是那些標準基底向量
    piece = peirce_piece(a, idem.vector, idem.vector)
    basis = piece.vectors()
    k = len(basis)

    # 角代數的結構常數：b_s·b_t 在 pAp 基底下的座標
    mul = []
    for s in range(k):
        plane = []
        for t in range(k):
            coords = piece.coordinates(a.product(basis[s], basis[t]))
            # pAp 對乘法封閉
            assert coords is not None
            plane.append(coords)
        mul.append(tuple(plane))
    # p 是 pAp 的單位元
    unit = piece.coordinates(idem.vector)
    assert unit is not None

    # 基底向量是某個 e_i 時沿用 A 的標籤，否則命名為 c0, c1, ...
    labels = []
    for s, vector in enumerate(basis):
        # support 是非零座標的索引
        support = [i for i, c in enumerate(vector) if c]
        if len(support) == 1 and vector[support[0]] == ONE:
            labels.append(a.labels[support[0]])
        else:
            labels.append(f"c{s}")

    # 直接呼叫建構子：結構常數已經是 Fraction，不需要再解析
    algebra = StructureAlgebra(k, tuple(labels), tuple(mul), unit)
    logger.debug(f"角代數: 維度 {k} (原代數維度 {a.dim})")
    return Corner(algebra, Matrix.from_columns(basis, a.dim), piece, idem)


def direct_sum(a: StructureAlgebra, b: StructureAlgebra) -> StructureAlgebra:
    """
    直和 A ⊕ B，基底為 (A 的基底, B 的基底)

    兩邊標籤有重複時加上 'A.' 與 'B.' 前綴。
    """
    n, m = a.dim, b.dim
    total = n + m
    # 區塊對角：A 與 B 的基底互乘為零
    mul = [[zero_vector(total) for _ in range(total)] for _ in range(total)]
    # tuple 的 + 是串接：A 的座標後面補 m 個 0
    for i, j in cartesian(range(n), repeat=2):
        mul[i][j] = a.mul[i][j] + zero_vector(m)
    # B 的基底索引平移 n，座標前面補 n 個 0
    for i, j in cartesian(range(m), repeat=2):
        mul[n + i][n + j] = zero_vector(n) + b.mul[i][j]
    # set 的 & 是交集：有共同標籤時才加前綴
    if set(a.labels) & set(b.labels):
        labels = tuple(f"A.{l}" for l in a.labels) + tuple(f"B.{l}" for l in b.labels)
    else:
        labels = a.labels + b.labels
    # 單位元是 (1_A, 1_B)
    return StructureAlgebra(total, labels, tuple(tuple(row) for row in mul), a.unit + b.unit)


def tensor_product(a: StructureAlgebra, b: StructureAlgebra) -> StructureAlgebra:
    """張量積 A ⊗ B，基底 e_i ⊗ f_j 的索引為 i * dim(B) + j"""
    n, m = a.dim, b.dim
    total = n * m
    mul = []
    for i, j in cartesian(range(n), range(m)):
        plane = []
        for k, l in cartesian(range(n), range(m)):
            out = [ZERO] * total
            # (e_i ⊗ f_j)(e_k ⊗ f_l) = (e_i e_k) ⊗ (f_j f_l)
            for s, cs in enumerate(a.mul[i][k]):
                if not cs:
                    continue
                for t, ct in enumerate(b.mul[j][l]):
                    if ct:
                        out[s * m + t] = cs * ct
            plane.append(tuple(out))
        mul.append(tuple(plane))
    # 1 ⊗ 1 的座標是兩個單位元座標的外積，索引順序與基底相同
    unit = tuple(x * y for x in a.unit for y in b.unit)
    labels = tuple(f"{la}*{lb}" for la in a.labels for lb in b.labels)
    return StructureAlgebra(total, labels, tuple(mul), unit)


def subalgebra_closure(a: StructureAlgebra, generators: Sequence[Sequence[Fraction]]) -> Subspace:
    """
    由生成元產生的最小乘法封閉子空間（不自動加入單位元）

    反覆把目前基底兩兩相乘的結果加入，直到維度不再增加。

    Args:
        a: 代數
        generators: 生成元列表

    Returns:
        Subspace: 子代數閉包
    """
    current = Subspace.from_vectors(a.dim, generators)
    rounds = 0
    # 維度最多增加到 dim(A)，所以迴圈一定會結束
    while True:
        rounds += 1
        vectors = current.vectors()
        # 包含 u·u 與兩種順序的乘積
        products = [a.product(u, v) for u in vectors for v in vectors]
        grown = current.sum(Subspace.from_vectors(a.dim, products))
        # 維度沒有增加代表 current 已對乘法封閉
        if grown.dim == current.dim:
            logger.debug(f"子代數閉包在第 {rounds} 輪收斂，維度 {current.dim}")
            return current
        current = grown


@dataclass(frozen=True)
class IdempotentSearch:
    """
    冪等元搜尋結果

    Attributes:
        idempotents: 找到的冪等元（每一個都已精確驗證 e·e = e）
        search_exhaustive: 是否保證找到全部冪等元
        patterns_tried: 嘗試過的 0/1 支撐圖樣數
    """
    idempotents: Tuple[Idempotent, ...]
    search_exhaustive: bool
    patterns_tried: int

    def vectors(self) -> List[Vector]:
        """冪等元的座標列表"""
        return [e.vector for e in self.idempotents]


def _nil_coordinates(a: StructureAlgebra) -> List[int]:
    # 貪婪選出兩兩乘積為零的座標集合 R（含平方為零），使 e² = e 對 R 上的座標是線性的
    chosen: List[int] = []
    for j in range(a.dim):
        # e_j² ≠ 0 的座標不能放進 R
        if not is_zero_vector(a.mul[j][j]):
            continue
        # 與已選的每個座標雙向相乘都必須為零
        if all(is_zero_vector(a.mul[j][r]) and is_zero_vector(a.mul[r][j]) for r in chosen):
            chosen.append(j)
    return chosen


def _fixed_part_is_rigid(a: StructureAlgebra, fixed: List[int], nil: List[int]) -> bool:
    # F 是兩兩正交的冪等元，且 span(R) 是雙邊理想：此時任何冪等元在 F 上的座標只能是 0/1
    # F 上的基底向量：e_i e_j = δ_ij e_i
    for i in fixed:
        for j in fixed:
            expected = a.basis_vector(i) if i == j else zero_vector(a.dim)
            if a.mul[i][j] != expected:
                return False
    nil_span = Subspace.from_vectors(a.dim, [a.basis_vector(r) for r in nil])
    # span(R) 左右乘任何基底向量都還在 span(R) 中
    for i in range(a.dim):
        for r in nil:
            if not nil_span.contains(a.mul[i][r]) or not nil_span.contains(a.mul[r][i]):
                return False
    return True


def find_idempotents(a: StructureAlgebra, budget: int = DEFAULT_IDEMPOTENT_BUDGET) -> IdempotentSearch:
    """
    搜尋代數的冪等元

    搜尋策略：
    1. 種子：0、單位元、本身是冪等元的基底向量
    2. 支撐圖樣搜尋：把座標分成 R（兩兩乘積為零）與 F（其餘）。
       固定 F 上的 0/1 圖樣 f 後，e = f + n（n ∈ span R）的條件 e² = e 變成線性方程
       Σ_r n_r (f e_r + e_r f - e_r) = f - f²。
       有解時加入標準解，解集合是正維度時再沿每個核方向各加入一個平移解。
    3. 兩兩正交（ef = fe = 0）的已知冪等元之和

    Args:
        a: 代數
        budget: 最多嘗試的圖樣數；也限制正交和的新增數量

    Returns:
        IdempotentSearch: 結果與是否窮盡的旗標
    """
    # dict 保留插入順序，當作有序集合使用
    found: Dict[Vector, None] = {}

    def add(vector: Vector):
        # 只收精確驗證過 e·e = e 的向量
        if vector not in found and a.product(vector, vector) == vector:
            found[vector] = None

    # 1. 種子
    add(zero_vector(a.dim))
    add(a.unit)
    for i in range(a.dim):
        add(a.basis_vector(i))

    # 2. 支撐圖樣搜尋
    nil = _nil_coordinates(a)
    fixed = [j for j in range(a.dim) if j not in nil]
    # F 上每個座標取 0 或 1，共 2^|F| 個圖樣
    total_patterns = 2 ** len(fixed)
    tried = 0
    # 所有圖樣的解集合都是單點時才可能窮盡
    single_points = True

    for bits in cartesian((0, 1), repeat=len(fixed)):
        # 預算用盡就停止，結果標記為非窮盡
        if tried >= budget:
            break
        tried += 1
        # bits 對應 fixed 中每個座標的 0/1
        f = [ZERO] * a.dim
        for j, bit in zip(fixed, bits):
            if bit:
                f[j] = ONE
        f = tuple(f)
        # (f + n)² = f + n 展開後，n·n = 0，剩下對 n 線性的方程
        rhs = sub_vectors(f, a.product(f, f))
        # 第 r 欄是 f e_r + e_r f - e_r，也就是 n_r 的係數
        columns = [
            sub_vectors(add_vectors(a.product(f, a.basis_vector(r)), a.product(a.basis_vector(r), f)), a.basis_vector(r))
            for r in nil
        ]
        system = Matrix.from_columns(columns, a.dim)
        particular = solve(system, rhs)
        # 無解：這個圖樣上沒有冪等元
        if particular is None:
            continue

        def assemble(coeffs: Sequence[Fraction]) -> Vector:
            """把 R 上的係數加到圖樣 f 上"""
            vector = list(f)
            for r, c in zip(nil, coeffs):
                vector[r] += c
            return tuple(vector)

        add(assemble(particular))
        directions = kernel_basis(system).vectors()
        # 解集合有正維度時冪等元不是有限個，搜尋不再窮盡
        if directions:
            single_points = False
        for direction in directions:
            add(assemble(add_vectors(particular, direction)))

    # 3. 正交和：e、g 互相正交時 e + g 也是冪等元
    added = 0
    changed = True
    while changed and added < budget:
        changed = False
        # 先複製一份，迭代時 found 會被修改
        current = list(found)
        for e, g in cartesian(current, repeat=2):
            if added >= budget:
                break
            # 跳過 0 與自己：e + 0 = e，e + e 一般不是冪等元
            if is_zero_vector(e) or is_zero_vector(g) or e == g:
                continue
            if is_zero_vector(a.product(e, g)) and is_zero_vector(a.product(g, e)):
                total = add_vectors(e, g)
                if total not in found:
                    add(total)
                    added += 1
                    changed = True

    # 三個條件都成立才保證找到全部冪等元
    exhaustive = (
        tried == total_patterns
        and single_points
        and _fixed_part_is_rigid(a, fixed, nil)
    )
    if tried < total_patterns:
        logger.warning(f"冪等元搜尋預算用盡: 嘗試 {tried}/{total_patterns} 個圖樣")

    # 這些向量都已驗證過，直接建構 Idempotent 不再重新檢查
    idempotents = tuple(Idempotent(v, not is_zero_vector(v) and v != a.unit) for v in found)
    return IdempotentSearch(idempotents, exhaustive, tried)


@dataclass(frozen=True)
class WSubalgebra:
    """
    W 子代數（包含所有交換子與冪等元的最小子代數）的下界

    Attributes:
        subspace: 計算出的閉包
        certified: 閉包達到全維度時為 True，此時 W = A 確定成立
        idempotent_count: 參與閉包的冪等元數量
    """
    subspace: Subspace
    certified: bool
    idempotent_count: int


def w_subalgebra(a: StructureAlgebra, extra_idempotents: Sequence[Union[Idempotent, Sequence[Any]]] = (),
                 budget: int = DEFAULT_IDEMPOTENT_BUDGET) -> WSubalgebra:
    """
    計算 W 子代數的下界

    閉包的生成元：交換子子空間的基底、find_idempotents 找到的冪等元、額外提供的冪等元。
    只在閉包達到全維度時才 certified；否則結果只是下界，相關條件視為無法判定。

    Args:
        a: 代數
        extra_idempotents: 使用者提供的額外冪等元
        budget: 冪等元搜尋預算

    Raises:
        InputError: 額外冪等元不滿足 e·e = e（代碼 not-idempotent）
    """
    # 額外冪等元先驗證，不合法時直接丟出 InputError
    extras = [_as_idempotent(a, e).vector for e in extra_idempotents]
    search = find_idempotents(a, budget)
    # 串接三種生成元；重複與相依的向量由 Subspace 去除
    generators = commutator_subspace(a).vectors() + search.vectors() + extras
    closure = subalgebra_closure(a, generators)
    # 閉包是 W 的下界，只有達到全維度時才能確定 W = A
    certified = closure.dim == a.dim
    if not certified:
        logger.info(f"W 子代數未達全維度: {closure.dim}/{a.dim}")
    return WSubalgebra(closure, certified, len(search.idempotents) + len(extras))
