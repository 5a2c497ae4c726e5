"""
平凡擴張與三角代數

這個模組建立 A⋉X 與 Tri(A, X, B) 的結構常數代數，
檢查條件「pxq = x」並實作該條件下的中心公式與化簡恆等式。

A⋉X 的基底是 (A 的基底, X 的基底) 的串接，乘法為
    (a, x)(b, y) = (ab, ay + xb)
所以所有投影與嵌入都只是座標切片。

Library 說明：
- dataclasses: TrivialExtension、StarContext 等都是 frozen dataclass，可以當作 lru_cache 的鍵
- functools.cached_property: StarContext 的角代數 pAp、qAq 只在第一次使用時建立
"""
import logging
from dataclasses import dataclass
# cached_property: 延遲計算並快取角代數
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Union

from .algebra import (
    Bimodule,
    Corner,
    Idempotent,
    StructureAlgebra,
    ValidationReport,
    Violation,
    center,
    corner,
    direct_sum,
    peirce_piece,
    validate_algebra,
    validate_bimodule,
)
from .errors import ConsistencyError, InputError
from .exact import LinearSystem, Subspace, Vector, zero_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrivialExtension:
    """
    平凡擴張 A⋉X

    Attributes:
        base: 基底代數 A（維度 n）
        module: A-雙模 X（維度 m）
        total: n + m 維的 A⋉X
    """
    base: StructureAlgebra
    module: Bimodule
    total: StructureAlgebra

    @property
    def n(self) -> int:
        """dim A"""
        return self.base.dim

    @property
    def m(self) -> int:
        """dim X"""
        return self.module.dim

    def iota_a(self, a: Sequence) -> Vector:
        """a ↦ (a, 0)"""
        # A 的座標後面補 m 個 0
        return tuple(a) + zero_vector(self.m)

    def iota_x(self, x: Sequence) -> Vector:
        """x ↦ (0, x)"""
        return zero_vector(self.n) + tuple(x)

    def pi_a(self, v: Sequence) -> Vector:
        """(a, x) ↦ a"""
        # 切片 v[:n] 取前 n 個座標
        return tuple(v[:self.n])

    def pi_x(self, v: Sequence) -> Vector:
        """(a, x) ↦ x"""
        return tuple(v[self.n:])


def _extension_algebra(a: StructureAlgebra, x: Bimodule) -> StructureAlgebra:
    """A⋉X 的結構常數張量"""
    n, m = a.dim, x.dim
    total = n + m
    zero = zero_vector(total)
    # 預設全部為零；x_k·x_l = 0 的區塊不需要再填
    mul = [[zero for _ in range(total)] for _ in range(total)]
    for i in range(n):
        # (e_i, 0)(e_j, 0) = (e_i e_j, 0)
        for j in range(n):
            mul[i][j] = a.mul[i][j] + zero_vector(m)
        for k in range(m):
            # (e_i, 0)(0, x_k) = (0, e_i x_k)
            mul[i][n + k] = zero_vector(n) + x.left[i][k]
            # (0, x_k)(e_i, 0) = (0, x_k e_i)
            mul[n + k][i] = zero_vector(n) + x.right[k][i]
    labels = a.labels + x.labels
    # 標籤重複時（例如正則雙模）替 X 的標籤加上前綴
    if len(set(labels)) != len(labels):
        labels = a.labels + tuple(f"X.{l}" for l in x.labels)
    return StructureAlgebra(total, labels, tuple(tuple(row) for row in mul), a.unit + zero_vector(m))


def build_trivial_extension(a: StructureAlgebra, x: Bimodule) -> TrivialExtension:
    """
    建立平凡擴張 A⋉X

    Args:
        a: 單位結合代數
        x: A-雙模

    Returns:
        TrivialExtension: 單位元為 (1_A, 0) 的擴張

    Raises:
        InputError: A 不合法（invalid-algebra）或 X 不合法（invalid-bimodule）
        ConsistencyError: 擴張後的代數沒有通過結合律檢查
    """
    # 先驗證輸入，錯誤歸類為輸入錯誤
    report = validate_algebra(a)
    if not report.ok:
        raise InputError('invalid-algebra', "基底代數不滿足公理", identities=report.identities())
    report = validate_bimodule(a, x)
    if not report.ok:
        raise InputError('invalid-bimodule', "雙模不滿足公理", identities=report.identities())

    total = _extension_algebra(a, x)
    # 輸入合法時 A⋉X 一定是結合的；不成立代表張量組裝有錯，屬於內部一致性錯誤
    report = validate_algebra(total)
    if not report.ok:
        raise ConsistencyError('trivial-extension', "A⋉X 不是結合代數", {'identities': report.identities()})
    logger.info(f"建立平凡擴張: dim A = {a.dim}, dim X = {x.dim}")
    return TrivialExtension(a, x, total)


@dataclass(frozen=True)
class StarContext:
    """
    滿足 pxq = x（對所有 x ∈ X）的平凡擴張與非平凡冪等元 p

    q = 1 - p 不儲存，由 q 屬性即時計算。
    """
    extension: TrivialExtension
    p: Idempotent

    # 以下屬性只是轉發到 extension，讓呼叫端寫 ctx.base 而不是 ctx.extension.base
    @property
    def base(self) -> StructureAlgebra:
        """A"""
        return self.extension.base

    @property
    def module(self) -> Bimodule:
        """X"""
        return self.extension.module

    @property
    def total(self) -> StructureAlgebra:
        """A⋉X"""
        return self.extension.total

    @property
    def q(self) -> Vector:
        """q = 1 - p"""
        return self.p.complement(self.base)

    @cached_property
    def p_corner(self) -> Corner:
        """角代數 pAp"""
        return corner(self.base, self.p)

    @cached_property
    def q_corner(self) -> Corner:
        """角代數 qAq"""
        return corner(self.base, self.q)

    def pap(self, a: Sequence) -> Vector:
        """a ↦ pap"""
        return self.base.product(self.base.product(self.p.vector, a), self.p.vector)

    def qaq(self, a: Sequence) -> Vector:
        """a ↦ qaq"""
        return self.base.product(self.base.product(self.q, a), self.q)


@dataclass(frozen=True)
class StarCheck:
    """
    條件檢查結果

    Attributes:
        holds: 條件是否成立
        context: 成立時的 StarContext
        violating_index: 不成立時第一個違反條件的模基底索引
    """
    holds: bool
    context: Optional[StarContext] = None
    violating_index: Optional[int] = None


def check_star(ext: TrivialExtension, p: Union[Idempotent, Sequence[Any]]) -> StarCheck:
    """
    檢查 pxq = x 是否對所有模基底向量成立

    Args:
        ext: 平凡擴張
        p: A 中的冪等元

    Returns:
        StarCheck: 成立時帶有 StarContext，否則帶有違反條件的索引

    Raises:
        InputError: p 不是冪等元（not-idempotent）或 p ∈ {0, 1}（trivial-idempotent）
    """
    vector = p.vector if isinstance(p, Idempotent) else p
    # 重新驗證 p·p = p，長度不符或不是冪等元時拋出 InputError
    idem = Idempotent.of(ext.base, vector)
    # p = 0 或 p = 1 時條件只在 X = 0 時成立，沒有意義
    if not idem.nontrivial:
        raise InputError('trivial-idempotent', "p 必須是非平凡冪等元（p ≠ 0 且 p ≠ 1）")

    q = idem.complement(ext.base)
    x = ext.module
    # 條件對 x 是線性的，只需檢查模的基底
    for j in range(x.dim):
        basis = x.basis_vector(j)
        # 先左乘 p 再右乘 q
        if x.act_right(x.act_left(idem.vector, basis), q) != basis:
            logger.info(f"條件 pxq = x 在模基底 {j} 不成立")
            return StarCheck(False, None, j)
    return StarCheck(True, StarContext(ext, idem), None)


def check_simplifications(ctx: StarContext) -> ValidationReport:
    """
    自我檢查：pxq = x 成立時必然成立的化簡恆等式

    qx = 0、xp = 0、px = x、xq = x、ax = papx、xa = xqaq，逐一在基底上驗證。
    正常情況下報告一定是空的；不空代表 context 沒有經過 check_star 或程式有錯。
    """
    a, x = ctx.base, ctx.module
    p, q = ctx.p.vector, ctx.q
    zero = zero_vector(x.dim)
    violations: List[Violation] = []
    for j in range(x.dim):
        basis = x.basis_vector(j)
        # (恆等式名稱, 左邊, 右邊)
        checks = (
            ('qx=0', x.act_left(q, basis), zero),
            ('xp=0', x.act_right(basis, p), zero),
            ('px=x', x.act_left(p, basis), basis),
            ('xq=x', x.act_right(basis, q), basis),
        )
        for identity, lhs, rhs in checks:
            if lhs != rhs:
                violations.append(Violation(identity, (j,)))
        # A 的作用只經過角代數：左邊經過 pAp，右邊經過 qAq
        for i in range(a.dim):
            e = a.basis_vector(i)
            if x.act_left(e, basis) != x.act_left(ctx.pap(e), basis):
                violations.append(Violation('ax=papx', (i, j)))
            if x.act_right(basis, e) != x.act_right(basis, ctx.qaq(e)):
                violations.append(Violation('xa=xqaq', (i, j)))
    return ValidationReport(tuple(violations))


def center_via_formula(ctx: StarContext) -> Subspace:
    """
    以公式 {(a, 0) : a ∈ Z(A), [a, x] = 0 對所有 x} 計算 A⋉X 的中心

    結果會與直接計算的 center(total) 比對，不一致時拋出 ConsistencyError。

    Returns:
        Subspace: A⋉X 中的中心子空間
    """
    a, x = ctx.base, ctx.module
    # 未知數是 a 的座標；第一組方程是 a ∈ Z(A)
    system = LinearSystem(a.dim)
    for i in range(a.dim):
        for k in range(a.dim):
            system.add_row({r: a.brackets[r][i][k] for r in range(a.dim)})
    # 第二組方程：[a, x_j] = a x_j - x_j a 的每個座標 k 為零
    for j in range(x.dim):
        for k in range(x.dim):
            system.add_row({r: x.left[r][j][k] - x.right[j][r][k] for r in range(a.dim)})
    base_part = system.kernel()

    ext = ctx.extension
    # 嵌入 A⋉X：中心元素在 X 上的分量為 0
    formula = Subspace.from_vectors(ext.total.dim, [ext.iota_a(v) for v in base_part.vectors()])
    # 交叉驗證：直接在 A⋉X 上解中心方程
    direct = center(ext.total)
    if formula != direct:
        raise ConsistencyError(
            'center-formula',
            "公式計算的中心與直接計算的中心不一致",
            {'formula_dim': formula.dim, 'direct_dim': direct.dim},
        )
    return formula


@dataclass(frozen=True)
class TriangularBuild:
    """
    三角代數 Tri(A, X, B) ≅ (A ⊕ B)⋉X

    Attributes:
        extension: (A ⊕ B)⋉X
        context: p = (1_A, 0) 的 StarContext
        left_algebra: A
        right_algebra: B
        module: 原始的 (A, B)-雙模
    """
    extension: TrivialExtension
    context: StarContext
    left_algebra: StructureAlgebra
    right_algebra: StructureAlgebra
    module: Bimodule


def lift_module(a: StructureAlgebra, x: Bimodule, b: StructureAlgebra) -> Bimodule:
    """把 (A, B)-雙模提升為 A ⊕ B 上的雙模：(a ⊕ b)x = ax，x(a ⊕ b) = xb"""
    n = a.dim + b.dim
    zero_plane = tuple(zero_vector(x.dim) for _ in range(x.dim))
    # 左作用：A 的基底照原本作用，B 的基底作用為零
    left = tuple(x.left[i] if i < a.dim else zero_plane for i in range(n))
    # 右作用：A 的基底作用為零，B 的基底索引要扣掉 dim A
    right = tuple(
        tuple(zero_vector(x.dim) if i < a.dim else x.right[j][i - a.dim] for i in range(n))
        for j in range(x.dim)
    )
    return Bimodule(x.dim, n, n, left, right, x.labels)


def build_triangular(a: StructureAlgebra, x: Bimodule, b: StructureAlgebra) -> TriangularBuild:
    """
    建立三角代數 Tri(A, X, B)，實作為 (A ⊕ B)⋉X

    Args:
        a: 左上角代數 A
        x: 左 A、右 B 的雙模
        b: 右下角代數 B

    Returns:
        TriangularBuild: 擴張與 p = (1_A, 0) 的 StarContext

    Raises:
        InputError: A、B 不合法（invalid-algebra）或 X 不合法（invalid-bimodule）
    """
    for name, algebra in (('A', a), ('B', b)):
        report = validate_algebra(algebra)
        if not report.ok:
            raise InputError('invalid-algebra', f"{name} 不滿足公理", identities=report.identities())
    report = validate_bimodule(a, x, b)
    if not report.ok:
        raise InputError('invalid-bimodule', "X 不是 (A, B)-雙模", identities=report.identities())

    summed = direct_sum(a, b)
    ext = build_trivial_extension(summed, lift_module(a, x, b))
    # p = (1_A, 0)，q = (0, 1_B)：1_A x 1_B = x 對任何 (A, B)-雙模成立
    p = a.unit + zero_vector(b.dim)
    check = check_star(ext, p)
    if not check.holds:
        raise ConsistencyError('triangular-star', "三角代數的 p = (1_A, 0) 不滿足 pxq = x",
                               {'violating_index': check.violating_index})
    logger.info(f"建立三角代數: dim A = {a.dim}, dim X = {x.dim}, dim B = {b.dim}")
    return TriangularBuild(ext, check.context, a, b, x)


def peirce_vanishing(ctx: StarContext) -> Dict[str, int]:
    """三角情形下 pAq 與 qAp 的維度（兩者都應為 0）"""
    base = ctx.base
    # peirce_piece(left, right) 計算 left·A·right 的子空間
    return {
        'pAq': peirce_piece(base, ctx.p.vector, ctx.q).dim,
        'qAp': peirce_piece(base, ctx.q, ctx.p.vector).dim,
    }
