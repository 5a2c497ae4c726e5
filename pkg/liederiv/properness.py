"""
適當性判定引擎

這個模組回答「Lie 導子是否為適當的」這一類問題：
- 單一映射：L ∈ Der(A) + C(A)？（C 是取值於中心、在交換子上為零的映射）
- 整個代數：LieDer(A) == Der(A) + C(A)？（Lie 導子性質）
- 在 pxq = x 條件下，以 ℓ_A 的線性可行性刻畫 A⋉X 上 Lie 導子的適當性
- 充分條件檢查（A 有 Lie 導子性質，加上兩個角代數的 W 或中心條件）
- 忠誠性、τ 同構、中心理想等輔助判定
- 只依賴 A 與 p 的 Peirce 判定：pAq 的左右忠誠性、中心投影等式、角乘積為零

所有判定都是精確的：「適當」附帶可以代入驗證的見證 (D, ℓ)，
「不適當」由子空間不包含關係保證。

Library 說明：
- functools.lru_cache: C(A)、Lie 導子性質與可接受的 ℓ_A 空間以代數或 context 為鍵快取，
  測試活動對同一個實例執行多個不變量時不會重複求解
- dataclasses: field(default_factory=dict) 讓報告的 dims、details 欄位各自擁有新的字典
"""
import logging
# field: 帶預設工廠的 dataclass 欄位
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .algebra import (
    DEFAULT_IDEMPOTENT_BUDGET,
    Corner,
    Idempotent,
    StructureAlgebra,
    center,
    corner,
    peirce_piece,
    w_subalgebra,
)
from .derivations import (
    LinearEndomap,
    decompose_map,
    derivation_space,
    lie_derivation_space,
)
from .errors import ConsistencyError, InputError
from .exact import (
    LinearSystem,
    Matrix,
    Subspace,
    Vector,
    is_zero_vector,
    kernel_basis,
    solve,
    sub_vectors,
    zero_vector,
)
from .extension import StarContext, TrivialExtension, TriangularBuild, center_via_formula

logger = logging.getLogger(__name__)

# is_proper 的判定結果
PROPER = 'proper'
NOT_PROPER = 'not-proper'

# 角代數條件的三種狀態；只有 INCONCLUSIVE 代表條件沒有成立
W_CERTIFIED = 'w_certified'
CENTER_MATCH = 'center_match'
INCONCLUSIVE = 'inconclusive'

# 充分條件的結論；NOT_CONCLUDED 不代表沒有 Lie 導子性質
GUARANTEED = 'guaranteed'
NOT_CONCLUDED = 'not-concluded'

# 報告 JSON 中的條件標籤
CHARACTERIZATION_LABELS = ('2.2(i)', '2.2(ii)')
SUFFICIENCY_LABELS = ('2.4(I)', '2.4(II)(i)', '2.4(II)(ii)')
TRIANGULAR_LABELS = ('3.1(I)', '3.1(II)(i)', '3.1(II)(ii)')


def _as_map(mapping: Union[LinearEndomap, Matrix], n: int) -> LinearEndomap:
    """
    統一成 LinearEndomap 並檢查是 n x n

    Raises:
        InputError: 形狀不符（代碼 dimension-mismatch）
    """
    endomap = mapping if isinstance(mapping, LinearEndomap) else LinearEndomap(mapping)
    if endomap.rows != n or endomap.cols != n:
        raise InputError('dimension-mismatch', f"映射形狀 {endomap.rows}x{endomap.cols} 應為 {n}x{n}")
    return endomap


def _add_center_valued_rows(system: LinearSystem, a: StructureAlgebra):
    """加入「ℓ 取值於 Z(A)」的方程"""
    # ℓ(e_s) ∈ Z(A)：對每個 s、i、k，Σ_r ℓ[s*n+r] [e_r, e_i]_k = 0
    n = a.dim
    for s in range(n):
        for i in range(n):
            for k in range(n):
                system.add_row({s * n + r: a.brackets[r][i][k] for r in range(n)})


@lru_cache(maxsize=128)
def central_killing_commutators(a: StructureAlgebra) -> Subspace:
    """
    C(A) = {ℓ : ℓ(A) ⊆ Z(A)，ℓ([A, A]) = 0}

    維度等於 (dim A - dim [A,A]) · dim Z(A)。

    Returns:
        Subspace: n² 維映射空間中的子空間（展平慣例同 derivations 模組）
    """
    n = a.dim
    system = LinearSystem(n * n)
    # 第一組：取值於中心
    _add_center_valued_rows(system, a)
    # 第二組：ℓ([e_i, e_j]) = 0；ℓ([e_i, e_j])_k = Σ_s [e_i, e_j]_s ℓ[s*n+k]
    for i in range(n):
        for j in range(i + 1, n):
            bracket = a.brackets[i][j]
            for k in range(n):
                system.add_row({s * n + k: c for s, c in enumerate(bracket) if c})
    return system.kernel()


@dataclass(frozen=True)
class PropernessCertificate:
    """
    適當性證書

    Attributes:
        verdict: 'proper' 或 'not-proper'
        witness_d: 導子部分 D（適當時）
        witness_ell: 中心值部分 ℓ（適當時）
        dims: 相關子空間的維度 lie_der、der、central_killing_commutators、sum、intersection
    """
    verdict: str
    witness_d: Optional[LinearEndomap] = None
    witness_ell: Optional[LinearEndomap] = None
    dims: Dict[str, int] = field(default_factory=dict)

    @property
    def proper(self) -> bool:
        """verdict 是否為 'proper'"""
        return self.verdict == PROPER


def _space_dims(a: StructureAlgebra) -> Dict[str, int]:
    """證書與 Lie 導子性質報告共用的維度摘要"""
    der = derivation_space(a)
    cs = central_killing_commutators(a)
    return {
        'lie_der': lie_derivation_space(a).dim,
        'der': der.dim,
        'central_killing_commutators': cs.dim,
        'sum': der.sum(cs).dim,
        'intersection': der.intersect(cs).dim,
    }


def is_proper(a: StructureAlgebra, mapping: Union[LinearEndomap, Matrix]) -> PropernessCertificate:
    """
    判定 Lie 導子 L 是否適當（L ∈ Der(A) + C(A)）

    求解 [Der 基底 | C 基底]·c = L；導子欄放在前面，所以 L 本身是導子時見證的 ℓ 為 0。
    解在自由欄上取 0，相同輸入永遠得到相同證書。

    Args:
        a: 代數
        mapping: n x n 映射

    Returns:
        PropernessCertificate: 判定結果與見證

    Raises:
        InputError: L 不是 Lie 導子（代碼 input-not-lie-derivation）
        ConsistencyError: 見證代入驗證失敗
    """
    endomap = _as_map(mapping, a.dim)
    # 展平成 n² 維向量，和映射空間的座標一致
    flat = endomap.flatten()
    # 前置條件：輸入必須是 Lie 導子
    if not lie_derivation_space(a).contains(flat):
        raise InputError('input-not-lie-derivation', "輸入映射不是 Lie 導子")

    der = derivation_space(a)
    cs = central_killing_commutators(a)
    dims = _space_dims(a)
    # 導子欄在前；solve() 在自由變數上取 0，見證是固定的
    columns = der.vectors() + cs.vectors()
    if columns:
        coeffs = solve(Matrix.from_columns(columns, a.dim * a.dim), flat)
    else:
        # Der 與 C 都是零空間：只有零映射適當
        coeffs = () if is_zero_vector(flat) else None

    if coeffs is None:
        # 交叉驗證：無解時 L 也不能屬於 Der + C
        if der.sum(cs).contains(flat):
            raise ConsistencyError('properness-refusal', "求解失敗但 L 屬於 Der + C")
        return PropernessCertificate(NOT_PROPER, None, None, dims)

    # 前 dim Der 個係數屬於導子，其餘屬於 C
    d_part = der.combine(coeffs[:der.dim])
    ell_part = cs.combine(coeffs[der.dim:])
    # 代回驗證：D ∈ Der、ℓ ∈ C、D + ℓ = L
    if not der.contains(d_part) or not cs.contains(ell_part) or tuple(x + y for x, y in zip(d_part, ell_part)) != flat:
        raise ConsistencyError('properness-witness', "見證 D + ℓ 代入驗證失敗")
    return PropernessCertificate(
        PROPER,
        LinearEndomap.from_flat(d_part, a.dim),
        LinearEndomap.from_flat(ell_part, a.dim),
        dims,
    )


@dataclass(frozen=True)
class LdpResult:
    """Lie 導子性質的判定結果與子空間維度"""
    verdict: bool
    dims: Dict[str, int] = field(default_factory=dict)


@lru_cache(maxsize=128)
def has_lie_derivation_property(a: StructureAlgebra) -> LdpResult:
    """
    判定 A 是否有 Lie 導子性質（每個 Lie 導子都是適當的）

    Der + C 永遠包含在 LieDer 中；兩者維度相等即代表相等。

    Raises:
        ConsistencyError: Der + C 不包含在 LieDer 中
    """
    lie = lie_derivation_space(a)
    summed = derivation_space(a).sum(central_killing_commutators(a))
    # 導子與 C 中的映射都是 Lie 導子；不成立代表方程組有錯
    if not summed.is_subspace_of(lie):
        raise ConsistencyError('ldp-containment', "Der + C 不包含在 LieDer 中")
    dims = _space_dims(a)
    # 子空間包含時，維度相等 ⇔ 相等
    verdict = summed.dim == lie.dim
    logger.info(f"Lie 導子性質: {verdict} (LieDer {lie.dim}, Der + C {summed.dim})")
    return LdpResult(verdict, dims)


@dataclass(frozen=True)
class CharacterizationWitness:
    """
    刻畫條件的見證

    Attributes:
        ell_a: ℓ_A: A → Z(A)，並且 [ℓ_A(pap), x] = 0 = [ℓ_A(qaq), x]
        derivation_a: L_A - ℓ_A，A 上的導子
    """
    ell_a: LinearEndomap
    derivation_a: LinearEndomap


def _corner_kill_rows(system: LinearSystem, ctx: StarContext, projector):
    """
    加入 [ℓ(proj(e_i)), x_j] = 0 的方程，proj 是 a ↦ pap 或 a ↦ qaq
    """
    # [ℓ(proj(e_i)), x_j] = 0：Σ_s proj(e_i)_s Σ_r ℓ[s*n+r] μ_j[r][k] = 0
    a, x = ctx.base, ctx.module
    n = a.dim
    for i in range(n):
        compressed = projector(a.basis_vector(i))
        support = [(s, c) for s, c in enumerate(compressed) if c]
        # proj(e_i) = 0 時沒有方程
        if not support:
            continue
        for j in range(x.dim):
            for k in range(x.dim):
                row: Dict[int, Any] = {}
                for r in range(n):
                    # μ_j[r][k]：[e_r, x_j] 在 x_k 上的係數
                    mu = x.left[r][j][k] - x.right[j][r][k]
                    if not mu:
                        continue
                    for s, c in support:
                        row[s * n + r] = row.get(s * n + r, 0) + c * mu
                system.add_row(row)


@lru_cache(maxsize=64)
def admissible_central_maps(ctx: StarContext) -> Subspace:
    """
    可接受的 ℓ_A 所成的空間：取值於 Z(A)，且 [ℓ_A(pap), x] = 0 = [ℓ_A(qaq), x]
    """
    n = ctx.base.dim
    system = LinearSystem(n * n)
    # 三組方程放在同一個系統：取值於中心、p 角、q 角
    _add_center_valued_rows(system, ctx.base)
    _corner_kill_rows(system, ctx, ctx.pap)
    _corner_kill_rows(system, ctx, ctx.qaq)
    return system.kernel()


def characterize_properness(ctx: StarContext, mapping: Union[LinearEndomap, Matrix]) -> Optional[CharacterizationWitness]:
    """
    以 ℓ_A 的存在性刻畫 A⋉X 上 Lie 導子 L 的適當性

    L 適當若且唯若存在 ℓ_A: A → Z(A) 使得 L_A - ℓ_A ∈ Der(A)，
    並且 [ℓ_A(pap), x] = 0 = [ℓ_A(qaq), x]。
    求解 L_A ∈ Der(A) + V（V 為 admissible_central_maps）一次即可判定。

    Args:
        ctx: StarContext
        mapping: A⋉X 上的映射

    Returns:
        見證；不存在時回傳 None

    Raises:
        InputError: L 不是 A⋉X 上的 Lie 導子（代碼 input-not-lie-derivation）
    """
    total = ctx.total
    endomap = _as_map(mapping, total.dim)
    if not lie_derivation_space(total).contains(endomap.flatten()):
        raise InputError('input-not-lie-derivation', "輸入映射不是 A⋉X 上的 Lie 導子")

    a = ctx.base
    n = a.dim
    # 刻畫只需要 A → A 的區塊
    l_a = LinearEndomap(decompose_map(ctx.extension, endomap).l_a)
    der = derivation_space(a)
    admissible = admissible_central_maps(ctx)
    columns = der.vectors() + admissible.vectors()
    target = l_a.flatten()
    if not columns:
        coeffs = () if is_zero_vector(target) else None
    else:
        # L_A = D_A + ℓ_A，D_A ∈ Der(A)，ℓ_A ∈ 可接受空間
        coeffs = solve(Matrix.from_columns(columns, n * n), target)
    # 無解：L 不適當
    if coeffs is None:
        return None

    d_part = der.combine(coeffs[:der.dim])
    ell_part = admissible.combine(coeffs[der.dim:])
    # 代回驗證：L_A - ℓ_A 必須等於導子部分
    if not admissible.contains(ell_part) or sub_vectors(target, ell_part) != d_part:
        raise ConsistencyError('characterization-witness', "ℓ_A 見證代入驗證失敗")
    return CharacterizationWitness(LinearEndomap.from_flat(ell_part, n), LinearEndomap.from_flat(d_part, n))


@lru_cache(maxsize=128)
def center_valued_maps(a: StructureAlgebra) -> Subspace:
    """所有取值於 Z(A) 的線性映射（不要求在交換子上為零）"""
    system = LinearSystem(a.dim * a.dim)
    # 和 C(A) 相同的第一組方程，但沒有交換子條件
    _add_center_valued_rows(system, a)
    return system.kernel()


def _in_sum(first: Subspace, second: Subspace, target: Vector) -> bool:
    """target ∈ first + second"""
    columns = first.vectors() + second.vectors()
    if not columns:
        return is_zero_vector(target)
    return solve(Matrix.from_columns(columns, len(target)), target) is not None


@dataclass(frozen=True)
class CharacterizationReport:
    """
    刻畫條件的逐條狀態

    Attributes:
        condition_i: 存在 ℓ_A: A → Z(A) 使 L_A - ℓ_A ∈ Der(A)
        condition_ii: 同一個 ℓ_A 還能滿足 [ℓ_A(pap), x] = 0 = [ℓ_A(qaq), x]
        witness: condition_ii 成立時的見證
    """
    condition_i: bool
    condition_ii: bool
    witness: Optional[CharacterizationWitness] = None

    @property
    def proper(self) -> bool:
        """條件 (ii) 就是適當性的刻畫"""
        return self.condition_ii

    def conditions(self) -> Dict[str, bool]:
        """條件標籤 → 是否成立"""
        # zip 把標籤與布林值配對，dict() 轉成字典
        return dict(zip(CHARACTERIZATION_LABELS, (self.condition_i, self.condition_ii)))


def characterization_report(ctx: StarContext, mapping: Union[LinearEndomap, Matrix]) -> CharacterizationReport:
    """
    分別判定刻畫的兩個條件

    條件 (ii) 是在條件 (i) 之上再加 ℓ_A 的角代數限制，所以 (ii) 成立時 (i) 必定成立。

    Raises:
        InputError: L 不是 A⋉X 上的 Lie 導子（代碼 input-not-lie-derivation）
    """
    # 條件 (ii)：有見證就成立
    witness = characterize_properness(ctx, mapping)
    # 條件 (i)：只要求 ℓ_A 取值於中心
    l_a = decompose_map(ctx.extension, _as_map(mapping, ctx.total.dim)).l_a
    condition_i = _in_sum(derivation_space(ctx.base), center_valued_maps(ctx.base), LinearEndomap(l_a).flatten())
    if witness is not None and not condition_i:
        raise ConsistencyError('characterization-conditions', "條件 (ii) 成立但條件 (i) 不成立")
    return CharacterizationReport(condition_i, witness is not None, witness)


def proof_identity_violations(ctx: StarContext, ell_a: Union[LinearEndomap, Matrix]) -> List[Tuple[int, int, int]]:
    """
    檢查封閉性恆等式 [ℓ(papbp), x] = [ℓ(pap), bx] + [ℓ(pbp), ax]

    a = e_i、b = e_j、x = x_k 走遍所有基底三元組。
    當 L 是 A⋉X 上的 Lie 導子且 L_A - ℓ_A 是導子時，這個恆等式必然成立。

    Returns:
        不成立的 (i, j, k) 列表
    """
    a, x = ctx.base, ctx.module
    ell = ell_a if isinstance(ell_a, LinearEndomap) else LinearEndomap(ell_a)
    p = ctx.p.vector
    es = [a.basis_vector(i) for i in range(a.dim)]
    # 預先計算 p e_i p 與 ℓ(p e_i p)
    paps = [ctx.pap(e) for e in es]
    ell_paps = [ell.apply(v) for v in paps]
    violations = []
    for i in range(a.dim):
        for j in range(a.dim):
            # papbp = (pap)·b·p，a = e_i、b = e_j
            papbp = a.product(a.product(paps[i], es[j]), p)
            lhs_image = ell.apply(papbp)
            for k in range(x.dim):
                xk = x.basis_vector(k)
                lhs = x.commutator(lhs_image, xk)
                # [ℓ(pap), bx] + [ℓ(pbp), ax]
                rhs = [u + v for u, v in zip(
                    x.commutator(ell_paps[i], x.act_left(es[j], xk)),
                    x.commutator(ell_paps[j], x.act_left(es[i], xk)),
                )]
                if lhs != tuple(rhs):
                    violations.append((i, j, k))
    return violations


@dataclass(frozen=True)
class SufficiencyReport:
    """
    充分條件檢查報告

    Attributes:
        condition_i: A 是否有 Lie 導子性質（三角檢查時是 A 與 B 都有）
        condition_ii_p: p 角的狀態 'w_certified'、'center_match' 或 'inconclusive'
        condition_ii_q: q 角的狀態
        conclusion: 'guaranteed'（保證 A⋉X 有 Lie 導子性質）或 'not-concluded'
        details: 各子空間維度
        triangular: 由三角代數的簡化檢查產生時為 True（決定使用哪一組條件標籤）
    """
    condition_i: bool
    condition_ii_p: str
    condition_ii_q: str
    conclusion: str
    details: Dict[str, Any] = field(default_factory=dict)
    triangular: bool = False

    @property
    def guaranteed(self) -> bool:
        """結論為 'guaranteed'"""
        return self.conclusion == GUARANTEED

    @property
    def labels(self) -> Tuple[str, str, str]:
        """三個條件的標籤，依序對應 condition_i、condition_ii_p、condition_ii_q"""
        return TRIANGULAR_LABELS if self.triangular else SUFFICIENCY_LABELS

    def conditions(self) -> Dict[str, Any]:
        """條件標籤 → 狀態（條件一為布林值，其餘為角代數狀態字串）"""
        return dict(zip(self.labels, (self.condition_i, self.condition_ii_p, self.condition_ii_q)))

    def satisfied(self) -> List[str]:
        """成立的條件標籤；角代數條件的狀態不是 inconclusive 就算成立"""
        values = (self.condition_i, self.condition_ii_p != INCONCLUSIVE, self.condition_ii_q != INCONCLUSIVE)
        return [label for label, ok in zip(self.labels, values) if ok]

    def violated(self) -> List[str]:
        """不成立的條件標籤"""
        return [label for label in self.labels if label not in self.satisfied()]


def _transport(corner_: Corner, idempotents: Sequence[Vector]) -> List[Vector]:
    """只保留落在角代數裡的冪等元，換成角代數座標"""
    transported = []
    for e in idempotents:
        coords = corner_.restrict(e)
        if coords is not None:
            transported.append(coords)
    return transported


def _corner_status(base: StructureAlgebra, corner_: Corner, center_total: Subspace, n: int,
                   extras: Sequence[Vector], budget: int) -> Tuple[str, Dict[str, int]]:
    """
    一個角代數的條件狀態

    先看 W 子代數是否證明為全空間，再比較角代數的中心與 A⋉X 中心的投影。
    """
    w = w_subalgebra(corner_.algebra, _transport(corner_, extras), budget)
    # z[:n] 是中心元素的 A 分量，compress 再壓到角代數座標
    projected = Subspace.from_vectors(
        corner_.algebra.dim,
        [corner_.compress(base, z[:n]) for z in center_total.vectors()],
    )
    corner_center = center(corner_.algebra)
    details = {
        'dim': corner_.algebra.dim,
        'w_dim': w.subspace.dim,
        'center_dim': corner_center.dim,
        'projected_center_dim': projected.dim,
    }
    # W 的判定優先；只有 W 沒有證明時才看中心
    if w.certified:
        return W_CERTIFIED, details
    if corner_center == projected:
        return CENTER_MATCH, details
    return INCONCLUSIVE, details


def _conclude(condition_i: bool, status_p: str, status_q: str) -> str:
    """三個條件都成立才有結論"""
    if condition_i and status_p != INCONCLUSIVE and status_q != INCONCLUSIVE:
        return GUARANTEED
    return NOT_CONCLUDED


def sufficiency_check(ctx: StarContext, extra_idempotents: Sequence[Union[Idempotent, Sequence[Any]]] = (),
                      budget: int = DEFAULT_IDEMPOTENT_BUDGET) -> SufficiencyReport:
    """
    檢查 A⋉X 具有 Lie 導子性質的充分條件

    條件一：A 有 Lie 導子性質。
    條件二（p 角與 q 角各自）：W 子代數證明為全空間，或角代數的中心等於 A⋉X 中心的投影。

    Args:
        ctx: StarContext
        extra_idempotents: A 中額外的冪等元見證（落在角代數中的才會使用）
        budget: 冪等元搜尋預算

    Returns:
        SufficiencyReport: 各條件狀態與結論
    """
    base = ctx.base
    # 額外冪等元先在 A 中驗證；不在角代數中的由 _transport 過濾
    extras = [Idempotent.of(base, e.vector if isinstance(e, Idempotent) else e).vector for e in extra_idempotents]
    condition_i = has_lie_derivation_property(base).verdict
    # 兩個角共用同一個 Z(A⋉X)
    center_total = center_via_formula(ctx)
    status_p, details_p = _corner_status(base, ctx.p_corner, center_total, base.dim, extras, budget)
    status_q, details_q = _corner_status(base, ctx.q_corner, center_total, base.dim, extras, budget)
    conclusion = _conclude(condition_i, status_p, status_q)
    logger.info(f"充分條件檢查: I={condition_i}, p 角={status_p}, q 角={status_q}, 結論={conclusion}")
    return SufficiencyReport(condition_i, status_p, status_q, conclusion,
                             {'corner_p': details_p, 'corner_q': details_q, 'center_dim': center_total.dim})


def _summand_status(algebra: StructureAlgebra, projected_center: Subspace, budget: int) -> Tuple[str, Dict[str, int]]:
    """三角情形下直和項 A 或 B 的條件狀態，判定順序與 _corner_status 相同"""
    w = w_subalgebra(algebra, (), budget)
    algebra_center = center(algebra)
    details = {
        'dim': algebra.dim,
        'w_dim': w.subspace.dim,
        'center_dim': algebra_center.dim,
        'projected_center_dim': projected_center.dim,
    }
    if w.certified:
        return W_CERTIFIED, details
    if algebra_center == projected_center:
        return CENTER_MATCH, details
    return INCONCLUSIVE, details


def triangular_sufficiency_check(build: TriangularBuild, budget: int = DEFAULT_IDEMPOTENT_BUDGET) -> SufficiencyReport:
    """
    三角代數 Tri(A, X, B) 的充分條件

    角代數直接換成 A 與 B：A、B 都有 Lie 導子性質，
    並且 W_A = A 或 Z(A) = π_A(Z(T))，B 亦同。
    """
    a, b = build.left_algebra, build.right_algebra
    condition_i = has_lie_derivation_property(a).verdict and has_lie_derivation_property(b).verdict
    center_total = center_via_formula(build.context)
    vectors = center_total.vectors()
    # A⋉X 的座標是 (A 的座標, B 的座標, X 的座標)，切片取出 A 與 B 的分量
    projected_a = Subspace.from_vectors(a.dim, [z[:a.dim] for z in vectors])
    projected_b = Subspace.from_vectors(b.dim, [z[a.dim:a.dim + b.dim] for z in vectors])
    status_a, details_a = _summand_status(a, projected_a, budget)
    status_b, details_b = _summand_status(b, projected_b, budget)
    conclusion = _conclude(condition_i, status_a, status_b)
    return SufficiencyReport(condition_i, status_a, status_b, conclusion,
                             {'corner_p': details_a, 'corner_q': details_b, 'center_dim': center_total.dim},
                             triangular=True)


@dataclass(frozen=True)
class Loyalty:
    """忠誠性：左忠誠 aX = 0 ⇒ pap = 0；右忠誠 Xa = 0 ⇒ qaq = 0"""
    left: bool
    right: bool

    @property
    def loyal(self) -> bool:
        """左右都忠誠"""
        return self.left and self.right


def _annihilator(ctx: StarContext, side: str) -> Subspace:
    """左零化子 {a : aX = 0} 或右零化子 {a : Xa = 0}"""
    a, x = ctx.base, ctx.module
    # 未知數是 a 的座標；每個 (x_j, 座標 k) 一條方程
    system = LinearSystem(a.dim)
    for j in range(x.dim):
        for k in range(x.dim):
            if side == 'left':
                system.add_row({r: x.left[r][j][k] for r in range(a.dim)})
            else:
                system.add_row({r: x.right[j][r][k] for r in range(a.dim)})
    return system.kernel()


def loyalty(ctx: StarContext) -> Loyalty:
    """
    計算左右零化子並檢查其在角代數上的像是否為零

    Returns:
        Loyalty: 左、右忠誠性
    """
    # 零化子是子空間，pap 是線性的，檢查基底即可
    left = all(is_zero_vector(ctx.pap(v)) for v in _annihilator(ctx, 'left').vectors())
    right = all(is_zero_vector(ctx.qaq(v)) for v in _annihilator(ctx, 'right').vectors())
    return Loyalty(left, right)


@dataclass(frozen=True)
class TauIsomorphism:
    """
    τ: π_pAp(Z(A⋉X)) → π_qAq(Z(A⋉X))，滿足 papx = xτ(pap)

    Attributes:
        domain: A 中的子空間 {pap : (a, 0) ∈ Z(A⋉X)}
        codomain: A 中的子空間 {qaq : (a, 0) ∈ Z(A⋉X)}
        matrix: 以兩個子空間的 RREF 基底表示的矩陣
        bijective: 是否為雙射
        multiplicative: τ(uv) = τ(u)τ(v) 是否在基底乘積上成立
    """
    domain: Subspace
    codomain: Subspace
    matrix: Matrix
    bijective: bool
    multiplicative: bool

    def apply(self, v: Sequence) -> Optional[Vector]:
        """對 domain 中的元素套用 τ，結果是 A 的座標；v 不在 domain 中時回傳 None"""
        coords = self.domain.coordinates(v)
        if coords is None:
            return None
        # 矩陣作用在 RREF 座標上，再組合回 A 的座標
        return self.codomain.combine(self.matrix.apply(coords))


def tau_isomorphism(ctx: StarContext) -> Optional[TauIsomorphism]:
    """
    求解 papx = xτ(pap)

    對 domain 的每個基底向量 u，在 codomain 中找 w 使得 u·x_j = x_j·w 對所有 j 成立。

    Returns:
        TauIsomorphism；方程組無解時回傳 None（並記錄警告）

    Raises:
        InputError: context 不是忠誠的（代碼 not-loyal）
    """
    if not loyalty(ctx).loyal:
        raise InputError('not-loyal', "τ 只在左右忠誠的 context 上定義")

    a, x = ctx.base, ctx.module
    n = a.dim
    center_vectors = center_via_formula(ctx).vectors()
    # 中心元素的 A 分量分別壓到 p 角與 q 角
    domain = Subspace.from_vectors(n, [ctx.pap(z[:n]) for z in center_vectors])
    codomain = Subspace.from_vectors(n, [ctx.qaq(z[:n]) for z in center_vectors])
    targets = codomain.vectors()

    # τ 的矩陣逐欄求出：第 t 欄是 τ(u_t) 在 codomain 基底下的座標
    columns = []
    for u in domain.vectors():
        rhs = []
        # 每個 codomain 基底向量 w_t 一欄，欄的內容是所有 x_j·w_t 串接
        system_columns = [[] for _ in targets]
        for j in range(x.dim):
            xj = x.basis_vector(j)
            rhs.extend(x.act_left(u, xj))
            for t, w in enumerate(targets):
                system_columns[t].extend(x.act_right(xj, w))
        if targets:
            solution = solve(Matrix.from_columns(system_columns, len(rhs)), rhs)
        else:
            solution = () if is_zero_vector(rhs) else None
        if solution is None:
            logger.warning("τ 的方程組無解")
            return None
        columns.append(solution)

    matrix = Matrix.from_columns(columns, codomain.dim)
    # 方陣且核為零
    bijective = domain.dim == codomain.dim and kernel_basis(matrix).dim == 0
    # 先建立一個暫時的物件，才能用 apply() 檢查乘法
    tau = TauIsomorphism(domain, codomain, matrix, bijective, True)

    multiplicative = True
    basis = domain.vectors()
    for u in basis:
        for v in basis:
            image = tau.apply(a.product(u, v))
            if image is None or image != a.product(tau.apply(u), tau.apply(v)):
                multiplicative = False
    return TauIsomorphism(domain, codomain, matrix, bijective, multiplicative)


def largest_central_ideal(a: StructureAlgebra) -> Subspace:
    """
    包含在 Z(A) 中的最大雙邊理想

    從 I = Z(A) 開始，反覆取 {v ∈ I : e_i v ∈ I 且 v e_i ∈ I 對所有 i}，直到維度不變。
    """
    current = center(a)
    # 每一輪維度嚴格下降，或者停止
    while current.dim:
        basis = current.vectors()
        # I 的方程：與 I 正交的向量 w 滿足 w·v = 0
        annihilators = kernel_basis(current.basis).vectors()
        # 未知數是 I 的基底係數
        system = LinearSystem(current.dim)
        for i in range(a.dim):
            e = a.basis_vector(i)
            left_images = [a.product(e, b) for b in basis]
            right_images = [a.product(b, e) for b in basis]
            for w in annihilators:
                system.add_dense_row([sum(wk * vk for wk, vk in zip(w, img)) for img in left_images])
                system.add_dense_row([sum(wk * vk for wk, vk in zip(w, img)) for img in right_images])
        kept = system.kernel()
        # 沒有任何元素被去除：I 已經是理想
        if kept.dim == current.dim:
            break
        current = Subspace.from_vectors(a.dim, [current.combine(c) for c in kept.vectors()])
    return current


def central_ideal_free(a: StructureAlgebra) -> bool:
    """A 是否不含非零的中心理想"""
    return largest_central_ideal(a).dim == 0


def corner_products_vanish(a: StructureAlgebra, p: Union[Idempotent, Sequence[Any]]) -> Tuple[bool, bool]:
    """
    (pAqAp = 0, qApAq = 0)

    Raises:
        InputError: p 不是冪等元（代碼 not-idempotent）
    """
    idem = Idempotent.of(a, p.vector if isinstance(p, Idempotent) else p)
    pv, qv = idem.vector, idem.complement(a)
    # pAqAp 由 pAq 與 qAp 的基底乘積張成
    paq = peirce_piece(a, pv, qv).vectors()
    qap = peirce_piece(a, qv, pv).vectors()
    pqp_zero = all(is_zero_vector(a.product(u, v)) for u in paq for v in qap)
    qpq_zero = all(is_zero_vector(a.product(v, u)) for u in paq for v in qap)
    return pqp_zero, qpq_zero


def _acts_faithfully(a: StructureAlgebra, acting: Subspace, module: Subspace, left: bool) -> bool:
    """acting 中只有 0 會零化整個 module"""
    # 解 Σ_s c_s (b_s·w) = 0（右作用時是 w·b_s），對所有 w；只有零解時作用忠誠
    basis = acting.vectors()
    # 作用代數是零空間時條件自動成立
    if not basis:
        return True
    system = LinearSystem(len(basis))
    for w in module.vectors():
        products = [a.product(b, w) if left else a.product(w, b) for b in basis]
        for t in range(a.dim):
            system.add_dense_row([v[t] for v in products])
    return system.kernel().dim == 0


def faithful_left(a: StructureAlgebra, p: Union[Idempotent, Sequence[Any]]) -> bool:
    """
    pAq 是否為忠誠的左 pAp-模：u ∈ pAp 且 u·pAq = 0 ⇒ u = 0

    Raises:
        InputError: p 不是冪等元（代碼 not-idempotent）
    """
    idem = Idempotent.of(a, p.vector if isinstance(p, Idempotent) else p)
    pv, qv = idem.vector, idem.complement(a)
    # pAp 從左邊作用在 pAq 上
    return _acts_faithfully(a, peirce_piece(a, pv, pv), peirce_piece(a, pv, qv), left=True)


def faithful_right(a: StructureAlgebra, p: Union[Idempotent, Sequence[Any]]) -> bool:
    """
    pAq 是否為忠誠的右 qAq-模：v ∈ qAq 且 pAq·v = 0 ⇒ v = 0

    qAp 上的右 qAq 作用恆為零，所以右忠誠性取在 pAq 上。
    """
    idem = Idempotent.of(a, p.vector if isinstance(p, Idempotent) else p)
    pv, qv = idem.vector, idem.complement(a)
    # qAq 從右邊作用在 pAq 上
    return _acts_faithfully(a, peirce_piece(a, qv, qv), peirce_piece(a, pv, qv), left=False)


def _corner_center(a: StructureAlgebra, e: Vector) -> Subspace:
    """Z(eAe) 嵌回 A 的座標"""
    # e = 0 時角代數是零空間，corner() 無法建立單位元
    if peirce_piece(a, e, e).dim == 0:
        return Subspace.zero(a.dim)
    piece = corner(a, e)
    return Subspace.from_vectors(a.dim, [piece.embed(v) for v in center(piece.algebra).vectors()])


def center_projection_equalities(a: StructureAlgebra, p: Union[Idempotent, Sequence[Any]]) -> Tuple[bool, bool]:
    """
    (Z(qAq) = Z(A)q, Z(pAp) = Z(A)p)，兩邊都是 A 中的子空間

    Z(A)e ⊆ Z(eAe) 永遠成立，所以只有維度可能不同。
    """
    idem = Idempotent.of(a, p.vector if isinstance(p, Idempotent) else p)
    z = center(a).vectors()
    results = []
    # 順序：先 q 再 p，和回傳值一致
    for e in (idem.complement(a), idem.vector):
        projected = Subspace.from_vectors(a.dim, [a.product(v, e) for v in z])
        results.append(projected == _corner_center(a, e))
    return results[0], results[1]


def lift_base_lie_derivation(ext: TrivialExtension, l_a: Union[LinearEndomap, Matrix]) -> LinearEndomap:
    """
    把 A 上的 Lie 導子提升為 A⋉X 上的 (a, x) ↦ (L_A(a), 0)

    需要 [L_A(a), x] = 0 對所有 a、x 成立。A 沒有 Lie 導子性質且 L_A 不適當時，
    提升後的映射也是不適當的。

    Raises:
        InputError: L_A 不是 Lie 導子（input-not-lie-derivation）或 [L_A(a), x] ≠ 0（incompatible-lift）
        ConsistencyError: 提升結果不是 A⋉X 上的 Lie 導子
    """
    a, x = ext.base, ext.module
    endomap = _as_map(l_a, a.dim)
    if not lie_derivation_space(a).contains(endomap.flatten()):
        raise InputError('input-not-lie-derivation', "L_A 不是 A 上的 Lie 導子")
    # 相容條件：L_A 的像與 X 交換
    for i in range(a.dim):
        image = endomap.apply(a.basis_vector(i))
        for j in range(x.dim):
            if not is_zero_vector(x.commutator(image, x.basis_vector(j))):
                raise InputError('incompatible-lift', "[L_A(a), x] ≠ 0", base_index=i, module_index=j)

    size = ext.total.dim
    # 區塊矩陣 [[L_A, 0], [0, 0]]
    rows = [endomap.matrix.row(i) + zero_vector(x.dim) for i in range(a.dim)]
    rows += [zero_vector(size) for _ in range(x.dim)]
    lifted = LinearEndomap(Matrix.from_rows(rows, size))
    if not lie_derivation_space(ext.total).contains(lifted.flatten()):
        raise ConsistencyError('lift', "提升後的映射不是 A⋉X 上的 Lie 導子")
    return lifted
