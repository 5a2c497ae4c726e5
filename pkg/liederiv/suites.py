"""
內建不變量套件

匯入這個模組時，所有內建的不變量會透過 @invariant 註冊到全域註冊表。
每個檢查函數接受 (instance, settings)，通過時返回診斷資訊，不成立時拋出 InvariantFailure。

套件：
- validation: 代數、雙模公理與 pxq = x 條件
- algebra: 中心、子空間格、角代數、W 子代數、中心理想
- derivations: 導子與 Lie 導子空間之間的包含關係與維度公式
- extension: 平凡擴張的化簡恆等式、中心公式、三角代數的 T = 0
- lemma: 區塊條件切出的子空間與直接計算的空間相等
- properness: Lie 導子性質、證書往返、提升
- characterization: ℓ_A 刻畫與適當性判定一致、封閉性恆等式
- sufficiency: 充分條件的正確性、τ 同構
- expectations: 實例附帶的預期事實

Library 說明：
- random: random.Random(seed) 建立獨立的亂數產生器，以字串為種子時結果可重現，
  不同執行緒各自建立，互不干擾
- fractions: 隨機元素的係數用 Fraction，代入檢查仍然是精確的
"""
import logging
# random 只用在 certificate-round-trip 產生隨機的 D + ℓ
import random
from fractions import Fraction
from typing import Any, Callable, Dict, List

from .algebra import (
    center,
    commutator_subspace,
    corner,
    find_idempotents,
    subalgebra_closure,
    validate_algebra,
    validate_bimodule,
    w_subalgebra,
)
from .derivations import (
    LinearEndomap,
    check_derivation_conditions,
    check_lie_conditions,
    decompose_map,
    derivation_space,
    inner_derivations,
    lemma_derivation_space,
    lemma_lie_space,
    lie_derivation_space,
    space_maps,
)
from .errors import InputError, InvariantFailure
from .exact import Subspace, Vector, add_vectors, is_zero_vector
from .extension import center_via_formula, check_simplifications, check_star, peirce_vanishing
# invariant 是註冊用的裝飾器，ensure 在條件不成立時拋出 InvariantFailure
from .invariants import ensure, invariant
from .properness import (
    central_ideal_free,
    central_killing_commutators,
    characterize_properness,
    corner_products_vanish,
    has_lie_derivation_property,
    is_proper,
    largest_central_ideal,
    lift_base_lie_derivation,
    loyalty,
    proof_identity_violations,
    sufficiency_check,
    tau_isomorphism,
    triangular_sufficiency_check,
)

logger = logging.getLogger(__name__)

# 每個實例最多檢查的角代數數量
CORNER_SAMPLE = 4


def _random_element(space: Subspace, rng: random.Random) -> Vector:
    """子空間中的隨機元素，係數是分子 -3..3、分母 1..3 的分數"""
    coefficients = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(space.dim)]
    return space.combine(coefficients)


# ---- validation ----

@invariant('validation', 'algebra-axioms')
def algebra_axioms(instance, settings):
    """結合律與單位元公理"""
    # 只檢查基底代數；A⋉X 的公理由雙模公理保證
    report = validate_algebra(instance.algebra)
    ensure(report.ok, "代數不滿足公理", identities=report.identities())
    return {'dim': instance.algebra.dim}


@invariant('validation', 'bimodule-axioms', requires=('module',))
def bimodule_axioms(instance, settings):
    """X 是 A-雙模"""
    report = validate_bimodule(instance.algebra, instance.module)
    ensure(report.ok, "雙模不滿足公理", identities=report.identities())
    return {'dim': instance.module.dim}


@invariant('validation', 'star-condition', requires=('star',))
def star_condition(instance, settings):
    """實例的冪等元滿足 pxq = x"""
    # violating_index 是第一個 pxq ≠ x 的模基底索引
    check = check_star(instance.extension, instance.idempotent)
    ensure(check.holds, "pxq = x 不成立", violating_index=check.violating_index)
    return {}


@invariant('validation', 'triangular-parts', requires=('triangular',))
def triangular_parts(instance, settings):
    """三角代數的 A、B 與 (A, B)-雙模 X 各自合法，組合後的維度與實例一致"""
    # instance.triangular 是 (A, X, B) 三元組
    a, x, b = instance.triangular
    for side, algebra in (('A', a), ('B', b)):
        report = validate_algebra(algebra)
        ensure(report.ok, f"{side} 不滿足公理", identities=report.identities())
    # 左作用屬於 A、右作用屬於 B
    report = validate_bimodule(a, x, b)
    ensure(report.ok, "X 不是 (A, B)-雙模", identities=report.identities())
    # triangular_build 是 cached_property，第一次存取時才組合
    build = instance.triangular_build
    ensure(build.extension.total.dim == instance.primary.dim, "三角代數與實例的維度不同",
           triangular=build.extension.total.dim, instance=instance.primary.dim)
    return {'dims': [a.dim, x.dim, b.dim]}


# ---- algebra ----

@invariant('algebra', 'center-commutes')
def center_commutes(instance, settings):
    """Z(A) 的基底與每個 e_i 交換"""
    # primary 是實例的主要代數：有模時是 A⋉X，否則是 A
    a = instance.primary
    z = center(a)
    # 中心是直接解出來的，這裡用乘法重新驗證
    for v in z.vectors():
        for i in range(a.dim):
            ensure(is_zero_vector(a.commutator(v, a.basis_vector(i))), "中心元素與基底不交換", basis=i)
    return {'center_dim': z.dim}


@invariant('algebra', 'lattice-dimension-identity')
def lattice_dimension_identity(instance, settings):
    """中心 U 與交換子 V 滿足 dim U + dim V = dim(U + V) + dim(U ∩ V)"""
    a = instance.primary
    u, v = center(a), commutator_subspace(a)
    # 子空間格的維度公式，同時檢查 sum 與 intersect 的實作
    total, meet = u.sum(v), u.intersect(v)
    ensure(u.dim + v.dim == total.dim + meet.dim, "dim U + dim V ≠ dim(U + V) + dim(U ∩ V)",
           u=u.dim, v=v.dim, sum=total.dim, intersection=meet.dim)
    ensure(u.is_subspace_of(total) and v.is_subspace_of(total), "U + V 不包含 U 或 V")
    ensure(meet.is_subspace_of(u) and meet.is_subspace_of(v), "U ∩ V 不包含在 U 與 V 中")
    return {'sum': total.dim, 'intersection': meet.dim}


@invariant('algebra', 'corner-algebras')
def corner_algebras(instance, settings):
    """非平凡冪等元 e 的角代數 eAe 滿足公理，單位元嵌入後是 e"""
    a = instance.algebra
    search = find_idempotents(a, settings.idempotent_budget)
    checked = 0
    for e in search.idempotents:
        # 0 與 1 的角代數分別是零代數與 A 本身，不必檢查
        if not e.nontrivial:
            continue
        piece = corner(a, e)
        report = validate_algebra(piece.algebra)
        ensure(report.ok, "角代數不滿足公理", identities=report.identities())
        ensure(piece.embed(piece.algebra.unit) == e.vector, "角代數的單位元不是 p")
        checked += 1
        # 冪等元可能很多，只抽查前幾個
        if checked >= CORNER_SAMPLE:
            break
    return {'idempotents': len(search.idempotents), 'corners_checked': checked}


@invariant('algebra', 'w-subalgebra-closed')
def w_subalgebra_closed(instance, settings):
    """W 子代數的閉包對乘法封閉並包含 [A, A]"""
    a = instance.algebra
    w = w_subalgebra(a, budget=settings.idempotent_budget)
    # 再做一次閉包不應該改變結果
    ensure(subalgebra_closure(a, w.subspace.vectors()) == w.subspace, "W 不是子代數")
    ensure(commutator_subspace(a).is_subspace_of(w.subspace), "W 不包含所有交換子")
    ensure(w.certified == (w.subspace.dim == a.dim), "certified 與維度不一致")
    return {'w_dim': w.subspace.dim, 'certified': w.certified}


@invariant('algebra', 'central-ideal')
def central_ideal(instance, settings):
    """最大中心理想在中心內，而且是雙邊理想"""
    a = instance.algebra
    ideal = largest_central_ideal(a)
    # 零理想也算通過
    ensure(ideal.is_subspace_of(center(a)), "中心理想不在中心裡")
    # 理想：左右乘任何基底向量都留在理想內
    for v in ideal.vectors():
        for i in range(a.dim):
            e = a.basis_vector(i)
            ensure(ideal.contains(a.product(e, v)) and ideal.contains(a.product(v, e)), "不是雙邊理想", basis=i)
    return {'dim': ideal.dim, 'central_ideal_free': central_ideal_free(a)}


@invariant('algebra', 'direct-sum-ldp', requires=('summands',))
def direct_sum_ldp(instance, settings):
    """A ⊕ B 有 Lie 導子性質 ⇔ A 與 B 都有"""
    a, b = instance.summands
    # 基底代數才是直和；primary 在有模時是擴張，所以這裡用 instance.algebra
    whole = has_lie_derivation_property(instance.algebra).verdict
    parts = (has_lie_derivation_property(a).verdict, has_lie_derivation_property(b).verdict)
    ensure(whole == all(parts), "直和的 Lie 導子性質與直和項不一致", direct_sum=whole, summands=list(parts))
    return {'ldp': whole, 'summands': list(parts)}


# ---- derivations ----

@invariant('derivations', 'lie-conventions-agree')
def lie_conventions_agree(instance, settings):
    """只用 i < j 的方程與使用全部有序對的方程得到相同的 LieDer"""
    a = instance.primary
    # Subspace 的 == 比較 RREF 基底，與基底的選取無關
    ensure(lie_derivation_space(a) == lie_derivation_space(a, full_range=True), "i < j 與全部有序對的結果不同")
    return {'lie_der': lie_derivation_space(a).dim}


@invariant('derivations', 'derivations-are-lie')
def derivations_are_lie(instance, settings):
    """Der(A) ⊆ LieDer(A)"""
    a = instance.primary
    der, lie = derivation_space(a), lie_derivation_space(a)
    # 兩個空間各自求解，包含關係是交叉驗證
    ensure(der.is_subspace_of(lie), "Der 不包含在 LieDer 中")
    return {'der': der.dim, 'lie_der': lie.dim}


@invariant('derivations', 'inner-derivations')
def inner_derivations_dimension(instance, settings):
    """dim Inn(A) = dim A - dim Z(A)"""
    a = instance.primary
    inner = inner_derivations(a)
    # ad: A → Inn(A) 的核是 Z(A)
    ensure(inner.dim == a.dim - center(a).dim, "dim Inn ≠ dim A - dim Z(A)", inner=inner.dim)
    ensure(inner.is_subspace_of(derivation_space(a)), "內導子不是導子")
    return {'inner': inner.dim}


@invariant('derivations', 'central-maps-dimension')
def central_maps_dimension(instance, settings):
    """dim C(A) = (dim A - dim [A, A]) · dim Z(A)，且 C(A) ⊆ LieDer(A)"""
    a = instance.primary
    cs = central_killing_commutators(a)
    # C(A) ≅ Hom(A / [A, A], Z(A))
    expected = (a.dim - commutator_subspace(a).dim) * center(a).dim
    ensure(cs.dim == expected, "dim C ≠ (dim A - dim [A,A]) · dim Z(A)", actual=cs.dim, expected=expected)
    ensure(cs.is_subspace_of(lie_derivation_space(a)), "C 不包含在 LieDer 中")
    return {'central_killing_commutators': cs.dim}


# ---- extension ----

@invariant('extension', 'square-zero-module', requires=('module',))
def square_zero_module(instance, settings):
    """平凡擴張中 X·X = 0"""
    ext = instance.extension
    # iota_x 把模元素嵌入 A⋉X 的座標
    for j in range(ext.m):
        u = ext.iota_x(instance.module.basis_vector(j))
        for k in range(ext.m):
            v = ext.iota_x(instance.module.basis_vector(k))
            ensure(is_zero_vector(ext.total.product(u, v)), "X·X ≠ 0", indices=[j, k])
    return {'total_dim': ext.total.dim}


@invariant('extension', 'simplifications', requires=('star',))
def simplifications(instance, settings):
    """(*) 條件下的化簡恆等式"""
    # qx = 0、xp = 0，A 的作用只經過 pAp 與 qAq
    report = check_simplifications(instance.star_context)
    ensure(report.ok, "化簡恆等式不成立", identities=report.identities())
    return {}


@invariant('extension', 'center-formula', requires=('star',))
def center_formula(instance, settings):
    """中心公式算出的 Z(A⋉X) 在 X 上的投影為零"""
    ctx = instance.star_context
    z = center_via_formula(ctx)
    ext = ctx.extension
    # pi_x 取出 X 的分量
    ensure(all(is_zero_vector(ext.pi_x(v)) for v in z.vectors()), "中心在 X 上的投影不是零")
    return {'center_dim': z.dim}


@invariant('extension', 'peirce-vanishing', requires=('triangular',))
def triangular_peirce_vanishing(instance, settings):
    """三角情形 pAq = qAp = 0"""
    build = instance.triangular_build
    dims = peirce_vanishing(build.context)
    # **dims 把字典展開成關鍵字參數，成為失敗時的診斷資訊
    ensure(dims == {'pAq': 0, 'qAp': 0}, "三角情形的 pAq 或 qAp 不是零", **dims)
    ensure(corner_products_vanish(build.context.base, build.context.p) == (True, True), "角乘積不是零")
    return dims


@invariant('extension', 't-collapse', requires=('triangular',))
def t_collapse(instance, settings):
    """三角代數上每個 Lie 導子的 T 區塊為零"""
    ext = instance.triangular_build.extension
    # 檢查 LieDer 的基底即可：T 對映射是線性的
    maps = space_maps(lie_derivation_space(ext.total), ext.total.dim)
    for index, mapping in enumerate(maps):
        ensure(decompose_map(ext, mapping).t.is_zero(), "Lie 導子的 T 區塊不是零", basis=index)
    return {'checked': len(maps)}


# ---- lemma ----

@invariant('lemma', 'lie-block-space', requires=('module',))
def lie_block_space(instance, settings):
    """區塊條件切出的空間等於直接求解的 LieDer(A⋉X)"""
    ext = instance.extension
    # carved 由區塊方程解出，direct 在 A⋉X 上整體求解
    carved, direct = lemma_lie_space(ext), lie_derivation_space(ext.total)
    ensure(carved == direct, "區塊條件切出的空間與 LieDer(A⋉X) 不同", carved=carved.dim, direct=direct.dim)
    return {'dim': direct.dim}


@invariant('lemma', 'derivation-block-space', requires=('module',))
def derivation_block_space(instance, settings):
    """區塊條件切出的空間等於直接求解的 Der(A⋉X)"""
    ext = instance.extension
    # 與 lie-block-space 相同的比較，換成導子
    carved, direct = lemma_derivation_space(ext), derivation_space(ext.total)
    ensure(carved == direct, "區塊條件切出的空間與 Der(A⋉X) 不同", carved=carved.dim, direct=direct.dim)
    return {'dim': direct.dim}


@invariant('lemma', 'block-conditions-on-basis', requires=('module',))
def block_conditions_on_basis(instance, settings):
    """LieDer 與 Der 的每個基底映射都通過對應的區塊條件"""
    ext = instance.extension
    size = ext.total.dim
    for index, mapping in enumerate(space_maps(lie_derivation_space(ext.total), size)):
        report = check_lie_conditions(ext, decompose_map(ext, mapping))
        ensure(report.ok, "Lie 導子沒有通過區塊條件", basis=index, failed=report.failed_conditions())
    # 導子要通過更嚴格的一組條件
    for index, mapping in enumerate(space_maps(derivation_space(ext.total), size)):
        report = check_derivation_conditions(ext, decompose_map(ext, mapping))
        ensure(report.ok, "導子沒有通過區塊條件", basis=index, failed=report.failed_conditions())
    return {}


# ---- properness ----

@invariant('properness', 'ldp-dimensions')
def ldp_dimensions(instance, settings):
    """Der + C 的維度公式與判定結果一致"""
    result = has_lie_derivation_property(instance.primary)
    dims = result.dims
    # dim(U + V) = dim U + dim V - dim(U ∩ V)
    ensure(dims['sum'] == dims['der'] + dims['central_killing_commutators'] - dims['intersection'],
           "dim(Der + C) 與維度公式不符", **dims)
    ensure(result.verdict == (dims['sum'] == dims['lie_der']), "判定與維度不一致", **dims)
    return dict(dims, verdict=result.verdict)


@invariant('properness', 'basis-verdicts')
def basis_verdicts(instance, settings):
    """逐一判定 LieDer 基底的適當性，結果與整體判定一致"""
    a = instance.primary
    verdict = has_lie_derivation_property(a).verdict
    # 每個基底映射獨立判定
    proper = [is_proper(a, m).proper for m in space_maps(lie_derivation_space(a), a.dim)]
    # 有 Lie 導子性質 ⇔ 每個基底映射都適當（Der + C 是子空間）
    ensure(all(proper) == verdict, "基底判定與 Lie 導子性質不一致", verdict=verdict, proper=proper)
    return {'basis': len(proper), 'not_proper': proper.count(False)}


@invariant('properness', 'certificate-round-trip')
def certificate_round_trip(instance, settings):
    """隨機的 D + ℓ 被判定為適當，見證可代回驗證"""
    a = instance.primary
    der, cs = derivation_space(a), central_killing_commutators(a)
    # 種子包含實例名稱：每個實例的樣本固定，且與執行緒的排程無關
    rng = random.Random(f"{settings.seed}:{instance.name}")
    # round_trip_samples 為 0 時不抽樣
    for sample in range(settings.round_trip_samples):
        flat = add_vectors(_random_element(der, rng), _random_element(cs, rng))
        cert = is_proper(a, LinearEndomap.from_flat(flat, a.dim))
        ensure(cert.proper, "D + ℓ 被判定為不適當", sample=sample)
        # 見證必須分別落在 Der 與 C 中，而且相加回到原映射
        d, ell = cert.witness_d.flatten(), cert.witness_ell.flatten()
        ensure(der.contains(d) and cs.contains(ell) and add_vectors(d, ell) == flat, "見證代入驗證失敗",
               sample=sample)
    return {'samples': settings.round_trip_samples}


@invariant('properness', 'lift-contract', requires=('module',))
def lift_contract(instance, settings):
    """提升後的映射若適當，原本的 L_A 也適當"""
    ext = instance.extension
    base = ext.base
    lifted = 0
    # 對 LieDer(A) 的每個基底映射嘗試提升
    for mapping in space_maps(lie_derivation_space(base), base.dim):
        try:
            lift = lift_base_lie_derivation(ext, mapping)
        except InputError as e:
            # 只有 incompatible-lift 代表這個 L_A 無法提升，其他錯誤照常往外拋
            if e.code != 'incompatible-lift':
                raise
            continue
        lifted += 1
        # 反方向不一定成立，所以只檢查這個方向
        if is_proper(ext.total, lift).proper:
            ensure(is_proper(base, mapping).proper, "提升後適當但 L_A 不適當")
    return {'lifted': lifted}


# ---- characterization ----

@invariant('characterization', 'characterization-equivalence', requires=('star',))
def characterization_equivalence(instance, settings):
    """ℓ_A 刻畫找到見證 ⇔ is_proper 判定為適當"""
    ctx = instance.star_context
    total = ctx.total
    agreed = 0
    for index, mapping in enumerate(space_maps(lie_derivation_space(total), total.dim)):
        # 兩種方法獨立計算：刻畫走 ℓ_A 的區塊條件，is_proper 直接解 Der + C
        witness = characterize_properness(ctx, mapping)
        proper = is_proper(total, mapping).proper
        ensure((witness is not None) == proper, "ℓ_A 刻畫與適當性判定不一致", basis=index, proper=proper)
        agreed += 1
    return {'checked': agreed}


@invariant('characterization', 'closure-identity', requires=('star',))
def closure_identity(instance, settings):
    """刻畫見證與 L_A 分解的 ℓ_A 都滿足封閉性恆等式"""
    ctx = instance.star_context
    total, base = ctx.total, ctx.base
    # 兩種 ℓ_A 來源各自計數
    witnesses = splits = 0
    for index, mapping in enumerate(space_maps(lie_derivation_space(total), total.dim)):
        witness = characterize_properness(ctx, mapping)
        if witness is not None:
            witnesses += 1
            violations = proof_identity_violations(ctx, witness.ell_a)
            ensure(not violations, "刻畫見證不滿足封閉性恆等式", basis=index, violations=violations[:5])
        # L_A 本身適當時，它分解出的 ℓ_A 也要滿足同一組恆等式
        cert = is_proper(base, decompose_map(ctx.extension, mapping).l_a)
        if cert.proper:
            splits += 1
            violations = proof_identity_violations(ctx, cert.witness_ell)
            ensure(not violations, "L_A = D_A + ℓ_A 的 ℓ_A 不滿足封閉性恆等式", basis=index,
                   violations=violations[:5])
    return {'witnesses': witnesses, 'base_splits': splits}


# ---- sufficiency ----

@invariant('sufficiency', 'sufficiency-sound', requires=('star',))
def sufficiency_sound(instance, settings):
    """充分條件成立時 A⋉X 確實有 Lie 導子性質"""
    report = sufficiency_check(instance.star_context, budget=settings.idempotent_budget)
    # 條件不成立或無法判定時沒有任何結論，不檢查
    if report.guaranteed:
        ensure(has_lie_derivation_property(instance.primary).verdict, "充分條件成立但 A⋉X 沒有 Lie 導子性質")
    return {'conclusion': report.conclusion, 'p': report.condition_ii_p, 'q': report.condition_ii_q}


@invariant('sufficiency', 'triangular-sufficiency-sound', requires=('triangular',))
def triangular_sufficiency_sound(instance, settings):
    """三角充分條件成立時三角代數確實有 Lie 導子性質"""
    build = instance.triangular_build
    report = triangular_sufficiency_check(build, budget=settings.idempotent_budget)
    # 和 sufficiency-sound 相同，只在有結論時檢查
    if report.guaranteed:
        ensure(has_lie_derivation_property(build.extension.total).verdict, "充分條件成立但三角代數沒有 Lie 導子性質")
    return {'conclusion': report.conclusion}


@invariant('sufficiency', 'triangular-agreement', requires=('triangular',))
def triangular_agreement(instance, settings):
    """三角代數的簡化檢查和一般的 (*) 檢查給出相同的狀態"""
    build = instance.triangular_build
    # reduced 直接在 A、B 上計算，general 走 A⋉X 與角代數
    reduced = triangular_sufficiency_check(build, budget=settings.idempotent_budget)
    general = sufficiency_check(build.context, budget=settings.idempotent_budget)
    pairs = {
        'condition_i': (reduced.condition_i, general.condition_i),
        'condition_ii_p': (reduced.condition_ii_p, general.condition_ii_p),
        'condition_ii_q': (reduced.condition_ii_q, general.condition_ii_q),
        'conclusion': (reduced.conclusion, general.conclusion),
    }
    # 字典推導式只留下兩邊不同的欄位
    mismatched = {k: list(v) for k, v in pairs.items() if v[0] != v[1]}
    ensure(not mismatched, "三角檢查與一般檢查不一致", mismatched=mismatched)
    return {'conclusion': reduced.conclusion}


@invariant('sufficiency', 'tau-isomorphism', requires=('star',))
def tau_isomorphism_check(instance, settings):
    """忠誠時 τ 是保持乘法的雙射，並且 papx = xτ(pap)"""
    ctx = instance.star_context
    # 不忠誠時 τ 沒有定義
    if not loyalty(ctx).loyal:
        return {'loyal': False}
    tau = tau_isomorphism(ctx)
    ensure(tau is not None, "忠誠的 context 沒有 τ")
    ensure(tau.bijective, "τ 不是雙射", domain=tau.domain.dim, codomain=tau.codomain.dim)
    ensure(tau.multiplicative, "τ 不保持乘法")
    x = ctx.module
    # 在定義域的基底上檢查 papx = xτ(pap)
    for u in tau.domain.vectors():
        image = tau.apply(u)
        for j in range(x.dim):
            xj = x.basis_vector(j)
            ensure(x.act_left(u, xj) == x.act_right(xj, image), "papx ≠ xτ(pap)", module_index=j)
    return {'loyal': True, 'dim': tau.domain.dim}


# ---- expectations ----

def _algebra_facts(prefix: str, pick: Callable) -> Dict[str, Callable]:
    """
    同一組代數事實，套用在 pick(instance) 取出的代數上

    prefix 是 'base' 或 'total'；每個值都是 (instance, settings) -> 事實 的 lambda。
    """
    return {
        f'{prefix}.dim': lambda i, s: pick(i).dim,
        f'{prefix}.center.dim': lambda i, s: center(pick(i)).dim,
        f'{prefix}.der.dim': lambda i, s: derivation_space(pick(i)).dim,
        f'{prefix}.lie_der.dim': lambda i, s: lie_derivation_space(pick(i)).dim,
        f'{prefix}.inner.dim': lambda i, s: inner_derivations(pick(i)).dim,
        f'{prefix}.commutator.dim': lambda i, s: commutator_subspace(pick(i)).dim,
        f'{prefix}.central_killing_commutators.dim': lambda i, s: central_killing_commutators(pick(i)).dim,
        f'{prefix}.ldp': lambda i, s: has_lie_derivation_property(pick(i)).verdict,
        f'{prefix}.central_ideal_free': lambda i, s: central_ideal_free(pick(i)),
        f'{prefix}.w.certified': lambda i, s: w_subalgebra(pick(i), budget=s.idempotent_budget).certified,
        f'{prefix}.idempotents.exhaustive':
            lambda i, s: find_idempotents(pick(i), s.idempotent_budget).search_exhaustive,
        f'{prefix}.idempotents.count': lambda i, s: len(find_idempotents(pick(i), s.idempotent_budget).idempotents),
    }


def _tau_bijective(instance, settings) -> bool:
    """τ 存在且是雙射"""
    tau = tau_isomorphism(instance.star_context)
    return tau is not None and tau.bijective


def _projection_x_zero(instance, settings) -> bool:
    """Z(A⋉X) 的每個基底向量在 X 上的分量都是零"""
    ext = instance.extension
    return all(is_zero_vector(ext.pi_x(v)) for v in center(ext.total).vectors())


# 事實名稱 → 計算函數；實例 JSON 的 expected 區段以這些名稱為鍵
FACTS: Dict[str, Callable[[Any, Any], Any]] = {
    **_algebra_facts('base', lambda i: i.algebra),
    **_algebra_facts('total', lambda i: i.extension.total),
    'total.center.projection_x_zero': _projection_x_zero,
    'star': lambda i, s: i.star_context is not None,
    'corner_p.dim': lambda i, s: i.star_context.p_corner.algebra.dim,
    'corner_q.dim': lambda i, s: i.star_context.q_corner.algebra.dim,
    'w_p.certified': lambda i, s: w_subalgebra(i.star_context.p_corner.algebra, budget=s.idempotent_budget).certified,
    'w_q.certified': lambda i, s: w_subalgebra(i.star_context.q_corner.algebra, budget=s.idempotent_budget).certified,
    'sufficiency.conclusion': lambda i, s: sufficiency_check(i.star_context, budget=s.idempotent_budget).conclusion,
    'loyal': lambda i, s: loyalty(i.star_context).loyal,
    'tau.bijective': _tau_bijective,
}


def evaluate_fact(instance, key: str, settings) -> Any:
    """
    計算實例上的一個具名事實

    Raises:
        InputError: 未知的事實名稱（代碼 schema-error）
    """
    # 拼錯的事實名稱要報錯，不能當作不符
    if key not in FACTS:
        raise InputError('schema-error', f"未知的事實: {key}", known=sorted(FACTS))
    return FACTS[key](instance, settings)


@invariant('expectations', 'expected-facts')
def expected_facts(instance, settings):
    """實例附帶的每個預期事實都與計算結果相符"""
    mismatches: List[Dict[str, Any]] = []
    provenance: Dict[str, int] = {}
    # 排序讓報告中的順序固定
    for key, expectation in sorted(instance.expected.items()):
        actual = evaluate_fact(instance, key, settings)
        # 統計各種來源（paper、trivial、derived）的事實數
        provenance[expectation.provenance] = provenance.get(expectation.provenance, 0) + 1
        if actual != expectation.value:
            mismatches.append({'fact': key, 'expected': expectation.value, 'actual': actual,
                               'provenance': expectation.provenance})
    # 收集全部不符的事實後才失敗，一次報告所有問題
    if mismatches:
        raise InvariantFailure("預期事實不符", mismatches=mismatches)
    return {'checked': len(instance.expected), 'provenance': provenance}
