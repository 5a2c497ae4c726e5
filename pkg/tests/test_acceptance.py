"""
端對端驗收測試

測試內容：
1. M₄ 的 5 維子代數實例（X = ℚ）從零建立到結論
2. ℓ_A 刻畫與直接適當性判定的一致性（語料庫與所有小型三角形狀）
3. 區塊條件切出的空間等於直接計算的空間
4. 三角情形的 T 區塊為零
5. 維度表
6. 中心公式與直接計算一致，且中心在 X 上的投影為零
7. 隨機 (D, ℓ) 的證書代入驗證
8. 封閉性恆等式
9. 忠誠情形的 τ
10. 三角代數的簡化充分條件與一般檢查一致
11. 直和的 Lie 導子性質由兩個直和項決定

所有比較都是精確的有理數運算，沒有容許誤差。
"""
import random

import pytest

from liederiv.algebra import center, w_subalgebra
from liederiv.corpus import (
    builtin_corpus,
    dual_numbers,
    diagonal_algebra,
    generate_family,
    m4_module,
    m4_subalgebra,
)
from liederiv.derivations import (
    LinearEndomap,
    decompose_map,
    derivation_space,
    lemma_derivation_space,
    lemma_lie_space,
    lie_derivation_space,
    space_maps,
)
from liederiv.exact import is_zero_vector
from liederiv.extension import build_trivial_extension, center_via_formula, check_star
from liederiv.properness import (
    GUARANTEED,
    central_killing_commutators,
    characterize_properness,
    has_lie_derivation_property,
    is_proper,
    loyalty,
    proof_identity_violations,
    sufficiency_check,
    tau_isomorphism,
    triangular_sufficiency_check,
)

# nA + mX + nB <= 6 且 X 非零的所有三角形狀
SHAPES = [
    (n_a, m_x, n_b)
    for n_a in range(1, 6)
    for n_b in range(1, 6)
    for m_x in range(1, 5)
    if n_a + m_x + n_b <= 6
]


def _star_instances():
    return [i for i in builtin_corpus() if i.star_context is not None]


def _triangular_shape(shape):
    return generate_family("triangular({},{},{})".format(*shape), seed=0)[0]


def test_m4_subalgebra_end_to_end():
    """
    這個測試從結構常數建立 M₄ 子代數與 X = ℚ，確認 (★)、角代數、W 閉包、充分條件與 Lie 導子性質
    """
    a = m4_subalgebra()
    ext = build_trivial_extension(a, m4_module())
    check = check_star(ext, a.basis_vector(a.labels.index('c')))
    assert check.holds

    ctx = check.context
    assert ctx.p_corner.algebra.dim == 1
    assert ctx.q_corner.algebra.dim == 3
    assert w_subalgebra(ctx.p_corner.algebra).certified
    assert w_subalgebra(ctx.q_corner.algebra).certified
    assert sufficiency_check(ctx).conclusion == GUARANTEED
    assert has_lie_derivation_property(ext.total).verdict


@pytest.mark.parametrize('name', [i.name for i in _star_instances()])
def test_characterization_equivalence_on_corpus(name):
    ctx = next(i for i in builtin_corpus() if i.name == name).star_context
    for mapping in space_maps(lie_derivation_space(ctx.total), ctx.total.dim):
        assert (characterize_properness(ctx, mapping) is not None) == is_proper(ctx.total, mapping).proper


@pytest.mark.parametrize('shape', SHAPES)
def test_characterization_equivalence_on_triangular_shapes(shape):
    """每個小型三角形狀的每個 Lie 導子基底：刻畫成立 ⟺ 適當"""
    ctx = _triangular_shape(shape).star_context
    assert ctx is not None
    for mapping in space_maps(lie_derivation_space(ctx.total), ctx.total.dim):
        assert (characterize_properness(ctx, mapping) is not None) == is_proper(ctx.total, mapping).proper


@pytest.mark.parametrize('name', [i.name for i in builtin_corpus() if i.module is not None])
def test_block_spaces_match(name):
    ext = next(i for i in builtin_corpus() if i.name == name).extension
    assert lemma_lie_space(ext) == lie_derivation_space(ext.total)
    assert lemma_derivation_space(ext) == derivation_space(ext.total)


def test_triangular_t_block_vanishes():
    """三角代數的每個 Lie 導子基底的 T 區塊都是零"""
    builds = [i.triangular_build for i in builtin_corpus() if i.triangular is not None]
    builds += [_triangular_shape(shape).triangular_build for shape in SHAPES]
    for build in builds:
        ext = build.extension
        for mapping in space_maps(lie_derivation_space(ext.total), ext.total.dim):
            assert decompose_map(ext, mapping).t.is_zero()


def test_dimension_table(t2, m2):
    total = t2.extension.total
    assert derivation_space(total).dim == 2
    assert lie_derivation_space(total).dim == 4
    assert central_killing_commutators(total).dim == 2
    assert has_lie_derivation_property(total).verdict

    assert derivation_space(m2).dim == 3
    assert center(m2).dim == 1
    assert has_lie_derivation_property(m2).verdict

    assert lie_derivation_space(diagonal_algebra(3)).dim == 9


def test_center_formula_on_corpus():
    for instance in _star_instances():
        ctx = instance.star_context
        formula = center_via_formula(ctx)
        direct = center(ctx.total)
        assert formula == direct, instance.name
        assert all(is_zero_vector(ctx.extension.pi_x(v)) for v in direct.vectors()), instance.name


def test_certificate_round_trip():
    """
    100 組隨機 (D, ℓ)，D ∈ Der、ℓ ∈ C：is_proper(D + ℓ) 為適當，見證代入後成立
    """
    algebras = [i.primary for i in builtin_corpus() if i.primary.dim <= 8] + [dual_numbers()]
    rng = random.Random(0)
    for _ in range(100):
        a = rng.choice(algebras)
        der, cs = derivation_space(a), central_killing_commutators(a)
        d = der.combine([rng.randint(-3, 3) for _ in range(der.dim)])
        ell = cs.combine([rng.randint(-3, 3) for _ in range(cs.dim)])
        flat = tuple(x + y for x, y in zip(d, ell))

        cert = is_proper(a, LinearEndomap.from_flat(flat, a.dim))

        assert cert.proper
        witness_d, witness_ell = cert.witness_d.flatten(), cert.witness_ell.flatten()
        assert der.contains(witness_d)
        assert cs.contains(witness_ell)
        assert tuple(x + y for x, y in zip(witness_d, witness_ell)) == flat


def test_proof_identity_on_witnesses():
    for instance in _star_instances():
        ctx = instance.star_context
        for mapping in space_maps(lie_derivation_space(ctx.total), ctx.total.dim):
            witness = characterize_properness(ctx, mapping)
            if witness is not None:
                assert proof_identity_violations(ctx, witness.ell_a) == [], instance.name


def test_tau_on_loyal_contexts():
    """每個忠誠的 context 都有雙射且保持乘法的 τ"""
    loyal = [i for i in _star_instances() if loyalty(i.star_context).loyal]
    assert {i.name for i in loyal} >= {'t2', 'tri_m2', 'tri_q_q2_diag', 't3'}
    for instance in loyal:
        tau = tau_isomorphism(instance.star_context)
        assert tau is not None, instance.name
        assert tau.bijective, instance.name
        assert tau.multiplicative, instance.name


def _triangular_cases():
    cases = [(i.name, i) for i in builtin_corpus() if i.triangular is not None]
    cases += [("triangular({},{},{})".format(*shape), _triangular_shape(shape)) for shape in SHAPES]
    return cases


@pytest.mark.parametrize('name,instance', _triangular_cases(), ids=[name for name, _ in _triangular_cases()])
def test_triangular_check_agrees_with_general_check(name, instance):
    """三角代數的簡化檢查與一般 (★) 檢查給出相同的條件狀態與結論，只有標籤不同"""
    build = instance.triangular_build
    reduced = triangular_sufficiency_check(build)
    general = sufficiency_check(build.context)
    assert reduced.condition_i == general.condition_i
    assert reduced.condition_ii_p == general.condition_ii_p
    assert reduced.condition_ii_q == general.condition_ii_q
    assert reduced.conclusion == general.conclusion
    assert list(reduced.conditions().values()) == list(general.conditions().values())
    assert reduced.satisfied() == [label.replace('2.4', '3.1') for label in general.satisfied()]


@pytest.mark.parametrize('descriptor', [
    'direct_sum(m2,q)',
    'direct_sum(m2,dual_numbers)',
    'direct_sum(q3,t2)',
    'direct_sum(m2,m2)',
])
def test_direct_sum_has_the_property_iff_both_summands_do(descriptor):
    instance = generate_family(descriptor)[0]
    a, b = instance.summands
    expected = has_lie_derivation_property(a).verdict and has_lie_derivation_property(b).verdict
    assert has_lie_derivation_property(instance.algebra).verdict == expected
