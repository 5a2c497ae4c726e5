"""
測試適當性判定

測試內容：
1. is_proper 的見證（D + ℓ）與前置條件
2. Lie 導子性質與子空間維度
3. pxq = x 條件下的刻畫與封閉性恆等式
4. 充分條件（一般與三角）
5. 忠誠性、τ、中心理想、角乘積、Lie 導子的提升
6. 報告中的條件標籤
7. pAq 的忠誠性與角代數中心的投影等式
8. 不在 Der + C 中的 Lie 導子（以 mocker 縮小 C）
"""
import pytest

from liederiv.corpus import builtin_instance, dual_numbers, matrix_subalgebra, scalar_algebra
from liederiv.derivations import ad_map, lie_derivation_space, space_maps
from liederiv.errors import InputError
from liederiv.exact import Matrix, Subspace
from liederiv.properness import (
    CENTER_MATCH,
    GUARANTEED,
    INCONCLUSIVE,
    NOT_CONCLUDED,
    NOT_PROPER,
    PROPER,
    W_CERTIFIED,
    SufficiencyReport,
    center_projection_equalities,
    central_ideal_free,
    central_killing_commutators,
    characterization_report,
    characterize_properness,
    corner_products_vanish,
    faithful_left,
    faithful_right,
    has_lie_derivation_property,
    is_proper,
    lift_base_lie_derivation,
    loyalty,
    proof_identity_violations,
    sufficiency_check,
    tau_isomorphism,
    triangular_sufficiency_check,
)


def test_inner_derivation_is_proper_with_zero_ell(m2):
    """導子欄放在前面：輸入本身是導子時 ℓ 為 0"""
    ad = ad_map(m2, m2.basis_vector(1))
    cert = is_proper(m2, ad)
    assert cert.verdict == PROPER
    assert cert.witness_ell.matrix.is_zero()
    assert cert.witness_d.matrix == ad.matrix


def test_central_map_is_proper_with_zero_derivation(t2):
    """
    ℓ(e_A) = 1、其餘為 0：取值於中心且在交換子 x 上為零
    """
    total = t2.extension.total
    ell = Matrix.from_rows([[1, 0, 0], [1, 0, 0], [0, 0, 0]])
    cert = is_proper(total, ell)
    assert cert.proper
    assert cert.witness_d.matrix.is_zero()
    assert cert.witness_ell.matrix == ell


def test_every_lie_derivation_is_proper_with_valid_witness(m2, t2):
    for a in (m2, t2.extension.total):
        for mapping in space_maps(lie_derivation_space(a), a.dim):
            cert = is_proper(a, mapping)
            assert cert.proper
            assert (cert.witness_d + cert.witness_ell).matrix == mapping.matrix


def test_is_proper_is_deterministic(m2):
    mapping = space_maps(lie_derivation_space(m2), m2.dim)[0]
    assert is_proper(m2, mapping) == is_proper(m2, mapping)


def test_is_proper_preconditions(t2, m2):
    with pytest.raises(InputError) as exc_info:
        is_proper(t2.extension.total, Matrix.identity(3))
    assert exc_info.value.code == 'input-not-lie-derivation'

    with pytest.raises(InputError) as exc_info:
        is_proper(m2, Matrix.identity(3))
    assert exc_info.value.code == 'dimension-mismatch'


def test_lie_derivation_property_dims(t2, m2):
    """這個測試驗證 LieDer = Der + C 且各子空間維度正確"""
    result = has_lie_derivation_property(t2.extension.total)
    assert result.verdict
    assert result.dims == {
        'lie_der': 4, 'der': 2, 'central_killing_commutators': 2, 'sum': 4, 'intersection': 0,
    }
    result = has_lie_derivation_property(m2)
    assert result.verdict
    assert result.dims['sum'] == result.dims['lie_der'] == 4


def test_commutative_algebras_have_the_property():
    for a in (dual_numbers(), scalar_algebra()):
        assert has_lie_derivation_property(a).verdict


def test_central_killing_commutator_dimension(m2, t2):
    """dim C = (dim A - dim [A,A]) · dim Z(A)"""
    assert central_killing_commutators(m2).dim == 1
    assert central_killing_commutators(t2.extension.total).dim == 2
    assert central_killing_commutators(dual_numbers()).dim == 4


def test_characterization_agrees_with_direct_properness(m4):
    """
    這個測試驗證刻畫條件與直接的 Der + C 判定一致，並且封閉性恆等式成立
    """
    ctx = m4.star_context
    for mapping in space_maps(lie_derivation_space(ctx.total), ctx.total.dim):
        witness = characterize_properness(ctx, mapping)
        assert witness is not None
        assert is_proper(ctx.total, mapping).proper
        assert proof_identity_violations(ctx, witness.ell_a) == []


def test_characterization_rejects_non_lie_derivation(m4):
    with pytest.raises(InputError) as exc_info:
        characterize_properness(m4.star_context, Matrix.identity(6))
    assert exc_info.value.code == 'input-not-lie-derivation'


def test_sufficiency_on_m4(m4):
    report = sufficiency_check(m4.star_context)
    assert report.condition_i
    assert report.conclusion == GUARANTEED
    assert report.guaranteed
    assert report.condition_ii_p in (W_CERTIFIED, CENTER_MATCH)
    assert report.condition_ii_q in (W_CERTIFIED, CENTER_MATCH)
    assert report.details['center_dim'] == 3
    assert report.details['corner_p']['dim'] == 1
    assert report.details['corner_q']['dim'] == 3


def test_triangular_sufficiency_on_t2(t2):
    report = triangular_sufficiency_check(t2.triangular_build)
    assert report.guaranteed
    assert report.condition_ii_p == W_CERTIFIED
    assert report.condition_ii_q == W_CERTIFIED


def test_loyalty(m4, t2):
    """M₄ 實例右側不忠誠：x·E11 = 0 但 q·E11·q = E11"""
    result = loyalty(m4.star_context)
    assert result.left
    assert not result.right
    assert not result.loyal
    assert loyalty(t2.star_context).loyal


def test_tau_requires_loyalty(m4):
    with pytest.raises(InputError) as exc_info:
        tau_isomorphism(m4.star_context)
    assert exc_info.value.code == 'not-loyal'


def test_tau_on_t2(t2):
    tau = tau_isomorphism(t2.star_context)
    assert tau is not None
    assert tau.bijective
    assert tau.multiplicative
    assert tau.apply((1, 0)) == (0, 1)
    assert tau.apply((0, 1)) is None


def test_central_ideal_free(m2):
    assert central_ideal_free(m2)
    assert not central_ideal_free(dual_numbers())
    assert not central_ideal_free(scalar_algebra())


def test_corner_products_vanish(m2, t2, m4):
    assert corner_products_vanish(m2, [1, 0, 0, 0]) == (False, False)
    assert corner_products_vanish(t2.algebra, t2.idempotent) == (True, True)
    assert corner_products_vanish(m4.algebra, m4.idempotent) == (True, True)
    with pytest.raises(InputError) as exc_info:
        corner_products_vanish(m2, [0, 1, 0, 0])
    assert exc_info.value.code == 'not-idempotent'


def test_lift_base_lie_derivation(t2):
    """L_A 取值於中心時可以提升；[L_A(a), x] ≠ 0 時拒絕"""
    ext = t2.extension
    lifted = lift_base_lie_derivation(ext, Matrix.from_rows([[1, 0], [1, 0]]))
    assert lifted.matrix == Matrix.from_rows([[1, 0, 0], [1, 0, 0], [0, 0, 0]])
    assert lie_derivation_space(ext.total).contains(lifted.flatten())

    with pytest.raises(InputError) as exc_info:
        lift_base_lie_derivation(ext, Matrix.from_rows([[1, 0], [0, 0]]))
    assert exc_info.value.code == 'incompatible-lift'


def test_lift_rejects_non_lie_derivation(m4):
    with pytest.raises(InputError) as exc_info:
        lift_base_lie_derivation(m4.extension, Matrix.identity(5))
    assert exc_info.value.code == 'input-not-lie-derivation'


def test_is_proper_reports_not_proper_outside_der_plus_c(mocker, t2):
    """
    C 被換成零空間時，取值於中心的 Lie 導子不在 Der + C 中

    ℓ(e_A) = 1 不是導子（e_A 是冪等元，D(e_A) 必須落在 e_A·A·(1 - e_A) + (1 - e_A)·A·e_A），
    所以判定走到 not-proper 分支，沒有見證。
    """
    total = t2.extension.total
    mocker.patch('liederiv.properness.central_killing_commutators',
                 return_value=Subspace.zero(total.dim * total.dim))
    cert = is_proper(total, Matrix.from_rows([[1, 0, 0], [1, 0, 0], [0, 0, 0]]))
    assert cert.verdict == NOT_PROPER
    assert not cert.proper
    assert cert.witness_d is None
    assert cert.witness_ell is None
    assert cert.dims['central_killing_commutators'] == 0
    assert cert.dims['sum'] == cert.dims['der'] == 2


def test_characterization_report_labels(m4):
    ctx = m4.star_context
    mapping = space_maps(lie_derivation_space(ctx.total), ctx.total.dim)[0]
    report = characterization_report(ctx, mapping)
    assert report.proper
    assert report.witness is not None
    assert report.conditions() == {'2.2(i)': True, '2.2(ii)': True}


def test_sufficiency_report_labels(m4, t2):
    """一般檢查使用 2.4 標籤，三角檢查使用 3.1 標籤"""
    report = sufficiency_check(m4.star_context)
    assert list(report.conditions()) == ['2.4(I)', '2.4(II)(i)', '2.4(II)(ii)']
    assert report.conditions()['2.4(I)'] is True
    assert report.satisfied() == ['2.4(I)', '2.4(II)(i)', '2.4(II)(ii)']
    assert report.violated() == []

    report = triangular_sufficiency_check(t2.triangular_build)
    assert report.conditions() == {'3.1(I)': True, '3.1(II)(i)': W_CERTIFIED, '3.1(II)(ii)': W_CERTIFIED}


def test_sufficiency_report_violated_labels():
    report = SufficiencyReport(True, W_CERTIFIED, INCONCLUSIVE, NOT_CONCLUDED)
    assert report.satisfied() == ['2.4(I)', '2.4(II)(i)']
    assert report.violated() == ['2.4(II)(ii)']
    report = SufficiencyReport(False, INCONCLUSIVE, CENTER_MATCH, NOT_CONCLUDED, triangular=True)
    assert report.violated() == ['3.1(I)', '3.1(II)(i)']


def test_faithfulness_on_corpus(m4):
    """
    M₄ 實例與 Tri(M₂, M₂, M₂) 的基底代數 pAq = 0，兩側都不忠誠
    """
    assert not faithful_left(m4.algebra, m4.idempotent)
    assert not faithful_right(m4.algebra, m4.idempotent)
    tri_m2 = builtin_instance('tri_m2')
    assert not faithful_left(tri_m2.algebra, tri_m2.idempotent)
    assert not faithful_right(tri_m2.algebra, tri_m2.idempotent)


def test_faithfulness_on_matrix_algebras(m2):
    assert faithful_left(m2, [1, 0, 0, 0])
    assert faithful_right(m2, [1, 0, 0, 0])
    # E00、E11、E22、E01、E02：pAq = span{E01, E02}
    a = matrix_subalgebra(3, [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)])
    assert faithful_left(a, a.basis_vector(0))
    assert faithful_right(a, a.basis_vector(0))


def test_center_projection_equalities(m2, m4):
    """回傳 (Z(qAq) = Z(A)q, Z(pAp) = Z(A)p)"""
    assert center_projection_equalities(m4.algebra, m4.idempotent) == (True, True)
    tri_m2 = builtin_instance('tri_m2')
    assert center_projection_equalities(tri_m2.algebra, tri_m2.idempotent) == (True, True)
    assert center_projection_equalities(m2, [1, 0, 0, 0]) == (True, True)
    # Z(A) = ℚ·1，但 qAq = span{E11, E22} 是交換的
    a = matrix_subalgebra(3, [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)])
    assert center_projection_equalities(a, a.basis_vector(0)) == (False, True)


def test_peirce_predicates_reject_non_idempotent(m2):
    for predicate in (faithful_left, faithful_right, center_projection_equalities):
        with pytest.raises(InputError) as exc_info:
            predicate(m2, [0, 1, 0, 0])
        assert exc_info.value.code == 'not-idempotent'
