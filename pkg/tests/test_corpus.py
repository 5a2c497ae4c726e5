"""
測試內建語料庫與構造族

測試內容：
1. 內建實例的名稱與預期事實
2. 矩陣單位子代數的錯誤處理
3. 族描述的解析
4. 各構造族的產生結果與決定性
5. evaluate_fact
"""
import pytest

from liederiv.algebra import validate_algebra, validate_bimodule
from liederiv.config_loader import Settings
from liederiv.corpus import (
    Expectation,
    builtin_corpus,
    builtin_instance,
    derived,
    generate_family,
    matrix_algebra,
    matrix_subalgebra,
    parse_family,
    upper_triangular,
)
from liederiv.errors import InputError
from liederiv.suites import evaluate_fact

BUILTIN_NAMES = [
    'm4_subalgebra', 't2', 'tri_m2', 'dual_numbers', 'q3', 'm2', 'tri_q_q2_diag', 't3', 'q',
    'm2_regular_extension',
]


def test_builtin_names():
    """這個測試驗證內建語料庫的實例名稱與固定順序"""
    assert [i.name for i in builtin_corpus()] == BUILTIN_NAMES


def test_builtin_corpus_returns_copy():
    corpus = builtin_corpus()
    corpus.clear()
    assert len(builtin_corpus()) == len(BUILTIN_NAMES)


def test_builtin_instances_are_valid():
    """每個內建實例的代數與雙模都通過公理檢查"""
    for instance in builtin_corpus():
        assert validate_algebra(instance.algebra).ok, instance.name
        if instance.module is not None:
            assert validate_bimodule(instance.algebra, instance.module).ok, instance.name


def test_builtin_provenance():
    """derived 事實必須附上驗證方法"""
    for instance in builtin_corpus():
        for key, expectation in instance.expected.items():
            assert expectation.provenance in ('paper', 'trivial', 'derived')
            if expectation.provenance == 'derived':
                assert expectation.oracle, (instance.name, key)


def test_expectation_validation():
    with pytest.raises(InputError) as exc_info:
        Expectation(1, 'guess')
    assert exc_info.value.code == 'schema-error'

    with pytest.raises(InputError) as exc_info:
        derived(1, '')
    assert exc_info.value.code == 'schema-error'


def test_unknown_instance():
    with pytest.raises(InputError) as exc_info:
        builtin_instance('m5')
    assert exc_info.value.code == 'unknown-instance'
    assert exc_info.value.details['known'] == BUILTIN_NAMES


@pytest.mark.parametrize('name', ['t2', 'dual_numbers', 'q3', 'm2', 'q', 'm4_subalgebra', 'tri_q_q2_diag'])
def test_builtin_expected_facts(name):
    """
    這個測試驗證小型內建實例上的每一個預期事實
    """
    instance = builtin_instance(name)
    settings = Settings()
    for key, expectation in instance.expected.items():
        assert evaluate_fact(instance, key, settings) == expectation.value, key


def test_m4_instance_shape(m4):
    assert m4.algebra.labels == ('a', 'b', 'u', 'c', 'd')
    assert m4.module.dim == 1
    assert m4.extension.total.dim == 6
    assert m4.star_context is not None
    assert m4.triangular_build is None


def test_primary_algebra(t2, m2):
    assert t2.primary.dim == 3
    assert builtin_instance('m2').primary.dim == m2.dim == 4


def test_matrix_subalgebra_dims():
    assert matrix_algebra(3).dim == 9
    assert upper_triangular(3).dim == 6
    assert validate_algebra(upper_triangular(3)).ok


@pytest.mark.parametrize('positions', [
    # 位置重複
    [(0, 0), (1, 1), (0, 0)],
    # 缺少對角位置
    [(0, 0), (0, 1)],
    # E12·E23 = E13 不在張成空間中
    [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)],
])
def test_matrix_subalgebra_invalid(positions):
    n = max(max(p) for p in positions) + 1
    with pytest.raises(InputError) as exc_info:
        matrix_subalgebra(n, positions)
    assert exc_info.value.code == 'invalid-algebra'


def test_parse_family():
    """字串與字典兩種寫法；整數參數轉成 int，其餘保留字串"""
    assert parse_family('triangular(1,2,1)') == ('triangular', (1, 2, 1))
    assert parse_family(' direct_sum( m2 , q ) ') == ('direct_sum', ('m2', 'q'))
    assert parse_family({'family': 'corner_of', 'args': ['m2']}) == ('corner_of', ('m2',))
    assert parse_family({'family': 'scalar_extension', 'args': ['t2']}) == ('scalar_extension', ('t2',))


@pytest.mark.parametrize('descriptor', ['tensor(1,2)', 'triangular', 42, {'family': 'nope'}])
def test_parse_family_invalid(descriptor):
    with pytest.raises(InputError) as exc_info:
        parse_family(descriptor)
    assert exc_info.value.code == 'unknown-family'


@pytest.mark.parametrize('descriptor', ['triangular(0,1,1)', 'triangular(1,1)', 'triangular(a,1,1)',
                                        'direct_sum(m2)', 'corner_of(1)'])
def test_generate_family_bad_arguments(descriptor):
    with pytest.raises(InputError) as exc_info:
        generate_family(descriptor)
    assert exc_info.value.code == 'unknown-family'


def test_generate_triangular():
    """
    這個測試驗證 triangular(1,2,1)：A = ℚ、X = ℚ²、B = ℚ
    """
    instances = generate_family('triangular(1,2,1)', seed=3)
    assert len(instances) == 1
    instance = instances[0]
    assert instance.name == 'triangular(1,2,1)'
    assert instance.algebra.dim == 2
    assert instance.module.dim == 2
    assert instance.extension.total.dim == 4
    assert instance.star_context is not None
    assert instance.triangular_build is not None
    settings = Settings()
    for key, expectation in instance.expected.items():
        assert evaluate_fact(instance, key, settings) == expectation.value, key


def test_generate_family_is_deterministic():
    """相同的 (descriptor, seed) 產生相同的雙模"""
    first = generate_family('triangular(2,3,2)', seed=5)[0]
    second = generate_family('triangular(2,3,2)', seed=5)[0]
    assert first.module.left == second.module.left
    assert first.module.right == second.module.right

    a = generate_family('scalar_extension(t2)', seed=1)[0]
    b = generate_family('scalar_extension(t2)', seed=1)[0]
    assert a.algebra.mul == b.algebra.mul
    assert a.description == b.description


def test_generate_direct_sum():
    instance = generate_family('direct_sum(m2,q)')[0]
    assert instance.name == 'direct_sum(m2,q)'
    assert instance.algebra.dim == 5
    assert instance.expected['base.center.dim'].value == 2
    assert evaluate_fact(instance, 'base.center.dim', Settings()) == 2

    with pytest.raises(InputError) as exc_info:
        generate_family('direct_sum(m2,nosuch)')
    assert exc_info.value.code == 'unknown-instance'


def test_generate_corner_of():
    """corner_of 產生 p 與 q 兩個角代數"""
    instances = generate_family('corner_of(m2)')
    assert [i.name for i in instances] == ['corner_of(m2)/p', 'corner_of(m2)/q']
    # M₂ 的非平凡冪等元都是秩 1
    assert [i.algebra.dim for i in instances] == [1, 1]
    for instance in instances:
        assert validate_algebra(instance.algebra).ok

    with pytest.raises(InputError) as exc_info:
        generate_family('corner_of(q)')
    assert exc_info.value.code == 'trivial-idempotent'


def test_generate_trivial_extension():
    instance = generate_family('trivial_extension_of(dual_numbers)')[0]
    assert instance.module.dim == 2
    assert instance.extension.total.dim == 4
    assert validate_bimodule(instance.algebra, instance.module).ok


def test_generate_scalar_extension():
    """
    t2 ⊗ ℚ(√d)：維度加倍，冪等元與三角分解一起搬過去
    """
    instance = generate_family({'family': 'scalar_extension', 'args': ['t2']}, seed=0)[0]
    assert instance.name == 'scalar_extension(t2)'
    assert instance.algebra.dim == 4
    assert instance.module.dim == 2
    assert len(instance.idempotent) == 4
    assert instance.triangular is not None
    assert validate_algebra(instance.algebra).ok
    assert validate_bimodule(instance.algebra, instance.module).ok
    assert instance.star_context is not None
    assert 'sqrt' in instance.description


def test_evaluate_fact(t2):
    settings = Settings()
    assert evaluate_fact(t2, 'total.dim', settings) == 3
    assert evaluate_fact(t2, 'loyal', settings) is True
    with pytest.raises(InputError) as exc_info:
        evaluate_fact(t2, 'total.rank', settings)
    assert exc_info.value.code == 'schema-error'
