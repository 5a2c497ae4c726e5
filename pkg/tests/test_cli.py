"""
測試命令列介面

測試內容：
1. 各動詞的輸出與離開代碼（0 真、1 假、2 輸入錯誤、3 預期不符）
2. 參數錯誤也輸出 JSON（usage-error）
3. --out、--expect、--config
4. 輸出的決定性
5. ConsistencyError 的處理

測試技巧：
- 輸入檔案由 serialization 的 *_to_dict 從內建語料庫產生，寫到 tmp_path
- 使用 capsys 擷取 stdout
- 使用 mocker 模擬交叉驗證失敗
"""
import json

import pytest
import yaml

from liederiv.cli import (
    EXIT_EXPECT,
    EXIT_FALSE,
    EXIT_INPUT,
    EXIT_TRUE,
    build_parser,
    compare_expectations,
    dispatch,
    lookup,
    main,
)
from liederiv.config_loader import Settings
from liederiv.corpus import dual_numbers
from liederiv.derivations import ad_map, lie_derivation_space, space_maps
from liederiv.errors import ConsistencyError
from liederiv.exact import Matrix
from liederiv.serialization import algebra_to_dict, bimodule_to_dict, map_to_dict, scalars

FORMAT = 'liederiv/1'


def _body(document):
    # 複合文件中的 A、X、B 不帶 format 與 kind
    return {k: v for k, v in document.items() if k not in ('format', 'kind')}


def _run(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def m2_file(write_json, m2):
    return write_json('m2.json', algebra_to_dict(m2))


@pytest.fixture
def m4_files(write_json, m4):
    """M₄ 實例的 algebra、module、p 三個檔案"""
    return (
        write_json('m4_a.json', algebra_to_dict(m4.algebra)),
        write_json('m4_x.json', bimodule_to_dict(m4.module)),
        write_json('m4_p.json', {'format': FORMAT, 'kind': 'idempotent', 'vector': scalars(m4.idempotent)}),
    )


def _extension_file(write_json, name, instance):
    return write_json(name, {
        'format': FORMAT,
        'kind': 'extension',
        'A': _body(algebra_to_dict(instance.algebra)),
        'X': _body(bimodule_to_dict(instance.module)),
        'p': scalars(instance.idempotent),
    })


@pytest.fixture
def t2_triangular_file(write_json, t2):
    a, x, b = t2.triangular
    return write_json('t2_tri.json', {
        'format': FORMAT,
        'kind': 'triangular',
        'A': _body(algebra_to_dict(a)),
        'X': _body(bimodule_to_dict(x)),
        'B': _body(algebra_to_dict(b)),
    })


@pytest.fixture
def empty_config(tmp_path):
    """沒有額外族的配置檔案"""
    path = tmp_path / 'liederiv.yml'
    path.write_text(yaml.dump({'campaign': {'families': []}}), encoding='utf-8')
    return str(path)


def test_ldp_on_t2(capsys, write_json, t2):
    """
    這個測試驗證 ldp 在 T₂ 上輸出判定與維度，離開代碼 0
    """
    path = write_json('t2.json', algebra_to_dict(t2.extension.total))
    code, out = _run(capsys, ['ldp', '--algebra', path])

    assert code == EXIT_TRUE
    assert out['format'] == FORMAT
    assert out['kind'] == 'ldp'
    assert out['verdict'] is True
    assert out['dims'] == {'lie_der': 4, 'der': 2, 'central_killing_commutators': 2, 'sum': 4, 'intersection': 0}


def test_star_on_m4(capsys, m4_files):
    """M₄ 實例滿足 (★)：角代數維度 1 與 3，中心維度 3"""
    a, x, p = m4_files
    code, out = _run(capsys, ['star', '--algebra', a, '--module', x, '--p', p])

    assert code == EXIT_TRUE
    assert out['holds'] is True
    assert out['q'] == ['1', '1', '0', '0', '1']
    assert out['corner_dims'] == {'p': 1, 'q': 3}
    assert out['peirce'] == {'pAq': 0, 'qAp': 1}
    assert out['simplifications']['ok'] is True
    assert out['center']['dim'] == 3
    # pAq = 0，所以 pAq 在兩側都不忠誠
    assert out['predicates'] == {
        'faithful_left': False,
        'faithful_right': False,
        'center_projection': {'q': True, 'p': True},
        'corner_products_vanish': {'pAqAp': True, 'qApAq': True},
    }


def test_star_fails_for_other_idempotent(capsys, write_json, m4_files, m4):
    """p = b 不滿足 pxq = x，離開代碼 1"""
    a, x, _ = m4_files
    b = m4.algebra.basis_vector(1)
    p = write_json('b.json', {'format': FORMAT, 'kind': 'idempotent', 'vector': scalars(b)})
    code, out = _run(capsys, ['star', '--algebra', a, '--module', x, '--p', p])

    assert code == EXIT_FALSE
    assert out == {'format': FORMAT, 'kind': 'star', 'holds': False, 'violating_index': 0}


def test_star_rejects_non_idempotent(capsys, write_json, m4_files, m4):
    a, x, _ = m4_files
    u = m4.algebra.basis_vector(2)
    p = write_json('u.json', {'format': FORMAT, 'kind': 'idempotent', 'vector': scalars(u)})
    code, out = _run(capsys, ['star', '--algebra', a, '--module', x, '--p', p])

    assert code == EXIT_INPUT
    assert out['kind'] == 'error'
    assert out['error']['code'] == 'not-idempotent'


def test_proper_rejects_non_lie_derivation(capsys, write_json, m2_file):
    """恆等映射不是 M₂ 的 Lie 導子"""
    path = write_json('id.json', map_to_dict(Matrix.identity(4)))
    code, out = _run(capsys, ['proper', '--algebra', m2_file, '--map', path])

    assert code == EXIT_INPUT
    assert out['error']['code'] == 'input-not-lie-derivation'


def test_proper_inner_derivation(capsys, write_json, m2, m2_file):
    """內導子是適當的，見證的 ℓ 為 0"""
    path = write_json('ad.json', map_to_dict(ad_map(m2, m2.basis_vector(1))))
    code, out = _run(capsys, ['proper', '--algebra', m2_file, '--map', path])

    assert code == EXIT_TRUE
    assert out['kind'] == 'certificate'
    assert out['verdict'] == 'proper'
    assert all(c == '0' for row in out['witness_ell'] for c in row)
    assert out['dims']['der'] == 3


def test_validate(capsys, write_json, m2_file):
    code, out = _run(capsys, ['validate', '--algebra', m2_file])
    assert code == EXIT_TRUE
    assert out['ok'] is True

    broken = algebra_to_dict(dual_numbers())
    broken['unit'] = ['0', '1']
    path = write_json('broken.json', broken)
    code, out = _run(capsys, ['validate', '--algebra', path])

    assert code == EXIT_FALSE
    assert out['ok'] is False
    assert out['reports']['A']['identities'] == ['left-unit', 'right-unit']


def test_validate_triangular_input(capsys, t2_triangular_file):
    code, out = _run(capsys, ['validate', '--input', t2_triangular_file])
    assert code == EXIT_TRUE
    assert sorted(out['reports']) == ['A', 'B', 'X']


def test_center_and_derivations(capsys, m2_file):
    """M₂：中心 1 維、交換子 3 維、Der 3 維、LieDer 4 維"""
    code, out = _run(capsys, ['center', '--algebra', m2_file])
    assert code == EXIT_TRUE
    assert out['center']['dim'] == 1
    assert out['commutators']['dim'] == 3

    _, out = _run(capsys, ['derivations', '--algebra', m2_file])
    assert out['space']['dim'] == 3
    assert out['inner_dim'] == 3
    assert len(out['space']['basis']) == 3

    _, out = _run(capsys, ['lie-derivations', '--algebra', m2_file])
    assert out['space']['dim'] == 4


def test_characterize_on_m4(capsys, write_json, m4):
    ext_path = _extension_file(write_json, 'm4_ext.json', m4)
    total = m4.extension.total
    mapping = space_maps(lie_derivation_space(total), total.dim)[0]
    map_path = write_json('l.json', map_to_dict(mapping))
    code, out = _run(capsys, ['characterize', '--input', ext_path, '--map', map_path])

    assert code == EXIT_TRUE
    assert out['kind'] == 'characterization'
    assert out['proper'] is True
    assert out['identity_violations'] == 0


def test_sufficiency(capsys, write_json, m4, t2):
    """M₄ 實例：充分條件成立但右側不忠誠，所以沒有 τ"""
    code, out = _run(capsys, ['sufficiency', '--input', _extension_file(write_json, 'm4_ext.json', m4)])
    assert code == EXIT_TRUE
    assert out['conclusion'] == 'guaranteed'
    assert out['loyalty'] == {'left': True, 'right': False}
    assert 'tau' not in out

    code, out = _run(capsys, ['sufficiency', '--input', _extension_file(write_json, 't2_ext.json', t2)])
    assert code == EXIT_TRUE
    assert out['tau']['exists'] is True
    assert out['tau']['bijective'] is True


def test_triangular_build(capsys, t2_triangular_file):
    code, out = _run(capsys, ['triangular', '--input', t2_triangular_file])
    assert code == EXIT_TRUE
    assert out['kind'] == 'triangular-build'
    assert out['dims'] == {'A': 1, 'X': 1, 'B': 1}
    assert out['p'] == ['1', '0']
    assert len(out['total']['unit']) == 3

    code, out = _run(capsys, ['triangular-sufficiency', '--input', t2_triangular_file])
    assert code == EXIT_TRUE
    assert out['conclusion'] == 'guaranteed'


def test_triangular_output_feeds_ldp(capsys, tmp_path, t2_triangular_file):
    """--out 寫到檔案，輸出的 total 本身就是合法的 algebra 文件"""
    out_path = tmp_path / 'total.json'
    code = main(['triangular', '--input', t2_triangular_file, '--out', str(out_path)])
    assert code == EXIT_TRUE
    assert capsys.readouterr().out == ''

    built = json.loads(out_path.read_text(encoding='utf-8'))
    total_path = tmp_path / 'total_algebra.json'
    total_path.write_text(json.dumps(built['total']), encoding='utf-8')
    code, out = _run(capsys, ['ldp', '--algebra', str(total_path)])
    assert code == EXIT_TRUE
    assert out['dims']['lie_der'] == 4


def test_input_kind_mismatch(capsys, write_json, m4):
    path = _extension_file(write_json, 'm4_ext.json', m4)
    code, out = _run(capsys, ['triangular', '--input', path])
    assert code == EXIT_INPUT
    assert out['error']['code'] == 'schema-error'


def test_extend(capsys, m4_files):
    a, x, p = m4_files
    code, out = _run(capsys, ['extend', '--algebra', a, '--module', x, '--p', p])
    assert code == EXIT_TRUE
    assert out['dims'] == {'A': 5, 'X': 1}
    assert out['star'] is True
    assert len(out['total']['unit']) == 6


@pytest.mark.parametrize('argv', [
    ['frobnicate'],
    ['ldp'],
    ['proper', '--algebra', 'a.json'],
    ['star', '--algebra', 'a.json'],
    ['ldp', '--algebra', 'a.json', '--seed', 'many'],
])
def test_usage_errors(capsys, argv):
    """參數錯誤也輸出 JSON，代碼 usage-error"""
    code, out = _run(capsys, argv)
    assert code == EXIT_INPUT
    assert out['error']['code'] == 'usage-error'


def test_missing_file(capsys, tmp_path):
    code, out = _run(capsys, ['ldp', '--algebra', str(tmp_path / 'none.json')])
    assert code == EXIT_INPUT
    assert out['error']['code'] == 'missing-file'


def test_malformed_inputs(capsys, write_json, tmp_path):
    bad = algebra_to_dict(dual_numbers())
    bad['unit'] = [0.5, 0]
    code, out = _run(capsys, ['ldp', '--algebra', write_json('float.json', bad)])
    assert code == EXIT_INPUT
    assert out['error']['code'] == 'malformed-scalar'

    path = tmp_path / 'broken.json'
    path.write_text('{"format": ', encoding='utf-8')
    code, out = _run(capsys, ['ldp', '--algebra', str(path)])
    assert out['error']['code'] == 'malformed-json'


def test_expect_match_and_mismatch(capsys, write_json, m2_file):
    """
    這個測試驗證 --expect：相符時保留原本的離開代碼，不符時離開代碼 3
    """
    good = write_json('good.json', {'format': FORMAT, 'kind': 'expectations',
                                    'facts': {'verdict': True, 'dims.der': 3}})
    code, out = _run(capsys, ['ldp', '--algebra', m2_file, '--expect', good])
    assert code == EXIT_TRUE
    assert out['expectations'] == {'ok': True, 'mismatches': []}

    bad = write_json('bad.json', {'format': FORMAT, 'kind': 'expectations',
                                  'facts': {'dims.der': 2, 'dims.nothing': 1}})
    code, out = _run(capsys, ['ldp', '--algebra', m2_file, '--expect', bad])
    assert code == EXIT_EXPECT
    assert out['expectations']['ok'] is False
    assert out['expectations']['mismatches'] == [
        {'path': 'dims.der', 'expected': 2, 'actual': 3},
        {'path': 'dims.nothing', 'expected': 1, 'missing': True},
    ]


def test_output_is_deterministic(capsys, m4_files):
    a, x, p = m4_files
    argv = ['star', '--algebra', a, '--module', x, '--p', p]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_corpus_with_family(capsys, empty_config):
    code, out = _run(capsys, ['corpus', '--config', empty_config, '--family', 'corner_of(m2)'])
    assert code == EXIT_TRUE
    names = [i['name'] for i in out['instances']]
    assert len(names) == 12
    assert names[:2] == ['m4_subalgebra', 't2']
    assert names[-2:] == ['corner_of(m2)/p', 'corner_of(m2)/q']


def test_campaign_validation_suite(capsys, empty_config):
    code, out = _run(capsys, ['campaign', '--config', empty_config, '--suite', 'validation'])
    assert code == EXIT_TRUE
    assert out['summary']['instances'] == 10
    assert out['summary']['fail'] == 0


def test_campaign_unknown_suite(capsys, empty_config):
    code, out = _run(capsys, ['campaign', '--config', empty_config, '--suite', 'validation,bogus'])
    assert code == EXIT_INPUT
    assert out['error']['code'] == 'unknown-suite'


def test_missing_config(capsys, tmp_path, m2_file):
    code, out = _run(capsys, ['ldp', '--algebra', m2_file, '--config', str(tmp_path / 'none.yml')])
    assert code == EXIT_INPUT
    assert out['error']['code'] == 'missing-file'


def test_consistency_error_exits_false(mocker, write_json, m2, m2_file):
    """交叉驗證失敗不是輸入錯誤：離開代碼 1，錯誤代碼 consistency-error"""
    mocker.patch('liederiv.cli.is_proper', side_effect=ConsistencyError('properness-witness', "代入失敗", {'basis': 0}))
    path = write_json('ad.json', map_to_dict(ad_map(m2, m2.basis_vector(1))))
    args = build_parser().parse_args(['proper', '--algebra', m2_file, '--map', path])

    code, document = dispatch(args, Settings())

    assert code == EXIT_FALSE
    assert document['error']['code'] == 'consistency-error'
    assert document['error']['details'] == {'basis': 0, 'check': 'properness-witness'}


def test_unknown_log_level_is_ignored(capsys, monkeypatch, m2_file):
    monkeypatch.setenv('LIEDERIV_LOG', 'LOUD')
    code, out = _run(capsys, ['ldp', '--algebra', m2_file])
    assert code == EXIT_TRUE
    assert out['verdict'] is True


def test_lookup_and_compare():
    document = {'a': [{'b': 1}], 'c': {'d': 'x'}}
    assert lookup(document, 'a.0.b') == 1
    assert lookup(document, 'c.d') == 'x'
    # 相符的路徑不會出現在結果中
    assert compare_expectations(document, {'a.0.b': 1, 'c.d': 'y', 'a.5': 0}) == [
        {'path': 'a.5', 'expected': 0, 'missing': True},
        {'path': 'c.d', 'expected': 'y', 'actual': 'x'},
    ]


def test_thm22_emits_condition_labels(capsys, write_json, m4):
    ext_path = _extension_file(write_json, 'm4_ext.json', m4)
    total = m4.extension.total
    map_path = write_json('l.json', map_to_dict(space_maps(lie_derivation_space(total), total.dim)[0]))
    code, out = _run(capsys, ['thm22', '--input', ext_path, '--map', map_path])

    assert code == EXIT_TRUE
    assert out['kind'] == 'characterization'
    assert out['conditions'] == {'2.2(i)': True, '2.2(ii)': True}
    assert out['satisfied'] == ['2.2(i)', '2.2(ii)']
    assert out['violated'] == []


def test_thm24_emits_condition_labels(capsys, write_json, m4):
    code, out = _run(capsys, ['thm24', '--input', _extension_file(write_json, 'm4_ext.json', m4)])
    assert code == EXIT_TRUE
    assert out['kind'] == 'sufficiency'
    assert list(out['conditions']) == ['2.4(I)', '2.4(II)(i)', '2.4(II)(ii)']
    assert out['conditions']['2.4(I)'] is True
    assert out['satisfied'] == ['2.4(I)', '2.4(II)(i)', '2.4(II)(ii)']
    assert out['conclusion'] == 'guaranteed'


def test_corollary31_emits_condition_labels(capsys, t2_triangular_file):
    code, out = _run(capsys, ['corollary31', '--input', t2_triangular_file])
    assert code == EXIT_TRUE
    assert out['conditions'] == {'3.1(I)': True, '3.1(II)(i)': 'w_certified', '3.1(II)(ii)': 'w_certified'}
    assert out['violated'] == []


@pytest.mark.parametrize('verb,alias', [
    ('thm24', 'sufficiency'),
    ('corollary31', 'triangular-sufficiency'),
])
def test_descriptive_aliases_match(capsys, write_json, m4, t2_triangular_file, verb, alias):
    if verb == 'thm24':
        extra = ['--input', _extension_file(write_json, 'm4_ext.json', m4)]
    else:
        extra = ['--input', t2_triangular_file]
    assert _run(capsys, [verb] + extra) == _run(capsys, [alias] + extra)
