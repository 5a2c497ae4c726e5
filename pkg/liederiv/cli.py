"""
命令列介面

用法：
    liederiv ldp --algebra t2.json
    liederiv star --algebra a.json --module x.json --p p.json
    liederiv thm24 --input ex26.json
    liederiv proper --algebra a.json --map l.json
    liederiv triangular --input tri.json --out total.json
    liederiv campaign --suite validation --suite properness --family "triangular(1,2,1)"

離開代碼：
    0: 成功或判定為真
    1: 判定為假（例如 not-proper、LDP 不成立、(★) 不成立）
    2: 輸入錯誤，stdout 輸出含錯誤代碼的 JSON
    3: --expect 的預期事實不符

stdout 只輸出 JSON；診斷訊息經由 logging 寫到 stderr，等級由環境變數 LIEDERIV_LOG 控制。

Library 說明：
- argparse: 標準的命令列解析；第一個位置參數是動詞，其餘是 --選項
  （預設在參數錯誤時印出說明並呼叫 sys.exit(2)，這裡改為拋出 InputError）
- pathlib: Path.write_text() 一次寫入整個輸出文件
- os: os.environ.get() 讀取 LIEDERIV_LOG 環境變數
- sys: sys.stdout 輸出 JSON，sys.stderr 輸出日誌
"""
# argparse: 解析命令列參數
import argparse
import logging
# os: 讀取環境變數
import os
import sys
# Path: 物件導向的檔案路徑
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import (
    StructureAlgebra,
    center,
    commutator_subspace,
    validate_algebra,
    validate_bimodule,
)
from .campaign import run_campaign
from .config_loader import LOG_LEVELS, ConfigLoader, Settings
from .corpus import builtin_corpus, generate_family
from .derivations import derivation_space, inner_derivations, lie_derivation_space
from .errors import ConsistencyError, InputError
from .exact import Vector
from .extension import (
    TrivialExtension,
    build_trivial_extension,
    build_triangular,
    center_via_formula,
    check_simplifications,
    check_star,
    peirce_vanishing,
)
from .properness import (
    center_projection_equalities,
    characterization_report,
    corner_products_vanish,
    faithful_left,
    faithful_right,
    has_lie_derivation_property,
    is_proper,
    loyalty,
    proof_identity_violations,
    sufficiency_check,
    tau_isomorphism,
    triangular_sufficiency_check,
)
from .schemas import FORMAT
from .serialization import (
    algebra_to_dict,
    characterization_to_dict,
    certificate_to_dict,
    dumps,
    instance_to_dict,
    load_algebra,
    load_bimodule,
    load_expectations,
    load_extension,
    load_idempotent,
    load_map,
    load_triangular,
    map_space_to_dict,
    read_json,
    scalars,
    subspace_to_dict,
    sufficiency_to_dict,
    tau_to_dict,
    validation_report_to_dict,
)

logger = logging.getLogger(__name__)

# 離開代碼；數值和 README 的表格一致
EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_EXPECT = 0, 1, 2, 3

VERBS = (
    'validate', 'center', 'derivations', 'lie-derivations', 'proper', 'ldp', 'star', 'thm22', 'thm24',
    'corollary31', 'triangular', 'extend', 'corpus', 'campaign',
    # 描述性別名
    'characterize', 'sufficiency', 'triangular-sufficiency',
)


class _Parser(argparse.ArgumentParser):
    """參數錯誤改為拋出 InputError，讓 CLI 仍然輸出 JSON"""

    def error(self, message: str):
        """覆寫 ArgumentParser.error()，不再呼叫 sys.exit()"""
        raise InputError('usage-error', message)


def build_parser() -> argparse.ArgumentParser:
    """
    建立命令列解析器

    所有選項都是可選的；各動詞在執行時用 _require() 檢查自己需要的選項。

    Returns:
        argparse.ArgumentParser: 解析器
    """
    # choices 限制動詞只能是 VERBS 中的值，其他值會觸發 error()
    parser = _Parser(prog='liederiv', description="有限維結合代數的 Lie 導子判定工具")
    parser.add_argument('verb', choices=VERBS, help="要執行的判定")
    parser.add_argument('--algebra', help="代數 JSON 檔案")
    parser.add_argument('--module', help="雙模 JSON 檔案")
    parser.add_argument('--p', help="冪等元 JSON 檔案")
    parser.add_argument('--map', help="映射 JSON 檔案")
    parser.add_argument('--input', help="extension 或 triangular 複合文件")
    parser.add_argument('--out', help="輸出檔案；省略時寫到 stdout")
    parser.add_argument('--expect', help="預期事實 JSON 檔案")
    parser.add_argument('--seed', type=int, help="族產生與抽樣的種子")
    parser.add_argument('--budget', type=int, help="冪等元搜尋預算")
    # action='append' 讓同一個選項可以出現多次，結果是列表
    parser.add_argument('--suite', action='append', help="測試活動套件，可重複或以逗號分隔")
    parser.add_argument('--family', action='append', help="族描述，例如 triangular(1,2,1)")
    parser.add_argument('--config', help="YML 配置檔案")
    return parser


# ---- 輸入 ----

def _require(args: argparse.Namespace, *names: str):
    """
    檢查動詞需要的選項都已提供

    Raises:
        InputError: 缺少選項（代碼 usage-error）
    """
    # getattr(args, 'algebra') 等同 args.algebra；未提供的選項值為 None
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise InputError('usage-error', f"{args.verb} 需要參數 {', '.join(missing)}")


def _checked_algebra(a: StructureAlgebra, name: str = 'A') -> StructureAlgebra:
    """驗證代數公理，不成立時拋出 InputError（代碼 invalid-algebra）"""
    report = validate_algebra(a)
    if not report.ok:
        raise InputError('invalid-algebra', f"{name} 不滿足公理", identities=report.identities())
    return a


def _input_document(args: argparse.Namespace, kind: str) -> Any:
    """讀取 --input 並確認文件的 kind 欄位"""
    data = read_json(args.input)
    # 頂層不是物件時 kind 視為 None
    actual = data.get('kind') if isinstance(data, dict) else None
    if actual != kind:
        # {actual!r} 使用 repr()，字串會帶引號
        raise InputError('schema-error', f"--input 應為 {kind} 文件，實際為 {actual!r}")
    return data


def _extension_inputs(args: argparse.Namespace) -> Tuple[TrivialExtension, Optional[Vector]]:
    """由 --input 或 --algebra/--module(/--p) 建立平凡擴張"""
    # 複合文件優先；否則需要分開的 --algebra 與 --module
    if args.input is not None:
        a, x, p = load_extension(_input_document(args, 'extension'))
    else:
        _require(args, 'algebra', 'module')
        a = load_algebra(read_json(args.algebra))
        x = load_bimodule(read_json(args.module))
        p = None
    # --p 覆蓋複合文件中的 p
    if args.p is not None:
        p = load_idempotent(read_json(args.p))
    return build_trivial_extension(a, x), p


def _star_inputs(args: argparse.Namespace):
    """建立平凡擴張並檢查 pxq = x；需要冪等元"""
    ext, p = _extension_inputs(args)
    if p is None:
        raise InputError('usage-error', f"{args.verb} 需要冪等元 p（--p 或 --input 中的 p）")
    return check_star(ext, p)


def _primary_algebra(args: argparse.Namespace) -> StructureAlgebra:
    """有模時回傳 A⋉X，否則回傳 A"""
    if args.input is not None or args.module is not None:
        # [0] 取出 (擴張, p) 中的擴張
        return _extension_inputs(args)[0].total
    _require(args, 'algebra')
    return _checked_algebra(load_algebra(read_json(args.algebra)))


def _settings(args: argparse.Namespace) -> Settings:
    """載入配置檔案，再套用 --seed 與 --budget"""
    try:
        settings = ConfigLoader.load_settings(args.config)
    except FileNotFoundError as e:
        # 找不到配置檔案屬於輸入錯誤，離開代碼 2
        raise InputError('missing-file', str(e), path=args.config)
    # 值為 None 的覆蓋會被忽略
    return settings.with_overrides(seed=args.seed, idempotent_budget=args.budget)


def _suites(args: argparse.Namespace) -> Optional[List[str]]:
    """--suite 的值；None 代表執行配置中的全部套件"""
    if not args.suite:
        return None
    # "--suite a,b --suite c" 展開成 ['a', 'b', 'c']
    return [s.strip() for entry in args.suite for s in entry.split(',') if s.strip()]


def _document(kind: str, **body: Any) -> Dict[str, Any]:
    """每個輸出文件都帶有 format 與 kind 欄位"""
    return dict(body, format=FORMAT, kind=kind)


# ---- 各動詞 ----

def _cmd_validate(args, settings) -> Tuple[int, Dict[str, Any]]:
    """驗證代數與雙模公理，不成立時離開代碼 1"""
    if args.input is not None:
        data = read_json(args.input)
        kind = data.get('kind') if isinstance(data, dict) else None
        # 三角文件有兩個代數，X 是 (A, B)-雙模
        if kind == 'triangular':
            a, x, b = load_triangular(data)
            reports = {'A': validate_algebra(a), 'B': validate_algebra(b), 'X': validate_bimodule(a, x, b)}
        else:
            a, x, _ = load_extension(_input_document(args, 'extension'))
            reports = {'A': validate_algebra(a), 'X': validate_bimodule(a, x)}
    else:
        _require(args, 'algebra')
        a = load_algebra(read_json(args.algebra))
        reports = {'A': validate_algebra(a)}
        if args.module is not None:
            reports['X'] = validate_bimodule(a, load_bimodule(read_json(args.module)))
    # 每一份報告都通過才算成功
    ok = all(r.ok for r in reports.values())
    body = {name: validation_report_to_dict(r) for name, r in reports.items()}
    return (EXIT_TRUE if ok else EXIT_FALSE), _document('validation', ok=ok, reports=body)


def _cmd_center(args, settings):
    """Z(A) 與 [A, A]"""
    a = _primary_algebra(args)
    return EXIT_TRUE, _document('center', center=subspace_to_dict(center(a)),
                                commutators=subspace_to_dict(commutator_subspace(a)))


def _cmd_derivations(args, settings):
    """Der(A) 的基底與內導子的維度"""
    a = _primary_algebra(args)
    return EXIT_TRUE, _document('derivations', space=map_space_to_dict(derivation_space(a), a.dim),
                                inner_dim=inner_derivations(a).dim)


def _cmd_lie_derivations(args, settings):
    """LieDer(A) 的基底"""
    a = _primary_algebra(args)
    return EXIT_TRUE, _document('lie-derivations', space=map_space_to_dict(lie_derivation_space(a), a.dim))


def _cmd_proper(args, settings):
    """判定 --map 給定的 Lie 導子是否適當"""
    _require(args, 'map')
    a = _primary_algebra(args)
    cert = is_proper(a, load_map(read_json(args.map)))
    return (EXIT_TRUE if cert.proper else EXIT_FALSE), _document('certificate', **certificate_to_dict(cert))


def _cmd_ldp(args, settings):
    """判定 Lie 導子性質，附上各空間的維度"""
    result = has_lie_derivation_property(_primary_algebra(args))
    return (EXIT_TRUE if result.verdict else EXIT_FALSE), _document('ldp', verdict=result.verdict,
                                                                    dims=dict(result.dims))


def _peirce_predicates(ctx) -> Dict[str, Any]:
    """只依賴 A 與 p 的 Peirce 判定：忠誠性、中心投影、角乘積"""
    a, p = ctx.base, ctx.p
    q_equal, p_equal = center_projection_equalities(a, p)
    pqp_zero, qpq_zero = corner_products_vanish(a, p)
    return {
        'faithful_left': faithful_left(a, p),
        'faithful_right': faithful_right(a, p),
        'center_projection': {'q': q_equal, 'p': p_equal},
        'corner_products_vanish': {'pAqAp': pqp_zero, 'qApAq': qpq_zero},
    }


def _cmd_star(args, settings):
    """檢查 pxq = x；成立時附上角代數維度、化簡恆等式、中心與 Peirce 判定"""
    check = _star_inputs(args)
    # pxq = x 不成立時只回報第一個違反的模基底索引
    if not check.holds:
        return EXIT_FALSE, _document('star', holds=False, violating_index=check.violating_index)
    ctx = check.context
    return EXIT_TRUE, _document(
        'star',
        holds=True,
        q=scalars(ctx.q),
        corner_dims={'p': ctx.p_corner.algebra.dim, 'q': ctx.q_corner.algebra.dim},
        peirce=peirce_vanishing(ctx),
        simplifications=validation_report_to_dict(check_simplifications(ctx)),
        center=subspace_to_dict(center_via_formula(ctx)),
        predicates=_peirce_predicates(ctx),
    )


def _cmd_characterize(args, settings):
    """
    以 ℓ_A 刻畫判定映射是否適當

    同時用 is_proper 直接判定；兩者不同時拋出 ConsistencyError。
    """
    _require(args, 'map')
    check = _star_inputs(args)
    if not check.holds:
        raise InputError('usage-error', "p 不滿足 pxq = x，無法使用刻畫", violating_index=check.violating_index)
    ctx = check.context
    mapping = load_map(read_json(args.map))
    report = characterization_report(ctx, mapping)
    # 交叉驗證：直接求解 Der + C
    cert = is_proper(ctx.total, mapping)
    if report.proper != cert.proper:
        raise ConsistencyError('characterization-equivalence', "刻畫結果與直接判定不一致",
                               {'characterization': report.proper, 'direct': cert.verdict})
    body = characterization_to_dict(report)
    # 有見證時順便報告封閉性恆等式的違反數（正常應為 0）
    if report.witness is not None:
        body['identity_violations'] = len(proof_identity_violations(ctx, report.witness.ell_a))
    return (EXIT_TRUE if cert.proper else EXIT_FALSE), _document('characterization', **body)


def _cmd_sufficiency(args, settings):
    """檢查充分條件；條件成立（保證有 Lie 導子性質）時離開代碼 0"""
    check = _star_inputs(args)
    if not check.holds:
        raise InputError('usage-error', "p 不滿足 pxq = x", violating_index=check.violating_index)
    ctx = check.context
    report = sufficiency_check(ctx, budget=settings.idempotent_budget)
    loyal = loyalty(ctx)
    # dict(mapping, key=value) 建立新字典並加入額外的鍵
    body = dict(sufficiency_to_dict(report), loyalty={'left': loyal.left, 'right': loyal.right})
    # τ 只在忠誠時有定義
    if loyal.loyal:
        body['tau'] = tau_to_dict(tau_isomorphism(ctx))
    return (EXIT_TRUE if report.guaranteed else EXIT_FALSE), _document('sufficiency', **body)


def _triangular_build(args):
    """由 --input 的三角文件建立 Tri(A, X, B)"""
    _require(args, 'input')
    a, x, b = load_triangular(_input_document(args, 'triangular'))
    return build_triangular(a, x, b)


def _cmd_triangular_sufficiency(args, settings):
    """三角代數的充分條件，只需要檢查 A 與 B"""
    report = triangular_sufficiency_check(_triangular_build(args), budget=settings.idempotent_budget)
    return (EXIT_TRUE if report.guaranteed else EXIT_FALSE), _document('sufficiency', **sufficiency_to_dict(report))


def _cmd_triangular(args, settings):
    """輸出三角代數的結構常數與 p = (1_A, 0)"""
    build = _triangular_build(args)
    return EXIT_TRUE, _document(
        'triangular-build',
        total=algebra_to_dict(build.extension.total),
        p=scalars(build.context.p.vector),
        dims={'A': build.left_algebra.dim, 'X': build.module.dim, 'B': build.right_algebra.dim},
    )


def _cmd_extend(args, settings):
    """輸出 A⋉X 的結構常數；提供 p 時一併檢查 pxq = x"""
    ext, p = _extension_inputs(args)
    body: Dict[str, Any] = {'total': algebra_to_dict(ext.total), 'dims': {'A': ext.n, 'X': ext.m}}
    if p is not None:
        body['star'] = check_star(ext, p).holds
    return EXIT_TRUE, _document('extension-build', **body)


def _instances(args, settings):
    """內建語料庫加上配置與 --family 指定的構造族"""
    # 配置中的族在前，命令列的族在後
    families = list(settings.families) + list(args.family or [])
    instances = builtin_corpus()
    for descriptor in families:
        instances.extend(generate_family(descriptor, seed=settings.seed))
    return instances


def _cmd_corpus(args, settings):
    """列出所有實例"""
    instances = _instances(args, settings)
    return EXIT_TRUE, _document('corpus', instances=[instance_to_dict(i) for i in instances])


def _cmd_campaign(args, settings):
    """執行測試活動；有失敗或錯誤時離開代碼 1"""
    report = run_campaign(_instances(args, settings), _suites(args), settings)
    return report.exit_code, report.to_dict()


# 動詞 → 處理函數；數字標籤的動詞與描述性別名指向同一個函數
COMMANDS: Dict[str, Callable[[argparse.Namespace, Settings], Tuple[int, Dict[str, Any]]]] = {
    'validate': _cmd_validate,
    'center': _cmd_center,
    'derivations': _cmd_derivations,
    'lie-derivations': _cmd_lie_derivations,
    'proper': _cmd_proper,
    'ldp': _cmd_ldp,
    'star': _cmd_star,
    'thm22': _cmd_characterize,
    'thm24': _cmd_sufficiency,
    'corollary31': _cmd_triangular_sufficiency,
    'characterize': _cmd_characterize,
    'sufficiency': _cmd_sufficiency,
    'triangular-sufficiency': _cmd_triangular_sufficiency,
    'triangular': _cmd_triangular,
    'extend': _cmd_extend,
    'corpus': _cmd_corpus,
    'campaign': _cmd_campaign,
}


# ---- 預期事實 ----

# 哨兵物件：路徑不存在時回傳，和值為 None 的欄位區分開
_MISSING = object()


def lookup(document: Any, path: str) -> Any:
    """以點分隔的路徑取值；數字段落作為列表索引"""
    current = document
    for part in path.split('.'):
        if isinstance(current, dict) and part in current:
            current = current[part]
        # "dims.0" 這類路徑：數字段落是列表索引
        elif isinstance(current, list) and part.isdigit() and int(part) < len(current):
            current = current[int(part)]
        else:
            return _MISSING
    return current


def compare_expectations(document: Dict[str, Any], facts: Dict[str, Any]) -> List[Dict[str, Any]]:
    """
    比較輸出與預期事實

    Returns:
        List[Dict[str, Any]]: 不符的項目，依路徑排序
    """
    mismatches = []
    # 依路徑排序，輸出順序固定
    for path in sorted(facts):
        actual = lookup(document, path)
        if actual is _MISSING:
            mismatches.append({'path': path, 'expected': facts[path], 'missing': True})
        elif actual != facts[path]:
            mismatches.append({'path': path, 'expected': facts[path], 'actual': actual})
    return mismatches


# ---- 入口 ----

def _error_document(code: str, message: str, details: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """錯誤輸出：{"kind": "error", "error": {"code", "message", "details"}}"""
    return _document('error', error={'code': code, 'message': message, 'details': details or {}})


def dispatch(args: argparse.Namespace, settings: Optional[Settings] = None) -> Tuple[int, Dict[str, Any]]:
    """
    執行一個命令

    Args:
        args: 解析後的參數
        settings: 執行設定；None 時依 --config 載入

    Returns:
        Tuple[int, Dict[str, Any]]: (離開代碼, 輸出文件)
    """
    # 輸入錯誤與交叉驗證失敗都轉成 JSON 錯誤文件，不讓例外離開 CLI
    try:
        settings = settings or _settings(args)
        facts = load_expectations(read_json(args.expect)) if args.expect else None
        # 依動詞查表並執行
        code, document = COMMANDS[args.verb](args, settings)
    except InputError as e:
        logger.info(f"輸入錯誤: {e}")
        return EXIT_INPUT, _error_document(e.code, e.message, e.details)
    except ConsistencyError as e:
        logger.error(f"交叉驗證失敗: {e}")
        return EXIT_FALSE, _error_document('consistency-error', str(e), dict(e.details, check=e.check))

    # --expect：比較輸出文件中的路徑與預期值
    if facts is not None:
        mismatches = compare_expectations(document, facts)
        document = dict(document, expectations={'ok': not mismatches, 'mismatches': mismatches})
        if mismatches:
            logger.warning(f"預期事實不符: {[m['path'] for m in mismatches]}")
            return EXIT_EXPECT, document
    return code, document


def _configure_logging(default_level: str):
    """
    設定根 logger

    環境變數 LIEDERIV_LOG 優先於配置檔案中的 log_level；無效的等級退回 WARNING。
    """
    level = os.environ.get('LIEDERIV_LOG', default_level).upper()
    if level not in LOG_LEVELS:
        level = 'WARNING'
    # basicConfig 只在根 logger 尚未設定時生效
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    )


def _emit(document: Dict[str, Any], out: Optional[str]):
    """把文件寫到 --out 或 stdout"""
    text = dumps(document) + '\n'
    if out:
        Path(out).write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    CLI 主函數

    Args:
        argv: 命令列參數；None 時使用 sys.argv

    Returns:
        int: 離開代碼
    """
    # 解析失敗時還沒有配置，用預設等級設定日誌
    try:
        args = build_parser().parse_args(argv)
    except InputError as e:
        _configure_logging('WARNING')
        _emit(_error_document(e.code, e.message, e.details), None)
        return EXIT_INPUT

    try:
        settings = _settings(args)
    except InputError as e:
        _configure_logging('WARNING')
        _emit(_error_document(e.code, e.message, e.details), args.out)
        return EXIT_INPUT

    _configure_logging(settings.log_level)
    # dispatch 會重用已載入的 settings，不再讀一次配置檔案
    code, document = dispatch(args, settings)
    _emit(document, args.out)
    return code
