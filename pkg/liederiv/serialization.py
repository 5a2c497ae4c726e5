"""
JSON 讀寫

讀取：read_json 處理檔案與 JSON 語法錯誤，load_* 以 pydantic 模型驗證後建立物件。
輸出：*_to_dict 轉成只含字串、整數、布林值的字典，dumps 以固定格式輸出，
相同的輸入永遠得到位元組相同的輸出。

Library 說明：
- json: json.load() 讀取檔案；json.dumps(sort_keys=True) 讓鍵的順序固定
- pathlib: Path.exists() 先檢查檔案是否存在，錯誤訊息比 FileNotFoundError 清楚
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .algebra import Bimodule, StructureAlgebra, ValidationReport
from .corpus import CorpusInstance
from .derivations import ConditionReport, LinearEndomap
from .errors import InputError
from .exact import Matrix, Subspace, Vector, format_scalar
from .properness import CharacterizationReport, PropernessCertificate, SufficiencyReport, TauIsomorphism
from .schemas import (
    FORMAT,
    AlgebraBody,
    AlgebraDocument,
    BimoduleBody,
    BimoduleDocument,
    ExpectationDocument,
    ExtensionDocument,
    IdempotentDocument,
    MapDocument,
    TriangularDocument,
    validate_document,
)

logger = logging.getLogger(__name__)


def read_json(path: Union[str, Path]) -> Any:
    """
    讀取 JSON 檔案

    Raises:
        InputError: 檔案不存在（missing-file）或 JSON 語法錯誤（malformed-json）
    """
    # 接受 str 或 Path
    path = Path(path)
    if not path.exists():
        raise InputError('missing-file', f"檔案不存在: {path}", path=str(path))
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    # JSONDecodeError 帶有行號 lineno 與錯誤說明 msg
    except json.JSONDecodeError as e:
        raise InputError('malformed-json', f"JSON 語法錯誤: {path}: {e.msg}", path=str(path), line=e.lineno)


def dumps(document: Any) -> str:
    """固定格式的 JSON：鍵排序、縮排 2、保留非 ASCII 字元"""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)


# ---- 讀取 ----

def _algebra_from_body(body: AlgebraBody) -> StructureAlgebra:
    """pydantic 模型 → StructureAlgebra（純量已由 BeforeValidator 轉成 Fraction）"""
    return StructureAlgebra.create(body.mul, body.unit, body.labels)


def _bimodule_from_body(body: BimoduleBody) -> Bimodule:
    """pydantic 模型 → Bimodule；未提供的維度由張量形狀推出"""
    return Bimodule.create(body.left, body.right, dim=body.dim, left_dim=body.left_dim,
                           right_dim=body.right_dim, labels=body.labels)


def load_algebra(data: Any) -> StructureAlgebra:
    """讀取代數文件（不檢查結合律）"""
    return _algebra_from_body(validate_document(AlgebraDocument, data, 'algebra'))


def load_bimodule(data: Any) -> Bimodule:
    """讀取雙模文件"""
    return _bimodule_from_body(validate_document(BimoduleDocument, data, 'bimodule'))


def load_idempotent(data: Any) -> Vector:
    """讀取冪等元座標；p·p = p 由使用端檢查"""
    return tuple(validate_document(IdempotentDocument, data, 'idempotent').vector)


def load_map(data: Any) -> LinearEndomap:
    """
    讀取映射文件

    Raises:
        InputError: 矩陣形狀與 rows、cols 不符（代碼 dimension-mismatch）
    """
    doc = validate_document(MapDocument, data, 'map')
    # 列長度由 Matrix.from_rows 檢查，這裡只檢查列數
    if len(doc.matrix) != doc.rows:
        raise InputError('dimension-mismatch', f"矩陣有 {len(doc.matrix)} 列，宣告為 {doc.rows}")
    return LinearEndomap(Matrix.from_rows(doc.matrix, doc.cols))


def load_extension(data: Any) -> Tuple[StructureAlgebra, Bimodule, Optional[Vector]]:
    """讀取 extension 複合文件，回傳 (A, X, p)；沒有 p 時第三項為 None"""
    doc = validate_document(ExtensionDocument, data, 'extension')
    p = tuple(doc.p) if doc.p is not None else None
    return _algebra_from_body(doc.algebra), _bimodule_from_body(doc.module), p


def load_triangular(data: Any) -> Tuple[StructureAlgebra, Bimodule, StructureAlgebra]:
    """讀取 triangular 複合文件，回傳 (A, X, B)"""
    doc = validate_document(TriangularDocument, data, 'triangular')
    return _algebra_from_body(doc.left), _bimodule_from_body(doc.module), _algebra_from_body(doc.right)


def load_expectations(data: Any) -> Dict[str, Any]:
    """讀取 --expect 文件的 facts"""
    return dict(validate_document(ExpectationDocument, data, 'expectations').facts)


# ---- 輸出 ----

def scalars(vector: Sequence) -> List[str]:
    """向量 → "p/q" 字串列表（整數不帶分母）"""
    return [format_scalar(x) for x in vector]


def _tensor(tensor) -> List[List[List[str]]]:
    """三層巢狀的結構常數 → 字串"""
    return [[scalars(v) for v in plane] for plane in tensor]


def algebra_to_dict(a: StructureAlgebra) -> Dict[str, Any]:
    """輸出的代數文件可以再用 load_algebra 讀回"""
    return {'format': FORMAT, 'kind': 'algebra', 'labels': list(a.labels), 'mul': _tensor(a.mul),
            'unit': scalars(a.unit)}


def bimodule_to_dict(x: Bimodule) -> Dict[str, Any]:
    """雙模文件；left_dim、right_dim 一律輸出，讀回時不需要推算"""
    return {'format': FORMAT, 'kind': 'bimodule', 'dim': x.dim, 'left_dim': x.left_dim, 'right_dim': x.right_dim,
            'labels': list(x.labels), 'left': _tensor(x.left), 'right': _tensor(x.right)}


def matrix_rows(m: Matrix) -> List[List[str]]:
    """矩陣 → 字串列的列表"""
    return [scalars(row) for row in m.to_rows()]


def map_to_dict(mapping: Union[LinearEndomap, Matrix]) -> Dict[str, Any]:
    """map 文件，格式與 load_map 讀取的相同"""
    m = mapping.matrix if isinstance(mapping, LinearEndomap) else mapping
    return {'format': FORMAT, 'kind': 'map', 'rows': m.rows, 'cols': m.cols, 'matrix': matrix_rows(m)}


def subspace_to_dict(space: Subspace) -> Dict[str, Any]:
    """子空間以 RREF 基底輸出，相同的子空間輸出相同"""
    return {'ambient_dim': space.ambient_dim, 'dim': space.dim, 'basis': [scalars(v) for v in space.vectors()]}


def map_space_to_dict(space: Subspace, rows: int, cols: Optional[int] = None) -> Dict[str, Any]:
    """映射空間：以基底矩陣列表輸出"""
    cols = rows if cols is None else cols
    # 基底向量是行優先展平的映射，還原成矩陣
    maps = [matrix_rows(Matrix.from_flat(v, rows, cols)) for v in space.vectors()]
    return {'dim': space.dim, 'rows': rows, 'cols': cols, 'basis': maps}


def validation_report_to_dict(report: ValidationReport) -> Dict[str, Any]:
    """代數或雙模的公理檢查結果"""
    return {
        'ok': report.ok,
        'identities': report.identities(),
        # 只列出前 20 條，總數另外記錄
        'violations': [{'identity': v.identity, 'indices': list(v.indices)} for v in report.violations[:20]],
        'violation_count': len(report.violations),
    }


def condition_report_to_dict(report: ConditionReport) -> Dict[str, Any]:
    """區塊條件檢查結果；failed 列出每個不成立的條件與基底索引"""
    return {
        'ok': report.ok,
        'passed': report.passed_conditions(),
        'failed': [{'condition': f.condition, 'indices': list(f.indices)} for f in report.failures],
    }


def certificate_to_dict(cert: PropernessCertificate) -> Dict[str, Any]:
    """適當性證書；見證矩陣可以直接用 load_map 讀回驗證"""
    out: Dict[str, Any] = {'verdict': cert.verdict, 'dims': dict(cert.dims)}
    # 不適當時沒有見證
    if cert.proper:
        out['witness_d'] = matrix_rows(cert.witness_d.matrix)
        out['witness_ell'] = matrix_rows(cert.witness_ell.matrix)
    return out


def sufficiency_to_dict(report: SufficiencyReport) -> Dict[str, Any]:
    """充分條件報告"""
    # 條件以標籤為鍵，例如 '2.4(II)(i)'；三角檢查使用 '3.1(...)' 標籤
    return {
        'conditions': report.conditions(),
        'satisfied': report.satisfied(),
        'violated': report.violated(),
        'conclusion': report.conclusion,
        # 各角代數的 W 與中心維度
        'details': report.details,
    }


def characterization_to_dict(report: CharacterizationReport) -> Dict[str, Any]:
    """刻畫報告；適當時附上 ℓ_A 與 L_A - ℓ_A 的矩陣"""
    conditions = report.conditions()
    out: Dict[str, Any] = {
        'proper': report.proper,
        'conditions': conditions,
        'satisfied': [label for label, ok in conditions.items() if ok],
        'violated': [label for label, ok in conditions.items() if not ok],
    }
    # 條件 (ii) 不成立時沒有見證
    if report.witness is not None:
        out['ell_a'] = matrix_rows(report.witness.ell_a.matrix)
        out['derivation_a'] = matrix_rows(report.witness.derivation_a.matrix)
    return out


def tau_to_dict(tau: Optional[TauIsomorphism]) -> Dict[str, Any]:
    """τ: pAp → qAq 的定義域、值域與矩陣"""
    # 角代數中心的維度不同時 τ 不存在
    if tau is None:
        return {'exists': False}
    return {
        'exists': True,
        'domain': subspace_to_dict(tau.domain),
        'codomain': subspace_to_dict(tau.codomain),
        'matrix': matrix_rows(tau.matrix),
        'bijective': tau.bijective,
        'multiplicative': tau.multiplicative,
    }


def instance_to_dict(instance: CorpusInstance) -> Dict[str, Any]:
    """語料庫實例摘要（不含結構常數）"""
    out: Dict[str, Any] = {
        'name': instance.name,
        'description': instance.description,
        'algebra_dim': instance.algebra.dim,
        'expected': {
            # 沒有 oracle 的事實不輸出 oracle 鍵
            key: {'value': e.value, 'provenance': e.provenance, **({'oracle': e.oracle} if e.oracle else {})}
            for key, e in instance.expected.items()
        },
    }
    if instance.module is not None:
        out['module_dim'] = instance.module.dim
    if instance.idempotent is not None:
        out['p'] = scalars(instance.idempotent)
    # 可選的欄位只在存在時輸出
    if instance.triangular is not None:
        a, x, b = instance.triangular
        out['triangular'] = [a.dim, x.dim, b.dim]
    return out
