"""
JSON 文件的 pydantic 模型

每個頂層文件都帶有 "format": "liederiv/1"。
純量以整數或 "p/q" 字串表示；浮點數在驗證時就被拒絕（malformed-scalar）。

Library 說明：
- pydantic: BaseModel 依型別提示驗證資料，model_validate() 從 dict 建立模型
- BeforeValidator: 在型別檢查之前執行的函數，這裡用 parse_scalar 把純量轉成 Fraction
- ConfigDict(extra='forbid'): 出現未宣告的鍵時驗證失敗
- Field(alias='A'): JSON 中的鍵名是 'A'，Python 中的屬性名是 algebra
- StrictInt: 不接受 "3" 或 3.0 這類會被自動轉換的值
"""
from typing import Annotated, Any, Dict, List, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, StrictInt, ValidationError

from .errors import InputError
from .exact import parse_scalar

# 所有文件的格式版本
FORMAT = 'liederiv/1'

# Annotated[型別, 驗證器]：Any 加上前置的純量解析
Scalar = Annotated[Any, BeforeValidator(parse_scalar)]
Tensor3 = List[List[List[Scalar]]]


class _Body(BaseModel):
    """所有模型共用的設定"""
    # populate_by_name=True：別名與屬性名都可以用來建立模型
    model_config = ConfigDict(extra='forbid', populate_by_name=True)


class AlgebraBody(_Body):
    mul: Tensor3
    unit: List[Scalar]
    labels: Optional[List[str]] = None


class BimoduleBody(_Body):
    left: Tensor3
    right: Tensor3
    dim: Optional[StrictInt] = None
    left_dim: Optional[StrictInt] = None
    right_dim: Optional[StrictInt] = None
    labels: Optional[List[str]] = None


class AlgebraDocument(AlgebraBody):
    format: Literal['liederiv/1']
    kind: Literal['algebra'] = 'algebra'


class BimoduleDocument(BimoduleBody):
    format: Literal['liederiv/1']
    kind: Literal['bimodule'] = 'bimodule'


class IdempotentDocument(_Body):
    format: Literal['liederiv/1']
    kind: Literal['idempotent'] = 'idempotent'
    vector: List[Scalar]


class MapDocument(_Body):
    """n x n 矩陣；第 s 欄是 e_s 的像"""
    format: Literal['liederiv/1']
    kind: Literal['map'] = 'map'
    rows: StrictInt
    cols: StrictInt
    matrix: List[List[Scalar]]


class ExtensionDocument(_Body):
    format: Literal['liederiv/1']
    kind: Literal['extension'] = 'extension'
    algebra: AlgebraBody = Field(alias='A')
    module: BimoduleBody = Field(alias='X')
    p: Optional[List[Scalar]] = None


class TriangularDocument(_Body):
    format: Literal['liederiv/1']
    kind: Literal['triangular'] = 'triangular'
    left: AlgebraBody = Field(alias='A')
    module: BimoduleBody = Field(alias='X')
    right: AlgebraBody = Field(alias='B')


class ExpectationDocument(_Body):
    """--expect 使用的預期事實：鍵是輸出 JSON 中以點分隔的路徑"""
    format: Literal['liederiv/1']
    kind: Literal['expectations'] = 'expectations'
    facts: Dict[str, Any]


def validate_document(model: type, data: Any, kind: str) -> BaseModel:
    """
    以 pydantic 模型驗證文件

    驗證器中拋出的 InputError（例如 malformed-scalar）會原樣取出重新拋出，
    其他驗證錯誤轉換為 schema-error。

    Raises:
        InputError: 文件不符合格式
    """
    try:
        # model 是類別本身，例如 AlgebraDocument
        return model.model_validate(data)
    except ValidationError as exc:
        errors = exc.errors()
        # pydantic 把驗證器拋出的例外放在 error['ctx']['error']
        for error in errors:
            original = (error.get('ctx') or {}).get('error')
            if isinstance(original, InputError):
                raise original
        raise InputError(
            'schema-error',
            f"{kind} 文件不符合格式",
            errors=[{'loc': [str(p) for p in e['loc']], 'msg': e['msg']} for e in errors[:10]],
        )
