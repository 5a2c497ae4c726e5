"""
例外類別 - 錯誤處理

這個模組定義了 liederiv 使用的所有例外類別。

例外說明：
- LieDerivError: 所有 liederiv 例外的基底類別
- InputError: 輸入資料錯誤（格式錯誤、維度不符、前置條件不成立）
  每個 InputError 都帶有一個機器可讀的錯誤代碼 code，CLI 會把它輸出到 JSON
- ConsistencyError: 內部交叉驗證失敗（例如公式計算的中心與直接計算的中心不一致）
  這種錯誤代表程式錯誤或定理被推翻，絕不是使用者輸入的問題
- InvariantFailure: 不變量檢查不成立（測試活動中的 'fail' 紀錄）

Library 說明：
- 每個例外同時繼承 LieDerivError 與一個內建例外
- except LieDerivError 可以一次捕獲所有 liederiv 的錯誤
- 只認得內建例外的呼叫端（except ValueError、except AssertionError）也能正常處理
"""
from typing import Any, Dict, Optional


class LieDerivError(Exception):
    """liederiv 所有例外的基底類別"""


class InputError(LieDerivError, ValueError):
    """
    輸入錯誤

    繼承 ValueError，所以呼叫端也可以用 except ValueError 捕獲。

    Args:
        code: 機器可讀的錯誤代碼，例如 'not-idempotent'、'dimension-mismatch'
        message: 給人看的錯誤訊息
        **details: 額外的診斷資訊（會序列化到 JSON 輸出）
    """

    def __init__(self, code: str, message: str, **details: Any):
        # str(e) 以錯誤代碼開頭
        super().__init__(f"[{code}] {message}")
        self.code = code
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        """
        轉換為可序列化的字典

        Returns:
            Dict[str, Any]: 包含 code、message、details 的字典
        """
        return {'code': self.code, 'message': self.message, 'details': self.details}


class ConsistencyError(LieDerivError, RuntimeError):
    """
    交叉驗證失敗

    Args:
        check: 失敗的檢查名稱
        message: 錯誤訊息
        details: 額外的診斷資訊
    """

    def __init__(self, check: str, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.details = details or {}


class InvariantFailure(LieDerivError, AssertionError):
    """
    不變量不成立

    由不變量檢查函數拋出，測試活動會把它記錄成 'fail' 而不是 'error'。

    Args:
        message: 失敗原因
        **details: 反例或相關維度
    """

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details
