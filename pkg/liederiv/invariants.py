"""
裝飾器 - 以 @invariant 定義不變量檢查

使用方式：
    @invariant('algebra', 'center-commutes')
    def center_commutes(instance, settings):
        ...

被裝飾的函數會包成 InvariantHandler 註冊到全域註冊表（或明確指定的 registry）。
函數本身不會被改變，仍然可以直接呼叫。

Library 說明：
- invariant(...) 是裝飾器工廠：先接收參數，返回真正的裝飾器
- functools.wraps 保留原函數的 __name__ 與 __doc__，pytest 與日誌顯示的名稱不變
- 註冊發生在模組匯入時，所以 campaign 匯入 suites 模組就完成內建不變量的註冊
"""
import logging
from functools import wraps
from typing import Any, Callable, Optional, Sequence

from .errors import InputError, InvariantFailure
from .invariant_handler import REQUIREMENTS, SUITES, InvariantHandler, InvariantRegistry

logger = logging.getLogger(__name__)

# 全域註冊表；套件模組匯入時會把內建的不變量註冊到這裡
_global_registry: InvariantRegistry = InvariantRegistry()


def set_global_registry(registry: InvariantRegistry) -> InvariantRegistry:
    """
    設定全域註冊表

    Args:
        registry: 新的註冊表

    Returns:
        InvariantRegistry: 被替換掉的舊註冊表（方便測試結束後還原）
    """
    global _global_registry
    previous = _global_registry
    _global_registry = registry
    return previous


def get_global_registry() -> InvariantRegistry:
    """返回目前的全域註冊表"""
    return _global_registry


def invariant(suite: str, name: Optional[str] = None, requires: Sequence[str] = (),
              registry: Optional[InvariantRegistry] = None):
    """
    不變量裝飾器工廠

    Args:
        suite: 套件名稱，必須是 SUITES 之一
        name: 不變量名稱；None 時使用函數名稱（底線換成連字號）
        requires: 前置條件，不滿足的實例會被略過
        registry: 註冊目標；None 時使用全域註冊表

    Returns:
        裝飾器函數

    Raises:
        InputError: 未知的套件（unknown-suite）或未知的前置條件（schema-error）
    """
    if suite not in SUITES:
        raise InputError('unknown-suite', f"未知的套件: {suite}", known=list(SUITES))
    unknown = [r for r in requires if r not in REQUIREMENTS]
    if unknown:
        raise InputError('schema-error', f"未知的前置條件: {unknown}")

    def decorator(func: Callable):
        @wraps(func)
        def wrapper(*args, **kwargs):
            return func(*args, **kwargs)

        # 在裝飾時決定註冊目標，之後替換全域註冊表不影響已註冊的函數
        target = registry if registry is not None else _global_registry
        invariant_name = name or func.__name__.replace('_', '-')
        target.register(InvariantHandler(suite, invariant_name, func, requires))
        # 測試可以用 invariant_key 找回註冊表中的處理器
        wrapper.invariant_key = (suite, invariant_name)
        return wrapper

    return decorator


def ensure(condition: Any, message: str, **details: Any):
    """
    條件不成立時拋出 InvariantFailure

    Args:
        condition: 要檢查的條件
        message: 失敗訊息
        **details: 附帶的診斷資訊
    """
    if not condition:
        raise InvariantFailure(message, **details)
