"""
不變量處理器 - OOP 設計

這個模組提供了 InvariantHandler 和 InvariantRegistry 類別，用於管理不變量檢查的執行和統計。

InvariantHandler: 封裝一個不變量檢查函數，記錄執行次數、失敗次數與錯誤
InvariantRegistry: 依 (suite, name) 管理多個處理器，提供統一的註冊和查詢介面

檢查函數的簽名是 func(instance, settings) -> Optional[dict]：
- 正常返回代表通過，返回的字典是附帶的診斷資訊
- 拋出 InvariantFailure 代表不變量不成立
- 拋出其他例外代表執行錯誤

Library 說明：
- threading.Lock 保護計數器；測試活動以執行緒池平行處理實例，同一個處理器會被同時呼叫
- with self._lock: 區塊結束時自動釋放鎖，即使區塊內拋出例外
- 檢查函數本身在鎖外執行，鎖只包住統計更新
"""
import logging
import threading
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .errors import InvariantFailure

logger = logging.getLogger(__name__)

# 套件依序執行；validation 不通過時後面的套件全部略過
SUITES = (
    'validation',
    'algebra',
    'derivations',
    'extension',
    'lemma',
    'properness',
    'characterization',
    'sufficiency',
    'expectations',
)

# requires 可用的前置條件
REQUIREMENTS = ('module', 'star', 'triangular', 'summands')


class InvariantHandler:
    """
    不變量處理器類別

    封裝一個檢查函數，並記錄執行統計資訊。
    同一個處理器可能同時被多個執行緒呼叫，統計的更新以鎖保護。
    """

    def __init__(self, suite: str, name: str, func: Callable, requires: Sequence[str] = ()):
        """
        初始化不變量處理器

        Args:
            suite: 所屬套件，必須是 SUITES 之一
            name: 不變量名稱，在同一個套件內唯一
            func: 檢查函數 func(instance, settings)
            requires: 前置條件，'module'、'star'、'triangular'、'summands' 的子集合
        """
        self.suite = suite
        self.name = name
        self.func = func
        self.requires: Tuple[str, ...] = tuple(requires)
        self.execution_count = 0
        self.failure_count = 0
        self.error_count = 0
        self.last_execution_time: Optional[datetime] = None
        self.last_error: Optional[str] = None
        self._lock = threading.Lock()

    @property
    def key(self) -> Tuple[str, str]:
        """註冊表中的鍵 (suite, name)"""
        return self.suite, self.name

    def applies_to(self, instance: Any) -> bool:
        """
        實例是否滿足前置條件

        Args:
            instance: CorpusInstance

        Returns:
            bool: 所有 requires 都滿足時為 True
        """
        checks = {
            'module': lambda: instance.module is not None,
            'star': lambda: instance.module is not None and instance.idempotent is not None,
            'triangular': lambda: instance.triangular is not None,
            # 直和實例記錄兩個直和項
            'summands': lambda: instance.summands is not None,
        }
        return all(checks[r]() for r in self.requires)

    def execute(self, instance: Any, settings: Any) -> Dict[str, Any]:
        """
        執行檢查

        Args:
            instance: CorpusInstance
            settings: Settings

        Returns:
            Dict[str, Any]: 檢查函數返回的診斷資訊（None 時為空字典）

        Raises:
            InvariantFailure: 不變量不成立（記錄為失敗後重新拋出）
            Exception: 其他錯誤（記錄後重新拋出）
        """
        logger.debug(f"開始檢查: {self.suite}/{self.name} on {instance.name}")
        with self._lock:
            self.execution_count += 1
            self.last_execution_time = datetime.now()
        # 檢查函數在鎖外執行
        try:
            details = self.func(instance, settings)
        except InvariantFailure as e:
            with self._lock:
                self.failure_count += 1
                self.last_error = e.message
            logger.warning(f"不變量不成立: {self.suite}/{self.name} on {instance.name}: {e.message}")
            raise
        except Exception as e:
            with self._lock:
                self.error_count += 1
                self.last_error = str(e)
            logger.error(f"檢查執行失敗: {self.suite}/{self.name} on {instance.name}, 錯誤: {e}")
            raise
        # 複製一份，呼叫端修改不會影響檢查函數持有的字典
        return dict(details or {})

    def get_stats(self) -> Dict[str, Any]:
        """
        取得統計資訊

        Returns:
            Dict[str, Any]: suite、name、execution_count、failure_count、error_count、
                last_execution_time（ISO 字串或 None）、last_error
        """
        return {
            'suite': self.suite,
            'name': self.name,
            'execution_count': self.execution_count,
            'failure_count': self.failure_count,
            'error_count': self.error_count,
            'last_execution_time': self.last_execution_time.isoformat() if self.last_execution_time else None,
            'last_error': self.last_error,
        }

    def reset_stats(self):
        """重置統計資訊"""
        with self._lock:
            self.execution_count = 0
            self.failure_count = 0
            self.error_count = 0
            self.last_execution_time = None
            self.last_error = None
        logger.info(f"不變量統計已重置: {self.suite}/{self.name}")


class InvariantRegistry:
    """
    不變量註冊表類別

    以 (suite, name) 為鍵儲存處理器，相同的鍵會覆蓋舊的處理器。
    """

    def __init__(self):
        self._handlers: Dict[Tuple[str, str], InvariantHandler] = {}

    def register(self, handler: InvariantHandler):
        """
        註冊處理器

        Args:
            handler: 要註冊的處理器
        """
        self._handlers[handler.key] = handler
        logger.debug(f"不變量已註冊: {handler.suite}/{handler.name}")

    def unregister(self, suite: str, name: str):
        """取消註冊；鍵不存在時不做任何事"""
        if (suite, name) in self._handlers:
            del self._handlers[(suite, name)]
            logger.info(f"不變量已取消註冊: {suite}/{name}")

    def get_handler(self, suite: str, name: str) -> Optional[InvariantHandler]:
        """依 (suite, name) 查詢；不存在時返回 None"""
        return self._handlers.get((suite, name))

    def get_all_handlers(self) -> Dict[Tuple[str, str], InvariantHandler]:
        """返回處理器字典的副本"""
        return self._handlers.copy()

    def handlers_for(self, suite: str) -> List[InvariantHandler]:
        """
        取得某個套件的所有處理器

        Returns:
            List[InvariantHandler]: 依名稱排序的處理器列表
        """
        return sorted((h for h in self._handlers.values() if h.suite == suite), key=lambda h: h.name)

    def suites(self) -> List[str]:
        """已註冊的套件，依 SUITES 的順序"""
        present = {h.suite for h in self._handlers.values()}
        return [s for s in SUITES if s in present]

    def get_stats(self) -> Dict[str, Dict[str, Any]]:
        """
        取得所有處理器的統計資訊

        Returns:
            Dict[str, Dict[str, Any]]: 鍵是 'suite/name'
        """
        return {
            f"{suite}/{name}": handler.get_stats()
            for (suite, name), handler in sorted(self._handlers.items())
        }

    def reset_stats(self):
        """重置所有處理器的統計資訊"""
        for handler in self._handlers.values():
            handler.reset_stats()

    def __len__(self) -> int:
        return len(self._handlers)
