"""
測試 InvariantHandler、InvariantRegistry 與 @invariant 裝飾器

測試內容：
1. 不變量處理器初始化
2. 執行檢查（通過、不成立、錯誤）與統計資訊
3. 前置條件判定
4. 註冊表操作（註冊、取消註冊、依套件查詢）
5. @invariant 裝飾器註冊到全域註冊表或指定的註冊表
6. ensure 輔助函數

測試策略：
- 使用簡單的檢查函數，避免依賴真正的代數計算
- 使用 Mock 物件模擬語料庫實例
- 使用 registry fixture 隔離全域註冊表
"""
# 匯入 pytest 測試框架
import pytest

# 從 datetime 模組匯入 datetime 類別
# 用於驗證 last_execution_time 是否正確設定
from datetime import datetime

# Mock 用於建立模擬的語料庫實例，只需要提供 module、idempotent、triangular 屬性
from unittest.mock import Mock

from liederiv.errors import InputError, InvariantFailure
from liederiv.invariant_handler import SUITES, InvariantHandler, InvariantRegistry
from liederiv.invariants import ensure, get_global_registry, invariant


def _instance(module=None, idempotent=None, triangular=None, summands=None):
    # 模擬的實例，只需要前置條件用到的屬性
    return Mock(module=module, idempotent=idempotent, triangular=triangular, summands=summands)


def test_invariant_handler_initialization():
    """
    測試不變量處理器初始化

    這個測試驗證 InvariantHandler 在建立時是否正確初始化所有屬性。
    """
    handler = InvariantHandler('algebra', 'center-commutes', lambda i, s: None, requires=('module',))

    # 斷言：鍵是 (suite, name)
    assert handler.key == ('algebra', 'center-commutes')
    assert handler.requires == ('module',)

    # 斷言：統計變數初始化為 0 或 None
    assert handler.execution_count == 0
    assert handler.failure_count == 0
    assert handler.error_count == 0
    assert handler.last_execution_time is None
    assert handler.last_error is None


def test_invariant_handler_execute_pass():
    """
    測試檢查通過

    檢查函數的返回值就是診斷資訊；返回 None 時得到空字典。
    """
    calls = []

    def check(instance, settings):
        calls.append((instance, settings))
        return {'dim': 3}

    handler = InvariantHandler('algebra', 'dims', check)
    instance = _instance()

    # 執行檢查，回傳診斷資訊
    assert handler.execute(instance, 'settings') == {'dim': 3}

    # 斷言：函數被呼叫一次，參數原樣傳入
    assert calls == [(instance, 'settings')]
    assert handler.execution_count == 1
    assert isinstance(handler.last_execution_time, datetime)

    # 返回 None 的檢查函數
    quiet = InvariantHandler('algebra', 'quiet', lambda i, s: None)
    assert quiet.execute(instance, None) == {}


def test_invariant_handler_execute_failure():
    """
    測試不變量不成立

    InvariantFailure 會被記錄為失敗並重新拋出。
    """
    def check(instance, settings):
        raise InvariantFailure("維度不符", expected=2, actual=3)

    handler = InvariantHandler('derivations', 'dims', check)

    with pytest.raises(InvariantFailure) as exc_info:
        handler.execute(_instance(), None)

    # 斷言：診斷資訊保留在例外上
    assert exc_info.value.details == {'expected': 2, 'actual': 3}
    assert handler.execution_count == 1
    assert handler.failure_count == 1
    assert handler.error_count == 0
    assert handler.last_error == "維度不符"


def test_invariant_handler_execute_error():
    """
    測試檢查執行錯誤

    其他例外記錄為錯誤（不是失敗）並重新拋出。
    """
    def check(instance, settings):
        raise ZeroDivisionError("division by zero")

    handler = InvariantHandler('algebra', 'broken', check)

    with pytest.raises(ZeroDivisionError):
        handler.execute(_instance(), None)

    assert handler.error_count == 1
    assert handler.failure_count == 0
    assert 'division by zero' in handler.last_error


def test_invariant_handler_get_stats():
    """測試取得統計資訊"""
    handler = InvariantHandler('algebra', 'dims', lambda i, s: None)
    handler.execute(_instance(), None)

    stats = handler.get_stats()

    assert stats['suite'] == 'algebra'
    assert stats['name'] == 'dims'
    assert stats['execution_count'] == 1
    assert stats['failure_count'] == 0
    assert stats['error_count'] == 0
    # 時間以 ISO 字串輸出
    assert isinstance(stats['last_execution_time'], str)
    assert stats['last_error'] is None


def test_invariant_handler_reset_stats():
    """測試重置統計資訊"""
    def check(instance, settings):
        raise InvariantFailure("不成立")

    handler = InvariantHandler('algebra', 'dims', check)
    with pytest.raises(InvariantFailure):
        handler.execute(_instance(), None)

    handler.reset_stats()

    assert handler.execution_count == 0
    assert handler.failure_count == 0
    assert handler.last_execution_time is None
    assert handler.last_error is None


def test_invariant_handler_applies_to():
    """
    測試前置條件

    'star' 需要模與冪等元；'triangular' 需要三角分解。
    'summands' 需要直和項。
    """
    star = InvariantHandler('extension', 'star-only', lambda i, s: None, requires=('star',))
    triangular = InvariantHandler('extension', 'tri-only', lambda i, s: None, requires=('triangular',))
    free = InvariantHandler('algebra', 'any', lambda i, s: None)

    bare = _instance()
    with_star = _instance(module=object(), idempotent=(1, 0))
    with_module_only = _instance(module=object())

    assert free.applies_to(bare)
    assert not star.applies_to(bare)
    assert not star.applies_to(with_module_only)
    assert star.applies_to(with_star)
    assert not triangular.applies_to(with_star)
    assert triangular.applies_to(_instance(triangular=('A', 'X', 'B')))

    summands = InvariantHandler('algebra', 'sum-only', lambda i, s: None, requires=('summands',))
    assert not summands.applies_to(bare)
    assert summands.applies_to(_instance(summands=('A', 'B')))


def test_invariant_registry():
    """
    測試不變量註冊表

    這個測試驗證註冊、查詢、依套件排序與取消註冊。
    """
    registry = InvariantRegistry()
    registry.register(InvariantHandler('properness', 'b-check', lambda i, s: None))
    registry.register(InvariantHandler('properness', 'a-check', lambda i, s: None))
    registry.register(InvariantHandler('validation', 'axioms', lambda i, s: None))

    assert len(registry) == 3
    assert registry.get_handler('validation', 'axioms').name == 'axioms'
    assert registry.get_handler('validation', 'missing') is None

    # 斷言：同一套件內依名稱排序
    assert [h.name for h in registry.handlers_for('properness')] == ['a-check', 'b-check']

    # 斷言：套件依 SUITES 的順序，而不是註冊順序
    assert registry.suites() == ['validation', 'properness']

    # 相同的鍵會覆蓋舊的處理器
    registry.register(InvariantHandler('validation', 'axioms', lambda i, s: {'new': True}))
    assert len(registry) == 3

    registry.unregister('properness', 'a-check')
    # 不存在的鍵不會拋出例外
    registry.unregister('properness', 'a-check')
    assert len(registry) == 2


def test_invariant_registry_get_all_and_stats():
    """get_all_handlers 返回副本；get_stats 以 'suite/name' 為鍵"""
    registry = InvariantRegistry()
    registry.register(InvariantHandler('algebra', 'dims', lambda i, s: None))

    handlers = registry.get_all_handlers()
    handlers.clear()
    assert len(registry) == 1

    stats = registry.get_stats()
    assert list(stats) == ['algebra/dims']
    assert stats['algebra/dims']['execution_count'] == 0


def test_invariant_decorator_registers_globally(registry):
    """
    測試 @invariant 裝飾器

    registry fixture 已經把全域註冊表換成空的註冊表。
    被裝飾的函數仍然可以直接呼叫。
    """
    @invariant('algebra')
    def center_is_small(instance, settings):
        return {'called': True}

    # 斷言：預設名稱是函數名稱，底線換成連字號
    assert center_is_small.invariant_key == ('algebra', 'center-is-small')
    assert get_global_registry() is registry
    assert registry.get_handler('algebra', 'center-is-small') is not None

    # 斷言：函數本身沒有被改變
    assert center_is_small(None, None) == {'called': True}
    assert center_is_small.__name__ == 'center_is_small'


def test_invariant_decorator_with_explicit_registry(registry):
    """指定 registry 時不會註冊到全域註冊表"""
    target = InvariantRegistry()

    @invariant('lemma', 'custom', requires=('module',), registry=target)
    def custom(instance, settings):
        return None

    assert target.get_handler('lemma', 'custom').requires == ('module',)
    assert len(registry) == 0


def test_invariant_decorator_rejects_unknown_suite():
    with pytest.raises(InputError) as exc_info:
        invariant('not-a-suite')
    assert exc_info.value.code == 'unknown-suite'
    assert exc_info.value.details['known'] == list(SUITES)


def test_invariant_decorator_rejects_unknown_requirement():
    with pytest.raises(InputError) as exc_info:
        invariant('algebra', requires=('commutative',))
    assert exc_info.value.code == 'schema-error'


def test_ensure():
    """ensure 條件成立時不做任何事，不成立時拋出 InvariantFailure"""
    ensure(True, "不會拋出")
    with pytest.raises(InvariantFailure) as exc_info:
        ensure(0, "維度為零", dim=0)
    assert exc_info.value.message == "維度為零"
    assert exc_info.value.details == {'dim': 0}
