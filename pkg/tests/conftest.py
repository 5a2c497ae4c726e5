"""
Pytest 配置檔案

這個檔案是 pytest 的配置檔案，用於設定測試環境和共享的測試資源。

conftest.py 說明：
- conftest.py 是 pytest 的特殊檔案，會被自動載入
- 在這個檔案中定義的 fixture 可以在所有測試文件中使用
- 不需要明確匯入，pytest 會自動發現並載入

Fixture 說明：
- 代數 fixture（t2、m2、m4 等）直接取自內建語料庫
- registry fixture 提供一個空的註冊表，並在測試結束後還原全域註冊表
- write_json 把字典寫成 tmp_path 下的 JSON 檔案，供 CLI 測試使用
"""
# 匯入 pytest 測試框架
import pytest

# 匯入 json 模組，用於寫出測試用的 JSON 檔案
import json

# 匯入 sys 模組
# sys.path 是 Python 的模組搜尋路徑列表
import sys

# 從 pathlib 模組匯入 Path 類別
from pathlib import Path

# 添加專案根目錄到 Python 模組搜尋路徑
# 這樣測試文件就可以匯入專案中的模組了
# .parent 取得 tests 目錄，再一次 .parent 取得專案根目錄
project_root = Path(__file__).parent.parent

# 插入到搜尋路徑的最前面（優先搜尋）
sys.path.insert(0, str(project_root))


@pytest.fixture
def t2():
    """
    T₂ = Tri(ℚ, ℚ, ℚ) 的語料庫實例

    Returns:
        CorpusInstance: 代數是 ℚ ⊕ ℚ，模是 ℚ，p = (1, 0)
    """
    # 在函數內部匯入，避免在收集測試時就建立整個語料庫
    from liederiv.corpus import builtin_instance
    return builtin_instance('t2')


@pytest.fixture
def m4():
    """M₄ 的 5 維子代數實例（X = ℚ，p = E33）"""
    from liederiv.corpus import builtin_instance
    return builtin_instance('m4_subalgebra')


@pytest.fixture
def m2():
    """M₂(ℚ)"""
    from liederiv.corpus import matrix_algebra
    return matrix_algebra(2)


@pytest.fixture
def settings():
    """預設設定；round_trip_samples 調小讓測試快一點"""
    from liederiv.config_loader import Settings
    return Settings(round_trip_samples=2, max_workers=2)


@pytest.fixture
def registry():
    """
    提供空的不變量註冊表 fixture

    測試期間這個註冊表就是全域註冊表，測試結束後還原。

    Yields:
        InvariantRegistry: 空的註冊表
    """
    from liederiv.invariant_handler import InvariantRegistry
    from liederiv.invariants import set_global_registry

    fresh = InvariantRegistry()
    previous = set_global_registry(fresh)
    yield fresh
    # 還原全域註冊表，避免影響其他測試
    set_global_registry(previous)


@pytest.fixture
def write_json(tmp_path):
    """
    把字典寫成 JSON 檔案的輔助函數

    使用方式：
        def test_something(write_json):
            path = write_json('a.json', {...})
    """
    def _write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document, ensure_ascii=False), encoding='utf-8')
        return str(path)

    return _write
