"""
YML 配置檔案載入器

這個模組提供了 ConfigLoader 類別，用於從 YAML 配置檔案載入執行設定。

配置檔案格式範例：
    search:
      idempotent_budget: 256
    campaign:
      max_workers: 4
      seed: 0
      round_trip_samples: 3
      suites: [validation, algebra]
      families:
        - triangular(1,2,1)
        - family: direct_sum
          args: [m2, q]
    logging:
      level: WARNING

Library 說明：
- yaml.safe_load() 只建立基本型別（dict、list、str、int），不會執行檔案中的標籤
- 空檔案解析結果是 None，這裡當作空字典
- dataclasses.replace() 建立修改部分欄位的新 Settings，原物件不變
"""
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from .algebra import DEFAULT_IDEMPOTENT_BUDGET
from .errors import InputError
from .invariant_handler import SUITES

logger = logging.getLogger(__name__)

# 專案根目錄下的預設配置檔案
DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / 'config' / 'liederiv.yml'

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


@dataclass(frozen=True)
class Settings:
    """
    執行設定

    Attributes:
        idempotent_budget: 冪等元搜尋的模式預算
        max_workers: 測試活動的執行緒數
        suites: 要執行的套件
        seed: 族產生與隨機抽樣的種子
        round_trip_samples: 每個實例的證書往返抽樣次數
        families: 加入內建語料庫的族描述
        log_level: 日誌等級
    """
    idempotent_budget: int = DEFAULT_IDEMPOTENT_BUDGET
    max_workers: int = 4
    suites: Tuple[str, ...] = SUITES
    seed: int = 0
    round_trip_samples: int = 3
    families: Tuple[Union[str, Dict[str, Any]], ...] = field(default_factory=tuple)
    log_level: str = 'WARNING'

    def with_overrides(self, **overrides: Any) -> 'Settings':
        """以非 None 的值覆蓋設定，返回新的 Settings"""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _int_field(section: Dict[str, Any], key: str, default: int, minimum: int) -> int:
    """讀取整數設定並檢查下限"""
    value = section.get(key, default)
    # bool 是 int 的子類別，要另外排除
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InputError('schema-error', f"設定 {key} 必須是 >= {minimum} 的整數，實際為 {value!r}")
    return value


def _section(config: Dict[str, Any], key: str) -> Dict[str, Any]:
    """取出一個區段；區段不存在或為 null 時返回空字典"""
    section = config.get(key) or {}
    if not isinstance(section, dict):
        raise InputError('schema-error', f"設定區段 {key} 必須是字典")
    return section


class ConfigLoader:
    """
    配置檔案載入器類別

    所有方法都是靜態方法，可以直接透過類別呼叫。
    """

    @staticmethod
    def load_from_file(file_path: Union[str, Path]) -> Dict[str, Any]:
        """
        從 YML 檔案載入配置

        Args:
            file_path: YML 檔案的路徑

        Returns:
            Dict[str, Any]: 解析後的配置字典（空檔案返回空字典）

        Raises:
            FileNotFoundError: 配置檔案不存在
            InputError: 頂層不是字典（代碼 schema-error）
        """
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"配置檔案不存在: {file_path}")
        with open(path, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f) or {}
        if not isinstance(config, dict):
            raise InputError('schema-error', f"配置檔案的頂層必須是字典: {file_path}")
        logger.info(f"配置檔案已載入: {file_path}")
        return config

    @staticmethod
    def parse_suites(config: Dict[str, Any]) -> Tuple[str, ...]:
        """
        解析要執行的套件

        Raises:
            InputError: 未知的套件名稱（代碼 unknown-suite）
        """
        suites = _section(config, 'campaign').get('suites')
        if suites is None or suites == 'all':
            return SUITES
        # 單一字串視為只有一個元素的列表
        if isinstance(suites, str):
            suites = [suites]
        unknown = [s for s in suites if s not in SUITES]
        if unknown:
            raise InputError('unknown-suite', f"未知的套件: {unknown}", known=list(SUITES))
        # 依 SUITES 的順序，和檔案中的順序無關
        return tuple(s for s in SUITES if s in suites)

    @staticmethod
    def parse_families(config: Dict[str, Any]) -> List[Union[str, Dict[str, Any]]]:
        """
        解析族描述列表

        每個元素可以是字串 "triangular(1,2,1)" 或字典 {family, args}；
        這裡只檢查形狀，族名稱在產生實例時才檢查。
        """
        families = _section(config, 'campaign').get('families') or []
        if not isinstance(families, list):
            raise InputError('schema-error', "campaign.families 必須是列表")
        parsed = []
        for entry in families:
            if isinstance(entry, str):
                parsed.append(entry)
            elif isinstance(entry, dict) and 'family' in entry:
                parsed.append({'family': entry['family'], 'args': list(entry.get('args', []))})
            else:
                raise InputError('schema-error', f"無法解析的族描述: {entry!r}")
        return parsed

    @staticmethod
    def parse_settings(config: Dict[str, Any]) -> Settings:
        """
        把配置字典轉換為 Settings，缺少的鍵使用預設值

        Raises:
            InputError: 值的型別或範圍錯誤（代碼 schema-error）
        """
        search = _section(config, 'search')
        campaign = _section(config, 'campaign')
        level = str(_section(config, 'logging').get('level', 'WARNING')).upper()
        if level not in LOG_LEVELS:
            raise InputError('schema-error', f"未知的日誌等級: {level}")
        return Settings(
            idempotent_budget=_int_field(search, 'idempotent_budget', DEFAULT_IDEMPOTENT_BUDGET, 1),
            max_workers=_int_field(campaign, 'max_workers', 4, 1),
            suites=ConfigLoader.parse_suites(config),
            seed=_int_field(campaign, 'seed', 0, 0),
            round_trip_samples=_int_field(campaign, 'round_trip_samples', 3, 0),
            families=tuple(ConfigLoader.parse_families(config)),
            log_level=level,
        )

    @staticmethod
    def load_settings(file_path: Optional[Union[str, Path]] = None) -> Settings:
        """
        載入設定

        Args:
            file_path: 配置檔案；None 時使用專案的預設檔案，預設檔案不存在則使用內建預設值

        Returns:
            Settings: 合併後的設定
        """
        if file_path is None:
            if not DEFAULT_CONFIG_PATH.exists():
                return Settings()
            file_path = DEFAULT_CONFIG_PATH
        return ConfigLoader.parse_settings(ConfigLoader.load_from_file(file_path))
