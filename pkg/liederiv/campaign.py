"""
測試活動執行器

CampaignRunner 對每個實例依序執行選定的不變量套件，實例之間以執行緒池平行處理。
validation 套件永遠先執行；只要其中有任何失敗或錯誤，該實例的其他套件全部記錄為 'skip'。

每一筆紀錄是 {instance, suite, invariant, status, details}，status 為：
- pass: 不變量成立
- fail: 不變量不成立（InvariantFailure）
- error: 檢查過程拋出其他例外
- skip: 前置條件不滿足或 validation 沒有通過

Library 說明：
- concurrent.futures.ThreadPoolExecutor 管理一組工作執行緒，with 區塊結束時會等待所有工作完成
- pool.map() 依輸入順序回傳結果；報告最後還會重新排序，所以執行順序不影響輸出
- 每個實例由同一個執行緒從頭做到尾，validation 門檻不需要跨執行緒同步
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence

from . import suites as _builtin_suites  # noqa: F401  註冊內建不變量
from .config_loader import Settings
from .corpus import CorpusInstance
from .errors import InputError, InvariantFailure
from .invariant_handler import SUITES, InvariantRegistry
from .invariants import get_global_registry

logger = logging.getLogger(__name__)

PASS, FAIL, ERROR, SKIP = 'pass', 'fail', 'error', 'skip'


@dataclass(frozen=True)
class CampaignRecord:
    """一個 (實例, 套件, 不變量) 的執行結果"""
    instance: str
    suite: str
    invariant: str
    status: str
    details: Dict[str, Any] = field(default_factory=dict)

    def sort_key(self):
        """排序鍵：套件依 SUITES 的順序，而不是字母順序"""
        return self.instance, SUITES.index(self.suite), self.invariant

    def to_dict(self) -> Dict[str, Any]:
        return {
            'instance': self.instance,
            'suite': self.suite,
            'invariant': self.invariant,
            'status': self.status,
            'details': self.details,
        }


@dataclass(frozen=True)
class CampaignReport:
    """
    測試活動報告

    Attributes:
        records: 依 (instance, suite, invariant) 排序的紀錄
    """
    records: Sequence[CampaignRecord] = ()

    def counts(self) -> Dict[str, int]:
        """各狀態的紀錄數；四種狀態都會出現，即使數量是 0"""
        counts = {PASS: 0, FAIL: 0, ERROR: 0, SKIP: 0}
        for record in self.records:
            counts[record.status] += 1
        return counts

    @property
    def ok(self) -> bool:
        """沒有 fail 也沒有 error；skip 不算失敗"""
        counts = self.counts()
        return counts[FAIL] == 0 and counts[ERROR] == 0

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def failures(self) -> List[CampaignRecord]:
        """fail 與 error 紀錄"""
        return [r for r in self.records if r.status in (FAIL, ERROR)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'format': 'liederiv/1',
            'kind': 'campaign-report',
            # instances 是不重複的實例數，空活動時為 0
            'summary': dict(self.counts(), instances=len({r.instance for r in self.records})),
            'records': [r.to_dict() for r in self.records],
        }


def _error_details(e: Exception) -> Dict[str, Any]:
    """把例外轉成 error 紀錄的 details"""
    details: Dict[str, Any] = {'error': type(e).__name__, 'message': str(e)}
    if isinstance(e, InputError):
        details['code'] = e.code
    # ConsistencyError 帶有 check 屬性，其他例外沒有
    check = getattr(e, 'check', None)
    if check:
        details['check'] = check
    return details


class CampaignRunner:
    """
    測試活動執行器類別

    Args:
        settings: 執行設定；None 時使用預設值
        registry: 不變量註冊表；None 時使用全域註冊表
    """

    def __init__(self, settings: Optional[Settings] = None, registry: Optional[InvariantRegistry] = None):
        self.settings = settings or Settings()
        self.registry = registry if registry is not None else get_global_registry()

    def _selected_suites(self, suites: Optional[Iterable[str]]) -> List[str]:
        """檢查套件名稱，並依 SUITES 的順序排列"""
        requested = list(suites) if suites is not None else list(self.settings.suites)
        unknown = [s for s in requested if s not in SUITES]
        if unknown:
            raise InputError('unknown-suite', f"未知的套件: {unknown}", known=list(SUITES))
        # validation 永遠執行，作為其他套件的門檻
        return [s for s in SUITES if s == 'validation' or s in requested]

    def run_instance(self, instance: CorpusInstance, suites: Sequence[str]) -> List[CampaignRecord]:
        """
        對單一實例執行套件

        Returns:
            List[CampaignRecord]: 這個實例的所有紀錄
        """
        records: List[CampaignRecord] = []
        # validation 通過之前 gate_open 一直是 True
        gate_open = True
        for suite in suites:
            for handler in self.registry.handlers_for(suite):
                if not gate_open:
                    records.append(CampaignRecord(instance.name, suite, handler.name, SKIP,
                                                  {'reason': 'validation-failed'}))
                    continue
                if not handler.applies_to(instance):
                    records.append(CampaignRecord(instance.name, suite, handler.name, SKIP,
                                                  {'reason': 'requires', 'requires': list(handler.requires)}))
                    continue
                # InvariantFailure 是 fail，其他例外都是 error
                try:
                    details = handler.execute(instance, self.settings)
                    records.append(CampaignRecord(instance.name, suite, handler.name, PASS, details))
                except InvariantFailure as e:
                    records.append(CampaignRecord(instance.name, suite, handler.name, FAIL,
                                                  dict(e.details, message=e.message)))
                except Exception as e:
                    records.append(CampaignRecord(instance.name, suite, handler.name, ERROR, _error_details(e)))
            if suite == 'validation':
                # 此時 records 只有 validation 的紀錄
                gate_open = all(r.status in (PASS, SKIP) for r in records)
                if not gate_open:
                    logger.warning(f"實例 {instance.name} 沒有通過 validation，其他套件將略過")
        return records

    def run(self, instances: Sequence[CorpusInstance], suites: Optional[Iterable[str]] = None) -> CampaignReport:
        """
        執行測試活動

        Args:
            instances: 實例列表
            suites: 套件選擇；None 時使用設定中的套件

        Returns:
            CampaignReport: 排序後的報告（與執行順序無關）

        Raises:
            InputError: 未知的套件（代碼 unknown-suite）
        """
        selected = self._selected_suites(suites)
        instances = list(instances)
        logger.info(f"測試活動開始: {len(instances)} 個實例，套件 {selected}")
        records: List[CampaignRecord] = []
        if instances:
            # 執行緒數不超過實例數
            workers = max(1, min(self.settings.max_workers, len(instances)))
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for batch in pool.map(lambda inst: self.run_instance(inst, selected), instances):
                    records.extend(batch)
        report = CampaignReport(tuple(sorted(records, key=CampaignRecord.sort_key)))
        logger.info(f"測試活動結束: {report.counts()}")
        return report


def run_campaign(instances: Sequence[CorpusInstance], suites: Optional[Iterable[str]] = None,
                 settings: Optional[Settings] = None, registry: Optional[InvariantRegistry] = None) -> CampaignReport:
    """
    以 CampaignRunner 執行測試活動的便利函數

    Args:
        instances: 實例列表（可以是空的）
        suites: 套件選擇
        settings: 執行設定
        registry: 不變量註冊表

    Returns:
        CampaignReport: exit_code 為 0（全部通過或略過）或 1
    """
    return CampaignRunner(settings, registry).run(instances, suites)
