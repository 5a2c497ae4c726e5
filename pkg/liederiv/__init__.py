"""
liederiv - 有限維結合代數的 Lie 導子判定工具

在有理數域上以精確算術計算導子空間、Lie 導子空間，
判定 Lie 導子是否適當，並檢查平凡擴張 A⋉X 具有 Lie 導子性質的條件。

主要模組：
- exact: 有理數矩陣、子空間與線性方程組
- algebra: 結構常數代數、雙模、中心、角代數、冪等元搜尋
- extension: 平凡擴張、條件 pxq = x、三角代數
- derivations: 導子與 Lie 導子空間、區塊分解
- properness: 適當性判定與各種充分條件
- corpus: 內建實例與參數化的族
- campaign: 以不變量套件檢查實例的測試活動
- cli: 命令列介面

Library 說明：
- 係數是 fractions.Fraction，RREF 與核交給 sympy 的 DomainMatrix（QQ 上的精確矩陣），沒有浮點數
- pydantic 驗證 JSON 輸入，PyYAML 讀取設定檔
"""
# 代數、雙模與 Peirce 分解相關的基本運算
from .algebra import (
    Bimodule,
    StructureAlgebra,
    center,
    commutator_subspace,
    corner,
    find_idempotents,
    subalgebra_closure,
    validate_algebra,
    validate_bimodule,
    w_subalgebra,
)
# 測試活動：執行器與報告
from .campaign import CampaignReport, CampaignRunner, run_campaign
# YAML 設定
from .config_loader import ConfigLoader, Settings
# 內建實例與參數化的族
from .corpus import builtin_corpus, builtin_instance, generate_family
# 導子與 Lie 導子空間
from .derivations import (
    LinearEndomap,
    check_derivation_conditions,
    check_lie_conditions,
    decompose_map,
    derivation_space,
    inner_derivations,
    lie_derivation_space,
)
# 例外類別
from .errors import ConsistencyError, InputError, InvariantFailure, LieDerivError
# 平凡擴張與條件 pxq = x
from .extension import (
    StarContext,
    TrivialExtension,
    build_trivial_extension,
    build_triangular,
    center_via_formula,
    check_simplifications,
    check_star,
)
# 不變量註冊與裝飾器
from .invariant_handler import InvariantHandler, InvariantRegistry
from .invariants import get_global_registry, invariant
# 適當性判定與充分條件
from .properness import (
    center_projection_equalities,
    central_ideal_free,
    central_killing_commutators,
    characterization_report,
    characterize_properness,
    faithful_left,
    faithful_right,
    has_lie_derivation_property,
    is_proper,
    loyalty,
    sufficiency_check,
    tau_isomorphism,
    triangular_sufficiency_check,
)

# 模組版本號
__version__ = '1.0.0'

# 公開 API，依模組分組
__all__ = [
    # algebra
    'StructureAlgebra',
    'Bimodule',
    'validate_algebra',
    'validate_bimodule',
    'center',
    'commutator_subspace',
    'corner',
    'subalgebra_closure',
    'find_idempotents',
    'w_subalgebra',
    # extension
    'TrivialExtension',
    'StarContext',
    'build_trivial_extension',
    'build_triangular',
    'check_star',
    'check_simplifications',
    'center_via_formula',
    # derivations
    'LinearEndomap',
    'derivation_space',
    'lie_derivation_space',
    'inner_derivations',
    'decompose_map',
    'check_lie_conditions',
    'check_derivation_conditions',
    # properness
    'central_killing_commutators',
    'is_proper',
    'has_lie_derivation_property',
    'characterize_properness',
    'characterization_report',
    'sufficiency_check',
    'triangular_sufficiency_check',
    'loyalty',
    'tau_isomorphism',
    'central_ideal_free',
    'faithful_left',
    'faithful_right',
    'center_projection_equalities',
    # corpus 與測試活動
    'builtin_corpus',
    'builtin_instance',
    'generate_family',
    'CampaignRunner',
    'CampaignReport',
    'run_campaign',
    'InvariantHandler',
    'InvariantRegistry',
    'invariant',
    'get_global_registry',
    # 設定與例外
    'ConfigLoader',
    'Settings',
    'LieDerivError',
    'InputError',
    'ConsistencyError',
    'InvariantFailure',
]
