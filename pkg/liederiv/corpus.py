"""
內建語料庫與構造族

這個模組產生小型、合法的代數與雙模實例，供不變量測試活動（campaign）使用：
- 內建實例：M₄ 的 5 維子代數（X = ℚ）、T₂、Tri(M₂, M₂, M₂)、對偶數、ℚ³、M₂、T₃ 等
- 構造族：triangular、direct_sum、corner_of、trivial_extension_of、scalar_extension

所有構造都是由保證結合律的操作組成（矩陣單位張成的子代數、直和、張量積、角代數），
從不隨機產生原始結構常數張量。

Library 說明：
- random: 構造族以 random.Random(seed) 選取冪等元、非平方數與附著位置，相同種子產生相同實例
- re: 解析 "triangular(1,2,1)" 這類族描述
- dataclasses: field(default_factory=dict) 讓每個實例有自己的空字典，不共用同一個預設物件
- functools.lru_cache: 內建語料庫只建立一次；cached_property: 擴張與 (*) context 在第一次使用時才建立
"""
import logging
# random: 可重現的隨機選擇
import random
# re: 正規表示式
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra import (
    Bimodule,
    StructureAlgebra,
    center,
    corner,
    direct_sum,
    find_idempotents,
    tensor_product,
)
from .errors import InputError
from .exact import ONE, ZERO, Vector, zero_vector
from .extension import (
    StarContext,
    TriangularBuild,
    TrivialExtension,
    build_trivial_extension,
    build_triangular,
    check_star,
    lift_module,
)

logger = logging.getLogger(__name__)

# 預期事實的來源標記
PROVENANCES = ('paper', 'trivial', 'derived')

# generate_family 認得的構造族名稱
FAMILIES = ('triangular', 'direct_sum', 'corner_of', 'trivial_extension_of', 'scalar_extension')

# scalar_extension 使用的非平方數
NON_SQUARES = (2, 3, 5, 6, 7)


@dataclass(frozen=True)
class Expectation:
    """
    一個預期事實

    Attributes:
        value: 預期值（維度、布林判定或結論字串）
        provenance: 來源 'paper'、'trivial' 或 'derived'
        oracle: derived 事實的驗證方法
    """
    value: Any
    provenance: str
    oracle: str = ''

    def __post_init__(self):
        """dataclass 的 __init__ 完成後自動呼叫，在這裡檢查來源標記"""
        if self.provenance not in PROVENANCES:
            raise InputError('schema-error', f"未知的來源標記: {self.provenance}")
        if self.provenance == 'derived' and not self.oracle:
            raise InputError('schema-error', "derived 事實必須註明驗證方法")


def paper(value: Any) -> Expectation:
    """來源是文獻中明確寫出的事實"""
    return Expectation(value, 'paper')


def trivial(value: Any) -> Expectation:
    """直接由構造得出的事實（例如維度相加）"""
    return Expectation(value, 'trivial')


def derived(value: Any, oracle: str) -> Expectation:
    """另外推導的事實，oracle 說明如何驗證"""
    return Expectation(value, 'derived', oracle)


@dataclass(frozen=True, eq=False)
class CorpusInstance:
    """
    語料庫實例

    Attributes:
        name: 實例名稱
        algebra: 基底代數 A（三角實例是 A ⊕ B）
        module: A-雙模（可省略）
        idempotent: 滿足 pxq = x 的冪等元座標（可省略）
        expected: 預期事實，鍵如 'total.center.dim'
        triangular: 三角實例的 (A, X, B)
        summands: 基底代數是直和 A ⊕ B 時的 (A, B)
        description: 說明
    """
    name: str
    algebra: StructureAlgebra
    module: Optional[Bimodule] = None
    idempotent: Optional[Vector] = None
    expected: Dict[str, Expectation] = field(default_factory=dict)
    triangular: Optional[Tuple[StructureAlgebra, Bimodule, StructureAlgebra]] = None
    summands: Optional[Tuple[StructureAlgebra, StructureAlgebra]] = None
    description: str = ''

    # eq=False 讓實例以 id 比較與雜湊，cached_property 需要可寫入的 __dict__
    @cached_property
    def extension(self) -> Optional[TrivialExtension]:
        """A⋉X；沒有模時為 None"""
        if self.module is None:
            return None
        return build_trivial_extension(self.algebra, self.module)

    @cached_property
    def star_context(self) -> Optional[StarContext]:
        """pxq = x 成立時的 context；沒有冪等元、沒有模或條件不成立時為 None"""
        if self.idempotent is None or self.extension is None:
            return None
        return check_star(self.extension, self.idempotent).context

    @cached_property
    def triangular_build(self) -> Optional[TriangularBuild]:
        """三角實例的 Tri(A, X, B) 構造"""
        if self.triangular is None:
            return None
        # *self.triangular 把 (A, X, B) 展開成三個位置參數
        return build_triangular(*self.triangular)

    @property
    def primary(self) -> StructureAlgebra:
        """實例的主要代數：有模時是 A⋉X，否則是 A"""
        ext = self.extension
        return ext.total if ext is not None else self.algebra


def matrix_subalgebra(n: int, positions: Sequence[Tuple[int, int]],
                      labels: Optional[Sequence[str]] = None) -> StructureAlgebra:
    """
    由矩陣單位 E_ij（0-based 位置）張成的 M_n 子代數

    E_ij·E_kl = δ_jk E_il，基底順序就是 positions 的順序。

    Raises:
        InputError: 位置重複、缺少對角位置或乘法不封閉（代碼 invalid-algebra）
    """
    positions = [tuple(p) for p in positions]
    # 位置 → 基底索引
    index = {pos: t for t, pos in enumerate(positions)}
    # 有重複位置時字典的大小會變小
    if len(index) != len(positions):
        raise InputError('invalid-algebra', "矩陣單位位置重複")
    for i in range(n):
        if (i, i) not in index:
            raise InputError('invalid-algebra', f"缺少對角位置 ({i}, {i})，無法包含單位矩陣")
    dim = len(positions)
    mul = []
    for (i, j) in positions:
        plane = []
        for (k, l) in positions:
            vector = [ZERO] * dim
            # E_ij·E_kl 只有在 j == k 時不為零
            if j == k:
                # 結果 E_il 必須也在張成空間中，否則不是子代數
                if (i, l) not in index:
                    raise InputError('invalid-algebra', f"E{i}{j}·E{k}{l} 不在張成空間中")
                vector[index[(i, l)]] = ONE
            plane.append(tuple(vector))
        mul.append(tuple(plane))
    # 單位矩陣是所有對角矩陣單位的和
    unit = tuple(ONE if i == j else ZERO for (i, j) in positions)
    # 標籤用 1-based 的 E11、E12、...
    if labels is None:
        labels = [f"E{i + 1}{j + 1}" for (i, j) in positions]
    return StructureAlgebra(dim, tuple(labels), tuple(mul), unit)


def matrix_algebra(n: int) -> StructureAlgebra:
    """全矩陣代數 M_n(ℚ)"""
    return matrix_subalgebra(n, [(i, j) for i in range(n) for j in range(n)])


def upper_triangular(n: int) -> StructureAlgebra:
    """上三角矩陣代數 T_n(ℚ)"""
    return matrix_subalgebra(n, [(i, j) for i in range(n) for j in range(i, n)])


def diagonal_algebra(n: int, prefix: str = 'e') -> StructureAlgebra:
    """ℚ^n（逐點乘法）"""
    return matrix_subalgebra(n, [(i, i) for i in range(n)], [f"{prefix}{i + 1}" for i in range(n)])


def scalar_algebra() -> StructureAlgebra:
    """一維代數 ℚ"""
    return StructureAlgebra.create([[[1]]], [1], ['1'])


def dual_numbers() -> StructureAlgebra:
    """ℚ[ε]/(ε²)"""
    return StructureAlgebra.create([[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0], ['1', 'eps'])


def quadratic_field(d: int) -> StructureAlgebra:
    """ℚ(√d)，基底 (1, r)，r² = d"""
    return StructureAlgebra.create([[[1, 0], [0, 1]], [[0, 1], [d, 0]]], [1, 0], ['1', f"sqrt{d}"])


def regular_bimodule(a: StructureAlgebra) -> Bimodule:
    """A 作為自己的雙模"""
    return Bimodule.regular(a)


def matrix_bimodule(rows: int, cols: int, left_positions: Sequence[Tuple[int, int]],
                    right_positions: Sequence[Tuple[int, int]]) -> Bimodule:
    """
    矩形矩陣空間 ℚ^{rows x cols} 作為 (左矩陣子代數, 右矩陣子代數)-雙模

    X 的基底 F_kl 的索引為 k * cols + l；E_ij·F_kl = δ_jk F_il，F_kl·E_ij = δ_li F_kj。
    """
    dim = rows * cols
    # 左作用：E_ij 把第 j 列搬到第 i 列
    left = []
    for (i, j) in left_positions:
        plane = []
        for k in range(rows):
            for l in range(cols):
                vector = [ZERO] * dim
                if j == k:
                    vector[i * cols + l] = ONE
                plane.append(tuple(vector))
        left.append(tuple(plane))
    # 右作用：E_ij 把第 i 行搬到第 j 行
    right = []
    for k in range(rows):
        for l in range(cols):
            plane = []
            for (i, j) in right_positions:
                vector = [ZERO] * dim
                if l == i:
                    vector[k * cols + j] = ONE
                plane.append(tuple(vector))
            right.append(tuple(plane))
    labels = tuple(f"X{k + 1}{l + 1}" for k in range(rows) for l in range(cols))
    return Bimodule(dim, len(left_positions), len(right_positions), tuple(left), tuple(right), labels)


def attached_bimodule(n_left: int, n_right: int, pairs: Sequence[Tuple[int, int]]) -> Bimodule:
    """
    (ℚ^n_left, ℚ^n_right)-雙模：第 t 個基底向量 x_t 滿足 e_α x_t = x_t、x_t f_β = x_t，(α, β) = pairs[t]
    """
    dim = len(pairs)
    # e_i x_t = x_t 當 i 是 x_t 的左附著點，否則為 0
    left = tuple(
        tuple(tuple(ONE if (k == t and i == pairs[t][0]) else ZERO for k in range(dim)) for t in range(dim))
        for i in range(n_left)
    )
    # x_t f_i = x_t 當 i 是 x_t 的右附著點，否則為 0
    right = tuple(
        tuple(tuple(ONE if (k == t and i == pairs[t][1]) else ZERO for k in range(dim)) for i in range(n_right))
        for t in range(dim)
    )
    return Bimodule(dim, n_left, n_right, left, right, tuple(f"x{t + 1}" for t in range(dim)))


def tensor_bimodule(x: Bimodule, k: StructureAlgebra) -> Bimodule:
    """X ⊗ K 作為 (A ⊗ K, B ⊗ K)-雙模，索引慣例與 tensor_product 相同"""
    d = k.dim
    dim = x.dim * d

    def entry(block: Vector, factor: Vector) -> Vector:
        """X 的係數與 K 的係數的外積，索引 l * dim(K) + u"""
        return tuple(block[l] * factor[u] for l in range(x.dim) for u in range(d))

    left = tuple(
        tuple(entry(x.left[i][j], k.mul[s][t]) for j in range(x.dim) for t in range(d))
        for i in range(x.left_dim) for s in range(d)
    )
    right = tuple(
        tuple(entry(x.right[j][i], k.mul[t][s]) for i in range(x.right_dim) for s in range(d))
        for j in range(x.dim) for t in range(d)
    )
    labels = tuple(f"{lx}*{lk}" for lx in x.labels for lk in k.labels)
    return Bimodule(dim, x.left_dim * d, x.right_dim * d, left, right, labels)


def m4_subalgebra() -> StructureAlgebra:
    """
    M₄(ℚ) 中由 E11、E22、E23、E33、E44 張成的 5 維子代數，標籤 a, b, u, c, d
    """
    return matrix_subalgebra(4, [(0, 0), (1, 1), (1, 2), (2, 2), (3, 3)], ['a', 'b', 'u', 'c', 'd'])


def m4_module() -> Bimodule:
    """X = ℚ，左作用 (a_ij)·x = a₃₃x，右作用 x·(a_ij) = x a₂₂"""
    a = m4_subalgebra()
    # 只有 c = E33 在左邊、b = E22 在右邊作用為 1
    c, b = a.labels.index('c'), a.labels.index('b')
    left = [[[1 if i == c else 0]] for i in range(a.dim)]
    right = [[[1 if i == b else 0] for i in range(a.dim)]]
    return Bimodule.create(left, right, labels=['x'])


def _triangular_instance(name: str, a: StructureAlgebra, x: Bimodule, b: StructureAlgebra,
                         expected: Dict[str, Expectation], description: str = '') -> CorpusInstance:
    """
    三角實例：Tri(A, X, B) 表示成 (A ⊕ B)⋉X，p = (1_A, 0)

    lift_module 把 (A, B)-雙模 X 提升成 A ⊕ B 的雙模。
    """
    return CorpusInstance(
        name=name,
        algebra=direct_sum(a, b),
        module=lift_module(a, x, b),
        idempotent=a.unit + zero_vector(b.dim),
        expected=expected,
        triangular=(a, x, b),
        summands=(a, b),
        description=description,
    )


def _builtin() -> List[CorpusInstance]:
    """建立全部內建實例；預期事實的數值都是手算或文獻中的值"""
    instances = []

    # 5 維例子：A 本身有 Lie 導子性質，X 只有一維
    # p 是標籤為 c 的基底向量
    a = m4_subalgebra()
    instances.append(CorpusInstance(
        name='m4_subalgebra',
        algebra=a,
        module=m4_module(),
        idempotent=a.basis_vector(a.labels.index('c')),
        description="M₄ 的 5 維子代數，X = ℚ，p = E33",
        expected={
            'base.dim': paper(5),
            'total.dim': trivial(6),
            'star': paper(True),
            'corner_p.dim': paper(1),
            'corner_q.dim': paper(3),
            'w_p.certified': paper(True),
            'w_q.certified': paper(True),
            'sufficiency.conclusion': paper('guaranteed'),
            'total.ldp': paper(True),
            'total.center.projection_x_zero': paper(True),
            'base.center.dim': derived(3, "kernel of the commutator system"),
            'base.der.dim': derived(2, "kernel of the Leibniz system; equals dim A - dim Z(A)"),
            'base.ldp': derived(True, "LieDer(A) == Der(A) + C(A)"),
            'total.center.dim': derived(3, "kernel of the commutator system of A⋉X"),
            'loyal': derived(False, "x·a = 0 for a = E11 while qaq = E11"),
        },
    ))

    # T₂：A = B = X = ℚ
    q = scalar_algebra()
    instances.append(_triangular_instance(
        't2', q, matrix_bimodule(1, 1, [(0, 0)], [(0, 0)]), q,
        description="T₂ = Tri(ℚ, ℚ, ℚ)",
        expected={
            'total.dim': trivial(3),
            'star': paper(True),
            'corner_p.dim': trivial(1),
            'corner_q.dim': trivial(1),
            'total.der.dim': derived(2, "kernel of the Leibniz system"),
            'total.lie_der.dim': derived(4, "Der (2) + C (2), intersection 0"),
            'total.central_killing_commutators.dim': derived(2, "(dim A - dim [A,A]) * dim Z(A)"),
            'total.ldp': derived(True, "4 == 2 + 2 - 0"),
            'total.center.dim': derived(1, "kernel of the commutator system"),
            'sufficiency.conclusion': derived('guaranteed', "commutative one-dimensional corners"),
            'loyal': derived(True, "annihilator subspaces compressed by p and q"),
            'tau.bijective': derived(True, "solve on the one-dimensional center projection"),
        },
    ))

    m2 = matrix_algebra(2)
    # M₂ 的全部四個矩陣單位，X = M₂ 兩邊都用矩陣乘法作用
    full = [(i, j) for i in range(2) for j in range(2)]
    instances.append(_triangular_instance(
        'tri_m2', m2, matrix_bimodule(2, 2, full, full), m2,
        description="Tri(M₂, M₂, M₂)",
        expected={
            'total.dim': trivial(12),
            'star': paper(True),
            'corner_p.dim': derived(4, "corner re-basing"),
            'corner_q.dim': derived(4, "corner re-basing"),
            'w_p.certified': derived(True, "trace-zero span plus E11 spans M₂"),
            'w_q.certified': derived(True, "trace-zero span plus E11 spans M₂"),
            'sufficiency.conclusion': derived('guaranteed', "matrix algebras have the Lie derivation property"),
            'total.ldp': derived(True, "LieDer == Der + C on the total algebra"),
            'total.center.dim': derived(1, "kernel of the commutator system"),
            'loyal': derived(True, "X = M₂ is faithful on both sides"),
        },
    ))

    # 交換代數：LieDer 是全部線性映射，Lie 導子性質自動成立
    instances.append(CorpusInstance(
        name='dual_numbers',
        algebra=dual_numbers(),
        description="ℚ[ε]/(ε²)",
        expected={
            'base.dim': trivial(2),
            'base.center.dim': trivial(2),
            'base.lie_der.dim': trivial(4),
            'base.der.dim': derived(1, "D(1) = 0 and εD(ε) = 0 force D(ε) ∈ ℚε"),
            'base.ldp': trivial(True),
            'base.w.certified': derived(False, "only idempotents are 0 and 1; no commutators"),
            'base.idempotents.exhaustive': derived(True, "nil coordinate ε spans an ideal"),
            'base.central_ideal_free': trivial(False),
        },
    ))

    # 冪等元有限且可以窮舉
    instances.append(CorpusInstance(
        name='q3',
        algebra=diagonal_algebra(3),
        description="ℚ × ℚ × ℚ",
        expected={
            'base.dim': trivial(3),
            'base.center.dim': trivial(3),
            'base.lie_der.dim': trivial(9),
            'base.der.dim': derived(0, "central idempotents are killed by every derivation"),
            'base.ldp': trivial(True),
            'base.idempotents.count': derived(8, "0/1-vectors in the pointwise product"),
            'base.idempotents.exhaustive': derived(True, "orthogonal idempotent basis"),
            'base.w.certified': derived(True, "idempotents span the algebra"),
        },
    ))

    # 非交換、中心只有純量
    instances.append(CorpusInstance(
        name='m2',
        algebra=m2,
        description="M₂(ℚ)",
        expected={
            'base.dim': trivial(4),
            'base.center.dim': trivial(1),
            'base.commutator.dim': derived(3, "span of the six basis commutators"),
            'base.der.dim': derived(3, "inner derivations have dim 4 - 1 and are contained in Der"),
            'base.inner.dim': derived(3, "dim A - dim Z(A)"),
            'base.central_killing_commutators.dim': derived(1, "(4 - 3) * 1"),
            'base.lie_der.dim': derived(4, "Der (3) + C (1), intersection 0"),
            'base.ldp': derived(True, "LieDer == Der + C"),
            'base.w.certified': derived(True, "trace-zero span plus E11 spans M₂"),
            'base.central_ideal_free': derived(True, "fixpoint iteration from Z(A) = ℚ·1"),
        },
    ))

    # 兩邊的角代數都是交換的，但維度不同
    instances.append(_triangular_instance(
        'tri_q_q2_diag', q, matrix_bimodule(1, 2, [(0, 0)], [(0, 0), (1, 1)]), diagonal_algebra(2, 'f'),
        description="Tri(ℚ, ℚ², ℚ × ℚ)",
        expected={
            'total.dim': trivial(5),
            'star': paper(True),
            'corner_p.dim': derived(1, "block sizes"),
            'corner_q.dim': derived(2, "block sizes"),
            'total.center.dim': derived(1, "kernel of the commutator system"),
            'sufficiency.conclusion': derived('guaranteed', "commutative corners with idempotent bases"),
            'loyal': derived(True, "annihilator subspaces compressed by p and q"),
            'tau.bijective': derived(True, "solve on the one-dimensional center projection"),
        },
    ))

    # B = T₂ 非交換，W 的閉包需要不只一個冪等元
    instances.append(_triangular_instance(
        't3', q, matrix_bimodule(1, 2, [(0, 0)], [(0, 0), (0, 1), (1, 1)]), upper_triangular(2),
        description="T₃ = Tri(ℚ, ℚ^{1x2}, T₂)",
        expected={
            'total.dim': trivial(6),
            'star': paper(True),
            'corner_p.dim': derived(1, "block sizes"),
            'corner_q.dim': derived(3, "block sizes"),
            'total.center.dim': derived(1, "kernel of the commutator system"),
            'total.der.dim': derived(5, "all derivations of T₃ are inner: 6 - 1"),
            'total.ldp': derived(True, "LieDer == Der + C"),
            'sufficiency.conclusion': derived('guaranteed', "W closure of T₂ reaches full dimension"),
            'loyal': derived(True, "annihilator subspaces compressed by p and q"),
        },
    ))

    # 最小的例子；只有 0 和 1 兩個冪等元
    instances.append(CorpusInstance(
        name='q',
        algebra=q,
        description="ℚ",
        expected={
            'base.dim': trivial(1),
            'base.ldp': trivial(True),
            'base.w.certified': paper(True),
            'base.central_ideal_free': trivial(False),
        },
    ))

    # 沒有 p：只檢查不需要 (*) 的不變量
    instances.append(CorpusInstance(
        name='m2_regular_extension',
        algebra=m2,
        module=regular_bimodule(m2),
        description="M₂ ⋉ M₂（正則雙模）",
        expected={
            'total.dim': trivial(8),
            'total.center.dim': derived(2, "scalar matrices in both components"),
        },
    ))
    return instances


# 快取整個語料庫；實例不可變，共享是安全的
@lru_cache(maxsize=1)
def _builtin_cached() -> Tuple[CorpusInstance, ...]:
    """建立一次內建語料庫"""
    return tuple(_builtin())


def builtin_corpus() -> List[CorpusInstance]:
    """
    內建語料庫

    Returns:
        List[CorpusInstance]: 依名稱固定順序的實例列表
    """
    # 回傳新的 list，呼叫端加入族實例時不會改到快取
    return list(_builtin_cached())


def builtin_instance(name: str) -> CorpusInstance:
    """
    依名稱取得內建實例

    Raises:
        InputError: 名稱不存在（代碼 unknown-instance）
    """
    for instance in _builtin_cached():
        if instance.name == name:
            return instance
    raise InputError('unknown-instance', f"沒有名為 {name} 的內建實例",
                     known=[i.name for i in _builtin_cached()])


# 族描述：名稱(參數, ...)，名稱與括號前後可以有空白
_DESCRIPTOR = re.compile(r'^\s*([A-Za-z_]+)\s*\((.*)\)\s*$')


def _parse_arg(text: str) -> Union[int, str]:
    """整數參數轉成 int，其餘（實例名稱）保持字串"""
    text = text.strip()
    return int(text) if re.fullmatch(r'-?\d+', text) else text


def parse_family(descriptor: Union[str, Mapping[str, Any]]) -> Tuple[str, Tuple[Any, ...]]:
    """
    解析族描述

    接受字串 "triangular(1,2,1)" 或字典 {"family": "triangular", "args": [1, 2, 1]}。

    Raises:
        InputError: 格式錯誤或未知的族（代碼 unknown-family）
    """
    # YAML 設定中的字典形式
    if isinstance(descriptor, Mapping):
        family = descriptor.get('family')
        args = tuple(descriptor.get('args', ()))
    elif isinstance(descriptor, str):
        match = _DESCRIPTOR.match(descriptor)
        if not match:
            raise InputError('unknown-family', f"無法解析族描述: {descriptor!r}")
        family = match.group(1)
        # group(1) 是族名稱，group(2) 是括號內的參數；空參數列表得到 ()
        args = tuple(_parse_arg(s) for s in match.group(2).split(',') if s.strip())
    else:
        raise InputError('unknown-family', f"族描述必須是字串或字典: {descriptor!r}")
    if family not in FAMILIES:
        raise InputError('unknown-family', f"未知的族: {family}", known=list(FAMILIES))
    return family, args


def _expect_args(family: str, args: Tuple[Any, ...], types: Sequence[type]):
    """檢查參數個數與型別，不符時拋出 InputError（代碼 unknown-family）"""
    if len(args) != len(types) or not all(isinstance(v, t) for v, t in zip(args, types)):
        names = ', '.join(t.__name__ for t in types)
        raise InputError('unknown-family', f"{family} 需要參數 ({names})，實際為 {args}")


def _triangular_family(args: Tuple[Any, ...], rng: random.Random) -> List[CorpusInstance]:
    """Tri(ℚ^nA, X, ℚ^nB)，X 的每個基底向量隨機附著在一對 (α, β) 上"""
    _expect_args('triangular', args, (int, int, int))
    n_a, m_x, n_b = args
    if n_a < 1 or n_b < 1 or m_x < 0:
        raise InputError('unknown-family', f"triangular 需要 nA >= 1、mX >= 0、nB >= 1，實際為 {args}")
    # randrange(n) 回傳 0..n-1
    pairs = [(rng.randrange(n_a), rng.randrange(n_b)) for _ in range(m_x)]
    a, b = diagonal_algebra(n_a, 'a'), diagonal_algebra(n_b, 'b')
    name = f"triangular({n_a},{m_x},{n_b})"
    return [_triangular_instance(
        name, a, attached_bimodule(n_a, n_b, pairs), b,
        description=f"Tri(ℚ^{n_a}, ℚ^{m_x}, ℚ^{n_b})",
        expected={
            'total.dim': trivial(n_a + m_x + n_b),
            'star': paper(True),
            'corner_p.dim': trivial(n_a),
            'corner_q.dim': trivial(n_b),
        },
    )]


def _direct_sum_family(args: Tuple[Any, ...]) -> List[CorpusInstance]:
    """兩個內建實例的主要代數的直和"""
    _expect_args('direct_sum', args, (str, str))
    # 生成器表達式解包成兩個變數
    a, b = (builtin_instance(name).primary for name in args)
    return [CorpusInstance(
        name=f"direct_sum({args[0]},{args[1]})",
        algebra=direct_sum(a, b),
        summands=(a, b),
        expected={
            'base.dim': trivial(a.dim + b.dim),
            'base.center.dim': derived(center(a).dim + center(b).dim, "centers of the summands computed directly"),
        },
    )]


def _corner_family(args: Tuple[Any, ...], rng: random.Random) -> List[CorpusInstance]:
    """隨機選一個非平凡冪等元 p，產生 pAp 與 qAq 兩個實例"""
    _expect_args('corner_of', args, (str,))
    algebra = builtin_instance(args[0]).primary
    # 使用預設的搜尋預算
    candidates = [e for e in find_idempotents(algebra).idempotents if e.nontrivial]
    if not candidates:
        raise InputError('trivial-idempotent', f"{args[0]} 沒有找到非平凡冪等元")
    p = rng.choice(candidates)
    instances = []
    # q = 1 - p 的角代數也是一個實例
    for side, vector in (('p', p.vector), ('q', p.complement(algebra))):
        piece = corner(algebra, vector)
        instances.append(CorpusInstance(
            name=f"corner_of({args[0]})/{side}",
            algebra=piece.algebra,
            expected={'base.dim': trivial(piece.subspace.dim)},
        ))
    return instances


def _trivial_extension_family(args: Tuple[Any, ...]) -> List[CorpusInstance]:
    """A⋉A（正則雙模）"""
    _expect_args('trivial_extension_of', args, (str,))
    algebra = builtin_instance(args[0]).primary
    return [CorpusInstance(
        name=f"trivial_extension_of({args[0]})",
        algebra=algebra,
        module=regular_bimodule(algebra),
        expected={'total.dim': trivial(2 * algebra.dim)},
    )]


def _scalar_extension_family(args: Tuple[Any, ...], rng: random.Random) -> List[CorpusInstance]:
    """
    純量擴張 A ⊗ ℚ(√d)

    模、冪等元與三角結構一起擴張；冪等元 p 變成 p ⊗ 1。
    """
    _expect_args('scalar_extension', args, (str,))
    source = builtin_instance(args[0])
    # field_ 加底線，避免遮蔽 dataclasses.field
    field_ = quadratic_field(rng.choice(NON_SQUARES))
    algebra = tensor_product(source.algebra, field_)
    module = tensor_bimodule(source.module, field_) if source.module is not None else None
    idempotent = None
    if source.idempotent is not None:
        # 張量積的座標順序是 (A 的座標, ℚ(√d) 的座標)
        idempotent = tuple(x * y for x in source.idempotent for y in field_.unit)
    triangular_parts = None
    if source.triangular is not None:
        a, x, b = source.triangular
        triangular_parts = (tensor_product(a, field_), tensor_bimodule(x, field_), tensor_product(b, field_))
    expected = {'base.dim': trivial(2 * source.algebra.dim)}
    # pxq = x 在純量擴張後仍然成立
    if idempotent is not None:
        expected['star'] = trivial(True)
    return [CorpusInstance(
        name=f"scalar_extension({args[0]})",
        algebra=algebra,
        module=module,
        idempotent=idempotent,
        expected=expected,
        triangular=triangular_parts,
        description=f"{args[0]} ⊗ {field_.labels[1]}",
    )]


def generate_family(descriptor: Union[str, Mapping[str, Any]], seed: int = 0) -> List[CorpusInstance]:
    """
    由族描述產生實例

    相同的 (descriptor, seed) 永遠產生相同的實例。

    Args:
        descriptor: 族描述，例如 "triangular(1,2,1)"、"direct_sum(m2,q)"
        seed: 隨機種子

    Returns:
        List[CorpusInstance]: 產生的實例（corner_of 產生兩個）

    Raises:
        InputError: 未知的族（unknown-family）或未知的實例名稱（unknown-instance）
    """
    family, args = parse_family(descriptor)
    # 每次呼叫建立新的產生器，結果只取決於 seed
    rng = random.Random(seed)
    if family == 'triangular':
        instances = _triangular_family(args, rng)
    elif family == 'direct_sum':
        instances = _direct_sum_family(args)
    elif family == 'corner_of':
        instances = _corner_family(args, rng)
    elif family == 'trivial_extension_of':
        instances = _trivial_extension_family(args)
    else:
        instances = _scalar_extension_family(args, rng)
    logger.info(f"產生族 {family}{args}: {len(instances)} 個實例")
    return instances
