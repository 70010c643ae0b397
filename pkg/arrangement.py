# coding:utf-8
"""
超平面排列模块 - 线性型、排列校验、精确秩计算与本质化

所有系数使用 fractions.Fraction 精确表示，任何计算路径都不出现浮点数。
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, str]


# ── 异常 ──────────────────────────────────────────────

class ArrangementError(Exception):
    """排列相关错误的基类"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class ZeroFormError(ArrangementError):
    """线性型恒为零"""


class NotReducedError(ArrangementError):
    """两个线性型成比例（排列非约化）"""


class EmptyArrangementError(ArrangementError):
    """排列中没有任何超平面"""


class IndexOutOfRangeError(ArrangementError):
    """超平面下标越界"""


class RankTooHighError(ArrangementError):
    """本质秩超过 4"""


class NotEssentialError(ArrangementError):
    """排列不是本质的（法向量不张成整个空间）"""


class DimensionMismatchError(ArrangementError):
    """线性型长度与环境维数不一致"""


# ── 线性型 ────────────────────────────────────────────

def to_fraction(value: Number) -> Fraction:
    """把整数、Fraction 或 "p/q" 字符串转为 Fraction，拒绝浮点数"""
    if isinstance(value, float):
        raise TypeError(f"不接受浮点系数: {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class LinearForm:
    """齐次线性型 sum(coeffs[k] * x_{k+1})，无常数项"""

    coeffs: Tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Iterable[Number]) -> "LinearForm":
        return cls(tuple(to_fraction(v) for v in values))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def canonical(self) -> "LinearForm":
        """首个非零系数缩放为 1 的代表元"""
        for c in self.coeffs:
            if c != 0:
                return LinearForm(tuple(x / c for x in self.coeffs))
        raise ZeroFormError("零线性型没有规范代表元")

    def is_proportional(self, other: "LinearForm") -> bool:
        return self.canonical() == other.canonical()

    def padded(self, n_new: int) -> "LinearForm":
        return LinearForm(self.coeffs + (Fraction(0),) * (n_new - self.n))

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs, start=1):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = f"x{k}" if mag == 1 else f"{mag}*x{k}"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


@dataclass(frozen=True)
class Arrangement:
    """约化的中心超平面排列"""

    forms: Tuple[LinearForm, ...]
    n: int

    @property
    def d(self) -> int:
        return len(self.forms)

    def rows(self, subset: Optional[Iterable[int]] = None) -> List[List[Fraction]]:
        indices = range(self.d) if subset is None else sorted(subset)
        return [list(self.forms[i].coeffs) for i in indices]

    def describe(self) -> str:
        return "{" + ", ".join(str(f) for f in self.forms) + f"}} in C^{self.n}"


# ── 校验 ──────────────────────────────────────────────

def validate_arrangement(forms: Sequence[Union[LinearForm, Sequence[Number]]],
                         n: Optional[int] = None) -> Arrangement:
    """
    校验并规范化一组线性型

    Args:
        forms: LinearForm 或系数序列
        n: 环境维数，None 时取第一个线性型的长度

    Returns:
        规范化后的 Arrangement
    """
    if not forms:
        raise EmptyArrangementError("排列为空，至少需要一个超平面")

    parsed = [f if isinstance(f, LinearForm) else LinearForm.of(f) for f in forms]
    if n is None:
        n = parsed[0].n

    seen: Dict[LinearForm, int] = {}
    canonical_forms = []
    for idx, form in enumerate(parsed):
        if form.n != n:
            raise DimensionMismatchError(
                f"第 {idx} 个线性型长度为 {form.n}，环境维数为 {n}",
                {"index": idx, "length": form.n, "n": n})
        if form.is_zero():
            raise ZeroFormError(f"第 {idx} 个线性型恒为零", {"index": idx})
        rep = form.canonical()
        if rep in seen:
            raise NotReducedError(
                f"第 {seen[rep]} 与第 {idx} 个线性型成比例",
                {"first": seen[rep], "second": idx})
        seen[rep] = idx
        canonical_forms.append(rep)

    return Arrangement(tuple(canonical_forms), n)


# ── 精确线性代数 ──────────────────────────────────────

def row_reduce(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """
    有理数高斯-若尔当消元

    Returns:
        (非零行组成的最简行阶梯形, 主元列下标)
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots: List[int] = []
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r >= n_rows:
            break
        for i_row in range(piv_r, n_rows):
            if m[i_row][piv_c] != 0:
                break
        else:
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
        fp = m[piv_r][piv_c]
        m[piv_r] = [x / fp for x in m[piv_r]]
        for r in range(n_rows):
            if r == piv_r:
                continue
            fr = m[r][piv_c]
            if fr == 0:
                continue
            m[r] = [x - y * fr for x, y in zip(m[r], m[piv_r])]
        pivots.append(piv_c)
        piv_r += 1
    return m[:piv_r], pivots


@lru_cache(maxsize=65536)
def _subset_rank(arr: Arrangement, subset: FrozenSet[int]) -> int:
    if not subset:
        return 0
    _, pivots = row_reduce(arr.rows(subset))
    return len(pivots)


def rank_of(arr: Arrangement, subset: Iterable[int]) -> int:
    """
    选定线性型系数矩阵的秩

    Args:
        arr: 排列
        subset: 超平面下标集合

    Returns:
        秩，空集为 0
    """
    subset = frozenset(subset)
    for idx in subset:
        if not 0 <= idx < arr.d:
            raise IndexOutOfRangeError(
                f"下标 {idx} 越界（d={arr.d}）", {"index": idx, "d": arr.d})
    return _subset_rank(arr, subset)


def essential_rank(arr: Arrangement) -> int:
    return rank_of(arr, range(arr.d))


def is_essential(arr: Arrangement) -> bool:
    return essential_rank(arr) == arr.n


def essentialize(arr: Arrangement) -> Tuple[Arrangement, int]:
    """
    将排列限制到法向量张成空间的主元坐标上

    Returns:
        (本质排列, 被消去的变量个数 k = n - rank)
    """
    r = essential_rank(arr)
    k = arr.n - r
    if k == 0:
        return arr, 0

    _, pivots = row_reduce(arr.rows())
    restricted = [[f.coeffs[c] for c in pivots] for f in arr.forms]
    reduced = validate_arrangement(restricted, r)
    logger.debug(f"🔍 本质化: n={arr.n} -> {r}，主元列 {pivots}")
    return reduced, k


def pad_arrangement(arr: Arrangement, n_new: int) -> Arrangement:
    """在每个线性型末尾补零坐标，使环境维数变为 n_new"""
    if n_new < arr.n:
        raise DimensionMismatchError(
            f"无法从 n={arr.n} 补齐到更小的 n={n_new}", {"n": arr.n, "n_new": n_new})
    if n_new == arr.n:
        return arr
    return Arrangement(tuple(f.padded(n_new) for f in arr.forms), n_new)
