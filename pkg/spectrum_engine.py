# coding:utf-8
"""
谱计算引擎 - 秩 4 闭式公式、秩 3/2 推论、通用排列与分裂排列公式、
Thom-Sebastiani 平移分派以及欧拉和一致性检查
"""
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from arrangement import (Arrangement, ArrangementError, DimensionMismatchError, NotEssentialError,
                         RankTooHighError, essential_rank, essentialize)
from config_manager import ConfigManager
from intersection_lattice import Flat, LatticeSummary, lattice_summary, proj_complement_euler
from utils import run_parallel

logger = logging.getLogger(__name__)


class InconsistentWeightsError(ArrangementError):
    """边权缺失或不满足 u + v = m - 1"""


def gbinom(t: int, k: int) -> int:
    """广义二项式 t(t-1)...(t-k+1)/k!，t 可为负"""
    if k < 0:
        raise ValueError(f"k 必须非负: {k}")
    return math.prod(t - j for j in range(k)) // math.factorial(k)


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# ── 谱 ────────────────────────────────────────────────

@dataclass(frozen=True)
class Spectrum:
    """Hodge 谱：有理指数 α -> 非零整数重数，按 α 升序存储"""

    ambient: int
    entries: Tuple[Tuple[Fraction, int], ...] = ()
    denominator: int = field(default=1, compare=False)

    def __post_init__(self):
        for alpha, mult in self.entries:
            if mult == 0:
                raise ValueError(f"谱中不应保留零重数: α={alpha}")
            if not 0 < alpha < self.ambient:
                raise ValueError(f"α={alpha} 超出 (0, {self.ambient})，重数 {mult}")
            if (alpha * self.denominator).denominator != 1:
                raise ValueError(f"α={alpha} 的分母不整除 d={self.denominator}")

    @classmethod
    def from_mapping(cls, mapping: Mapping[Fraction, int], ambient: int,
                     denominator: int = 1) -> "Spectrum":
        entries = tuple(sorted((Fraction(a), int(m)) for a, m in mapping.items() if m != 0))
        return cls(ambient, entries, denominator)

    @classmethod
    def empty(cls, ambient: int, denominator: int = 1) -> "Spectrum":
        return cls(ambient, (), denominator)

    def __iter__(self) -> Iterator[Tuple[Fraction, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self) -> Tuple[Tuple[Fraction, int], ...]:
        return self.entries

    def as_dict(self) -> Dict[Fraction, int]:
        return dict(self.entries)

    def multiplicity(self, alpha) -> int:
        return self.as_dict().get(Fraction(alpha), 0)

    def euler_sum(self) -> int:
        return sum(m for _, m in self.entries)

    def shift(self, k: int) -> "Spectrum":
        """乘以 (-t)^k：α -> α + k，重数乘 (-1)^k，环境维数加 k"""
        if k == 0:
            return self
        sign = -1 if k % 2 else 1
        entries = tuple((alpha + k, sign * m) for alpha, m in self.entries)
        return Spectrum(self.ambient + k, entries, self.denominator)

    def terms_text(self) -> str:
        """形如 "3t - 6t^2 + 4t^3" 的多项式写法"""
        if not self.entries:
            return "0"
        parts = []
        for alpha, mult in self.entries:
            power = "t" if alpha == 1 else f"t^{alpha}"
            mag = abs(mult)
            body = power if mag == 1 else f"{mag}{power}"
            parts.append(("-" if mult < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


# ── 边权 ──────────────────────────────────────────────

BRANCHES = ("ceil", "floor")


@dataclass(frozen=True)
class EdgeWeights:
    """固定 i 下每条边的 (u, v) 权"""

    u: Mapping[Flat, int]
    v: Optional[Mapping[Flat, int]] = None

    def require(self, summary: LatticeSummary, need_v: bool):
        for edge in summary.edges:
            if edge not in self.u:
                raise InconsistentWeightsError(f"边 {edge.label()} 缺少 u 权", {"edge": edge.label()})
            if need_v and (self.v is None or edge not in self.v):
                raise InconsistentWeightsError(f"边 {edge.label()} 缺少 v 权", {"edge": edge.label()})


def assemble_weights(summary: LatticeSummary, i: int, branch: str) -> EdgeWeights:
    """
    按公式分支组装边权

    Args:
        summary: 格摘要
        i: 网格下标
        branch: ceil 为 t^{i/d}、t^{1+i/d} 两项所用的上取整族，floor 为 t^{3-i/d}、t^{4-i/d} 两项所用的下取整族

    Returns:
        EdgeWeights，保证每条边 u + v = m - 1 且 u, v >= 0
    """
    if branch not in BRANCHES:
        raise ValueError(f"未知的公式分支: {branch}")
    d = summary.d
    u: Dict[Flat, int] = {}
    v: Dict[Flat, int] = {}
    for edge in summary.edges:
        m = edge.multiplicity
        if branch == "ceil":
            u_e = ceil_div(i * m, d) - 1
            v_e = ((d - i) * m) // d
        else:
            u_e = (i * m) // d
            v_e = ceil_div((d - i) * m, d) - 1
        if u_e + v_e != m - 1 or u_e < 0 or v_e < 0:
            raise InconsistentWeightsError(
                f"边 {edge.label()} 的权不满足 u+v=m-1: u={u_e}, v={v_e}, m={m}",
                {"edge": edge.label(), "u": u_e, "v": v_e, "m": m, "i": i, "branch": branch})
        u[edge], v[edge] = u_e, v_e
    return EdgeWeights(u, v)


def eta0(i: int, d: int, summary: LatticeSummary, weights: EdgeWeights) -> int:
    weights.require(summary, need_v=False)
    u = weights.u
    total = gbinom(i - 1, 3)
    for w in summary.dense3:
        total -= gbinom(u[w], 3)
    for v in summary.dense2:
        uv = u[v]
        total -= (i - 3) * gbinom(uv, 2) - 2 * gbinom(uv, 3)
        for w in summary.contained_in(v):
            total -= 2 * gbinom(uv, 3) - (u[w] - 2) * gbinom(uv, 2)
    if i == 0:
        total += 1
    return total


def eta1(i: int, d: int, summary: LatticeSummary, weights: EdgeWeights) -> int:
    weights.require(summary, need_v=True)
    u, vw = weights.u, weights.v
    total = (d - i - 1) * gbinom(i - 1, 2)
    for w in summary.dense3:
        total -= vw[w] * gbinom(u[w], 2)
    for v in summary.dense2:
        uv, vv = u[v], vw[v]
        total -= uv * vv * (i - 2) + (d - i - 1 - 2 * vv) * gbinom(uv, 2)
        for w in summary.contained_in(v):
            total += uv * vv * (u[w] - uv) + vw[w] * gbinom(uv, 2)
    return total


# ── 秩 4 ──────────────────────────────────────────────

def _grid_values(summary: LatticeSummary, i: int) -> Dict[Fraction, int]:
    d = summary.d
    step = Fraction(i, d)
    values: Dict[Fraction, int] = {}
    if i >= 1:
        ceil_w = assemble_weights(summary, i, "ceil")
        values[step] = eta0(i, d, summary, ceil_w)
        values[1 + step] = eta1(i, d, summary, ceil_w)
    if i <= d - 1:
        floor_w = assemble_weights(summary, i, "floor")
        values[4 - step] = eta0(i, d, summary, floor_w)
        values[3 - step] = eta1(i, d, summary, floor_w)
    return values


def theorem_spectrum(arr: Arrangement, policy: Optional[str] = None) -> Spectrum:
    """
    在 C^4 中按闭式公式计算谱，排列可以不是本质的

    Args:
        arr: 环境维数为 4 的排列
        policy: 边策略 dense / nnc / all，None 时读取 spectrum.s_policy

    Returns:
        Spectrum
    """
    if arr.n != 4:
        raise DimensionMismatchError(f"闭式公式要求 n=4，实际 n={arr.n}", {"n": arr.n})
    if policy is None:
        policy = ConfigManager.get_config_value("spectrum.s_policy", "dense")
    summary = lattice_summary(arr, policy)
    d = summary.d

    per_i = run_parallel(
        lambda i: _grid_values(summary, i), list(range(d + 1)),
        max_workers=ConfigManager.get_config_value("spectrum.max_workers", 4),
        enable_threading=ConfigManager.get_config_value("spectrum.enable_threading", False),
        desc="谱网格")

    merged: Dict[Fraction, int] = defaultdict(int)
    for values in per_i:
        for alpha, mult in values.items():
            merged[alpha] += mult
    if merged.get(Fraction(4), 0) != 0:
        raise InconsistentWeightsError(f"α=4 处重数应为 0，实际 {merged[Fraction(4)]}")
    merged.pop(Fraction(4), None)
    return Spectrum.from_mapping(merged, 4, d)


def spectrum_rank4(arr: Arrangement, policy: Optional[str] = None) -> Spectrum:
    """本质秩 4 排列的谱"""
    r = essential_rank(arr)
    if r > 4:
        raise RankTooHighError(f"本质秩 {r} 超过 4", {"rank": r})
    if arr.n != 4 or r != 4:
        raise NotEssentialError(f"需要 C^4 中的本质排列，实际 n={arr.n}, rank={r}",
                                {"n": arr.n, "rank": r})
    return theorem_spectrum(arr, policy)


# ── 秩 3 / 秩 2 ───────────────────────────────────────

def spectrum_rank3(arr: Arrangement) -> Spectrum:
    """本质秩 3 排列，S 取 codim 2 稠密边"""
    r = essential_rank(arr)
    if arr.n != 3 or r != 3:
        raise NotEssentialError(f"需要 C^3 中的本质排列，实际 n={arr.n}, rank={r}",
                                {"n": arr.n, "rank": r})
    d = arr.d
    mults = [v.multiplicity for v in lattice_summary(arr, "dense").dense2]
    values: Dict[Fraction, int] = {}
    for i in range(1, d + 1):
        step = Fraction(i, d)
        ups = [ceil_div(i * m, d) for m in mults]
        values[step] = gbinom(i - 1, 2) - sum(gbinom(up - 1, 2) for up in ups)
        values[1 + step] = (i - 1) * (d - i - 1) - sum((up - 1) * (m - up) for up, m in zip(ups, mults))
        values[2 + step] = (gbinom(d - i - 1, 2) - sum(gbinom(m - up, 2) for up, m in zip(ups, mults))
                            - (1 if i == d else 0))
    if values.get(Fraction(3), 0) != 0:
        raise InconsistentWeightsError(f"α=3 处重数应为 0，实际 {values[Fraction(3)]}")
    values.pop(Fraction(3), None)
    return Spectrum.from_mapping(values, 3, d)


def spectrum_rank2(arr: Arrangement) -> Spectrum:
    """C^2 中的排列，谱只依赖 d"""
    if arr.n != 2:
        raise DimensionMismatchError(f"需要 n=2，实际 n={arr.n}", {"n": arr.n})
    d = arr.d
    values: Dict[Fraction, int] = {}
    for i in range(1, d + 1):
        step = Fraction(i, d)
        values[step] = i - 1
        values[1 + step] = d - i - 1 + (1 if i == d else 0)
    if values.get(Fraction(2), 0) != 0:
        raise InconsistentWeightsError(f"α=2 处重数应为 0，实际 {values[Fraction(2)]}")
    values.pop(Fraction(2), None)
    return Spectrum.from_mapping(values, 2, d)


def spectrum(arr: Arrangement, policy: Optional[str] = None) -> Spectrum:
    """
    任意本质秩不超过 4 的排列：本质化后分派，再乘 (-t)^{n-r}

    Args:
        arr: 排列
        policy: 秩 4 时使用的边策略

    Returns:
        环境维数为 arr.n 的 Spectrum
    """
    ess, k = essentialize(arr)
    r = ess.n
    if r > 4:
        raise RankTooHighError(f"本质秩 {r} 超过 4", {"rank": r})
    if r == 1:
        base = Spectrum.empty(1, ess.d)
    elif r == 2:
        base = spectrum_rank2(ess)
    elif r == 3:
        base = spectrum_rank3(ess)
    else:
        base = spectrum_rank4(ess, policy)
    logger.debug(f"🔍 本质秩 {r}，平移 (-t)^{k}: {base.terms_text()}")
    return base.shift(k)


# ── 推论公式（测试对照） ──────────────────────────────

def generic_spectrum(d: int) -> Spectrum:
    """C^4 中 d 个一般位置超平面的谱"""
    if d < 1:
        raise ValueError(f"d 必须为正: {d}")
    values: Dict[Fraction, int] = defaultdict(int)
    for i in range(1, d + 1):
        values[Fraction(i, d)] += gbinom(i - 1, 3)
        values[1 + Fraction(i, d)] += (d - i - 1) * gbinom(i - 1, 2)
    for i in range(0, d):
        values[4 - Fraction(i, d)] += gbinom(i - 1, 3) + (1 if i == 0 else 0)
        values[3 - Fraction(i, d)] += (d - i - 1) * gbinom(i - 1, 2)
    values.pop(Fraction(4), None)
    return Spectrum.from_mapping(values, 4, d)


def split_3_1_spectrum(d: int, codim2_multiplicities: Sequence[int]) -> Spectrum:
    """f = f1(x1,x2,x3)·x4 型排列，codim2_multiplicities 为 f1 的 codim 2 稠密边重数"""
    correction = sum(gbinom(m - 1, 2) for m in codim2_multiplicities)
    values = {
        Fraction(1): gbinom(d - 2, 2) - correction,
        Fraction(2): -gbinom(d - 1, 2) + correction,
        Fraction(3): d - 1,
    }
    return Spectrum.from_mapping(values, 4, d)


def split_2_2_spectrum(s1: int, s2: int) -> Spectrum:
    """f = f1(x1,x2)·f2(x3,x4) 型排列，要求 gcd(s1, s2) = 1"""
    if math.gcd(s1, s2) != 1:
        raise ValueError(f"需要 gcd(s1, s2) = 1，实际 s1={s1}, s2={s2}")
    values = {
        Fraction(1): (s1 - 1) * (s2 - 1),
        Fraction(2): 1 - s1 * s2,
        Fraction(3): s1 + s2 - 1,
    }
    return Spectrum.from_mapping(values, 4, s1 + s2)


def euler_sum_check(arr: Arrangement, sp: Spectrum) -> bool:
    """Σ n_{f,α} = (-1)^{n-1} (d·χ(U) - 1)"""
    chi = proj_complement_euler(arr)
    expected = (-1) ** (arr.n - 1) * (arr.d * chi - 1)
    actual = sp.euler_sum()
    if actual != expected:
        logger.warning(f"⚠️ 欧拉和不一致: Σn={actual}, 期望 {expected} (χ(U)={chi})")
    return actual == expected
