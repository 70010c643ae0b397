# coding:utf-8
"""
交集格模块 - 交集格构造、稠密边判定、格摘要与 Möbius 函数欧拉示性数

边（flat）用包含它的超平面下标闭集表示，子空间包含关系 V ⊇ W
等价于 hyperplanes(V) ⊆ hyperplanes(W)。
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx
from sympy import Poly, div, symbols

from arrangement import (Arrangement, ArrangementError, RankTooHighError, essential_rank,
                         rank_of)
from config_manager import ConfigManager

logger = logging.getLogger(__name__)

POLICIES = ("dense", "nnc", "all")

t = symbols("t")


@dataclass(frozen=True, order=True)
class Flat:
    """交集格中的一条边"""

    codim: int
    hyperplanes: Tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.hyperplanes)

    @property
    def members(self) -> FrozenSet[int]:
        return frozenset(self.hyperplanes)

    def contains(self, other: "Flat") -> bool:
        """子空间意义下 self ⊋ other"""
        return self.members < other.members

    def label(self) -> str:
        return "{" + ",".join(str(i) for i in self.hyperplanes) + "}"


def make_flat(arr: Arrangement, members: Iterable[int]) -> Flat:
    members = tuple(sorted(set(members)))
    return Flat(rank_of(arr, members), members)


def closure(arr: Arrangement, subset: Iterable[int]) -> FrozenSet[int]:
    """所有在 subset 公共零点集上为零的超平面下标"""
    subset = frozenset(subset)
    r = rank_of(arr, subset)
    return frozenset(l for l in range(arr.d) if l in subset or rank_of(arr, subset | {l}) == r)


def build_lattice(arr: Arrangement, max_subset_size: Optional[int] = None) -> Dict[int, List[Flat]]:
    """
    通过闭包所有大小不超过 max_subset_size 的独立子集枚举交集格

    Args:
        arr: 排列
        max_subset_size: 子集大小上限，None 时读取 lattice.max_subset_size

    Returns:
        codim -> 按下标排序的 Flat 列表（不含 codim 0 的整个空间）
    """
    if max_subset_size is None:
        max_subset_size = ConfigManager.get_config_value("lattice.max_subset_size", 4)

    seen = set()
    by_codim: Dict[int, List[Flat]] = {}
    for size in range(1, min(max_subset_size, arr.d) + 1):
        for subset in itertools.combinations(range(arr.d), size):
            if rank_of(arr, subset) != size:
                continue
            members = closure(arr, subset)
            if members in seen:
                continue
            seen.add(members)
            flat = Flat(size, tuple(sorted(members)))
            by_codim.setdefault(size, []).append(flat)

    for flats in by_codim.values():
        flats.sort()
    logger.debug(f"🔍 交集格: " + ", ".join(f"codim {k}: {len(v)}" for k, v in sorted(by_codim.items())))
    return by_codim


# ── 稠密边 ────────────────────────────────────────────

def _components_dense(arr: Arrangement, members: Tuple[int, ...]) -> bool:
    """基本回路图连通 <=> 拟阵连通"""
    total = rank_of(arr, members)
    basis: List[int] = []
    for idx in members:
        if rank_of(arr, basis + [idx]) > len(basis):
            basis.append(idx)

    graph = nx.Graph()
    graph.add_nodes_from(members)
    for e in members:
        if e in basis:
            continue
        for b in basis:
            swapped = [x for x in basis if x != b] + [e]
            if rank_of(arr, swapped) == total:
                graph.add_edge(e, b)
    return nx.number_connected_components(graph) == 1


def _brute_force_dense(arr: Arrangement, members: Tuple[int, ...]) -> bool:
    """枚举所有二分划，检查是否存在秩可加的分解"""
    total = rank_of(arr, members)
    first, rest = members[0], members[1:]
    for size in range(0, len(rest)):
        for others in itertools.combinations(rest, size):
            part1 = (first,) + others
            part2 = tuple(x for x in rest if x not in others)
            if rank_of(arr, part1) + rank_of(arr, part2) == total:
                return False
    return True


def is_dense(arr: Arrangement, flat: Flat, method: Optional[str] = None) -> bool:
    """
    判断边是否稠密：包含它的子排列不可分解（拟阵连通）

    Args:
        arr: 排列
        flat: 交集格中的边
        method: "components" 或 "brute_force"，None 时用 components

    Returns:
        是否稠密
    """
    members = flat.hyperplanes
    if len(members) <= 1:
        return True

    limit = ConfigManager.get_config_value("lattice.brute_force_limit", 12)
    if method == "brute_force":
        if len(members) <= limit:
            return _brute_force_dense(arr, members)
        logger.warning(f"⚠️ 边 {flat.label()} 含 {len(members)} 个超平面，超过穷举上限 {limit}，改用分量法")

    result = _components_dense(arr, members)
    if ConfigManager.get_config_value("lattice.dense_cross_check", False) and len(members) <= limit:
        expected = _brute_force_dense(arr, members)
        if expected != result:
            logger.error(f"❌ 稠密判定不一致: {flat.label()} 分量法={result} 穷举={expected}")
            raise AssertionError(f"dense check mismatch on {flat.label()}")
    return result


# ── 格摘要 ────────────────────────────────────────────

@dataclass(frozen=True)
class LatticeSummary:
    """Theorem 公式与上同调环所需的边数据"""

    d: int
    n: int
    policy: str
    dense2: Tuple[Flat, ...]
    dense3: Tuple[Flat, ...]
    containments: Mapping[Flat, Tuple[Flat, ...]] = field(compare=False, hash=False)

    @property
    def edges(self) -> Tuple[Flat, ...]:
        return self.dense2 + self.dense3

    def contained_in(self, v: Flat) -> Tuple[Flat, ...]:
        return self.containments.get(v, ())

    def t_count(self, v: Flat) -> int:
        return len(self.contained_in(v))


def _keep(arr: Arrangement, flat: Flat, policy: str) -> bool:
    if policy == "all":
        return True
    if policy == "nnc":
        return flat.multiplicity >= flat.codim + 1
    return is_dense(arr, flat)


def lattice_summary(arr: Arrangement, policy: str = "dense",
                    lattice: Optional[Dict[int, List[Flat]]] = None) -> LatticeSummary:
    """
    按策略筛选 codim 2/3 的边并计算包含关系

    Args:
        arr: 本质秩不超过 4 的排列
        policy: dense / nnc / all
        lattice: 已构造的交集格，None 时现算

    Returns:
        LatticeSummary
    """
    if policy not in POLICIES:
        raise ArrangementError(f"未知的边策略: {policy}", {"policy": policy})
    r = essential_rank(arr)
    if r > 4:
        raise RankTooHighError(f"本质秩 {r} 超过 4", {"rank": r})

    if lattice is None:
        lattice = build_lattice(arr)
    dense2 = tuple(f for f in lattice.get(2, []) if _keep(arr, f, policy))
    dense3 = tuple(f for f in lattice.get(3, []) if _keep(arr, f, policy))
    containments = {v: tuple(w for w in dense3 if v.contains(w)) for v in dense2}

    return LatticeSummary(arr.d, arr.n, policy, dense2, dense3, containments)


# ── Möbius 函数与欧拉示性数 ───────────────────────────

def lattice_graph(lattice: Mapping[int, List[Flat]]) -> nx.DiGraph:
    """覆盖关系的 Hasse 图，底元为 codim 0 的空集边"""
    bottom = Flat(0, ())
    graph = nx.DiGraph()
    graph.add_node(bottom)
    levels = {0: [bottom]}
    levels.update(lattice)
    for k in sorted(levels):
        for flat in levels[k]:
            graph.add_node(flat)
            for lower in levels.get(k - 1, []):
                if lower.members < flat.members:
                    graph.add_edge(lower, flat)
    return graph


def mobius_values(lattice: Mapping[int, List[Flat]]) -> Dict[Flat, int]:
    """μ(0̂, X)，按 codim 递推 μ(X) = -Σ_{Y<X} μ(Y)"""
    graph = lattice_graph(lattice)
    mu: Dict[Flat, int] = {}
    for flat in sorted(graph.nodes):
        below = nx.ancestors(graph, flat)
        mu[flat] = 1 if not below else -sum(mu[y] for y in below)
    return mu


def _full_lattice(arr: Arrangement) -> Dict[int, List[Flat]]:
    limit = max(ConfigManager.get_config_value("lattice.max_subset_size", 4), essential_rank(arr))
    return build_lattice(arr, limit)


def characteristic_polynomial(arr: Arrangement) -> Poly:
    """χ(A, t) = Σ μ(X) t^{dim X}"""
    mu = mobius_values(_full_lattice(arr))
    expr = sum(value * t ** (arr.n - flat.codim) for flat, value in mu.items())
    return Poly(expr, t, domain="ZZ")


def poincare_polynomial(arr: Arrangement) -> Poly:
    """π(A, t) = Σ |μ(X)| t^{rank X}"""
    mu = mobius_values(_full_lattice(arr))
    expr = sum(abs(value) * t ** flat.codim for flat, value in mu.items())
    return Poly(expr, t, domain="ZZ")


def proj_complement_euler(arr: Arrangement) -> int:
    """
    射影补集 U = P^{n-1} \\ P(D) 的欧拉示性数

    Returns:
        (π(A,t) / (1+t)) 在 t = -1 处的值
    """
    quotient, remainder = div(poincare_polynomial(arr), Poly(1 + t, t, domain="ZZ"))
    if not remainder.is_zero:
        raise ArrangementError("Poincaré 多项式不能被 1+t 整除", {"remainder": str(remainder)})
    return int(quotient.eval(-1))
