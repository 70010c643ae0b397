# coding:utf-8
"""
上同调环模块 - 典范对数消解的上同调环（n=4，nnc 边集）

生成元：c（-E_0 的类）、a_V（codim 2 边）、b_W（codim 3 边）。
所有次数不超过 3 的单项式化简到规范基
    1; c, a_V, b_W; c^2, a_V^2, a_V c, b_W^2; c^3
"""
import logging
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from arrangement import ArrangementError
from intersection_lattice import Flat, LatticeSummary

logger = logging.getLogger(__name__)

Key = Tuple
Scalar = Union[int, Fraction]

ONE: Key = ("1",)
C: Key = ("c",)
CC: Key = ("cc",)
CCC: Key = ("ccc",)

DEGREE = {"1": 0, "c": 1, "a": 1, "b": 1, "cc": 2, "aa": 2, "ac": 2, "bb": 2, "ccc": 3}


# ── 异常 ──────────────────────────────────────────────

class ChowRingError(ArrangementError):
    """上同调环计算错误的基类"""


class ContextMismatchError(ChowRingError):
    """元素来自不同的环上下文，或上下文数据不自洽"""


class NonIntegerResultError(ChowRingError):
    """应为整数的欧拉示性数出现非整数，说明乘法表有误"""


class BadRankError(ChowRingError):
    """外幂次数超出 0..3"""


# ── 环上下文 ──────────────────────────────────────────

class RingContext:
    """
    环的组合数据：度数 d、边的重数、包含关系以及每个超平面经过哪些边

    Args:
        d: 超平面个数
        a_mults: codim 2 边的重数 m_V
        b_mults: codim 3 边的重数 m_W
        containments: V 下标 -> 满足 W ⊂ V 的 W 下标集合
        incidences: 每个超平面 -> (经过的 V 下标集合, 经过的 W 下标集合)
        a_labels / b_labels: 展示用的边标签
    """

    def __init__(self, d: int, a_mults: Sequence[int], b_mults: Sequence[int],
                 containments: Mapping[int, Iterable[int]],
                 incidences: Sequence[Tuple[Iterable[int], Iterable[int]]],
                 a_labels: Optional[Sequence[str]] = None,
                 b_labels: Optional[Sequence[str]] = None):
        self.d = d
        self.a_mults: Tuple[int, ...] = tuple(a_mults)
        self.b_mults: Tuple[int, ...] = tuple(b_mults)
        self.containments: Dict[int, FrozenSet[int]] = {
            i: frozenset(containments.get(i, ())) for i in range(len(self.a_mults))}
        self.incidences: Tuple[Tuple[FrozenSet[int], FrozenSet[int]], ...] = tuple(
            (frozenset(av), frozenset(bw)) for av, bw in incidences)
        self.a_labels = tuple(a_labels) if a_labels else tuple(f"a{i}" for i in range(len(self.a_mults)))
        self.b_labels = tuple(b_labels) if b_labels else tuple(f"b{j}" for j in range(len(self.b_mults)))
        self._check()

    def _check(self):
        if len(self.incidences) != self.d:
            raise ContextMismatchError(f"超平面关联数据 {len(self.incidences)} 条，d={self.d}")
        for i, ws in self.containments.items():
            if any(not 0 <= j < len(self.b_mults) for j in ws):
                raise ContextMismatchError(f"a{i} 的包含关系引用了不存在的 b 边")
        for i, m in enumerate(self.a_mults):
            count = sum(1 for av, _ in self.incidences if i in av)
            if count != m:
                raise ContextMismatchError(f"a{i} 重数 {m} 与关联计数 {count} 不一致")
        for j, m in enumerate(self.b_mults):
            count = sum(1 for _, bw in self.incidences if j in bw)
            if count != m:
                raise ContextMismatchError(f"b{j} 重数 {m} 与关联计数 {count} 不一致")
        for av, bw in self.incidences:
            for i in av:
                if not self.containments[i] <= bw:
                    raise ContextMismatchError(f"经过 a{i} 的超平面必须经过其包含的所有 b 边")

    @classmethod
    def from_summary(cls, summary: LatticeSummary) -> "RingContext":
        """由 nnc 策略的格摘要构造"""
        if summary.policy != "nnc":
            raise ContextMismatchError(f"上同调环需要 nnc 边集，实际策略 {summary.policy}",
                                       {"policy": summary.policy})
        a_edges: Tuple[Flat, ...] = summary.dense2
        b_edges: Tuple[Flat, ...] = summary.dense3
        b_index = {w: j for j, w in enumerate(b_edges)}
        containments = {i: [b_index[w] for w in summary.contained_in(v)] for i, v in enumerate(a_edges)}
        incidences = []
        for l in range(summary.d):
            incidences.append((
                [i for i, v in enumerate(a_edges) if l in v.members],
                [j for j, w in enumerate(b_edges) if l in w.members],
            ))
        return cls(summary.d, [v.multiplicity for v in a_edges], [w.multiplicity for w in b_edges],
                   containments, incidences,
                   [v.label() for v in a_edges], [w.label() for w in b_edges])

    @classmethod
    def from_shape(cls, d: int, a_mults: Sequence[int], b_mults: Sequence[int],
                   containments: Mapping[int, Iterable[int]]) -> "RingContext":
        """
        由抽象格形状构造，自动生成自洽的超平面关联：
        每条 a 边占用一组新的超平面，b 边包含其上方所有 a 边的超平面再补足重数
        """
        containments = {i: frozenset(ws) for i, ws in containments.items()}
        labels = 0
        a_planes: List[FrozenSet[int]] = []
        for m in a_mults:
            a_planes.append(frozenset(range(labels, labels + m)))
            labels += m
        b_planes: List[FrozenSet[int]] = []
        for j, m in enumerate(b_mults):
            inherited = frozenset().union(*[a_planes[i] for i, ws in containments.items() if j in ws])
            extra = m - len(inherited)
            if extra < 0:
                raise ContextMismatchError(f"b{j} 重数 {m} 小于其上方 a 边的超平面数 {len(inherited)}")
            b_planes.append(inherited | frozenset(range(labels, labels + extra)))
            labels += extra
        if labels > d:
            raise ContextMismatchError(f"形状需要至少 {labels} 个超平面，d={d}")
        incidences = [
            ([i for i, ps in enumerate(a_planes) if l in ps], [j for j, ps in enumerate(b_planes) if l in ps])
            for l in range(d)
        ]
        return cls(d, a_mults, b_mults, containments, incidences)

    @property
    def n_a(self) -> int:
        return len(self.a_mults)

    @property
    def n_b(self) -> int:
        return len(self.b_mults)

    def t_count(self, i: int) -> int:
        return len(self.containments[i])

    # 构造元素
    def element(self, coeffs: Mapping[Key, Scalar]) -> "RingElement":
        return RingElement(self, coeffs)

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def scalar(self, x: Scalar) -> "RingElement":
        return RingElement(self, {ONE: x})

    def one(self) -> "RingElement":
        return self.scalar(1)

    def c(self) -> "RingElement":
        return RingElement(self, {C: 1})

    def a(self, i: int) -> "RingElement":
        return RingElement(self, {("a", i): 1})

    def b(self, j: int) -> "RingElement":
        return RingElement(self, {("b", j): 1})

    def divisor(self, u0: Scalar, ua: Sequence[Scalar] = (), ub: Sequence[Scalar] = ()) -> "RingElement":
        """u = u0·c + Σ ua[i]·a_i + Σ ub[j]·b_j"""
        coeffs: Dict[Key, Scalar] = {C: u0}
        coeffs.update({("a", i): x for i, x in enumerate(ua)})
        coeffs.update({("b", j): x for j, x in enumerate(ub)})
        return RingElement(self, coeffs)

    def basis(self) -> List[Key]:
        keys: List[Key] = [ONE, C]
        keys += [("a", i) for i in range(self.n_a)] + [("b", j) for j in range(self.n_b)]
        keys += [CC] + [("aa", i) for i in range(self.n_a)] + [("ac", i) for i in range(self.n_a)]
        keys += [("bb", j) for j in range(self.n_b)] + [CCC]
        return keys

    # 乘法表
    def _deg11(self, x: Key, y: Key) -> Tuple[Tuple[Key, int], ...]:
        kx, ky = x[0], y[0]
        if kx == "a" and ky == "a":
            return ((("aa", x[1]), 1),) if x[1] == y[1] else ()
        if kx == "a" and ky == "b":
            return ((("ac", x[1]), -1),) if y[1] in self.containments[x[1]] else ()
        if kx == "a" and ky == "c":
            return ((("ac", x[1]), 1),)
        if kx == "b" and ky == "b":
            return ((("bb", x[1]), 1),) if x[1] == y[1] else ()
        if kx == "b" and ky == "c":
            return ()
        return ((CC, 1),)

    def _deg12(self, x: Key, y: Key) -> int:
        """次数 1 乘次数 2，返回 c^3 的系数"""
        kx, ky = x[0], y[0]
        if kx == "c":
            return {"cc": 1, "aa": -1}.get(ky, 0)
        if kx == "a":
            if ky == "aa" and y[1] == x[1]:
                return 2 * (1 - self.t_count(x[1]))
            if ky == "ac" and y[1] == x[1]:
                return -1
            return 0
        # kx == "b"
        if ky == "aa" and x[1] in self.containments[y[1]]:
            return 1
        if ky == "bb" and y[1] == x[1]:
            return -1
        return 0

    def basis_product(self, x: Key, y: Key) -> Tuple[Tuple[Key, int], ...]:
        dx, dy = DEGREE[x[0]], DEGREE[y[0]]
        if dx == 0:
            return ((y, 1),)
        if dy == 0:
            return ((x, 1),)
        if dx + dy > 3:
            return ()
        if dx > dy or (dx == dy and x > y):
            x, y = y, x
            dx, dy = dy, dx
        if dx == 1 and dy == 1:
            return self._deg11(x, y)
        value = self._deg12(x, y)
        return ((CCC, value),) if value else ()


# ── 环元素 ────────────────────────────────────────────

class RingElement:
    """规范基上的有理系数线性组合"""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: RingContext, coeffs: Mapping[Key, Scalar]):
        self.ctx = ctx
        self.coeffs: Dict[Key, Fraction] = {k: Fraction(v) for k, v in coeffs.items() if v != 0}

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ctx is not self.ctx:
                raise ContextMismatchError("两个元素属于不同的环上下文")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            coeffs[k] = coeffs.get(k, 0) + v
        return RingElement(self.ctx, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ctx, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RingElement(self.ctx, {k: v * other for k, v in self.coeffs.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar):
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.ctx.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.scalar(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.ctx), frozenset(self.coeffs.items())))

    def coefficient(self, key: Key) -> Fraction:
        return self.coeffs.get(key, Fraction(0))

    def constant(self) -> Fraction:
        return self.coefficient(ONE)

    def degree_part(self, k: int) -> "RingElement":
        return RingElement(self.ctx, {key: v for key, v in self.coeffs.items() if DEGREE[key[0]] == k})

    def graded(self) -> Tuple["RingElement", ...]:
        """(次数 0, 1, 2, 3 部分)"""
        return tuple(self.degree_part(k) for k in range(4))

    def inverse(self) -> "RingElement":
        """常数项非零时的逆，幂零部分展开到 3 次"""
        a0 = self.constant()
        if a0 == 0:
            raise ChowRingError("常数项为零的元素不可逆")
        y = self / a0 - 1
        y2 = y * y
        return (1 - y + y2 - y2 * y) / a0

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        names = {"1": "1", "c": "c", "cc": "c^2", "ccc": "c^3"}
        parts = []
        for key in self.ctx.basis():
            if key not in self.coeffs:
                continue
            kind = key[0]
            if kind in names:
                name = names[kind]
            else:
                label = f"{kind[0]}{key[1]}"
                name = {"a": label, "b": label, "aa": f"{label}^2", "ac": f"{label}*c", "bb": f"{label}^2"}[kind]
            parts.append(f"{self.coeffs[key]}*{name}")
        return " + ".join(parts)


def mul(x: RingElement, y: RingElement) -> RingElement:
    """按关系表双线性展开的乘积"""
    if x.ctx is not y.ctx:
        raise ContextMismatchError("两个元素属于不同的环上下文")
    ctx = x.ctx
    coeffs: Dict[Key, Fraction] = {}
    for kx, vx in x.coeffs.items():
        for ky, vy in y.coeffs.items():
            for key, factor in ctx.basis_product(kx, ky):
                coeffs[key] = coeffs.get(key, 0) + vx * vy * factor
    return RingElement(ctx, coeffs)


def top_pairing(x: RingElement, y: RingElement) -> Fraction:
    """x·y 中 c^3 的系数，只展开次数和为 3 的项"""
    if x.ctx is not y.ctx:
        raise ContextMismatchError("两个元素属于不同的环上下文")
    ctx = x.ctx
    total = Fraction(0)
    for kx, vx in x.coeffs.items():
        dx = DEGREE[kx[0]]
        for ky, vy in y.coeffs.items():
            if dx + DEGREE[ky[0]] != 3:
                continue
            for key, factor in ctx.basis_product(kx, ky):
                total += vx * vy * factor
    return total


def integrate(x: RingElement) -> Fraction:
    """∫c^3 = -1，低次部分积分为 0"""
    return -x.coefficient(CCC)
