# coding:utf-8
"""
交集理论校验模块 - 在典范对数消解上用 Chern 类、Todd 类与 Chern 特征
独立重算每个谱重数，并提供 Serre 对偶残差与闭式展开的逐项对照
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import List, Sequence, Tuple

from sympy import Poly, symbols
from sympy.polys.polyfuncs import symmetrize

from arrangement import Arrangement, RankTooHighError, essentialize, pad_arrangement
from chow_ring import (BadRankError, C, CC, CCC, NonIntegerResultError, RingContext, RingElement,
                       top_pairing)
from config_manager import ConfigManager
from intersection_lattice import lattice_summary
from spectrum_engine import Spectrum, gbinom
from utils import run_parallel

logger = logging.getLogger(__name__)

Graded = Tuple[RingElement, RingElement, RingElement, RingElement]


def _series(parts: Sequence[RingElement]) -> RingElement:
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


# ── Chern 类 ──────────────────────────────────────────

@lru_cache(maxsize=256)
def chern_classes(ctx: RingContext) -> Tuple[Graded, Graded]:
    """
    切丛与对数余切丛的全 Chern 类

    Returns:
        (c(Ỹ) 的 0..3 次部分, c(Ω¹(log Z̃)) 的 0..3 次部分)
    """
    one, c = ctx.one(), ctx.c()
    total = (one - c) ** 4
    for j in range(ctx.n_b):
        b = ctx.b(j)
        total = total * (one + b) * (one - c - b) ** 3 * (one - c) ** -3
    for i in range(ctx.n_a):
        a = ctx.a(i)
        base = one - c - _series([ctx.zero()] + [ctx.b(j) for j in sorted(ctx.containments[i])])
        total = total * (one + a) * (base - a) ** 2 * base ** -2
    tangent = total.graded()

    # 对偶丛：k 次部分乘 (-1)^k
    omega = _series([part if k % 2 == 0 else -part for k, part in enumerate(tangent)])
    log_total = omega
    for j in range(ctx.n_b):
        log_total = log_total * (one - ctx.b(j)).inverse()
    for i in range(ctx.n_a):
        log_total = log_total * (one - ctx.a(i)).inverse()
    for av, bw in ctx.incidences:
        strict = one + c + _series([ctx.zero()] + [ctx.b(j) for j in sorted(bw)] + [ctx.a(i) for i in sorted(av)])
        log_total = log_total * strict.inverse()
    return tangent, log_total.graded()


def todd_from_chern(cs: Sequence[RingElement]) -> RingElement:
    """td = 1 + c1/2 + (c1^2 + c2)/12 + c1 c2/24"""
    if len(cs) == 4:
        cs = cs[1:]
    c1, c2, _ = cs
    one = c1.ctx.one()
    return one + c1 / 2 + (c1 * c1 + c2) / 12 + (c1 * c2) / 24


def ch_line(ctx: RingContext, u: RingElement) -> RingElement:
    """exp(u) 截断到 3 次"""
    u2 = u * u
    return ctx.one() + u + u2 / 2 + (u2 * u) / 6


# ── 外幂的 Chern 特征 ─────────────────────────────────

_ROOTS = symbols("x1 x2 x3")


@lru_cache(maxsize=None)
def _wedge_power_sums(p: int) -> Tuple[Tuple[int, Tuple[Tuple[Tuple[int, int, int], Fraction], ...]], ...]:
    """
    秩 3 丛的 ∧^p 的 Chern 根幂和 Σ (x_{i1}+...+x_{ip})^k（k=1..3）
    用初等对称多项式 e1, e2, e3 表示

    Returns:
        ((k, ((e 指数), 系数), ...), ...)
    """
    table = []
    for k in range(1, 4):
        expr = sum(sum(subset) ** k for subset in combinations(_ROOTS, p))
        sym, remainder, defs = symmetrize(expr, *_ROOTS, formal=True)
        if remainder != 0:
            raise BadRankError(f"∧^{p} 的 {k} 次幂和未能完全对称化: {remainder}")
        gens = [s for s, _ in defs]
        terms = []
        for monom, coeff in Poly(sym, *gens).terms():
            exps = [0, 0, 0]
            for gen, e in zip(gens, monom):
                exps[int(gen.name[1:]) - 1] = e
            terms.append((tuple(exps), Fraction(int(coeff.p), int(coeff.q))))
        table.append((k, tuple(terms)))
    return tuple(table)


def ch_wedge(p: int, c_a: Sequence[RingElement]) -> RingElement:
    """
    秩 3 丛 A 的 ∧^p A 的 Chern 特征，截断到 3 次

    Args:
        p: 0..3
        c_a: (c1, c2, c3) 或含 0 次项的 4 元组

    Returns:
        RingElement
    """
    if p not in (0, 1, 2, 3):
        raise BadRankError(f"外幂次数必须在 0..3，实际 {p}", {"p": p})
    if len(c_a) == 4:
        c_a = c_a[1:]
    ctx = c_a[0].ctx
    result = ctx.scalar(math.comb(3, p))
    if p == 0:
        return result
    powers = {}
    for k, terms in _wedge_power_sums(p):
        for exps, coeff in terms:
            if exps not in powers:
                value = ctx.one()
                for chern, e in zip(c_a, exps):
                    value = value * chern ** e
                powers[exps] = value
            result = result + powers[exps] * (coeff / math.factorial(k))
    return result


# ── μ_p ───────────────────────────────────────────────

@lru_cache(maxsize=1024)
def _kernel(ctx: RingContext, p: int) -> RingElement:
    """ch(∧^p A)·td(Ỹ)，与 u 无关的部分"""
    tangent, log_classes = chern_classes(ctx)
    return ch_wedge(p, log_classes) * todd_from_chern(tangent)


def mu_p(ctx: RingContext, p: int, u: RingElement) -> int:
    """
    μ_p(u) = (-1)^{p-3} ∫ ch(∧^p A)·ch(O(U))·td(Ỹ)

    Returns:
        整数；出现非整数时抛出 NonIntegerResultError
    """
    value = -top_pairing(_kernel(ctx, p), ch_line(ctx, u))
    if (p - 3) % 2:
        value = -value
    if value.denominator != 1:
        raise NonIntegerResultError(f"μ_{p} 出现非整数 {value}", {"p": p, "u": repr(u), "value": str(value)})
    return int(value)


def boundary_class(ctx: RingContext) -> RingElement:
    """约化全变换 Z̃_red 的类 z = Σ(1-m_V)a_V + Σ(1-m_W)b_W - d·c"""
    return ctx.divisor(-ctx.d, [1 - m for m in ctx.a_mults], [1 - m for m in ctx.b_mults])


def serre_residual(ctx: RingContext, p: int, u: RingElement) -> Fraction:
    """μ_p(u) - μ_{3-p}(-z-u)，乘法表正确时恒为 0"""
    dual = -boundary_class(ctx) - u
    return Fraction(mu_p(ctx, p, u) - mu_p(ctx, 3 - p, dual))


def grid_divisor(ctx: RingContext, i: int) -> RingElement:
    """i·c + Σ ⌊i m/d⌋ e"""
    d = ctx.d
    return ctx.divisor(i, [(i * m) // d for m in ctx.a_mults], [(i * m) // d for m in ctx.b_mults])


def symmetry_pairing(ctx: RingContext, p: int, i: int) -> int:
    """对偶形式的 n_{f, p+1-i/d} = μ_p((d-i)c + Σ(m-1-⌊im/d⌋)e)"""
    d = ctx.d
    u = ctx.divisor(d - i, [m - 1 - (i * m) // d for m in ctx.a_mults],
                    [m - 1 - (i * m) // d for m in ctx.b_mults])
    return mu_p(ctx, p, u)


def spectrum_via_chow(arr: Arrangement) -> Spectrum:
    """
    通过上同调环计算谱：本质化、补齐到 C^4、逐个 (p, i) 计算 μ_p，再平移回原环境维数

    Args:
        arr: 本质秩不超过 4 的排列

    Returns:
        Spectrum
    """
    ess, _ = essentialize(arr)
    if ess.n > 4:
        raise RankTooHighError(f"本质秩 {ess.n} 超过 4", {"rank": ess.n})
    padded = pad_arrangement(ess, 4)
    ctx = RingContext.from_summary(lattice_summary(padded, "nnc"))
    d = ctx.d

    tasks = [(p, i) for p in range(4) for i in range(d) if not (p == 0 and i == 0)]

    def evaluate(task: Tuple[int, int]) -> Tuple[Fraction, int]:
        p, i = task
        return 4 - p - Fraction(i, d), mu_p(ctx, p, grid_divisor(ctx, i))

    results = run_parallel(
        evaluate, tasks,
        max_workers=ConfigManager.get_config_value("chow.max_workers", 4),
        enable_threading=ConfigManager.get_config_value("chow.enable_threading", False),
        desc="μ_p 网格")
    return Spectrum.from_mapping(dict(results), 4, d).shift(arr.n - 4)


# ── 闭式展开（对照用） ────────────────────────────────

def _coeffs(ctx: RingContext, u: RingElement) -> Tuple[int, List[int], List[int]]:
    u0 = int(u.coefficient(C))
    ua = [int(u.coefficient(("a", i))) for i in range(ctx.n_a)]
    ub = [int(u.coefficient(("b", j))) for j in range(ctx.n_b)]
    return u0, ua, ub


def printed_tangent_chern(ctx: RingContext) -> Graded:
    one, c = ctx.one(), ctx.c()
    deg1 = -(_series([ctx.zero()] + [ctx.a(i) for i in range(ctx.n_a)])
             + 2 * _series([ctx.zero()] + [ctx.b(j) for j in range(ctx.n_b)]) + 4 * c)
    deg2 = ctx.element({CC: 6})
    for i in range(ctx.n_a):
        deg2 = deg2 + ctx.element({("aa", i): -1, ("ac", i): 2})
    deg3 = ctx.element({CCC: -(2 * ctx.n_a + 2 * ctx.n_b + 4)})
    return one, deg1, deg2, deg3


def printed_log_chern(ctx: RingContext) -> Graded:
    d = ctx.d
    deg1 = ctx.element({C: -(d - 4)})
    deg2 = ctx.element({CC: gbinom(d - 3, 2)})
    top = gbinom(d - 2, 3)
    for j, mw in enumerate(ctx.b_mults):
        deg1 = deg1 + ctx.element({("b", j): -(mw - 3)})
        deg2 = deg2 + ctx.element({("bb", j): gbinom(mw - 2, 2)})
        top -= gbinom(mw - 1, 3)
    for i, mv in enumerate(ctx.a_mults):
        below = sorted(ctx.containments[i])
        deg1 = deg1 + ctx.element({("a", i): -(mv - 2)})
        ac = (mv - 2) * (d - 3 - sum(ctx.b_mults[j] - 2 for j in below))
        deg2 = deg2 + ctx.element({("aa", i): gbinom(mv - 1, 2), ("ac", i): ac})
        top += 2 * gbinom(mv - 1, 3) - (d - 4) * gbinom(mv - 1, 2)
        for j in below:
            top -= 2 * gbinom(mv - 1, 3) - (ctx.b_mults[j] - 3) * gbinom(mv - 1, 2)
    return ctx.one(), deg1, deg2, ctx.element({CCC: -top})


def printed_ch_line(ctx: RingContext, u: RingElement) -> RingElement:
    u0, ua, ub = _coeffs(ctx, u)
    deg2 = ctx.element({CC: Fraction(u0 * u0, 2)})
    top = Fraction(u0 ** 3)
    for j, uw in enumerate(ub):
        deg2 = deg2 + ctx.element({("bb", j): Fraction(uw * uw, 2)})
        top -= uw ** 3
    for i, uv in enumerate(ua):
        below = sorted(ctx.containments[i])
        deg2 = deg2 + ctx.element({("aa", i): Fraction(uv * uv, 2),
                                   ("ac", i): uv * (u0 - sum(ub[j] for j in below))})
        top += uv * uv * ((2 * uv - 3 * u0) + sum(3 * ub[j] - 2 * uv for j in below))
    return ctx.one() + u.degree_part(1) + deg2 + ctx.element({CCC: top / 6})


def printed_mu(ctx: RingContext, p: int, u: RingElement) -> int:
    """μ_0..μ_3 的闭式展开"""
    if p not in (0, 1, 2, 3):
        raise BadRankError(f"外幂次数必须在 0..3，实际 {p}", {"p": p})
    d = ctx.d
    u0, ua, ub = _coeffs(ctx, u)
    ma, mb = ctx.a_mults, ctx.b_mults
    # 对偶权 v = m - u - 1
    va = [m - x - 1 for m, x in zip(ma, ua)]
    vb = [m - x - 1 for m, x in zip(mb, ub)]

    if p == 0:
        total = gbinom(u0 - 1, 3) - sum(gbinom(x, 3) for x in ub)
        for i, uv in enumerate(ua):
            total -= (u0 - 3) * gbinom(uv, 2) - 2 * gbinom(uv, 3)
            for j in ctx.containments[i]:
                total -= 2 * gbinom(uv, 3) - (ub[j] - 2) * gbinom(uv, 2)
        return total
    if p == 1:
        total = (d - u0 - 1) * gbinom(u0 - 1, 2) - sum(vb[j] * gbinom(ub[j], 2) for j in range(ctx.n_b))
        for i, uv in enumerate(ua):
            total -= uv * va[i] * (u0 - 2) + (d - u0 - 1 - 2 * va[i]) * gbinom(uv, 2)
            for j in ctx.containments[i]:
                total += uv * va[i] * (ub[j] - uv) + vb[j] * gbinom(uv, 2)
        return total
    if p == 2:
        total = (u0 - 1) * gbinom(d - u0 - 1, 2) - sum(ub[j] * gbinom(vb[j], 2) for j in range(ctx.n_b))
        for i, uv in enumerate(ua):
            total -= va[i] * uv * (d - u0 - 2) + (u0 - 1 - 2 * uv) * gbinom(va[i], 2)
            for j in ctx.containments[i]:
                total += va[i] * uv * (vb[j] - va[i]) + ub[j] * gbinom(va[i], 2)
        return total
    total = gbinom(d - u0 - 1, 3) - sum(gbinom(x, 3) for x in vb)
    for i, vv in enumerate(va):
        total -= (d - u0 - 3) * gbinom(vv, 2) - 2 * gbinom(vv, 3)
        for j in ctx.containments[i]:
            total -= 2 * gbinom(vv, 3) - (vb[j] - 2) * gbinom(vv, 2)
    return total
