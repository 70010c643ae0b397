# coding:utf-8
"""
校验工具模块 - 双路径一致性、边策略不变性、Serre 对偶、欧拉和、
Thom-Sebastiani 平移与边权对偶六项检查，随机语料生成与环的性质检查
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from arrangement import (Arrangement, ArrangementError, RankTooHighError, essential_rank,
                         essentialize, pad_arrangement, validate_arrangement)
from arrangement_parser import format_arrangement
from chow_ring import ChowRingError, RingContext, RingElement, integrate, mul
from chow_verifier import (ch_line, chern_classes, mu_p, printed_ch_line, printed_log_chern, printed_mu,
                           printed_tangent_chern, serre_residual, spectrum_via_chow, symmetry_pairing)
from config_manager import DEFAULT_CONFIG
from intersection_lattice import POLICIES, lattice_summary
from spectrum_engine import (BRANCHES, InconsistentWeightsError, Spectrum, assemble_weights,
                             euler_sum_check, spectrum, theorem_spectrum)
from utils import ProgressTracker, run_parallel

logger = logging.getLogger(__name__)

CHECKS = ("dual-path", "s-invariance", "serre", "euler-sum", "ts-shift", "weight-duality")


# ── 报告结构 ──────────────────────────────────────────

@dataclass
class CheckRecord:
    name: str
    status: str
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "status": self.status, "details": self.details}


@dataclass
class VerifyReport:
    """单个输入的全部检查结果；任何失败都附带可复现的输入文本"""

    name: str
    input_echo: str
    checks: List[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        data = {"name": self.name, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}
        if not self.passed:
            data["input"] = self.input_echo
        return data


def _verify_settings(config: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    settings = dict(DEFAULT_CONFIG["verify"])
    if config:
        settings.update(config.get("verify", {}))
    return settings


def _spectrum_repr(sp: Spectrum) -> str:
    return sp.terms_text()


def _run_check(name: str, body: Callable[[], Dict[str, Any]]) -> CheckRecord:
    """body 返回失败细节，空字典表示通过"""
    try:
        details = body()
    except (ChowRingError, InconsistentWeightsError) as e:
        logger.error(f"❌ 检查 {name} 出现计算异常: {e}")
        return CheckRecord(name, "fail", {"error": type(e).__name__, "message": e.message, **e.details})
    return CheckRecord(name, "fail" if details else "pass", details)


# ── 六项检查 ──────────────────────────────────────────

def _padded_essential(arr: Arrangement) -> Arrangement:
    ess, _ = essentialize(arr)
    return pad_arrangement(ess, 4)


def check_dual_path(arr: Arrangement) -> CheckRecord:
    def body():
        formula, chow = spectrum(arr), spectrum_via_chow(arr)
        if formula == chow:
            return {}
        return {"formula": _spectrum_repr(formula), "chow": _spectrum_repr(chow)}
    return _run_check("dual-path", body)


def check_s_invariance(arr: Arrangement) -> CheckRecord:
    def body():
        padded = _padded_essential(arr)
        results = {policy: theorem_spectrum(padded, policy) for policy in POLICIES}
        if len(set(results.values())) == 1:
            return {}
        return {policy: _spectrum_repr(sp) for policy, sp in results.items()}
    return _run_check("s-invariance", body)


def check_serre(arr: Arrangement, rng: np.random.Generator, samples: int, coeff_range: int) -> CheckRecord:
    def body():
        padded = _padded_essential(arr)
        ctx = RingContext.from_summary(lattice_summary(padded, "nnc"))
        size = 1 + ctx.n_a + ctx.n_b
        for _ in range(samples):
            raw = [int(x) for x in rng.integers(-coeff_range, coeff_range + 1, size=size)]
            u = ctx.divisor(raw[0], raw[1:1 + ctx.n_a], raw[1 + ctx.n_a:])
            for p in range(4):
                residual = serre_residual(ctx, p, u)
                if residual != 0:
                    return {"p": p, "u": repr(u), "residual": str(residual)}

        sp = spectrum(padded)
        d = ctx.d
        for p in range(4):
            for i in range(d):
                alpha = p + 1 - Fraction(i, d)
                if alpha >= 4:
                    continue
                value = symmetry_pairing(ctx, p, i)
                if value != sp.multiplicity(alpha):
                    return {"p": p, "i": i, "alpha": str(alpha), "pairing": value,
                            "spectrum": sp.multiplicity(alpha)}
        return {}
    return _run_check("serre", body)


def check_euler_sum(arr: Arrangement) -> CheckRecord:
    def body():
        sp = spectrum(arr)
        return {} if euler_sum_check(arr, sp) else {"sum": sp.euler_sum()}
    return _run_check("euler-sum", body)


def check_ts_shift(arr: Arrangement) -> CheckRecord:
    def body():
        base = spectrum(arr)
        shifted = spectrum(pad_arrangement(arr, arr.n + 1))
        if shifted == base.shift(1):
            return {}
        return {"expected": _spectrum_repr(base.shift(1)), "actual": _spectrum_repr(shifted)}
    return _run_check("ts-shift", body)


def check_weight_duality(arr: Arrangement) -> CheckRecord:
    def body():
        summary = lattice_summary(_padded_essential(arr), "dense")
        d = summary.d
        for i in range(d + 1):
            for branch in BRANCHES:
                if branch == "ceil" and i == 0:
                    continue
                if branch == "floor" and i == d:
                    continue
                assemble_weights(summary, i, branch)
        for i in range(1, d + 1):
            up = assemble_weights(summary, i, "ceil")
            down = assemble_weights(summary, d - i, "floor")
            for edge in summary.edges:
                if up.u[edge] != down.v[edge] or up.v[edge] != down.u[edge]:
                    return {"i": i, "edge": edge.label(), "ceil": (up.u[edge], up.v[edge]),
                            "floor": (down.u[edge], down.v[edge])}
        return {}
    return _run_check("weight-duality", body)


def verify_arrangement(arr: Arrangement, name: str = "input", config: Optional[Dict[str, Any]] = None,
                       rng: Optional[np.random.Generator] = None) -> VerifyReport:
    """
    对单个排列运行六项检查

    Args:
        arr: 本质秩不超过 4 的排列
        name: 报告中的名字
        config: 完整配置字典，None 时使用默认值
        rng: Serre 检查的随机源

    Returns:
        VerifyReport
    """
    r = essential_rank(arr)
    if r > 4:
        raise RankTooHighError(f"本质秩 {r} 超过 4", {"rank": r})
    settings = _verify_settings(config)
    if rng is None:
        rng = np.random.default_rng(settings["seed"])

    report = VerifyReport(name, format_arrangement(arr))
    report.checks.append(check_dual_path(arr))
    report.checks.append(check_s_invariance(arr))
    report.checks.append(check_serre(arr, rng, settings["serre_samples"], settings["serre_coeff_range"]))
    report.checks.append(check_euler_sum(arr))
    report.checks.append(check_ts_shift(arr))
    report.checks.append(check_weight_duality(arr))
    if report.passed:
        logger.debug(f"✅ {name} 全部检查通过")
    else:
        failed = [c.name for c in report.checks if c.status != "pass"]
        logger.warning(f"⚠️ {name} 未通过: {', '.join(failed)}")
    return report


# ── 测试排列 ──────────────────────────────────────────

FIXTURES: Dict[str, Tuple[List[List[int]], Dict[Fraction, int]]] = {
    "A1": ([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
           {Fraction(1): 1, Fraction(2): -3, Fraction(3): 3}),
    "A2": ([[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0]],
           {Fraction(2): -2, Fraction(3): 3}),
    "A3": ([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 0], [0, 0, 0, 1]],
           {Fraction(1): 3, Fraction(2): -6, Fraction(3): 4}),
    "A4": ([[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 1, 1], [0, 0, 1, 2]],
           {Fraction(1): 6, Fraction(2): -11, Fraction(3): 6}),
    "A5": ([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]],
           {Fraction(3, 4): 1, Fraction(1): 3, Fraction(3, 2): 1, Fraction(2): -3, Fraction(9, 4): 1}),
}


def fixture_arrangement(name: str) -> Arrangement:
    rows, _ = FIXTURES[name]
    return validate_arrangement(rows)


def fixture_spectrum(name: str) -> Spectrum:
    rows, expected = FIXTURES[name]
    return Spectrum.from_mapping(expected, len(rows[0]), len(rows))


# ── 随机语料 ──────────────────────────────────────────

def generate_corpus(config: Optional[Dict[str, Any]] = None) -> List[Arrangement]:
    """
    拒绝采样生成 C^4 中本质秩为 4 的约化中心排列

    Args:
        config: 完整配置字典，读取 verify 节

    Returns:
        Arrangement 列表，长度为 verify.corpus_size
    """
    settings = _verify_settings(config)
    rng = np.random.default_rng(settings["seed"])
    size, bound = settings["corpus_size"], settings["coeff_range"]
    corpus: List[Arrangement] = []
    attempts = 0
    while len(corpus) < size:
        attempts += 1
        if attempts > settings["max_attempts"]:
            raise RuntimeError(f"尝试 {settings['max_attempts']} 次后仅得到 {len(corpus)} 个排列")
        d = int(rng.integers(settings["min_degree"], settings["max_degree"] + 1))
        rows = rng.integers(-bound, bound + 1, size=(d, 4))
        rows[rng.random((d, 4)) < settings["zero_probability"]] = 0
        try:
            arr = validate_arrangement([[int(x) for x in row] for row in rows], 4)
        except ArrangementError:
            continue
        if essential_rank(arr) != 4:
            continue
        corpus.append(arr)
    logger.info(f"📋 生成随机语料 {len(corpus)} 个，尝试 {attempts} 次")
    return corpus


def run_corpus(config: Optional[Dict[str, Any]] = None, include_fixtures: bool = True,
               include_ring: bool = True) -> List[VerifyReport]:
    """
    随机语料与测试排列上的完整校验

    Returns:
        每个输入一个 VerifyReport，最后附上环性质报告
    """
    settings = _verify_settings(config)
    items: List[Tuple[str, Arrangement]] = [
        (f"corpus-{k:02d}", arr) for k, arr in enumerate(generate_corpus(config))]
    if include_fixtures:
        items += [(name, fixture_arrangement(name)) for name in FIXTURES]

    tracker = ProgressTracker(len(items))

    def verify_item(indexed: Tuple[int, Tuple[str, Arrangement]]) -> VerifyReport:
        index, (name, arr) = indexed
        report = verify_arrangement(arr, name, config, np.random.default_rng([settings["seed"], index]))
        tracker.update(name)
        return report

    reports = run_parallel(verify_item, list(enumerate(items)),
                           max_workers=settings["max_workers"],
                           enable_threading=settings["enable_threading"], desc="校验")
    if include_ring:
        reports.append(ring_property_report(config))
    return reports


# ── 环的性质 ──────────────────────────────────────────

def random_shape(rng: np.random.Generator) -> RingContext:
    """随机抽象格形状：至多 2 条 a 边、2 条 b 边和任意包含关系"""
    n_a, n_b = int(rng.integers(0, 3)), int(rng.integers(0, 3))
    a_mults = [int(m) for m in rng.integers(3, 6, size=n_a)]
    containments = {i: [j for j in range(n_b) if rng.random() < 0.5] for i in range(n_a)}
    b_mults = []
    for j in range(n_b):
        above = sum(a_mults[i] for i in range(n_a) if j in containments[i])
        b_mults.append(max(4, above + 1 + int(rng.integers(0, 3))))
    used = sum(a_mults) + sum(b_mults) - sum(
        a_mults[i] for i in range(n_a) for j in containments[i])
    d = max(4, used) + int(rng.integers(0, 4))
    return RingContext.from_shape(d, a_mults, b_mults, containments)


def random_element(ctx: RingContext, rng: np.random.Generator, bound: int) -> RingElement:
    basis = ctx.basis()
    values = rng.integers(-bound, bound + 1, size=len(basis))
    return ctx.element({key: int(v) for key, v in zip(basis, values)})


def random_divisor(ctx: RingContext, rng: np.random.Generator, bound: int) -> RingElement:
    raw = [int(x) for x in rng.integers(-bound, bound + 1, size=1 + ctx.n_a + ctx.n_b)]
    return ctx.divisor(raw[0], raw[1:1 + ctx.n_a], raw[1 + ctx.n_a:])


def ring_property_report(config: Optional[Dict[str, Any]] = None) -> VerifyReport:
    """
    乘法的交换律/结合律、积分双线性以及闭式展开的逐项对照

    Returns:
        名为 "ring" 的 VerifyReport
    """
    settings = _verify_settings(config)
    rng = np.random.default_rng([settings["seed"], 7])
    bound = settings["ring_coeff_range"]
    report = VerifyReport("ring", f"seed={settings['seed']}")

    def algebra():
        for k in range(settings["ring_samples"]):
            ctx = random_shape(rng)
            x, y, z = (random_element(ctx, rng, bound) for _ in range(3))
            if mul(x, y) != mul(y, x):
                return {"sample": k, "law": "commutativity", "x": repr(x), "y": repr(y)}
            if mul(mul(x, y), z) != mul(x, mul(y, z)):
                return {"sample": k, "law": "associativity", "x": repr(x), "y": repr(y), "z": repr(z)}
        return {}

    def bilinear():
        for k in range(settings["bilinear_samples"]):
            ctx = random_shape(rng)
            x, y, z = (random_element(ctx, rng, bound) for _ in range(3))
            s, r = (int(v) for v in rng.integers(-bound, bound + 1, size=2))
            left = integrate(mul(x * s + y * r, z))
            right = s * integrate(mul(x, z)) + r * integrate(mul(y, z))
            if left != right:
                return {"sample": k, "left": str(left), "right": str(right)}
        return {}

    def printed_chern():
        for k in range(max(1, settings["printed_samples"] // 25)):
            ctx = random_shape(rng)
            tangent, log_classes = chern_classes(ctx)
            for label, ring_side, printed in (("tangent", tangent, printed_tangent_chern(ctx)),
                                              ("log", log_classes, printed_log_chern(ctx))):
                for degree, (lhs, rhs) in enumerate(zip(ring_side, printed)):
                    if lhs != rhs:
                        return {"sample": k, "class": label, "degree": degree,
                                "ring": repr(lhs), "printed": repr(rhs)}
        return {}

    def printed_formulas():
        shapes = max(1, settings["printed_samples"] // 25)
        for k in range(shapes):
            ctx = random_shape(rng)
            for _ in range(25):
                u = random_divisor(ctx, rng, settings["serre_coeff_range"])
                if ch_line(ctx, u) != printed_ch_line(ctx, u):
                    return {"sample": k, "u": repr(u), "what": "ch(O(U))"}
                for p in range(4):
                    ring_value, printed = mu_p(ctx, p, u), printed_mu(ctx, p, u)
                    if ring_value != printed:
                        return {"sample": k, "p": p, "u": repr(u), "ring": ring_value, "printed": printed}
        return {}

    report.checks.append(_run_check("ring-algebra", algebra))
    report.checks.append(_run_check("integrate-bilinear", bilinear))
    report.checks.append(_run_check("printed-chern", printed_chern))
    report.checks.append(_run_check("printed-mu", printed_formulas))
    return report
