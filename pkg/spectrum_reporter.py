# coding:utf-8
"""
谱报告模块 - 谱、交集格、稠密分类与校验报告的文本/JSON 输出
"""
import json
import logging
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence

import pandas as pd

from arrangement import Arrangement
from config_manager import ConfigManager
from intersection_lattice import Flat, is_dense
from spectrum_engine import Spectrum

logger = logging.getLogger(__name__)


def format_alpha(alpha: Fraction) -> str:
    """约分后的分数字符串，整数不带分母"""
    alpha = Fraction(alpha)
    return str(alpha.numerator) if alpha.denominator == 1 else f"{alpha.numerator}/{alpha.denominator}"


def _dumps(data: Any) -> str:
    indent = ConfigManager.get_config_value("output.json_indent", None)
    if indent is None:
        return json.dumps(data, ensure_ascii=False, separators=(",", ":"))
    return json.dumps(data, ensure_ascii=False, indent=indent)


class SpectrumReporter:
    """谱报告器"""

    # ── 谱 ──

    def spectrum_dict(self, sp: Spectrum, degree: int) -> Dict[str, Any]:
        return {
            "degree": degree,
            "ambient": sp.ambient,
            "spectrum": [{"alpha": format_alpha(a), "n": m} for a, m in sp.items()],
        }

    def spectrum_text(self, sp: Spectrum) -> str:
        """每行 "alpha n"，α 升序"""
        return "\n".join(f"{format_alpha(a)} {m}" for a, m in sp.items())

    def spectrum_json(self, sp: Spectrum, degree: int) -> str:
        return _dumps(self.spectrum_dict(sp, degree))

    # ── 交集格 ──

    def lattice_frame(self, lattice: Mapping[int, List[Flat]]) -> pd.DataFrame:
        rows = [
            {"codim": flat.codim, "hyperplanes": flat.label(), "m": flat.multiplicity}
            for k in sorted(lattice) for flat in lattice[k]
        ]
        return pd.DataFrame(rows, columns=["codim", "hyperplanes", "m"])

    def lattice_text(self, lattice: Mapping[int, List[Flat]]) -> str:
        frame = self.lattice_frame(lattice)
        return frame.to_string(index=False) if not frame.empty else ""

    def lattice_json(self, arr: Arrangement, lattice: Mapping[int, List[Flat]],
                     extra: Optional[Dict[str, Any]] = None) -> str:
        data = {
            "degree": arr.d,
            "ambient": arr.n,
            "flats": [
                {"codim": flat.codim, "hyperplanes": list(flat.hyperplanes), "m": flat.multiplicity}
                for k in sorted(lattice) for flat in lattice[k]
            ],
        }
        data.update(extra or {})
        return _dumps(data)

    # ── 稠密分类 ──

    def dense_frame(self, arr: Arrangement, lattice: Mapping[int, List[Flat]]) -> pd.DataFrame:
        rows = []
        for k in sorted(lattice):
            if k < 2:
                continue
            for flat in lattice[k]:
                rows.append({
                    "codim": flat.codim,
                    "hyperplanes": flat.label(),
                    "m": flat.multiplicity,
                    "dense": is_dense(arr, flat),
                    "nnc": flat.multiplicity >= flat.codim + 1,
                })
        return pd.DataFrame(rows, columns=["codim", "hyperplanes", "m", "dense", "nnc"])

    def dense_text(self, arr: Arrangement, lattice: Mapping[int, List[Flat]]) -> str:
        frame = self.dense_frame(arr, lattice)
        return frame.to_string(index=False) if not frame.empty else ""

    def dense_json(self, arr: Arrangement, lattice: Mapping[int, List[Flat]]) -> str:
        frame = self.dense_frame(arr, lattice)
        records = [
            {"codim": int(r["codim"]), "hyperplanes": r["hyperplanes"], "m": int(r["m"]),
             "dense": bool(r["dense"]), "nnc": bool(r["nnc"])}
            for r in frame.to_dict(orient="records")
        ]
        return _dumps({"degree": arr.d, "ambient": arr.n, "edges": records})

    # ── 校验报告 ──

    def verify_frame(self, reports: Sequence[Any]) -> pd.DataFrame:
        rows = [
            {"input": report.name, "check": check.name, "status": check.status}
            for report in reports for check in report.checks
        ]
        return pd.DataFrame(rows, columns=["input", "check", "status"])

    def verify_text(self, reports: Sequence[Any]) -> str:
        frame = self.verify_frame(reports)
        lines = [frame.to_string(index=False)] if not frame.empty else []
        for report in reports:
            for check in report.checks:
                if check.status == "fail":
                    lines.append(f"FAIL {report.name} {check.name}: {check.details}")
                    lines.append(f"  input: {report.input_echo!r}")
        passed = sum(1 for r in reports if r.passed)
        lines.append(f"{passed}/{len(reports)} passed")
        return "\n".join(lines)

    def verify_json(self, reports: Sequence[Any]) -> str:
        return _dumps({
            "passed": all(r.passed for r in reports),
            "reports": [r.to_dict() for r in reports],
        })

    def log_verify_summary(self, reports: Sequence[Any], data_source: Optional[str] = ""):
        """打印校验摘要"""
        frame = self.verify_frame(reports)
        logger.info("=" * 50)
        logger.info(f"📊 校验统计({data_source})")
        logger.info("=" * 50)
        if frame.empty:
            logger.info("   无校验记录")
            return
        table = pd.crosstab(frame["check"], frame["status"])
        for check, row in table.iterrows():
            logger.info(f"   {check}: " + ", ".join(f"{status}={int(count)}" for status, count in row.items()))
        failed = [r.name for r in reports if not r.passed]
        if failed:
            logger.warning(f"⚠️ 未通过: {', '.join(failed)}")
        else:
            logger.info(f"✅ 全部 {len(reports)} 个输入通过")

    def log_spectrum_summary(self, arr: Arrangement, sp: Spectrum, method: str = ""):
        logger.info("=" * 50)
        logger.info(f"📊 谱计算结果({method})")
        logger.info("=" * 50)
        logger.info(f"   排列: {arr.describe()}")
        logger.info(f"   d={arr.d}, n={arr.n}, 项数={len(sp)}, Σn={sp.euler_sum()}")
        logger.info(f"   Sp = {sp.terms_text()}")
