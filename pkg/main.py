# coding:utf-8
"""
主模块 - 命令行入口，协调解析、谱计算、交集格输出与校验
"""
import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from concurrent_log_handler import ConcurrentRotatingFileHandler

from arrangement import Arrangement, ArrangementError
from arrangement_parser import parse_arrangement
from chow_ring import NonIntegerResultError
from chow_verifier import spectrum_via_chow
from config_manager import ConfigManager
from file_manager import FileManager
from intersection_lattice import (POLICIES, build_lattice, characteristic_polynomial,
                                  proj_complement_euler)
from spectrum_engine import spectrum
from spectrum_reporter import SpectrumReporter
from verification_harness import VerifyReport, run_corpus, verify_arrangement

logger = logging.getLogger(__name__)

COMMANDS = ("spectrum", "lattice", "dense", "verify")
METHODS = ("formula", "chow", "both")


def setup_logging(config: Dict[str, Any]):
    """诊断信息只写 stderr 和可选的滚动日志文件，stdout 留给命令输出"""
    log_cfg = config.get("logging", {})
    for handler in logging.root.handlers[:]:
        logging.root.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(log_cfg.get(
        "format", "%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
    level = getattr(logging, str(log_cfg.get("level", "INFO")).upper(), logging.INFO)

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    handlers: List[logging.Handler] = [stream_handler]

    if log_cfg.get("file_output") and log_cfg.get("filename"):
        log_dir = Path("logs")
        log_dir.mkdir(exist_ok=True)
        file_handler = ConcurrentRotatingFileHandler(
            str(log_dir / log_cfg["filename"]), "a",
            maxBytes=log_cfg.get("max_bytes", 5 * 1024 * 1024),
            backupCount=log_cfg.get("backup_count", 3),
            encoding="utf-8")
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        handlers.append(file_handler)

    logging.basicConfig(level=level, handlers=handlers)


class SpectrumPipeline:
    """从排列文件到输出文本的处理流水线"""

    def __init__(self):
        self.reporter = SpectrumReporter()

    def _load(self, file_path: str) -> Arrangement:
        arr = parse_arrangement(FileManager.load_text(file_path))
        logger.info(f"📋 读取排列 {file_path}: d={arr.d}, n={arr.n}")
        return arr

    def _save_report(self, name: str, data: Any, failed_inputs: Optional[Dict[str, str]] = None):
        """保存 JSON 报告；未通过的输入另存为可直接复现的排列文件"""
        if not ConfigManager.get_config_value("output.save_reports", False):
            return
        report_dir = Path(ConfigManager.get_config_value("output.report_dir", "reports"))
        stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        FileManager.save_json(data, str(report_dir / f"{name}_{stamp}.json"))
        for input_name, text in (failed_inputs or {}).items():
            FileManager.save_text(text, str(report_dir / f"failed_{input_name}_{stamp}.txt"))
        logger.info(f"📁 报告已保存到 {report_dir}")

    def spectrum(self, file_path: str, method: str = "formula", s_policy: Optional[str] = None,
                 as_json: bool = False) -> Tuple[int, str]:
        if method not in METHODS:
            raise ArrangementError(f"未知的计算方法: {method}", {"method": method})
        arr = self._load(file_path)
        status = 0
        if method == "chow":
            result = spectrum_via_chow(arr)
        else:
            result = spectrum(arr, s_policy)
            if method == "both":
                chow = spectrum_via_chow(arr)
                if chow != result:
                    logger.error(f"❌ 两种方法结果不一致: 公式 {result.terms_text()}，上同调环 {chow.terms_text()}")
                    status = 1
                else:
                    logger.info("✅ 公式与上同调环结果一致")
        self.reporter.log_spectrum_summary(arr, result, method)
        self._save_report("spectrum", self.reporter.spectrum_dict(result, arr.d))
        output = self.reporter.spectrum_json(result, arr.d) if as_json else self.reporter.spectrum_text(result)
        return status, output

    def lattice(self, file_path: str, as_json: bool = False) -> Tuple[int, str]:
        arr = self._load(file_path)
        lattice = build_lattice(arr)
        poly = characteristic_polynomial(arr)
        chi = proj_complement_euler(arr)
        if as_json:
            extra = {"characteristic_polynomial": [int(c) for c in poly.all_coeffs()], "euler_complement": chi}
            return 0, self.reporter.lattice_json(arr, lattice, extra)
        text = self.reporter.lattice_text(lattice)
        return 0, f"{text}\nchar poly: {poly.as_expr()}\nchi(U): {chi}"

    def dense(self, file_path: str, as_json: bool = False) -> Tuple[int, str]:
        arr = self._load(file_path)
        lattice = build_lattice(arr)
        if as_json:
            return 0, self.reporter.dense_json(arr, lattice)
        return 0, self.reporter.dense_text(arr, lattice)

    def verify(self, file_path: Optional[str] = None, as_json: bool = False,
               corpus_size: Optional[int] = None, seed: Optional[int] = None) -> Tuple[int, str]:
        if corpus_size is not None:
            ConfigManager.update_config("verify.corpus_size", corpus_size)
        if seed is not None:
            ConfigManager.update_config("verify.seed", seed)
        config = ConfigManager.load_config()
        ConfigManager.print_config_summary()

        if file_path:
            reports: List[VerifyReport] = [verify_arrangement(self._load(file_path), Path(file_path).name, config)]
            source = file_path
        else:
            reports = run_corpus(config)
            source = "随机语料"

        self.reporter.log_verify_summary(reports, source)
        self._save_report("verify", {"passed": all(r.passed for r in reports),
                                     "reports": [r.to_dict() for r in reports]},
                          {r.name: r.input_echo for r in reports if not r.passed and r.name != "ring"})
        output = self.reporter.verify_json(reports) if as_json else self.reporter.verify_text(reports)
        return (0 if all(r.passed for r in reports) else 1), output


def run(command: str, flags: Dict[str, Any]) -> Tuple[int, str]:
    """
    执行一条命令

    Args:
        command: spectrum / lattice / dense / verify
        flags: file, method, s_policy, json, corpus_size, seed

    Returns:
        (退出码, stdout 输出)；0 成功，1 检查失败，2 输入错误
    """
    if command not in COMMANDS:
        logger.error(f"❌ 未知命令: {command}")
        return 2, ""
    pipeline = SpectrumPipeline()
    as_json = bool(flags.get("json", False))
    try:
        if command == "spectrum":
            return pipeline.spectrum(flags["file"], flags.get("method") or "formula",
                                     flags.get("s_policy"), as_json)
        if command == "lattice":
            return pipeline.lattice(flags["file"], as_json)
        if command == "dense":
            return pipeline.dense(flags["file"], as_json)
        return pipeline.verify(flags.get("file"), as_json, flags.get("corpus_size"), flags.get("seed"))
    except NonIntegerResultError as e:
        logger.error(f"❌ 整数性检查失败: {e.message}")
        return 1, ""
    except ArrangementError as e:
        logger.error(f"❌ 输入错误: {e.message}")
        return 2, ""
    except OSError as e:
        logger.error(f"❌ 无法读取文件: {e}")
        return 2, ""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hodge-spectrum",
        description="秩不超过 4 的中心超平面排列的 Hodge 谱",
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", default=None, help="配置文件路径（默认 config.json）")
    parser.add_argument("--log-level", default=None, help="日志级别，覆盖 logging.level")
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", help="计算谱")
    p_spec.add_argument("file")
    p_spec.add_argument("--method", choices=METHODS, default="formula")
    p_spec.add_argument("--s-policy", dest="s_policy", choices=POLICIES, default=None)
    p_spec.add_argument("--json", action="store_true")

    p_lat = sub.add_parser("lattice", help="列出交集格")
    p_lat.add_argument("file")
    p_lat.add_argument("--json", action="store_true")

    p_dense = sub.add_parser("dense", help="codim ≥ 2 边的稠密/nnc 分类")
    p_dense.add_argument("file")
    p_dense.add_argument("--json", action="store_true")

    p_ver = sub.add_parser("verify", help="运行全部一致性检查")
    p_ver.add_argument("file", nargs="?", default=None)
    p_ver.add_argument("--json", action="store_true")
    p_ver.add_argument("--corpus-size", dest="corpus_size", type=int, default=None)
    p_ver.add_argument("--seed", type=int, default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = ConfigManager.reload_config(args.config) if args.config else ConfigManager.load_config()
    except (OSError, ValueError) as e:
        print(f"配置加载失败: {e}", file=sys.stderr)
        return 2
    if args.log_level:
        ConfigManager.update_config("logging.level", args.log_level.upper())
    setup_logging(config)

    flags = {key: value for key, value in vars(args).items() if key not in ("command", "config", "log_level")}
    status, output = run(args.command, flags)
    if output:
        print(output)
    for handler in logging.root.handlers:
        handler.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
