# coding:utf-8
"""
配置管理模块 - 统一加载、校验和更新 config.json
"""
import copy
import json
import logging
from typing import Dict, Any, Optional
from pathlib import Path

logger = logging.getLogger(__name__)

DEFAULT_CONFIG: Dict[str, Any] = {
    "lattice": {
        "max_subset_size": 4,
        "brute_force_limit": 12,
        "dense_cross_check": False
    },
    "spectrum": {
        "s_policy": "dense",
        "enable_threading": False,
        "max_workers": 4
    },
    "chow": {
        "enable_threading": False,
        "max_workers": 4
    },
    "verify": {
        "seed": 20240611,
        "corpus_size": 25,
        "min_degree": 4,
        "max_degree": 8,
        "coeff_range": 3,
        "zero_probability": 0.5,
        "max_attempts": 20000,
        "serre_samples": 100,
        "serre_coeff_range": 5,
        "ring_samples": 200,
        "ring_coeff_range": 9,
        "bilinear_samples": 100,
        "printed_samples": 500,
        "enable_threading": False,
        "max_workers": 4
    },
    "output": {
        "json_indent": None,
        "save_reports": False,
        "report_dir": "reports"
    },
    "logging": {
        "level": "INFO",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        "file_output": False,
        "filename": "hodge_spectrum.log",
        "max_bytes": 5242880,
        "backup_count": 3
    }
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """配置管理器"""

    _instance = None
    _config = None
    _config_path: Optional[Path] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ConfigManager, cls).__new__(cls)
        return cls._instance

    @classmethod
    def load_config(cls, config_path: str = None) -> Dict[str, Any]:
        """
        加载配置文件

        Args:
            config_path: 配置文件路径，如果为None则使用默认路径

        Returns:
            配置字典（已与默认配置合并）
        """
        if cls._config is not None:
            return cls._config

        explicit = config_path is not None
        if config_path is None:
            # 获取当前文件所在目录（项目根目录）
            config_path = Path(__file__).parent / "config.json"
        config_path = Path(config_path)

        if not config_path.exists():
            if explicit:
                logger.error(f"配置文件不存在: {config_path}")
                raise FileNotFoundError(f"配置文件不存在: {config_path}")
            logger.warning(f"⚠️ 未找到 {config_path}，使用内置默认配置")
            cls._config = copy.deepcopy(DEFAULT_CONFIG)
            cls._config_path = config_path
            return cls._config

        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                config = _deep_merge(DEFAULT_CONFIG, json.load(f))

            # 验证关键配置
            cls._validate_critical_settings(config)

            cls._config = config
            cls._config_path = config_path

            logger.debug(f"✅ 配置文件加载成功: {config_path}")
            return config

        except json.JSONDecodeError as e:
            logger.error(f"❌ 配置文件JSON格式错误: {e}")
            raise e

        except Exception as e:
            logger.error(f"❌ 配置文件加载失败: {e}")
            raise e

    @classmethod
    def _validate_critical_settings(cls, config: Dict[str, Any]):
        """验证关键配置项"""
        lattice_config = config.get('lattice', {})
        if lattice_config.get('max_subset_size', 4) < 4:
            logger.warning("⚠️ lattice.max_subset_size 小于 4，codim 3/4 的边可能缺失")
        if lattice_config.get('brute_force_limit', 12) > 16:
            logger.warning(
                f"⚠️ 穷举上限过大: {lattice_config['brute_force_limit']}，稠密交叉校验会很慢")

        policy = config.get('spectrum', {}).get('s_policy', 'dense')
        if policy not in ("dense", "nnc", "all"):
            logger.warning(f"⚠️ 未知的 spectrum.s_policy: {policy}，计算谱时会按输入错误退出（退出码 2）")

        if config.get('verify', {}).get('corpus_size', 25) < 1:
            logger.warning("⚠️ verify.corpus_size 小于 1，随机语料为空")

        for section in ('spectrum', 'chow', 'verify'):
            workers = config.get(section, {}).get('max_workers', 4)
            if workers < 1:
                logger.warning(f"⚠️ {section}.max_workers={workers} 无效，至少为 1")

    @classmethod
    def _save_config(cls, config: Dict[str, Any], config_path: Path):
        """保存配置文件"""
        try:
            # 确保目录存在
            config_path.parent.mkdir(parents=True, exist_ok=True)

            with open(config_path, 'w', encoding='utf-8') as f:
                json.dump(config, f, ensure_ascii=False, indent=2)

            logger.info(f"✅ 配置文件已保存: {config_path}")

        except Exception as e:
            logger.error(f"❌ 配置文件保存失败: {e}")

    @classmethod
    def update_config(cls, key_path: str, value: Any, persist: bool = False) -> bool:
        """
        更新配置项

        Args:
            key_path: 配置键路径，如 "verify.corpus_size"
            value: 新值
            persist: 是否写回配置文件（命令行覆盖只改内存）

        Returns:
            是否更新成功
        """
        if cls._config is None:
            cls.load_config()

        try:
            # 分解键路径
            keys = key_path.split('.')
            current = cls._config

            # 导航到父级
            for key in keys[:-1]:
                if key not in current:
                    current[key] = {}
                current = current[key]

            # 设置值
            current[keys[-1]] = value

            if persist:
                cls._save_config(cls._config, cls._config_path)

            logger.debug(f"✅ 配置已更新: {key_path} = {value}")
            return True

        except Exception as e:
            logger.error(f"❌ 配置更新失败: {e}")
            return False

    @classmethod
    def get_config_value(cls, key_path: str, default_value: Any = None) -> Any:
        """
        获取配置值

        Args:
            key_path: 配置键路径，如 "lattice.brute_force_limit"
            default_value: 默认值

        Returns:
            配置值
        """
        if cls._config is None:
            cls.load_config()

        try:
            keys = key_path.split('.')
            current = cls._config

            for key in keys:
                if key in current:
                    current = current[key]
                else:
                    return default_value

            return current

        except Exception as e:
            logger.error(f"❌ 获取配置值失败: {e}")
            return default_value

    @classmethod
    def reload_config(cls, config_path: str = None) -> Dict[str, Any]:
        """重新加载配置文件"""
        cls._config = None
        return cls.load_config(config_path)

    @classmethod
    def print_config_summary(cls):
        """打印配置摘要"""
        if cls._config is None:
            cls.load_config()

        logger.info("📋 当前配置摘要:")
        logger.info(
            f"   - 边策略: {cls._config.get('spectrum', {}).get('s_policy', 'N/A')}")
        logger.info(
            f"   - 子集闭包上限: {cls._config.get('lattice', {}).get('max_subset_size', 'N/A')}")
        logger.info(
            f"   - 稠密交叉校验: {cls._config.get('lattice', {}).get('dense_cross_check', 'N/A')}")
        logger.info(
            f"   - 随机语料: {cls._config.get('verify', {}).get('corpus_size', 'N/A')}个, "
            f"seed={cls._config.get('verify', {}).get('seed', 'N/A')}")
        logger.info(
            f"   - 多线程: spectrum={cls._config.get('spectrum', {}).get('enable_threading', 'N/A')}, "
            f"chow={cls._config.get('chow', {}).get('enable_threading', 'N/A')}")
