# coding:utf-8
"""
配置管理测试
"""
import json

import pytest

from config_manager import DEFAULT_CONFIG, ConfigManager


def test_defaults_are_loaded():
    assert ConfigManager.get_config_value("verify.seed") == DEFAULT_CONFIG["verify"]["seed"]
    assert ConfigManager.get_config_value("spectrum.s_policy") == "dense"


def test_missing_key_returns_default():
    assert ConfigManager.get_config_value("verify.no_such_key", 42) == 42
    assert ConfigManager.get_config_value("nothing.here") is None


def test_update_in_memory():
    assert ConfigManager.update_config("verify.corpus_size", 3)
    assert ConfigManager.get_config_value("verify.corpus_size") == 3
    assert DEFAULT_CONFIG["verify"]["corpus_size"] == 25


def test_file_is_merged_with_defaults(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"verify": {"seed": 7}, "output": {"json_indent": 2}}), encoding="utf-8")
    config = ConfigManager.reload_config(str(path))
    assert config["verify"]["seed"] == 7
    assert config["verify"]["corpus_size"] == DEFAULT_CONFIG["verify"]["corpus_size"]
    assert config["output"]["json_indent"] == 2
    assert config["lattice"] == DEFAULT_CONFIG["lattice"]


def test_persist_writes_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{}", encoding="utf-8")
    ConfigManager.reload_config(str(path))
    ConfigManager.update_config("chow.max_workers", 8, persist=True)
    assert json.loads(path.read_text(encoding="utf-8"))["chow"]["max_workers"] == 8


def test_explicit_missing_file_raises(tmp_path):
    with pytest.raises(FileNotFoundError):
        ConfigManager.reload_config(str(tmp_path / "missing.json"))


def test_invalid_json_raises(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{verify:", encoding="utf-8")
    with pytest.raises(json.JSONDecodeError):
        ConfigManager.reload_config(str(path))


def test_shipped_config_matches_defaults():
    config = ConfigManager.reload_config()
    assert config["verify"] == DEFAULT_CONFIG["verify"]
    assert config["spectrum"] == DEFAULT_CONFIG["spectrum"]


def test_unknown_policy_warning(tmp_path, caplog):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"spectrum": {"s_policy": "sparse"}}), encoding="utf-8")
    with caplog.at_level("WARNING", logger="config_manager"):
        ConfigManager.reload_config(str(path))
    assert "sparse" in caplog.text
    assert "退出码 2" in caplog.text
