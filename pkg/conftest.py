# coding:utf-8
"""
测试公共夹具 - 每个测试使用内置默认配置，并提供常用排列
"""
import copy

import pytest

from arrangement import validate_arrangement
from config_manager import DEFAULT_CONFIG, ConfigManager
from verification_harness import FIXTURES, fixture_arrangement, fixture_spectrum, generate_corpus


@pytest.fixture(autouse=True)
def default_config():
    ConfigManager._config = copy.deepcopy(DEFAULT_CONFIG)
    ConfigManager._config_path = None
    yield ConfigManager._config
    ConfigManager._config = None
    ConfigManager._config_path = None


@pytest.fixture
def fast_config():
    """缩小采样规模的配置字典，用于单个排列的完整校验"""
    config = copy.deepcopy(DEFAULT_CONFIG)
    config["verify"].update({"serre_samples": 5, "ring_samples": 10, "bilinear_samples": 10,
                             "printed_samples": 50, "corpus_size": 3})
    return config


@pytest.fixture(params=sorted(FIXTURES))
def fixture_case(request):
    return request.param, fixture_arrangement(request.param), fixture_spectrum(request.param)


@pytest.fixture
def a2_rank3():
    return validate_arrangement([[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]])


@pytest.fixture
def write_arrangement(tmp_path):
    def _write(text, name="arr.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture(scope="module")
def random_rank4():
    """固定种子的随机本质秩 4 排列，d 在 4..8 之间"""
    config = copy.deepcopy(DEFAULT_CONFIG)
    config["verify"].update({"seed": 7, "corpus_size": 12})
    return generate_corpus(config)
