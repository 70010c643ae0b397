# coding:utf-8
"""
校验框架测试
"""
import numpy as np
import pytest

from arrangement import RankTooHighError, essential_rank, validate_arrangement
from verification_harness import (CHECKS, CheckRecord, VerifyReport, check_euler_sum, check_serre,
                                  check_ts_shift, check_weight_duality, fixture_arrangement,
                                  generate_corpus, ring_property_report, run_corpus, verify_arrangement)


def test_fixtures_pass_all_checks(fixture_case, fast_config):
    name, arr, _ = fixture_case
    report = verify_arrangement(arr, name, fast_config)
    assert [c.name for c in report.checks] == list(CHECKS)
    assert report.passed, report.to_dict()


def test_rank3_input_passes(a2_rank3, fast_config):
    assert verify_arrangement(a2_rank3, "rank3", fast_config).passed


def test_verify_rejects_rank_five(fast_config):
    arr = validate_arrangement([[1 if i == j else 0 for j in range(5)] for i in range(5)])
    with pytest.raises(RankTooHighError):
        verify_arrangement(arr, "rank5", fast_config)


def test_single_checks_on_non_essential_input():
    arr = validate_arrangement([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [1, 1, 0, 0, 0], [0, 0, 1, 0, 0]])
    assert check_euler_sum(arr).status == "pass"
    assert check_ts_shift(arr).status == "pass"
    assert check_weight_duality(arr).status == "pass"
    assert check_serre(arr, np.random.default_rng(1), 3, 4).status == "pass"


def test_failed_report_echoes_input():
    report = VerifyReport("bad", "1 0\n0 1\n", [CheckRecord("euler-sum", "fail", {"sum": 2}),
                                                CheckRecord("ts-shift", "pass")])
    assert not report.passed
    data = report.to_dict()
    assert data["input"] == "1 0\n0 1\n"
    assert data["checks"][0] == {"name": "euler-sum", "status": "fail", "details": {"sum": 2}}


def test_passed_report_has_no_input():
    report = VerifyReport("ok", "1 0\n", [CheckRecord("euler-sum", "pass")])
    assert "input" not in report.to_dict()


# ── 随机语料 ──

def test_corpus_is_deterministic(fast_config):
    first = generate_corpus(fast_config)
    second = generate_corpus(fast_config)
    assert [a.forms for a in first] == [a.forms for a in second]
    assert len(first) == 3


def test_corpus_members_are_rank_four(fast_config):
    settings = fast_config["verify"]
    for arr in generate_corpus(fast_config):
        assert arr.n == 4
        assert essential_rank(arr) == 4
        assert settings["min_degree"] <= arr.d <= settings["max_degree"]


def test_corpus_gives_up_after_max_attempts(fast_config):
    fast_config["verify"]["max_attempts"] = 1
    fast_config["verify"]["min_degree"] = 1
    fast_config["verify"]["max_degree"] = 1
    with pytest.raises(RuntimeError):
        generate_corpus(fast_config)


def test_small_corpus_run(fast_config):
    reports = run_corpus(fast_config, include_fixtures=False, include_ring=False)
    assert len(reports) == 3
    assert all(r.passed for r in reports), [r.to_dict() for r in reports if not r.passed]


def test_threaded_corpus_run_keeps_order(fast_config):
    sequential = run_corpus(fast_config, include_fixtures=False, include_ring=False)
    fast_config["verify"]["enable_threading"] = True
    threaded = run_corpus(fast_config, include_fixtures=False, include_ring=False)
    assert [r.name for r in threaded] == [r.name for r in sequential]
    assert [r.to_dict() for r in threaded] == [r.to_dict() for r in sequential]


@pytest.mark.slow
def test_default_corpus_run():
    reports = run_corpus()
    assert reports[-1].name == "ring"
    assert all(r.passed for r in reports), [r.to_dict() for r in reports if not r.passed]


# ── 环的性质 ──

def test_ring_property_report(fast_config):
    report = ring_property_report(fast_config)
    assert report.name == "ring"
    assert [c.name for c in report.checks] == ["ring-algebra", "integrate-bilinear", "printed-chern",
                                               "printed-mu"]
    assert report.passed, report.to_dict()


def test_fixture_lookup():
    assert fixture_arrangement("A5").n == 3
    with pytest.raises(KeyError):
        fixture_arrangement("A9")
