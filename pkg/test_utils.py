# coding:utf-8
"""
工具函数测试
"""
import threading
import time

import pytest

from utils import ProgressTracker, run_parallel


def test_sequential_map():
    assert run_parallel(lambda x: x * x, [1, 2, 3]) == [1, 4, 9]


def test_threaded_map_keeps_order():
    def slow_identity(x):
        time.sleep(0.01 * (5 - x))
        return x, threading.current_thread().name

    results = run_parallel(slow_identity, list(range(5)), max_workers=5, enable_threading=True)
    assert [r[0] for r in results] == list(range(5))


def test_threaded_map_propagates_errors():
    def fail_on_three(x):
        if x == 3:
            raise ValueError("three")
        return x

    with pytest.raises(ValueError):
        run_parallel(fail_on_three, list(range(6)), max_workers=3, enable_threading=True)


def test_empty_input():
    assert run_parallel(str, [], enable_threading=True) == []


def test_progress_tracker_counts():
    tracker = ProgressTracker(0)
    assert tracker.total_steps == 1
    tracker = ProgressTracker(3)
    for step in range(3):
        tracker.update(f"step {step}")
    assert tracker.current_step == 3


def test_progress_tracker_from_worker_threads():
    tracker = ProgressTracker(400)
    run_parallel(lambda k: tracker.update(str(k)), list(range(400)), max_workers=8, enable_threading=True)
    assert tracker.current_step == 400
