# coding:utf-8
"""
工具函数模块 - 进度追踪与保序线程池映射
"""
import time
import logging
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, List, Sequence

logger = logging.getLogger(__name__)


# ── 进度追踪器 ─────────────────────────────────────────

class ProgressTracker:
    """进度追踪器，可在线程池的工作线程中调用"""

    def __init__(self, total_steps: int):
        self.total_steps = max(total_steps, 1)
        self.current_step = 0
        self.start_time = time.time()
        self._lock = threading.Lock()

    def update(self, description: str = ""):
        """更新进度"""
        with self._lock:
            self.current_step += 1
            step = self.current_step
        progress = (step / self.total_steps) * 100
        elapsed_time = time.time() - self.start_time
        estimated_total_time = elapsed_time * self.total_steps / step
        remaining_time = estimated_total_time - elapsed_time
        logger.info(
            f"进度: {progress:.1f}% ({step}/{self.total_steps}) - "
            f"{description} - 预计剩余: {remaining_time:.1f}秒"
        )


# ── 线程池 ─────────────────────────────────────────────

def run_parallel(func: Callable[[Any], Any], items: Sequence[Any], max_workers: int = 4,
                 enable_threading: bool = False, desc: str = "") -> List[Any]:
    """
    对 items 逐个调用 func，结果按输入顺序返回

    Args:
        func: 单项任务
        items: 任务输入
        max_workers: 线程数
        enable_threading: False 时顺序执行
        desc: 日志中使用的任务名

    Returns:
        与 items 一一对应的结果列表
    """
    if not enable_threading or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug(f"🔥 启用多线程处理 - 线程数: {max_workers}, {desc}任务数: {len(items)}")
    results: List[Any] = [None] * len(items)  # 预分配结果列表，保持顺序

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_index = {executor.submit(func, item): i for i, item in enumerate(items)}
        for future in as_completed(future_to_index):
            index = future_to_index[future]
            try:
                results[index] = future.result()
            except Exception as e:
                logger.error(f"❌ {desc}任务 {index} 处理异常: {e}")
                raise
    return results
