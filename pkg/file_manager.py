# coding:utf-8
"""
文件管理模块 - 统一的文件读写操作
"""
import json
import logging
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)


class FileManager:
    """文件管理器 - 处理排列文件与报告的读写"""

    @staticmethod
    def load_text(file_path: str) -> str:
        """读取文本文件"""
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                return f.read()
        except Exception as e:
            logger.error(f"❌ 读取文本失败: {file_path}, 错误: {e}")
            raise

    @staticmethod
    def save_text(content: str, file_path: str) -> None:
        """保存文本内容到文件"""
        try:
            Path(file_path).parent.mkdir(parents=True, exist_ok=True)
            with open(file_path, 'w', encoding='utf-8') as f:
                f.write(content)
            logger.debug(f"✅ 文本已保存: {file_path}")
        except Exception as e:
            logger.error(f"❌ 保存文本失败: {file_path}, 错误: {e}")
            raise

    @staticmethod
    def save_json(data: Any, file_path: str, ensure_ascii: bool = False) -> None:
        """保存JSON数据到文件"""
        try:
            Path(file_path).parent.mkdir(parents=True, exist_ok=True)
            with open(file_path, 'w', encoding='utf-8') as f:
                json.dump(data, f, ensure_ascii=ensure_ascii, indent=2)
            logger.debug(f"✅ JSON已保存: {file_path}")
        except Exception as e:
            logger.error(f"❌ 保存JSON失败: {file_path}, 错误: {e}")
            raise
