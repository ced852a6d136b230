#!/usr/bin/env python3
"""
工具函数模块
"""

import os
import json
import logging
from typing import Any, Dict, Optional


def format_count(num: Optional[int]) -> str:
    """精确计数转十进制字符串"""
    if num is None:
        return "N/A"
    return str(int(num))


def format_seconds(seconds: float) -> str:
    """格式化耗时"""
    return f"{seconds:.3f}s"


def jsonable(value: Any) -> Any:
    """把统计信息中的大整数转成十进制字符串, 字典键转成字符串"""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def save_json(data: Dict, filepath: str):
    """保存JSON文件"""
    os.makedirs(os.path.dirname(filepath) or '.', exist_ok=True)
    with open(filepath, 'w', encoding='utf-8') as f:
        json.dump(data, f, ensure_ascii=False, indent=2)


def setup_logging(config: Dict[str, Any]):
    """按配置设置日志: 标准错误输出 + 可选日志文件"""
    log_config = config.get('logging', {})
    handlers = [logging.StreamHandler()]
    log_file = log_config.get('file')
    if log_file:
        os.makedirs(os.path.dirname(log_file) or '.', exist_ok=True)
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, str(log_config.get('level', 'INFO')).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )


class ColorFormatter:
    """终端颜色格式化"""
    RED = '\033[91m'
    GREEN = '\033[92m'
    YELLOW = '\033[93m'
    END = '\033[0m'

    enabled = True

    @classmethod
    def _wrap(cls, code: str, text: str) -> str:
        return f"{code}{text}{cls.END}" if cls.enabled else text

    @classmethod
    def red(cls, text: str) -> str:
        return cls._wrap(cls.RED, text)

    @classmethod
    def green(cls, text: str) -> str:
        return cls._wrap(cls.GREEN, text)

    @classmethod
    def yellow(cls, text: str) -> str:
        return cls._wrap(cls.YELLOW, text)
