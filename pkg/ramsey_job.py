#!/usr/bin/env python3
"""
Ramsey 计数任务入口
使用方式:
  python ramsey_job.py compute --t 2 --r 2 --p 3,3 --n 5 --engine brute
  python ramsey_job.py search --t 2 --r 2 --p 3,3 --n-max 8 --engine brute --save
  python ramsey_job.py validate --file problem.yaml
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.cli import EXIT_PARSE, main
from src.config import ConfigError, load_config
from src.utils import setup_logging


def run() -> int:
    try:
        config = load_config(os.environ.get('RAMSEY_CONFIG', 'config.yaml'))
    except ConfigError as e:
        sys.stderr.write(f"配置错误: {e}\n")
        return EXIT_PARSE
    setup_logging(config)
    return main(config=config)


if __name__ == "__main__":
    sys.exit(run())
