import copy
import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from src.config import DEFAULT_CONFIG
from src.model import ProblemSpec


@pytest.fixture
def r33():
    """两色三角形 R(3,3;2)"""
    return ProblemSpec(2, 2, (3, 3))


@pytest.fixture
def pigeon22():
    return ProblemSpec(2, 1, (2, 2))


@pytest.fixture
def config(tmp_path):
    """默认配置, 报告和日志写到临时目录"""
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    cfg['report']['output_dir'] = str(tmp_path / 'reports')
    cfg['logging']['file'] = str(tmp_path / 'logs' / 'ramsey.log')
    return cfg
