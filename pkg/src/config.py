#!/usr/bin/env python3
"""
配置加载
优先级: 命令行参数 > 问题文件 > 环境变量 > config.yaml > 内置默认值
"""

import copy
import os
from typing import Any, Dict, Optional

import yaml

DEFAULT_CONFIG: Dict[str, Any] = {
    'engine': {
        'default': 'direct',
        'budget': 1 << 24,
        'workers': 1,
        'k_cutoff': None,
    },
    'search': {
        'n_max': 8,
    },
    'report': {
        'output_dir': './reports',
        'format': 'json',
    },
    'logging': {
        'level': 'INFO',
        'file': 'logs/ramsey.log',
    },
}

ENV_OVERRIDES = {
    'RAMSEY_BUDGET': ('engine', 'budget'),
    'RAMSEY_WORKERS': ('engine', 'workers'),
}


class ConfigError(ValueError):
    """配置文件或环境变量不合法"""


def _merge(base: Dict[str, Any], extra: Dict[str, Any]) -> Dict[str, Any]:
    for key, value in (extra or {}).items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = value
    return base


def find_config(config_path: str = "config.yaml") -> Optional[str]:
    """先找当前目录, 再找包目录的上一级"""
    if os.path.exists(config_path):
        return config_path
    fallback = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', config_path)
    if os.path.exists(fallback):
        return fallback
    return None


def load_config(config_path: str = "config.yaml", env: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
    """读取 YAML 配置并应用环境变量覆盖"""
    config = copy.deepcopy(DEFAULT_CONFIG)
    path = find_config(config_path)
    if path:
        with open(path, 'r', encoding='utf-8') as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"配置文件格式错误: {path}")
        _merge(config, loaded)

    env = os.environ if env is None else env
    for name, (section, key) in ENV_OVERRIDES.items():
        raw = env.get(name)
        if raw:
            try:
                config[section][key] = int(raw)
            except ValueError:
                raise ConfigError(f"环境变量 {name} 必须是整数: {raw!r}")
    return config
