#!/usr/bin/env python3
"""
命令行入口
子命令: compute / search / validate / kmax
报告输出到标准输出, 日志和错误信息输出到标准错误

退出码: 0 成功, 2 参数或问题文件错误, 3 超出预算, 4 引擎结果不一致, 1 其他错误
"""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional

import yaml

from . import __version__
from .config import ConfigError, load_config
from .engines import (ENGINES, BudgetExceededError, kmax_upper_bound, realized_kmax,
                      run_engine)
from .model import ProblemSpec, ProblemSpecError
from .report_generator import ReportGenerator
from .search import cross_validate, ramsey_number
from .utils import ColorFormatter, format_seconds

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_DISAGREE = 4

PROBLEM_FILE_KEYS = ('t', 'r', 'p', 'n', 'engine', 'k_cutoff', 'budget', 'workers', 'n_max')
_INT_KEYS = ('t', 'r', 'n', 'k_cutoff', 'budget', 'workers', 'n_max')


class ProblemFileError(ValueError):
    """问题文件无法读取或包含未知字段"""


def parse_p(value: Any) -> tuple:
    """'3,3' 或 [3, 3] -> (3, 3); 布尔值不当作整数"""
    if isinstance(value, str):
        items = [x.strip() for x in value.split(',') if x.strip()]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [value]
    if any(isinstance(x, bool) or x is None for x in items):
        raise ProblemSpecError(f"p 必须是整数列表: {value!r}")
    try:
        return tuple(int(x) for x in items)
    except (TypeError, ValueError):
        raise ProblemSpecError(f"p 必须是整数列表: {value!r}")


def load_problem_file(path: str) -> Dict[str, Any]:
    """读取扁平的键值问题文件 (YAML)"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ProblemFileError(f"无法读取问题文件 {path}: {e}")
    except yaml.YAMLError as e:
        raise ProblemFileError(f"问题文件格式错误 {path}: {e}")
    if not isinstance(data, dict):
        raise ProblemFileError(f"问题文件必须是键值映射: {path}")
    unknown = sorted(set(data) - set(PROBLEM_FILE_KEYS))
    if unknown:
        raise ProblemFileError(f"问题文件包含未知字段: {', '.join(map(str, unknown))}")
    out = dict(data)
    if 'p' in out:
        out['p'] = parse_p(out['p'])
    for key in _INT_KEYS:
        value = out.get(key)
        if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
            raise ProblemFileError(f"问题文件字段 {key} 必须是整数: {value!r}")
    return out


def _add_problem_args(parser: argparse.ArgumentParser, with_n: bool = True, with_engine: bool = True):
    parser.add_argument('--t', type=int, help='盒子数 t')
    parser.add_argument('--r', type=int, help='子集大小 r')
    parser.add_argument('--p', type=str, help='P_1..P_t, 逗号分隔, 例如 3,3')
    if with_n:
        parser.add_argument('--n', type=int, help='顶点数 n')
    if with_engine:
        parser.add_argument('--engine', choices=ENGINES, help='计数引擎')
    parser.add_argument('--k-cutoff', dest='k_cutoff', type=int, help='容斥截断到 k (Bonferroni)')
    parser.add_argument('--budget', type=int, help='枚举预算 (默认 2^24)')
    parser.add_argument('--workers', type=int, help='并行进程数')
    parser.add_argument('--format', choices=('json', 'csv'), help='输出格式')
    parser.add_argument('--file', help='问题文件 (YAML 键值)')
    parser.add_argument('--save', action='store_true', help='同时保存报告到 reports/<日期>/')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='ramsey-count',
        description='Ramsey 数精确计数 - 三个 N(W) 引擎、Ramsey 数搜索与交叉验证',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  python ramsey_job.py compute --t 2 --r 2 --p 3,3 --n 5 --engine brute
  python ramsey_job.py search --t 2 --r 2 --p 3,3 --n-max 8 --engine brute
  python ramsey_job.py validate --t 2 --r 2 --p 3,3 --n 4
  python ramsey_job.py kmax --t 2 --r 2 --p 3,3 --n 5 --realized
        """
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    compute = sub.add_parser('compute', help='计算 N(W) 与 t^C(n,r)')
    _add_problem_args(compute)

    search = sub.add_parser('search', help='扫描 n=1..n_max 求 Ramsey 数')
    _add_problem_args(search, with_n=False)
    search.add_argument('--n-max', dest='n_max', type=int, help='扫描上限')

    validate = sub.add_parser('validate', help='三个引擎交叉验证')
    _add_problem_args(validate, with_engine=False)

    kmax = sub.add_parser('kmax', help='相容事件组大小上界')
    _add_problem_args(kmax, with_engine=False)
    kmax.add_argument('--realized', action='store_true', help='同时求实际最大相容事件组大小')
    return parser


def resolve_settings(args: argparse.Namespace, config: Dict[str, Any]) -> Dict[str, Any]:
    """合并设置: 命令行 > 问题文件 > 环境变量 > config.yaml > 默认值"""
    engine_config = config.get('engine', {})
    settings = {
        't': None, 'r': None, 'p': None, 'n': None,
        'engine': engine_config.get('default', 'direct'),
        'budget': engine_config.get('budget'),
        'workers': engine_config.get('workers', 1),
        'k_cutoff': engine_config.get('k_cutoff'),
        'n_max': config.get('search', {}).get('n_max', 8),
        'format': config.get('report', {}).get('format', 'json'),
    }
    if getattr(args, 'file', None):
        settings.update(load_problem_file(args.file))
    for key in settings:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = parse_p(value) if key == 'p' else value

    missing = [key for key in ('t', 'r', 'p') if settings[key] is None]
    if missing:
        raise ProblemSpecError(f"缺少参数: {', '.join(missing)}")
    settings['spec'] = ProblemSpec(settings['t'], settings['r'], tuple(sorted(settings['p'])))

    if hasattr(args, 'n'):
        if settings['n'] is None:
            raise ProblemSpecError("缺少参数: n")
        if settings['n'] < 0:
            raise ProblemSpecError(f"n 必须 >= 0: n={settings['n']}")
    if settings['budget'] is not None and settings['budget'] < 1:
        raise ProblemSpecError(f"budget 必须 >= 1: {settings['budget']}")
    if settings['workers'] < 1:
        raise ProblemSpecError(f"workers 必须 >= 1: {settings['workers']}")
    if settings['k_cutoff'] is not None and settings['k_cutoff'] < 1:
        raise ProblemSpecError(f"k_cutoff 必须 >= 1: {settings['k_cutoff']}")
    if settings['engine'] not in ENGINES:
        raise ProblemSpecError(f"未知引擎: {settings['engine']}")
    if settings['format'] not in ('json', 'csv'):
        raise ProblemSpecError(f"未知输出格式: {settings['format']}")
    return settings


def _inputs(settings: Dict[str, Any], keys: List[str]) -> Dict[str, Any]:
    return {key: settings[key] for key in keys}


def cmd_compute(settings: Dict[str, Any], generator: ReportGenerator):
    report = run_engine(settings['engine'], settings['spec'], settings['n'],
                        settings['k_cutoff'], settings['budget'], settings['workers'])
    sys.stderr.write(f"N(W) = {report.n_w} / {report.total} ({format_seconds(report.elapsed)})\n")
    doc = generator.compute_report(report, _inputs(settings, ['n', 'engine', 'k_cutoff', 'budget', 'workers']))
    return doc, EXIT_OK


def cmd_search(settings: Dict[str, Any], generator: ReportGenerator):
    result = ramsey_number(settings['spec'], settings['n_max'], settings['engine'],
                           settings['budget'], settings['workers'], settings['k_cutoff'])
    label = settings['spec'].label()
    if result.found:
        sys.stderr.write(ColorFormatter.green(f"{label} = {result.ramsey_n}") + "\n")
    else:
        sys.stderr.write(ColorFormatter.yellow(f"{label}: not found <= {settings['n_max']}") + "\n")
    doc = generator.search_report(result, _inputs(settings, ['n_max', 'engine', 'k_cutoff', 'budget', 'workers']))
    return doc, EXIT_OK


def cmd_validate(settings: Dict[str, Any], generator: ReportGenerator):
    report = cross_validate(settings['spec'], settings['n'], settings['budget'],
                            settings['workers'], settings['k_cutoff'])
    values = ', '.join(f"{name}={value}" for name, value in report.counts.items())
    for name, message in report.errors.items():
        sys.stderr.write(ColorFormatter.yellow(f"{name}: {message}") + "\n")
    doc = generator.validate_report(report, _inputs(settings, ['n', 'k_cutoff', 'budget', 'workers']))
    if not report.agree:
        sys.stderr.write(ColorFormatter.red(f"引擎结果不一致: {values}") + "\n")
        return doc, EXIT_DISAGREE
    sys.stderr.write(ColorFormatter.green(f"一致: {values}") + "\n")
    return doc, EXIT_OK


def cmd_kmax(settings: Dict[str, Any], generator: ReportGenerator, realized: bool = False):
    spec, n = settings['spec'], settings['n']
    bound = kmax_upper_bound(spec, n)
    value = realized_kmax(spec, n, settings['budget']) if realized else None
    doc = generator.kmax_report(spec, n, bound, value, _inputs(settings, ['n', 'budget']))
    return doc, EXIT_OK


def main(argv: Optional[List[str]] = None, config: Optional[Dict[str, Any]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK

    ColorFormatter.enabled = sys.stderr.isatty()
    try:
        if config is None:
            config = load_config(os.environ.get('RAMSEY_CONFIG', 'config.yaml'))
        settings = resolve_settings(args, config)
        generator = ReportGenerator(config)
        if args.command == 'compute':
            doc, code = cmd_compute(settings, generator)
        elif args.command == 'search':
            doc, code = cmd_search(settings, generator)
        elif args.command == 'validate':
            doc, code = cmd_validate(settings, generator)
        else:
            doc, code = cmd_kmax(settings, generator, args.realized)
    except (ProblemSpecError, ProblemFileError, ConfigError) as e:
        logger.error("参数错误: %s", e)
        sys.stderr.write(ColorFormatter.red(f"错误: {e}") + "\n")
        return EXIT_PARSE
    except BudgetExceededError as e:
        logger.error("超出预算: %s", e)
        sys.stderr.write(ColorFormatter.red(f"超出预算: {e}") + "\n")
        return EXIT_BUDGET
    except Exception as e:
        logger.error("运行失败: %s", e, exc_info=True)
        sys.stderr.write(ColorFormatter.red(f"运行失败: {e}") + "\n")
        return EXIT_ERROR

    sys.stdout.write(generator.render(doc, settings['format']))
    if settings['format'] == 'json':
        sys.stdout.write("\n")
    if args.save:
        filepath = generator.save_report(doc, settings['format'])
        logger.info("报告已保存: %s", filepath)
    return code
