#!/usr/bin/env python3
"""
报告生成器
把引擎结果整理成带版本号的报告文档, 输出 JSON / CSV, 并可保存到 reports/<日期>/
计数一律为十进制字符串
"""

import io
import json
import os
from datetime import datetime
from typing import Any, Dict, List, Optional

import pandas as pd

from . import __version__
from .engines import EngineReport
from .model import ProblemSpec
from .search import SearchResult, ValidationReport
from .utils import format_count, jsonable, save_json

SCHEMA = "ramsey-report/1"
TOOL = "ramsey-count"
CSV_COLUMNS = ['n', 'engine', 'n_w', 'total', 'is_witness', 'elapsed_s', 'error']


class ReportGenerator:
    """报告文档的构建、渲染与保存"""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = config or {}
        report_config = self.config.get('report', {})
        self.output_root = report_config.get('output_dir', './reports')
        self.date_str = datetime.now().strftime('%Y-%m-%d')

    def _base(self, command: str, spec: ProblemSpec, inputs: Dict[str, Any]) -> Dict[str, Any]:
        echo = {'t': spec.t, 'r': spec.r, 'p': list(spec.p)}
        echo.update({k: v for k, v in inputs.items() if v is not None})
        return {
            'schema': SCHEMA,
            'tool': TOOL,
            'version': __version__,
            'command': command,
            'input': echo,
            'generated_at': datetime.now().strftime('%Y-%m-%d %H:%M:%S'),
        }

    @staticmethod
    def engine_row(report: EngineReport) -> Dict[str, Any]:
        return {
            'n': report.n,
            'engine': report.engine,
            'n_w': format_count(report.n_w),
            'total': format_count(report.total),
            'is_witness': report.is_witness,
            'elapsed_s': round(report.elapsed, 6),
            'stats': jsonable(report.stats),
        }

    def compute_report(self, report: EngineReport, inputs: Dict[str, Any]) -> Dict[str, Any]:
        doc = self._base('compute', report.spec, inputs)
        doc['results'] = [self.engine_row(report)]
        return doc

    def search_report(self, result: SearchResult, inputs: Dict[str, Any]) -> Dict[str, Any]:
        doc = self._base('search', result.spec, inputs)
        doc['results'] = [self.engine_row(rep) for rep in result.reports]
        doc['found'] = result.found
        doc['ramsey_n'] = result.ramsey_n
        if not result.found:
            doc['message'] = f"not found <= {result.n_max}"
        if result.witness is not None:
            doc['witness'] = {'n': result.witness.n, 'coloring': result.witness.as_records()}
        return doc

    def validate_report(self, report: ValidationReport, inputs: Dict[str, Any]) -> Dict[str, Any]:
        doc = self._base('validate', report.spec, inputs)
        rows = [self.engine_row(rep) for rep in report.reports.values()]
        rows += [{'n': report.n, 'engine': name, 'n_w': None, 'total': format_count(report.total),
                  'is_witness': None, 'elapsed_s': None, 'error': message}
                 for name, message in report.errors.items()]
        doc['results'] = rows
        doc['agree'] = report.agree
        doc['bonferroni'] = jsonable(report.bonferroni())
        doc['bonferroni_holds'] = report.bonferroni_holds()
        doc['kmax'] = {'bound': report.kmax_bound, 'realized': report.kmax_realized}
        return doc

    def kmax_report(self, spec: ProblemSpec, n: int, bound: int, realized: Optional[int],
                    inputs: Dict[str, Any]) -> Dict[str, Any]:
        doc = self._base('kmax', spec, inputs)
        doc['kmax'] = {'n': n, 'bound': bound}
        if realized is not None:
            doc['kmax']['realized'] = realized
        doc['results'] = []
        return doc

    @staticmethod
    def _search_summary_row(doc: Dict[str, Any]) -> Dict[str, Any]:
        """search 的 CSV 末行: Ramsey 数或未找到的说明, 有见证着色时一并写入 note"""
        note = doc.get('message') or f"ramsey_n={doc['ramsey_n']}"
        witness = doc.get('witness')
        if witness:
            cells = ' '.join(f"{'-'.join(map(str, rec['subset']))}:{rec['box']}"
                             for rec in witness['coloring'])
            note += f"; witness n={witness['n']}: {cells}"
        return {'n': doc['ramsey_n'] if doc.get('found') else '', 'engine': 'summary',
                'is_witness': doc.get('found'), 'note': note}

    @staticmethod
    def render(doc: Dict[str, Any], fmt: str = 'json') -> str:
        """渲染报告; CSV 每行一个 (n, engine), search 另加一行 summary"""
        if fmt == 'json':
            return json.dumps(doc, ensure_ascii=False, indent=2)
        if fmt == 'csv':
            rows = doc.get('results') or []
            if doc.get('command') == 'search':
                rows = rows + [ReportGenerator._search_summary_row(doc)]
                frame = pd.DataFrame(rows, columns=CSV_COLUMNS + ['note'])
            elif not rows and 'kmax' in doc:
                frame = pd.DataFrame([doc['kmax']])
            else:
                frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
            buf = io.StringIO()
            frame.to_csv(buf, index=False)
            return buf.getvalue()
        raise ValueError(f"未知输出格式: {fmt}")

    @staticmethod
    def parse_report(text: str, fmt: str = 'json') -> Any:
        """重新读取渲染后的报告; CSV 读成字符串表, 计数列保持精确"""
        if fmt == 'json':
            return json.loads(text)
        if fmt == 'csv':
            frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
            return frame.to_dict('records')
        raise ValueError(f"未知输出格式: {fmt}")

    def save_report(self, doc: Dict[str, Any], fmt: str = 'json') -> str:
        """保存报告到 reports/<日期>/report_<命令>.<格式>"""
        output_dir = os.path.join(self.output_root, self.date_str)
        os.makedirs(output_dir, exist_ok=True)
        filepath = os.path.join(output_dir, f"report_{doc['command']}.{fmt}")
        if fmt == 'json':
            save_json(doc, filepath)
        else:
            with open(filepath, 'w', encoding='utf-8') as f:
                f.write(self.render(doc, fmt))
        return filepath


def counts_of(doc: Dict[str, Any]) -> List[Dict[str, Any]]:
    """报告中的 (n, engine, n_w, total) 行, 计数转回整数"""
    out = []
    for row in doc.get('results', []):
        if row.get('n_w') in (None, ''):
            continue
        out.append({'n': int(row['n']), 'engine': row['engine'],
                    'n_w': int(row['n_w']), 'total': int(row['total'])})
    return out
