#!/usr/bin/env python3
"""
Ramsey 数搜索与三引擎交叉验证
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .engines import (DEFAULT_BUDGET, ENGINES, BudgetExceededError, Coloring,
                      EngineInvariantError, EngineReport, coloring_from_index,
                      kmax_upper_bound, realized_kmax, run_engine)
from .model import ProblemSpec, ProblemSpecError, binom

logger = logging.getLogger(__name__)


@dataclass
class SearchResult:
    """逐个 n 扫描的结果; ramsey_n 为 None 表示 n_max 以内未找到"""
    spec: ProblemSpec
    engine: str
    n_max: int
    ramsey_n: Optional[int]
    reports: List[EngineReport] = field(default_factory=list)
    witness: Optional[Coloring] = None

    @property
    def found(self) -> bool:
        return self.ramsey_n is not None


@dataclass
class ValidationReport:
    """同一 (spec, n) 上三个引擎的对照"""
    spec: ProblemSpec
    n: int
    total: int
    reports: Dict[str, EngineReport] = field(default_factory=dict)
    errors: Dict[str, str] = field(default_factory=dict)
    kmax_bound: int = 0
    kmax_realized: Optional[int] = None

    @property
    def counts(self) -> Dict[str, int]:
        return {name: rep.n_w for name, rep in self.reports.items()}

    @property
    def agree(self) -> bool:
        return len(set(self.counts.values())) <= 1

    def bonferroni(self) -> List[Dict[str, Any]]:
        """直接容斥引擎的逐 k 分项和与部分和"""
        rep = self.reports.get('direct')
        if rep is None:
            return []
        term_sums = rep.stats['term_sums']
        return [{'k': k, 'tuples': rep.stats['tuple_counts'][k], 'term_sum': term_sums[k],
                 'partial_sum': partial}
                for k, partial in rep.stats['partial_sums']]

    def bonferroni_holds(self) -> bool:
        """奇数截断不低于 N(W), 偶数截断不高于 N(W)"""
        rep = self.reports.get('direct')
        if rep is None:
            return True
        return all((partial >= rep.n_w) if k % 2 else (partial <= rep.n_w)
                   for k, partial in rep.stats['partial_sums'])


def is_ramsey_witness(spec: ProblemSpec, n: int, engine: str = 'brute',
                      budget: Optional[int] = DEFAULT_BUDGET, workers: int = 1,
                      k_cutoff: Optional[int] = None) -> bool:
    """N(W) 是否等于 t^C(n,r), 即每个着色都满足 W"""
    return run_engine(engine, spec, n, k_cutoff, budget, workers).is_witness


def ramsey_number(spec: ProblemSpec, n_max: int, engine: str = 'brute',
                  budget: Optional[int] = DEFAULT_BUDGET, workers: int = 1,
                  k_cutoff: Optional[int] = None) -> SearchResult:
    """从 n=1 开始扫描, 返回第一个满足 N(W)=t^C(n,r) 的 n; 找到后即停止"""
    if n_max < 1:
        raise ProblemSpecError(f"n_max 必须 >= 1: n_max={n_max}")
    result = SearchResult(spec=spec, engine=engine, n_max=n_max, ramsey_n=None)
    last_miss = None
    for n in range(1, n_max + 1):
        try:
            report = run_engine(engine, spec, n, k_cutoff, budget, workers)
        except BudgetExceededError:
            logger.error("搜索在 n=%d 处超出预算", n)
            raise
        result.reports.append(report)
        if report.is_witness:
            result.ramsey_n = n
            if last_miss is not None and last_miss[0] == n - 1:
                result.witness = coloring_from_index(last_miss[1], spec, n - 1)
            logger.info("%s = %d (引擎 %s)", spec.label(), n, engine)
            break
        if engine == 'brute' and report.stats.get('first_miss') is not None:
            last_miss = (n, report.stats['first_miss'])
    else:
        logger.info("%s: n <= %d 内未找到", spec.label(), n_max)
    return result


def cross_validate(spec: ProblemSpec, n: int, budget: Optional[int] = DEFAULT_BUDGET,
                   workers: int = 1, k_cutoff: Optional[int] = None) -> ValidationReport:
    """依次运行三个引擎; 单个引擎失败只记录, 不影响其余引擎"""
    total = spec.t ** binom(n, spec.r)
    report = ValidationReport(spec=spec, n=n, total=total, kmax_bound=kmax_upper_bound(spec, n))
    for engine in ENGINES:
        try:
            report.reports[engine] = run_engine(engine, spec, n, k_cutoff, budget, workers)
        except (BudgetExceededError, EngineInvariantError) as exc:
            logger.warning("交叉验证: 引擎 %s 失败: %s", engine, exc)
            report.errors[engine] = str(exc)
    direct = report.reports.get('direct')
    if direct is not None and not k_cutoff:
        report.kmax_realized = direct.stats['max_k']
    else:
        try:
            report.kmax_realized = realized_kmax(spec, n, budget)
        except BudgetExceededError as exc:
            logger.warning("交叉验证: 无法求出实际 k_max: %s", exc)
    if not report.agree:
        logger.error("引擎结果不一致: %s", report.counts)
    return report
