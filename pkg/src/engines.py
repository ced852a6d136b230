#!/usr/bin/env python3
"""
N(W) 计数引擎
暴力枚举 / 直接容斥 / 按谱分组 三个引擎, 以及事件组取值、频数和 k_max 上界

所有计数都是精确整数; 并行时按固定分片计算, 结果按分片顺序精确求和
"""

import itertools
import logging
import math
import multiprocessing
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .model import (Event, EventTuple, ProblemSpec, binom, enumerate_events,
                    rsubset_index, tr_ranks, unrank_rsubset)
from .venn import (BudgetExhausted, SpectrumSearch, TupleType, VennSpectrum,
                   box_union_sizes, is_compatible, p_from_q, venn_spectrum_of)

logger = logging.getLogger(__name__)

ENGINES = ('brute', 'direct', 'spectrum')
DEFAULT_BUDGET = 1 << 24
DEFAULT_CHUNK = 1 << 16
# numpy int64 下标的上限
_INDEX_LIMIT = 1 << 62


class BudgetExceededError(RuntimeError):
    """枚举规模超过预算"""

    def __init__(self, message: str, required: Optional[int] = None,
                 budget: Optional[int] = None, engine: Optional[str] = None,
                 n: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.required = required
        self.budget = budget
        self.engine = engine
        self.n = n

    def __reduce__(self):
        return (self.__class__, (self.message, self.required, self.budget, self.engine, self.n))

    def with_n(self, n: int) -> 'BudgetExceededError':
        return BudgetExceededError(f"n={n}: {self.message}", self.required, self.budget, self.engine, n)


class EngineInvariantError(RuntimeError):
    """引擎内部不变量被破坏"""


@dataclass(frozen=True)
class Coloring:
    """着色: 第 rank 个 r-子集所在的盒子 (1..t)"""
    n: int
    r: int
    assignment: Tuple[int, ...]

    def box_of(self, subset: Sequence[int]) -> int:
        return self.assignment[rsubset_index(self.n, self.r)[tuple(subset)]]

    def as_records(self) -> List[Dict[str, Any]]:
        return [{'subset': list(unrank_rsubset(i, self.n, self.r)), 'box': box}
                for i, box in enumerate(self.assignment)]


@dataclass
class EngineReport:
    """单次引擎运行结果"""
    engine: str
    spec: ProblemSpec
    n: int
    n_w: int
    total: int
    elapsed: float
    stats: Dict[str, Any] = field(default_factory=dict)
    # 截断时 n_w 是 Bonferroni 部分和, 可以超出总数或为负
    k_cutoff: Optional[int] = None

    def __post_init__(self):
        if not self.k_cutoff and not 0 <= self.n_w <= self.total:
            raise EngineInvariantError(
                f"{self.engine}: N(W)={self.n_w} 不在 [0, {self.total}] 内")

    @property
    def is_witness(self) -> bool:
        return self.n_w == self.total


def _parallel_map(func: Callable, tasks: List, workers: int) -> List:
    """workers>1 时用进程池, 否则顺序执行; 结果顺序与任务顺序一致"""
    if workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with multiprocessing.Pool(min(workers, len(tasks))) as pool:
        return pool.map(func, tasks)


def _check_budget(required: int, budget: Optional[int], engine: str, what: str):
    if budget is not None and required > budget:
        raise BudgetExceededError(
            f"{engine}: 需要枚举 {required} 个{what}, 超过预算 {budget}",
            required=required, budget=budget, engine=engine)


# ==================== 暴力枚举 ====================

def coloring_from_index(index: int, spec: ProblemSpec, n: int) -> Coloring:
    """把枚举下标按 t 进制展开为着色 (第 e 位对应 rank 为 e 的 r-子集)"""
    m = binom(n, spec.r)
    if not 0 <= index < spec.t ** m:
        raise ValueError(f"着色下标越界: {index}")
    digits = []
    for _ in range(m):
        index, d = divmod(index, spec.t)
        digits.append(d + 1)
    return Coloring(n=n, r=spec.r, assignment=tuple(digits))


def w_holds(c: Coloring, spec: ProblemSpec, n: int) -> bool:
    """是否存在某个盒子 i 及 P_i-子集, 其全部 r-子集都在盒子 i"""
    for event in enumerate_events(spec, n):
        if all(c.assignment[rank] == event.box for rank in tr_ranks(event.vertices, n, spec.r)):
            return True
    return False


def _scan_range(task) -> Tuple[int, Optional[int]]:
    """扫描 [start, stop) 内的着色, 返回命中数和第一个未命中的下标"""
    t, m, columns, boxes, start, stop, mode, chunk = task
    powers = t ** np.arange(m, dtype=np.int64)
    count = 0
    first_miss = None
    for lo in range(start, stop, chunk):
        hi = min(lo + chunk, stop)
        idx = np.arange(lo, hi, dtype=np.int64)
        colors = (idx[:, None] // powers[None, :]) % t
        if mode == 'any':
            hit = np.zeros(hi - lo, dtype=bool)
            for cols, box in zip(columns, boxes):
                hit |= np.all(colors[:, cols] == box - 1, axis=1)
        else:
            hit = np.ones(hi - lo, dtype=bool)
            for cols, box in zip(columns, boxes):
                hit &= np.all(colors[:, cols] == box - 1, axis=1)
        count += int(hit.sum())
        if first_miss is None:
            misses = np.flatnonzero(~hit)
            if misses.size:
                first_miss = lo + int(misses[0])
    return count, first_miss


@dataclass
class BruteResult:
    count: int
    total: int
    first_miss: Optional[int]


def count_colorings(spec: ProblemSpec, n: int, events: Sequence[Event], mode: str = 'any',
                    budget: Optional[int] = DEFAULT_BUDGET, workers: int = 1,
                    chunk: int = DEFAULT_CHUNK) -> BruteResult:
    """穷举全部 t^C(n,r) 个着色, 统计 events 中任一 (any) / 全部 (all) 成立的个数"""
    if mode not in ('any', 'all'):
        raise ValueError(f"未知模式: {mode}")
    m = binom(n, spec.r)
    total = spec.t ** m
    _check_budget(total, budget, 'brute', '着色')
    if total >= _INDEX_LIMIT:
        raise BudgetExceededError(f"brute: 着色数 {total} 超出可编址范围",
                                  required=total, budget=budget, engine='brute')
    columns = [np.array(tr_ranks(e.vertices, n, spec.r), dtype=np.int64) for e in events]
    boxes = [e.box for e in events]
    workers = max(1, workers)
    bounds = [total * i // workers for i in range(workers + 1)]
    tasks = [(spec.t, m, columns, boxes, lo, hi, mode, chunk)
             for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    parts = _parallel_map(_scan_range, tasks, workers)
    count = sum(c for c, _ in parts)
    first_miss = next((f for _, f in parts if f is not None), None)
    return BruteResult(count=count, total=total, first_miss=first_miss)


def brute_force_NW(spec: ProblemSpec, n: int, budget: Optional[int] = DEFAULT_BUDGET,
                   workers: int = 1) -> int:
    """穷举所有着色计算 N(W)"""
    return count_colorings(spec, n, enumerate_events(spec, n), 'any', budget, workers).count


# ==================== 直接容斥 ====================

def tuple_value(tup: EventTuple, spec: ProblemSpec, n: int) -> int:
    """N(事件组同时成立): 不相容为 0, 否则 t^(C(n,r) + sum_s (-1)^s sum C(P_交, r))"""
    if not is_compatible(tup, spec):
        return 0
    spectrum = venn_spectrum_of(tup.vertex_sets(), n)
    exponent = binom(n, spec.r)
    k = tup.k
    for s in range(1, k + 1):
        sign = -1 if s % 2 else 1
        for combo in itertools.combinations(range(1, k + 1), s):
            exponent += sign * binom(p_from_q(spectrum, combo), spec.r)
    return spec.t ** exponent


class _CompatibleWalk:
    """按事件序深度优先遍历全部相容事件组

    候选集是位掩码: 只向当前最大事件之后、且与全部成员相容的事件扩展
    """

    def __init__(self, spec: ProblemSpec, n: int, k_cutoff: Optional[int] = None,
                 budget: Optional[int] = None):
        self.spec = spec
        self.n = n
        self.k_cutoff = k_cutoff
        self.budget = budget
        self.events = enumerate_events(spec, n)
        self.m = binom(n, spec.r)
        vmask = [sum(1 << (v - 1) for v in e.vertices) for e in self.events]
        self.trmask = [sum(1 << rank for rank in tr_ranks(e.vertices, n, spec.r))
                       for e in self.events]
        self.later = []
        for i, a in enumerate(self.events):
            mask = 0
            for j in range(i + 1, len(self.events)):
                b = self.events[j]
                if a.box == b.box or (vmask[i] & vmask[j]).bit_count() <= spec.r - 1:
                    mask |= 1 << j
            self.later.append(mask)
        self.visited = 0

    def visit(self, k: int, union: int, box_counts: List[int]):
        raise NotImplementedError

    def run(self, firsts: Sequence[int]):
        box_counts = [0] * self.spec.t
        for i in firsts:
            self._extend(i, 1, self.trmask[i], self.later[i], box_counts)
        return self

    def _extend(self, j: int, k: int, union: int, cand: int, box_counts: List[int]):
        self.visited += 1
        if self.budget is not None and self.visited > self.budget:
            raise BudgetExhausted(self.visited)
        box = self.events[j].box - 1
        box_counts[box] += 1
        self.visit(k, union, box_counts)
        if not self.k_cutoff or k < self.k_cutoff:
            while cand:
                low = cand & -cand
                nxt = low.bit_length() - 1
                cand ^= low
                self._extend(nxt, k + 1, union | self.trmask[nxt], cand & self.later[nxt], box_counts)
        box_counts[box] -= 1


class _DirectWalk(_CompatibleWalk):

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.powers = [self.spec.t ** e for e in range(self.m + 1)]
        self.term_sums = Counter()
        self.tuple_counts = Counter()

    def visit(self, k, union, box_counts):
        self.term_sums[k] += self.powers[self.m - union.bit_count()]
        self.tuple_counts[k] += 1


class _CensusWalk(_CompatibleWalk):

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.types = Counter()

    def visit(self, k, union, box_counts):
        self.types[tuple(box_counts)] += 1


def _direct_partition(task) -> Dict[str, Any]:
    spec, n, firsts, k_cutoff, budget = task
    try:
        walk = _DirectWalk(spec, n, k_cutoff, budget).run(firsts)
    except BudgetExhausted as exc:
        raise BudgetExceededError(f"direct: 相容事件组数超过预算 {budget}",
                                  required=None, budget=budget, engine='direct') from exc
    logger.debug("direct 分片完成: %d 个起始事件, %d 个事件组", len(firsts), walk.visited)
    return {'term_sums': dict(walk.term_sums), 'tuple_counts': dict(walk.tuple_counts),
            'visited': walk.visited}


@dataclass
class DirectResult:
    n_w: int
    term_sums: Dict[int, int]
    tuple_counts: Dict[int, int]
    visited: int
    event_count: int

    @property
    def max_k(self) -> int:
        return max(self.tuple_counts, default=0)

    def partial_sums(self) -> List[Tuple[int, int]]:
        """截断到 k 的容斥部分和 (Bonferroni 序列)"""
        out = []
        acc = 0
        for k in sorted(self.term_sums):
            acc += self.term_sums[k] if k % 2 else -self.term_sums[k]
            out.append((k, acc))
        return out


def _round_robin(items: Sequence, workers: int) -> List[List]:
    workers = max(1, workers)
    return [list(items[w::workers]) for w in range(workers) if items[w::workers]]


def direct_ie(spec: ProblemSpec, n: int, k_cutoff: Optional[int] = None,
              budget: Optional[int] = DEFAULT_BUDGET, workers: int = 1) -> DirectResult:
    """直接容斥: 按首事件分片, 每片独立深度优先, 分项和精确合并"""
    count = len(enumerate_events(spec, n))
    shards = _round_robin(list(range(count)), workers)
    tasks = [(spec, n, shard, k_cutoff, budget) for shard in shards]
    parts = _parallel_map(_direct_partition, tasks, workers)
    term_sums = Counter()
    tuple_counts = Counter()
    visited = 0
    for part in parts:
        term_sums.update(part['term_sums'])
        tuple_counts.update(part['tuple_counts'])
        visited += part['visited']
    _check_budget(visited, budget, 'direct', '相容事件组')
    n_w = sum(s if k % 2 else -s for k, s in term_sums.items())
    return DirectResult(n_w=n_w, term_sums=dict(sorted(term_sums.items())),
                        tuple_counts=dict(sorted(tuple_counts.items())),
                        visited=visited, event_count=count)


def direct_ie_NW(spec: ProblemSpec, n: int, k_cutoff: Optional[int] = None,
                 budget: Optional[int] = DEFAULT_BUDGET, workers: int = 1) -> int:
    return direct_ie(spec, n, k_cutoff, budget, workers).n_w


def compatible_tuple_census(spec: ProblemSpec, n: int, k_cutoff: Optional[int] = None,
                            budget: Optional[int] = DEFAULT_BUDGET) -> Dict[Tuple[int, ...], int]:
    """逐个枚举相容无序事件组, 按类型 (k_1..k_t) 计数"""
    walk = _CensusWalk(spec, n, k_cutoff, budget)
    try:
        walk.run(range(len(walk.events)))
    except BudgetExhausted as exc:
        raise BudgetExceededError(f"census: 相容事件组数超过预算 {budget}",
                                  budget=budget, engine='direct') from exc
    return dict(walk.types)


# ==================== 按谱分组 ====================

def frequency(spectrum: VennSpectrum) -> int:
    """多项式系数 n! / prod_B Q_B!"""
    out = 1
    acc = 0
    for _, q in spectrum.parts:
        acc += q
        out *= binom(acc, q)
    return out


def kmax_upper_bound(spec: ProblemSpec, n: int) -> int:
    """相容事件组大小的上界: max_i [C(n,P_i) + sum_{j!=i} sum_{v<r} C(P_i,v) C(n-P_i,P_j-v)]"""
    best = 0
    for i, pi in enumerate(spec.p):
        value = binom(n, pi)
        for j, pj in enumerate(spec.p):
            if j == i:
                continue
            value += sum(binom(pi, v) * binom(n - pi, pj - v) for v in range(spec.r))
        best = max(best, value)
    return best


def type_normalizer(counts: Sequence[int]) -> int:
    """同盒内位置置换数 prod k_i!"""
    return math.prod(math.factorial(c) for c in counts)


FrequencyTable = Dict[Tuple[int, ...], Dict[int, int]]


def _type_frequencies(spec: ProblemSpec, n: int, types: Sequence[Sequence[int]],
                      budget: Optional[int] = None,
                      shard: Tuple[int, int] = (0, 1)) -> Tuple[FrequencyTable, int]:
    """一次谱搜索覆盖多个类型: {类型 -> {指数 -> 频数和}} 以及消耗的搜索节点数"""
    m = binom(n, spec.r)
    search = SpectrumSearch([TupleType(tuple(c)) for c in types], spec, n, budget, shard)
    by_type: Dict[Tuple[int, ...], Counter] = {}
    for ttype, spectrum in search:
        exponent = m - box_union_sizes(spectrum, ttype, spec.r)
        by_type.setdefault(ttype.counts, Counter())[exponent] += frequency(spectrum)
    return {counts: dict(by_exp) for counts, by_exp in by_type.items()}, search.nodes


def _normalize(freqs: FrequencyTable) -> FrequencyTable:
    """频数和除以 prod k_i! 得到无序事件组数; 每一项都必须整除"""
    out = {}
    for counts, by_exp in sorted(freqs.items()):
        norm = type_normalizer(counts)
        summary = {}
        for exponent, freq in sorted(by_exp.items()):
            if freq % norm:
                raise EngineInvariantError(
                    f"类型 {counts}: 指数 {exponent} 的频数和 {freq} 不能被 {norm} 整除")
            summary[exponent] = freq // norm
        out[counts] = summary
    return out


def spectrum_type_summary(spec: ProblemSpec, n: int, counts: Sequence[int],
                          budget: Optional[int] = None) -> Tuple[Dict[int, int], int]:
    """某类型下 {指数 -> 事件组数} 以及消耗的搜索节点数"""
    key = TupleType(tuple(counts)).counts
    freqs, nodes = _type_frequencies(spec, n, [key], budget)
    return _normalize(freqs).get(key, {}), nodes


def admissible_types(spec: ProblemSpec, n: int, k_cutoff: Optional[int] = None) -> List[Tuple[int, ...]]:
    """全部可能非零的类型, 按 (k, 类型) 排序

    k_i <= C(n, P_i); 两个非空盒子的集合最多共享 r-1 个元素, 所以 P_i + P_j - (r-1) <= n
    """
    limit = kmax_upper_bound(spec, n)
    if k_cutoff:
        limit = min(limit, k_cutoff)
    ranges = [range(binom(n, p) + 1) for p in spec.p]
    types = []
    for c in itertools.product(*ranges):
        if not 1 <= sum(c) <= limit:
            continue
        used = [p for p, k in zip(spec.p, c) if k]
        if any(a + b - (spec.r - 1) > n for a, b in itertools.combinations(used, 2)):
            continue
        types.append(c)
    return sorted(types, key=lambda c: (sum(c), c))


def _spectrum_partition(task) -> Dict[str, Any]:
    spec, n, types, budget, shard = task
    try:
        freqs, nodes = _type_frequencies(spec, n, types, budget, shard)
    except BudgetExhausted as exc:
        raise BudgetExceededError(f"spectrum: 谱搜索节点数超过预算 {budget}",
                                  budget=budget, engine='spectrum') from exc
    logger.debug("spectrum 分片 %d/%d 完成: %d 个节点", shard[0] + 1, shard[1], nodes)
    return {'freqs': freqs, 'nodes': nodes}


def spectrum_engine(spec: ProblemSpec, n: int, k_cutoff: Optional[int] = None,
                    budget: Optional[int] = DEFAULT_BUDGET, workers: int = 1) -> DirectResult:
    """按类型与 Venn 谱分组求 N(W); 谱搜索树按深度 2 的分支轮转分给各进程"""
    types = admissible_types(spec, n, k_cutoff)
    workers = max(1, workers)
    tasks = [(spec, n, types, budget, (w, workers)) for w in range(workers)]
    parts = _parallel_map(_spectrum_partition, tasks, workers)
    merged: Dict[Tuple[int, ...], Counter] = {}
    nodes = 0
    for part in parts:
        for counts, by_exp in part['freqs'].items():
            merged.setdefault(counts, Counter()).update(by_exp)
        nodes += part['nodes']
    _check_budget(nodes, budget, 'spectrum', '谱搜索节点')
    term_sums = Counter()
    tuple_counts = Counter()
    for counts, by_exp in _normalize(merged).items():
        k = sum(counts)
        term_sums[k] += sum(tuples * spec.t ** e for e, tuples in by_exp.items())
        tuple_counts[k] += sum(by_exp.values())
    n_w = sum(s if k % 2 else -s for k, s in term_sums.items())
    return DirectResult(n_w=n_w, term_sums=dict(sorted(term_sums.items())),
                        tuple_counts=dict(sorted(tuple_counts.items())),
                        visited=nodes, event_count=len(types))


def spectrum_NW(spec: ProblemSpec, n: int, k_cutoff: Optional[int] = None,
                budget: Optional[int] = DEFAULT_BUDGET, workers: int = 1) -> int:
    return spectrum_engine(spec, n, k_cutoff, budget, workers).n_w


def realized_kmax(spec: ProblemSpec, n: int, budget: Optional[int] = DEFAULT_BUDGET) -> int:
    """最大相容事件组的实际大小 (分支定界)"""
    walk = _CompatibleWalk(spec, n)
    best = 0
    nodes = 0

    def grow(size: int, cand: int):
        nonlocal best, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceededError(f"kmax: 搜索节点数超过预算 {budget}",
                                      budget=budget, engine='direct')
        best = max(best, size)
        while cand:
            if size + cand.bit_count() <= best:
                return
            low = cand & -cand
            j = low.bit_length() - 1
            cand ^= low
            grow(size + 1, cand & walk.later[j])

    for i in range(len(walk.events)):
        if 1 + walk.later[i].bit_count() > best:
            grow(1, walk.later[i])
    return best


# ==================== 统一入口 ====================

def run_engine(engine: str, spec: ProblemSpec, n: int, k_cutoff: Optional[int] = None,
               budget: Optional[int] = DEFAULT_BUDGET, workers: int = 1) -> EngineReport:
    """运行指定引擎并打包结果"""
    if engine not in ENGINES:
        raise ValueError(f"未知引擎: {engine}")
    total = spec.t ** binom(n, spec.r)
    logger.info("开始计算 %s n=%d 引擎=%s", spec.label(), n, engine)
    started = time.perf_counter()
    try:
        if engine == 'brute':
            result = count_colorings(spec, n, enumerate_events(spec, n), 'any', budget, workers)
            n_w = result.count
            stats = {'colorings': result.total, 'first_miss': result.first_miss}
        else:
            runner = direct_ie if engine == 'direct' else spectrum_engine
            result = runner(spec, n, k_cutoff, budget, workers)
            n_w = result.n_w
            stats = {
                'tuple_counts': result.tuple_counts,
                'term_sums': result.term_sums,
                'max_k': result.max_k,
                'kmax_bound': kmax_upper_bound(spec, n),
            }
            if engine == 'direct':
                stats.update(events=result.event_count, tuples=result.visited,
                             partial_sums=result.partial_sums())
            else:
                stats.update(types=result.event_count, nodes=result.visited)
    except BudgetExceededError as exc:
        raise exc.with_n(n) from exc
    elapsed = time.perf_counter() - started
    logger.info("完成 %s n=%d 引擎=%s: N(W)=%d / %d, 用时 %.3fs",
                spec.label(), n, engine, n_w, total, elapsed)
    return EngineReport(engine=engine, spec=spec, n=n, n_w=n_w, total=total,
                        elapsed=elapsed, stats=stats,
                        k_cutoff=None if engine == 'brute' else k_cutoff)


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    demo = ProblemSpec(2, 2, (3, 3))
    for eng in ENGINES:
        rep = run_engine(eng, demo, 4)
        print(f"{eng}: N(W)={rep.n_w} / {rep.total}")
