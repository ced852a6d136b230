#!/usr/bin/env python3
"""
组合基础模块
二项式系数、r-子集排序(rank/unrank)、事件枚举以及事件/事件组的全序
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple


class ProblemSpecError(ValueError):
    """问题参数 (t, r, p) 或 n 不合法"""


@dataclass(frozen=True)
class ProblemSpec:
    """Ramsey 实例 (t, r, P_1 <= ... <= P_t)"""
    t: int
    r: int
    p: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'p', tuple(int(x) for x in self.p))
        if self.t < 1:
            raise ProblemSpecError(f"盒子数 t 必须 >= 1: t={self.t}")
        if self.r < 1:
            raise ProblemSpecError(f"子集大小 r 必须 >= 1: r={self.r}")
        if len(self.p) != self.t:
            raise ProblemSpecError(f"p 的长度 {len(self.p)} 与 t={self.t} 不一致")
        if list(self.p) != sorted(self.p):
            raise ProblemSpecError(f"p 必须非递减: {list(self.p)}")
        if self.p[0] < self.r:
            raise ProblemSpecError(f"要求 P_1 >= r: P_1={self.p[0]}, r={self.r}")

    def size_of(self, box: int) -> int:
        """第 box 个盒子(1 起)的 P_i"""
        return self.p[box - 1]

    def label(self) -> str:
        return f"R({','.join(str(x) for x in self.p)};{self.r})"


@dataclass(frozen=True)
class Event:
    """事件 A_ij: 顶点子集的全部 r-子集都在盒子 box 中"""
    box: int
    vertices: Tuple[int, ...]


@dataclass(frozen=True)
class EventTuple:
    """按事件序严格递增的 k 个事件"""
    events: Tuple[Event, ...]

    def __post_init__(self):
        object.__setattr__(self, 'events', tuple(self.events))
        if not self.events:
            raise ProblemSpecError("事件组至少包含一个事件")
        for a, b in zip(self.events, self.events[1:]):
            if compare_events(a, b) >= 0:
                raise ProblemSpecError(f"事件组必须严格递增: {a} !< {b}")

    @property
    def k(self) -> int:
        return len(self.events)

    def vertex_sets(self) -> List[Tuple[int, ...]]:
        return [e.vertices for e in self.events]

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


def make_tuple(events: Iterable[Event]) -> EventTuple:
    """排序后构造事件组"""
    return EventTuple(tuple(sorted(events, key=lambda e: (e.box, e.vertices))))


def binom(n: int, k: int) -> int:
    """二项式系数, k<0 或 k>n 时为 0"""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def compare_events(a: Event, b: Event) -> int:
    """先比较盒子号, 再按从小到大的元素字典序比较顶点集; 返回 -1/0/1"""
    if a.box != b.box:
        return _sign(a.box - b.box)
    for x, y in zip(a.vertices, b.vertices):
        if x != y:
            return _sign(x - y)
    return _sign(len(a.vertices) - len(b.vertices))


def compare_tuples(a: EventTuple, b: EventTuple) -> int:
    """短的事件组更小; 等长时在第一个不同位置比较事件"""
    if a.k != b.k:
        return _sign(a.k - b.k)
    for x, y in zip(a.events, b.events):
        c = compare_events(x, y)
        if c:
            return c
    return 0


def enumerate_events(spec: ProblemSpec, n: int) -> List[Event]:
    """按事件序列出全部 S_n = sum_i C(n, P_i) 个事件"""
    if n < 0:
        raise ProblemSpecError(f"n 必须 >= 0: n={n}")
    ground = range(1, n + 1)
    return [Event(box, combo)
            for box in range(1, spec.t + 1)
            for combo in itertools.combinations(ground, spec.size_of(box))]


def event_count(spec: ProblemSpec, n: int) -> int:
    return sum(binom(n, p) for p in spec.p)


def rank_rsubset(s: Sequence[int], n: int, r: int) -> int:
    """r-子集在字典序中的位置 (0 起)"""
    if len(s) != r or any(b <= a for a, b in zip(s, s[1:])):
        raise ValueError(f"需要严格递增的 {r} 元子集: {s}")
    if s and (s[0] < 1 or s[-1] > n):
        raise ValueError(f"元素超出 1..{n}: {s}")
    idx = 0
    prev = 0
    for pos, x in enumerate(s):
        for v in range(prev + 1, x):
            idx += binom(n - v, r - pos - 1)
        prev = x
    return idx


def unrank_rsubset(idx: int, n: int, r: int) -> Tuple[int, ...]:
    """rank_rsubset 的逆映射"""
    if not 0 <= idx < binom(n, r):
        raise ValueError(f"下标越界: {idx} 不在 [0, C({n},{r})) 内")
    out = []
    v = 1
    for pos in range(r):
        while True:
            block = binom(n - v, r - pos - 1)
            if idx < block:
                break
            idx -= block
            v += 1
        out.append(v)
        v += 1
    return tuple(out)


@lru_cache(maxsize=64)
def rsubset_index(n: int, r: int) -> Dict[Tuple[int, ...], int]:
    """全部 r-子集到其 rank 的映射, 顺序与 rank_rsubset 一致"""
    return {combo: i for i, combo in
            enumerate(itertools.combinations(range(1, n + 1), r))}


def tr_ranks(vertices: Sequence[int], n: int, r: int) -> List[int]:
    """Tr(X): 顶点集全部 r-子集的 rank"""
    index = rsubset_index(n, r)
    return [index[c] for c in itertools.combinations(vertices, r)]


def tuple_type_of(tup: EventTuple, t: int) -> Tuple[int, ...]:
    """事件组的类型 (k_1, ..., k_t)"""
    counts = [0] * t
    for e in tup.events:
        counts[e.box - 1] += 1
    return tuple(counts)
