#!/usr/bin/env python3
"""
Venn 谱模块
Venn 谱 / 交谱的相互转换、分布相容性判断、谱约束检查与约束谱枚举

标签约定: k 位二进制标签 B 存为整数 0..2^k-1, 第 m 位(m=1..k, 从最高位数起)
位于比特 k-m; 因此标签的整数序就是谱的列出顺序
"""

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .model import EventTuple, ProblemSpec, binom


class SpectrumInconsistencyError(ValueError):
    """交谱不可由实际集合实现(反演得到负的 Q)"""


def digit_mask(positions: Sequence[int], k: int) -> int:
    """位置集合(1 起)对应的标签掩码"""
    mask = 0
    for m in positions:
        if not 1 <= m <= k:
            raise ValueError(f"位置 {m} 超出 1..{k}")
        mask |= 1 << (k - m)
    return mask


def label_string(label: int, k: int) -> str:
    return format(label, f'0{k}b') if k else ''


@dataclass(frozen=True)
class VennSpectrum:
    """k 个集合的 Venn 谱; parts 只保存非零部分 (label, Q_B), 按 label 升序"""
    k: int
    parts: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        size = 1 << self.k
        clean = {}
        for label, q in self.parts:
            if not 0 <= label < size:
                raise ValueError(f"标签 {label} 超出 k={self.k} 的范围")
            if q < 0:
                raise ValueError(f"Venn 部分的基数必须非负: Q_{label_string(label, self.k)}={q}")
            if q:
                clean[label] = clean.get(label, 0) + q
        object.__setattr__(self, 'parts', tuple(sorted(clean.items())))

    @classmethod
    def from_counts(cls, k: int, counts: Mapping[int, int]) -> 'VennSpectrum':
        return cls(k, tuple(counts.items()))

    @classmethod
    def from_dense(cls, q: Sequence[int]) -> 'VennSpectrum':
        """由完整的 2^k 个 Q 值构造"""
        k = max(len(q), 1).bit_length() - 1
        if len(q) != 1 << k:
            raise ValueError(f"谱长度必须是 2 的幂: {len(q)}")
        return cls(k, tuple(enumerate(q)))

    @property
    def n(self) -> int:
        return sum(q for _, q in self.parts)

    def q(self, label: int) -> int:
        for b, q in self.parts:
            if b == label:
                return q
        return 0

    def dense(self) -> List[int]:
        out = [0] * (1 << self.k)
        for b, q in self.parts:
            out[b] = q
        return out

    def as_dict(self) -> Dict[str, int]:
        """二进制标签字符串 -> Q_B (全部 2^k 项)"""
        return {label_string(b, self.k): q for b, q in enumerate(self.dense())}

    def marginal(self, mask: int) -> int:
        """所有在 mask 各位上均为 1 的 Q 之和"""
        return sum(q for b, q in self.parts if b & mask == mask)


@dataclass(frozen=True)
class IntersectionSpectrum:
    """交谱: n 以及每个非空位置子集 (升序元组) 的交集基数"""
    n: int
    k: int
    p: Mapping[Tuple[int, ...], int]

    def get(self, positions: Sequence[int]) -> int:
        key = tuple(sorted(positions))
        if not key:
            return self.n
        return self.p[key]


@dataclass(frozen=True)
class TupleType:
    """事件组类型 (k_1, ..., k_t): 各盒子中选中的事件数"""
    counts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'counts', tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError(f"类型分量必须非负: {self.counts}")

    @property
    def k(self) -> int:
        return sum(self.counts)

    def box_of_positions(self) -> List[int]:
        """位置 1..k 所属的盒子; 盒子 1 占前 k_1 个位置, 依此类推"""
        return [box for box, c in enumerate(self.counts, start=1) for _ in range(c)]

    def box_ranges(self) -> List[Tuple[int, int, int]]:
        """(box, 起始位置 offset+1, k_i), 只列 k_i>0 的盒子"""
        out = []
        offset = 0
        for box, c in enumerate(self.counts, start=1):
            if c:
                out.append((box, offset + 1, c))
            offset += c
        return out

    def fits(self, prob: ProblemSpec, n: int) -> bool:
        return (len(self.counts) == prob.t and
                all(c <= binom(n, prob.size_of(box)) for box, c in enumerate(self.counts, start=1)))


def venn_spectrum_of(sets: Sequence[Sequence[int]], n: int) -> VennSpectrum:
    """按元素的隶属模式统计 Venn 部分基数; 第 m 个集合对应第 m 位"""
    k = len(sets)
    members = [set(s) for s in sets]
    for s in members:
        if s and (min(s) < 1 or max(s) > n):
            raise ValueError(f"集合元素超出 1..{n}: {sorted(s)}")
    counts = Counter()
    for x in range(1, n + 1):
        label = 0
        for m, s in enumerate(members, start=1):
            if x in s:
                label |= 1 << (k - m)
        counts[label] += 1
    return VennSpectrum.from_counts(k, counts)


def p_from_q(spectrum: VennSpectrum, indices: Sequence[int]) -> int:
    """选中位置上数字全为 1 的 Q 之和, 即对应集合交集的基数"""
    if not indices:
        raise ValueError("位置集合不能为空")
    return spectrum.marginal(digit_mask(indices, spectrum.k))


def intersection_spectrum_of(spectrum: VennSpectrum) -> IntersectionSpectrum:
    """由 Venn 谱得到完整交谱"""
    k = spectrum.k
    p = {}
    for s in range(1, k + 1):
        for combo in itertools.combinations(range(1, k + 1), s):
            p[combo] = p_from_q(spectrum, combo)
    return IntersectionSpectrum(n=spectrum.n, k=k, p=p)


def q_from_p(ispec: IntersectionSpectrum) -> VennSpectrum:
    """交谱 -> Venn 谱 (容斥反演); 出现负值即不可实现"""
    k = ispec.k
    counts = {}
    for label in range(1 << k):
        ones = [m for m in range(1, k + 1) if label >> (k - m) & 1]
        zeros = [m for m in range(1, k + 1) if not label >> (k - m) & 1]
        total = 0
        for s in range(len(zeros) + 1):
            sign = -1 if s % 2 else 1
            for extra in itertools.combinations(zeros, s):
                total += sign * ispec.get(ones + list(extra))
        if total < 0:
            raise SpectrumInconsistencyError(
                f"交谱不可实现: Q_{label_string(label, k)} = {total} < 0")
        counts[label] = total
    return VennSpectrum.from_counts(k, counts)


def events_compatible(box_a: int, set_a: Sequence[int], box_b: int, set_b: Sequence[int], r: int) -> bool:
    """不同盒子的两个事件最多共享 r-1 个元素; 同盒子不受约束"""
    if box_a == box_b:
        return True
    return len(set(set_a) & set(set_b)) <= r - 1


def is_compatible(tup: EventTuple, prob: ProblemSpec) -> bool:
    """事件组是否分布相容"""
    events = tup.events
    for i, a in enumerate(events):
        for b in events[i + 1:]:
            if not events_compatible(a.box, a.vertices, b.box, b.vertices, prob.r):
                return False
    return True


def check_spectrum_constraints(spectrum: VennSpectrum, ttype: TupleType,
                               prob: ProblemSpec, n: int) -> bool:
    """总和、单位边际、跨盒两位边际 <= r-1、同盒集合互异 四项约束"""
    k = ttype.k
    if spectrum.k != k or len(ttype.counts) != prob.t:
        return False
    if spectrum.n != n:
        return False
    boxes = ttype.box_of_positions()
    for m in range(1, k + 1):
        if p_from_q(spectrum, [m]) != prob.size_of(boxes[m - 1]):
            return False
    for mu in range(1, k + 1):
        for nu in range(mu + 1, k + 1):
            if boxes[mu - 1] != boxes[nu - 1]:
                if p_from_q(spectrum, [mu, nu]) > prob.r - 1:
                    return False
            else:
                bit_mu = 1 << (k - mu)
                bit_nu = 1 << (k - nu)
                differ = sum(q for b, q in spectrum.parts if bool(b & bit_mu) != bool(b & bit_nu))
                if differ < 1:
                    return False
    return True


def box_union_sizes(spectrum: VennSpectrum, ttype: TupleType, r: int) -> int:
    """按盒子分组的 |∪ Tr| 之和, 每个交集基数都从谱上读出

    只展开非零项: 交集为空的位置组合不会出现在任何 Venn 部分的子掩码中
    """
    k = spectrum.k
    total = 0
    for _, start, count in ttype.box_ranges():
        box_mask = digit_mask(range(start, start + count), k)
        inter = Counter()
        for label, q in spectrum.parts:
            sub = label & box_mask
            s = sub
            while s:
                inter[s] += q
                s = (s - 1) & sub
        for mask, size in inter.items():
            term = binom(size, r)
            if term:
                total += term if bin(mask).count('1') % 2 else -term
    return total


class SpectrumSearch:
    """逐列深度优先枚举满足约束的 Venn 谱, 一次搜索覆盖一组类型

    节点是前 c 个集合的 Venn 谱 (只存非零部分); 新集合从每个部分中取若干元素,
    所以每个谱恰好生成一次. 列按盒子非降序追加, 节点的类型就是各盒子已追加的列数,
    到不了任何目标类型的分支直接剪掉.

    取数时的约束: 跨盒两两交集 <= r-1, 同盒两两交集 <= P-1 (集合互异),
    并且对每个旧集合, 剩余需求中必须落在它里面的部分不能超过它的余量

    shard=(i, m): 深度 2 的分支按生成顺序轮转分给 m 个分片, 深度 1 的节点归分片 0;
    各分片的节点数与结果之和与不分片时完全相同
    """

    def __init__(self, types: Iterable[TupleType], prob: ProblemSpec, n: int,
                 budget: Optional[int] = None, shard: Tuple[int, int] = (0, 1)):
        self.prob = prob
        self.n = n
        self.budget = budget
        self.nodes = 0
        self.shard, self.shards = shard
        if not 0 <= self.shard < self.shards:
            raise ValueError(f"分片编号越界: {shard}")
        self.types = {ttype.counts: ttype for ttype in types
                      if ttype.k and ttype.fits(prob, n)}
        self._viable_cache: Dict[Tuple[Tuple[int, ...], int], bool] = {}
        self._branch = 0

    def _owns(self, depth: int) -> bool:
        return depth >= 2 or self.shard == 0

    def _tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExhausted(self.nodes)

    def _viable(self, counts: Tuple[int, ...], box: int) -> bool:
        """当前停在盒子 box (0 起) 时, 还能延伸到某个目标类型"""
        key = (counts, box)
        if key not in self._viable_cache:
            self._viable_cache[key] = any(
                target[:box] == counts[:box] and target[box] >= counts[box]
                for target in self.types)
        return self._viable_cache[key]

    def __iter__(self) -> Iterator[Tuple[TupleType, VennSpectrum]]:
        if not self.types:
            return
        root = ((0, self.n),) if self.n else ()
        yield from self._extend((0,) * self.prob.t, 0, [], root)

    def _extend(self, counts: Tuple[int, ...], box: int, boxes: List[int],
                parts: Tuple[Tuple[int, int], ...]) -> Iterator[Tuple[TupleType, VennSpectrum]]:
        if counts in self.types and self._owns(len(boxes)):
            yield self.types[counts], VennSpectrum(len(boxes), parts)
        for nxt in range(box, self.prob.t):
            child = counts[:nxt] + (counts[nxt] + 1,) + counts[nxt + 1:]
            if not self._viable(child, nxt):
                continue
            size = self.prob.size_of(nxt + 1)
            caps = [self.prob.r - 1 if b != nxt else size - 1 for b in boxes]
            boxes.append(nxt)
            depth = len(boxes)
            for split in self._splits(parts, caps, size):
                if depth == 2:
                    branch = self._branch
                    self._branch += 1
                    if branch % self.shards != self.shard:
                        continue
                if self._owns(depth):
                    self._tick()
                refined = []
                for (label, q), x in zip(parts, split):
                    if q > x:
                        refined.append((label << 1, q - x))
                    if x:
                        refined.append((label << 1 | 1, x))
                yield from self._extend(child, nxt, boxes, tuple(refined))
            boxes.pop()

    @staticmethod
    def _splits(parts: Sequence[Tuple[int, int]], caps: Sequence[int],
                size: int) -> Iterator[Tuple[int, ...]]:
        """新集合在各部分中取的元素数 x_j: 总数为 size, 与每个旧集合 a 的交集 <= caps[a]"""
        c = len(caps)
        m = len(parts)
        members = [[a for a in range(c) if label >> (c - 1 - a) & 1] for label, _ in parts]
        suffix = [0] * (m + 1)
        outside = [[0] * (m + 1) for _ in range(c)]
        for j in range(m - 1, -1, -1):
            q = parts[j][1]
            suffix[j] = suffix[j + 1] + q
            inside = set(members[j])
            for a in range(c):
                outside[a][j] = outside[a][j + 1] + (0 if a in inside else q)
        inter = [0] * c
        x = [0] * m

        def walk(j: int, need: int) -> Iterator[Tuple[int, ...]]:
            if need == 0:
                yield tuple(x)
                return
            if j == m or suffix[j] < need:
                return
            for a in range(c):
                if need - outside[a][j] > caps[a] - inter[a]:
                    return
            top = min(parts[j][1], need)
            for a in members[j]:
                top = min(top, caps[a] - inter[a])
            for take in range(top + 1):
                x[j] = take
                for a in members[j]:
                    inter[a] += take
                yield from walk(j + 1, need - take)
                for a in members[j]:
                    inter[a] -= take
            x[j] = 0

        return walk(0, size)


class BudgetExhausted(Exception):
    """谱枚举超过节点预算(由引擎层转换为 BudgetExceededError)"""

    def __init__(self, nodes: int):
        super().__init__(nodes)
        self.nodes = nodes


def enumerate_spectra(ttype: TupleType, prob: ProblemSpec, n: int,
                      budget: Optional[int] = None) -> Iterator[VennSpectrum]:
    """某一类型下全部满足约束的 Venn 谱"""
    return (spectrum for _, spectrum in SpectrumSearch([ttype], prob, n, budget))
