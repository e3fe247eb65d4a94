# coding: utf-8

"""
Subsum sets of sequences: layered reachability tables, zero-sum decisions,
exact counting and witness extraction.
"""

import math
from functools import lru_cache
from typing import Optional, Set, Iterable, List, Dict, Tuple

import numpy as np

from .constants import COUNT_WIDTH_LIMIT
from .environment import Environment
from .errors import BadK, MemoryCapExceeded, WidthExceeded
from .group import GroupSpec, Element, shift_permutation, scalar_mul, sub, element_table
from .sequence import Sequence
from .serialization import BaseModel

import logging
logger = logging.getLogger(__name__)


class SubsumTable:
    """
    ``reach[c, index(g)]`` is true iff some sub-multiset of cardinality ``c`` sums to ``g``.

    Parameters
    ----------
    seq : Sequence
        The generating sequence.

    max_card : int, optional
        Only cardinalities up to ``max_card`` are tracked.

    mem_cap : int, optional
        Byte budget for the table and the stage snapshots used by witness
        extraction. Default from :class:`Environment`.

    keep_stages : bool
        Keep the snapshots needed by :meth:`witness`.
    """

    def __init__(self, seq: Sequence, max_card: int = None, mem_cap: int = None, keep_stages: bool = True):
        spec = seq.spec
        s = len(seq)
        self.seq = seq
        self.spec = spec
        self.s = s
        self.max_card = s if max_card is None else max(0, min(s, max_card))
        self.keep_stages = keep_stages

        n = len(seq.entries)
        self._stride = max(1, math.isqrt(max(n - 1, 0)) + 1)
        n_tables = 1
        if keep_stages:
            n_tables += n // self._stride + 1 + self._stride
        needed = (self.max_card + 1) * spec.order * n_tables
        mem_cap = mem_cap or Environment.instance().mem_cap
        if needed > mem_cap:
            raise MemoryCapExceeded(
                f"subsum table for |S|={s} over C_{spec.p}^{spec.r} needs {needed} bytes, cap is {mem_cap}"
            )

        reach = np.zeros((self.max_card + 1, spec.order), dtype=bool)
        reach[0, 0] = True
        self._snapshots: Dict[int, np.ndarray] = {0: reach}
        for k, (x, m) in enumerate(seq.entries, start=1):
            reach = self._extend(reach, x, m)
            if keep_stages and k % self._stride == 0:
                self._snapshots[k] = reach
        self.reach = reach
        self._block_base = -1
        self._block: List[np.ndarray] = []
        logger.debug("built subsum table: s=%d, max_card=%d, order=%d", s, self.max_card, spec.order)

    def _extend(self, old: np.ndarray, x: Element, m: int) -> np.ndarray:
        new = old.copy()
        top = old.shape[0] - 1
        for t in range(1, min(m, top) + 1):
            perm = shift_permutation(self.spec, scalar_mul(self.spec, t, x))
            new[t:] |= old[:top + 1 - t][:, perm]
        return new

    def _stage(self, k: int) -> np.ndarray:
        """
        The table after the first ``k`` distinct elements, recomputed from the nearest snapshot.
        """
        base = (k // self._stride) * self._stride
        if base != self._block_base:
            tables = [self._snapshots[base]]
            entries = self.seq.entries
            for i in range(base, min(base + self._stride - 1, len(entries))):
                tables.append(self._extend(tables[-1], *entries[i]))
            self._block_base, self._block = base, tables
        return self._block[k - base]

    def contains(self, c: int, g: Element) -> bool:
        if not 0 <= c <= self.max_card:
            return False
        return bool(self.reach[c, self.spec.index(g)])

    def layer(self, c: int) -> Set[Element]:
        indices = np.flatnonzero(self.reach[c])
        elems = element_table(self.spec.p, self.spec.r)
        return {tuple(int(v) for v in elems[i]) for i in indices}

    def union(self, cards: Iterable[int]) -> Set[Element]:
        cards = [c for c in cards if 0 <= c <= self.max_card]
        if not cards:
            return set()
        mask = np.any(self.reach[cards], axis=0)
        elems = element_table(self.spec.p, self.spec.r)
        return {tuple(int(v) for v in elems[i]) for i in np.flatnonzero(mask)}

    def witness(self, c: int, target: Element) -> Optional[Sequence]:
        """
        A sub-multiset of cardinality ``c`` summing to ``target``, or None.

        Traced backwards through the stages, taking the fewest copies of each element first.
        """
        if not self.keep_stages:
            raise RuntimeError("witness extraction needs a table built with keep_stages=True")
        if not self.contains(c, target):
            return None

        spec = self.spec
        picks = []
        g = tuple(target)
        for k in range(len(self.seq.entries), 0, -1):
            x, m = self.seq.entries[k - 1]
            prev = self._stage(k - 1)
            for t in range(0, min(m, c) + 1):
                h = sub(spec, g, scalar_mul(spec, t, x))
                if prev[c - t, spec.index(h)]:
                    break
            else:
                raise AssertionError(f"broken subsum trace at stage {k}")
            if t:
                picks.append((x, t))
            c -= t
            g = h
        assert c == 0 and g == spec.zero
        return Sequence(spec, picks)

    def dict(self) -> dict:
        return {
            "s": self.s,
            "max_card": self.max_card,
            "layers": {c: sorted(self.layer(c)) for c in range(self.max_card + 1)},
        }


def build_table(seq: Sequence, max_card: int = None, mem_cap: int = None) -> SubsumTable:
    return SubsumTable(seq, max_card=max_card, mem_cap=mem_cap)


def _check_k(seq: Sequence, k: Optional[int]):
    if k is None or not 1 <= k <= len(seq):
        raise BadK(f"k must be in [1, {len(seq)}], got {k}")


def subsums(seq: Sequence, kind: str = "all", k: int = None) -> Set[Element]:
    """
    Subsum sets: ``all`` for Σ(S), ``exact`` for Σ_k(S), ``upto`` for Σ_{≤k}(S), ``atleast`` for Σ_{≥k}(S).
    """
    s = len(seq)
    match kind:
        case "all":
            if not s:
                return set()
            return SubsumTable(seq, keep_stages=False).union(range(1, s + 1))
        case "exact":
            _check_k(seq, k)
            return SubsumTable(seq, max_card=k, keep_stages=False).layer(k)
        case "upto":
            _check_k(seq, k)
            return SubsumTable(seq, max_card=k, keep_stages=False).union(range(1, k + 1))
        case "atleast":
            _check_k(seq, k)
            return SubsumTable(seq, keep_stages=False).union(range(k, s + 1))
        case _:
            raise ValueError(f"unknown subsum kind: {kind}")


def reach_nonempty(seq: Sequence) -> np.ndarray:
    """
    Boolean vector of Σ(S) without cardinality layers.
    """
    spec = seq.spec
    reach = np.zeros(spec.order, dtype=bool)
    for x, m in seq.entries:
        perm = shift_permutation(spec, x)
        for _ in range(m):
            reach = reach | reach[perm]
            reach[spec.index(x)] = True
    return reach


def is_zero_sumfree(seq: Sequence) -> bool:
    if seq.multiplicity(seq.spec.zero):
        return False
    return not bool(reach_nonempty(seq)[0])


class ZeroSumWitness(BaseModel):
    source: Sequence
    witness: Sequence
    length: int
    total: Tuple[int, ...]
    constraint: str = "any"

    @classmethod
    def of(cls, source: Sequence, witness: Sequence, constraint: str = "any") -> "ZeroSumWitness":
        return cls(source=source, witness=witness, length=len(witness), total=witness.sigma, constraint=constraint)

    def verify(self) -> bool:
        """
        Independent re-check: the witness divides the source, sums to zero and has the claimed length.
        """
        spec = self.source.spec
        return (
            self.witness.divides(self.source)
            and self.witness.sigma == spec.zero
            and self.length == len(self.witness)
            and 1 <= self.length <= len(self.source)
        )

    def __str__(self):
        return f"{self.witness} (length {self.length})"


def find_subsequence(seq: Sequence, target: Element, lengths: Iterable[int]) -> Optional[Sequence]:
    """
    A sub-multiset summing to ``target`` whose length is the first feasible one of ``lengths``.
    """
    lengths = [c for c in lengths if 0 <= c <= len(seq)]
    if not lengths:
        return None
    table = SubsumTable(seq, max_card=max(lengths))
    for c in lengths:
        found = table.witness(c, target)
        if found is not None:
            return found
    return None


def find_zero_sum(seq: Sequence, constraint: str = "any", length: int = None) -> Optional[ZeroSumWitness]:
    """
    Find a nonempty zero-sum sub-multiset, smallest cardinality first.

    Parameters
    ----------
    constraint : str
        ``any``, ``exact_length`` (needs ``length``) or ``short`` (length at most p).
    """
    s = len(seq)
    zero = seq.spec.zero
    match constraint:
        case "any":
            lengths = range(1, s + 1)
            label = "any"
        case "exact_length":
            _check_k(seq, length)
            lengths = [length]
            label = f"exact_length({length})"
        case "short":
            lengths = range(1, min(seq.spec.p, s) + 1)
            label = f"short(<={seq.spec.p})"
        case _:
            raise ValueError(f"unknown zero-sum constraint: {constraint}")

    found = find_subsequence(seq, zero, lengths)
    if found is None:
        return None
    witness = ZeroSumWitness.of(seq, found, label)
    assert witness.verify()
    return witness


def count_zero_sum_subsequences(seq: Sequence, exact: bool = None) -> int:
    """
    Number of index subsets (the empty one included) summing to zero.
    """
    if exact is None:
        exact = Environment.instance().exact_counting
    s = len(seq)
    if s > COUNT_WIDTH_LIMIT and not exact:
        raise WidthExceeded(f"|S|={s} exceeds the 64-bit counting limit {COUNT_WIDTH_LIMIT}")

    spec = seq.spec
    dtype = object if exact else np.int64
    counts = np.zeros(spec.order, dtype=dtype)
    counts[0] = 1
    for x, m in seq.entries:
        new = np.zeros(spec.order, dtype=dtype)
        for t in range(m + 1):
            perm = shift_permutation(spec, scalar_mul(spec, t, x))
            new = new + math.comb(m, t) * counts[perm]
        counts = new
    return int(counts[0])


def is_minimal_zero_sum(seq: Sequence) -> bool:
    s = len(seq)
    if not s or seq.sigma != seq.spec.zero:
        return False
    if s == 1:
        return True
    table = SubsumTable(seq, max_card=s - 1, keep_stages=False)
    return not any(table.contains(c, seq.spec.zero) for c in range(1, s))


@lru_cache(maxsize=16)
def _rotation_masks(p: int, r: int) -> Tuple[int, Tuple[Tuple[Tuple[int, int], ...], ...]]:
    n = p ** r
    full = (1 << n) - 1
    masks = []
    for i in range(r):
        stride = p ** (r - 1 - i)
        period = stride * p
        per_coord = []
        for b in range(p):
            offset = b * stride
            lo_block = (1 << offset) - 1
            hi_block = ((1 << period) - 1) ^ lo_block
            hi = lo = 0
            for start in range(0, n, period):
                hi |= hi_block << start
                lo |= lo_block << start
            per_coord.append((hi, lo))
        masks.append(tuple(per_coord))
    return full, tuple(masks)


class SubsumBitset:
    """
    Σ(S) as an integer bitmask over element indices, extended one element at a time.

    Translation by ``x`` rotates each coordinate block by ``x_i``; used by the
    exhaustive searches where a full table per prefix is too slow.
    """
    __slots__ = ("spec", "mask", "length")

    def __init__(self, spec: GroupSpec, mask: int = 0, length: int = 0):
        self.spec = spec
        self.mask = mask
        self.length = length

    @classmethod
    def from_sequence(cls, seq: Sequence) -> "SubsumBitset":
        bits = cls(seq.spec)
        for g in seq:
            bits = bits.add(g)
        return bits

    def shifted(self, x: Element) -> int:
        spec = self.spec
        p = spec.p
        full, masks = _rotation_masks(p, spec.r)
        m = self.mask
        for i, b in enumerate(x):
            if not b:
                continue
            stride = p ** (spec.r - 1 - i)
            period = stride * p
            offset = b * stride
            hi, lo = masks[i][b]
            m = ((m << offset) & hi) | ((m >> (period - offset)) & lo)
        return m & full

    def add(self, x: Element) -> "SubsumBitset":
        mask = self.mask | self.shifted(x) | (1 << self.spec.index(x))
        return SubsumBitset(self.spec, mask, self.length + 1)

    @property
    def has_zero(self) -> bool:
        return bool(self.mask & 1)

    def contains(self, g: Element) -> bool:
        return bool(self.mask >> self.spec.index(g) & 1)

    def __len__(self):
        return bin(self.mask).count("1")
