# coding: utf-8

"""
Extremal zero-sumfree sequences over C_p ⊕ C_p at small primes.

The exhaustive search walks multisets of nonzero elements in
non-decreasing lexicographic order and prunes a branch as soon as its
prefix has a zero-sum, using :class:`SubsumBitset` for the incremental
subsum set. With symmetry on, the walk only visits sequences containing
(1, 0) and either (0, 1) or nothing off the line through (1, 0): the
automorphism group is transitive on nonzero elements, and the stabilizer
of (1, 0) is transitive on the elements off that line.
"""

import collections
import itertools
import random
import time
from typing import List, Optional, Dict, Tuple, Literal

from pydantic import model_validator

from .constants import DEFAULT_EXHAUSTIVE_MAX_P
from .concurrent import WorkerPool
from .environment import Environment
from .errors import (
    ArgumentError, RankUnsupported, BudgetExceeded, GenerationFailed, TheoremViolation, SingularBasis,
)
from .group import GroupSpec, Element, make_group, automorphisms, apply_matrix, make_basis, projections
from .sequence import Sequence
from .serialization import BaseModel, Field
from .subsum import SubsumBitset, find_zero_sum, is_zero_sumfree, is_minimal_zero_sum

import logging
logger = logging.getLogger(__name__)


MAX_PRUNED_RECORDS = 100
_DEADLINE_CHECK_NODES = 4096


class SearchConfig(BaseModel):
    p: int
    target_length: Optional[int] = None
    mode: Literal["exhaustive", "randomized"] = "exhaustive"
    samples: int = Field(100, ge=1)
    seed: int = 0
    symmetry: bool = True
    time_budget: Optional[float] = None
    allow_large: bool = False
    threads: Optional[int] = None

    @model_validator(mode="after")
    def _check_feasible(self):
        make_group(self.p, 2)
        if self.mode == "exhaustive" and self.p > DEFAULT_EXHAUSTIVE_MAX_P and not self.allow_large:
            raise ArgumentError(
                f"exhaustive search is limited to p <= {DEFAULT_EXHAUSTIVE_MAX_P}, got {self.p}; "
                f"use randomized mode or allow_large"
            )
        return self


class ExtremalCatalog(BaseModel):
    p: int
    max_length: int = 0
    entries: List[Sequence] = Field(default_factory=list)
    min_h: Optional[int] = None
    h_histogram: Dict[int, int] = Field(default_factory=dict)
    exhaustive: bool = True
    canonical_exact: bool = True
    nodes: int = 0
    pruned: List[Sequence] = Field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.entries)

    def summary(self) -> dict:
        return {
            "p": self.p,
            "max_length": self.max_length,
            "count": self.count,
            "min_h": self.min_h,
            "exhaustive": self.exhaustive,
        }

    def serialize(self) -> str:
        blocks = []
        for i, seq in enumerate(self.entries):
            blocks.append(f"# extremal {i + 1}/{self.count}, h = {seq.h}\n{seq.serialize()}")
        return "\n".join(blocks)


def _require_rank_2(seq: Sequence):
    if seq.spec.r != 2:
        raise RankUnsupported(f"canonical forms are defined for rank 2, got {seq.spec.r}")


def canonical_form_is_exact(p: int) -> bool:
    return p <= DEFAULT_EXHAUSTIVE_MAX_P


def canonical_form(seq: Sequence) -> Sequence:
    """
    Lexicographically minimal image of S under GL(2, p).

    Exact orbit minimization for p <= 5. Above that only the images sending an ordered
    pair of independent support elements to (1, 0), (0, 1) are compared, which is not
    guaranteed to reach the orbit minimum.
    """
    _require_rank_2(seq)
    spec = seq.spec
    if not seq.entries:
        return seq
    if canonical_form_is_exact(spec.p):
        images = (seq.map(lambda g, m=m: apply_matrix(spec, m, g)) for m in automorphisms(spec))
        return min(images)

    best = None
    support = seq.support
    for x, y in itertools.permutations(support, 2):
        try:
            basis = make_basis(spec, [x, y])
        except SingularBasis:
            continue
        image = seq.map(lambda g: projections(basis, g))
        if best is None or image < best:
            best = image
    if best is None:
        # support on one line
        x = support[0]
        other = (0, 1) if x[0] else (1, 0)
        basis = make_basis(spec, [x, other])
        best = seq.map(lambda g: projections(basis, g))
    return best


class _BranchResult(BaseModel):
    best: int = 0
    found: List[Tuple[Element, ...]] = Field(default_factory=list)
    pruned: List[Tuple[Element, ...]] = Field(default_factory=list)
    nodes: int = 0
    timed_out: bool = False


def _search_branch(args) -> _BranchResult:
    """
    Depth-first walk below a fixed prefix. ``candidates[start:]`` are the elements still allowed.
    """
    p, prefix, candidates, start, limit, deadline = args
    spec = GroupSpec(p, 2)
    result = _BranchResult()
    bits = SubsumBitset(spec)
    for x in prefix:
        bits = bits.add(x)
    if bits.has_zero:
        return result
    chosen = list(prefix)

    def record():
        n = len(chosen)
        if n > result.best:
            result.best = n
            result.found = []
        if n == result.best:
            result.found.append(tuple(chosen))

    def walk(i0: int, bits_: SubsumBitset):
        result.nodes += 1
        if deadline is not None and result.nodes % _DEADLINE_CHECK_NODES == 0 and time.time() > deadline:
            result.timed_out = True
        if result.timed_out:
            return
        record()
        if len(chosen) >= limit:
            return
        for i in range(i0, len(candidates)):
            x = candidates[i]
            extended = bits_.add(x)
            if extended.has_zero:
                if len(result.pruned) < MAX_PRUNED_RECORDS:
                    result.pruned.append(tuple(chosen) + (x,))
                continue
            chosen.append(x)
            walk(i, extended)
            chosen.pop()

    walk(start, bits)
    return result


def _branches(p: int, symmetry: bool, limit: int, deadline: Optional[float]) -> List[tuple]:
    """
    Top-level work items ``(p, prefix, candidates, start, limit, deadline)``.
    """
    spec = GroupSpec(p, 2)
    nonzero = list(spec.nonzero_elements())
    if not symmetry:
        return [(p, (x,), nonzero, i, limit, deadline) for i, x in enumerate(nonzero)]

    e1, e2 = (1, 0), (0, 1)
    branches = [(p, (e1, e2), [], 0, limit, deadline)]
    branches.extend((p, (e1, e2, x), nonzero, i, limit, deadline) for i, x in enumerate(nonzero))
    axis = [g for g in nonzero if g[1] == 0]
    branches.append((p, (e1,), axis, 0, limit, deadline))
    return branches


def _branch_label(branch: tuple) -> str:
    return "·".join(map(str, branch[1]))


def max_zero_sumfree_length(p: int, config: SearchConfig = None) -> ExtremalCatalog:
    """
    Longest zero-sumfree sequences over C_p², with their canonical forms.

    Exhaustive mode yields the exact maximum and every extremal orbit. Randomized mode
    samples :func:`random_zero_sumfree` at decreasing lengths and flags the catalog as
    incomplete. Exceeding the time budget raises :class:`BudgetExceeded` carrying the
    partial catalog.
    """
    config = config or SearchConfig(p=p)
    if config.p != p:
        config = config.model_copy(update={"p": p})
    if config.mode == "randomized":
        return _randomized_catalog(config)

    budget = config.time_budget or Environment.instance().settings.search_time_budget
    deadline = time.time() + budget if budget else None
    limit = config.target_length or 2 * p - 1
    branches = _branches(p, config.symmetry, limit, deadline)
    logger.info("exhaustive search over C_%d^2: %d branches, symmetry %s", p, len(branches),
                "on" if config.symmetry else "off")

    pool = WorkerPool(config.threads)
    results = pool.map(_search_branch, branches)

    spec = GroupSpec(p, 2)
    best = max(r.best for r in results)
    forms = set()
    pruned = []
    for branch, r in zip(branches, results):
        logger.debug("branch %s: best %d, %d nodes", _branch_label(branch), r.best, r.nodes)
        if r.best == best:
            forms.update(canonical_form(Sequence.from_elements(spec, found)) for found in r.found)
        pruned.extend(Sequence.from_elements(spec, prefix) for prefix in r.pruned)

    catalog = _make_catalog(p, best, forms)
    catalog.nodes = sum(r.nodes for r in results)
    catalog.pruned = pruned[:MAX_PRUNED_RECORDS]
    catalog.canonical_exact = canonical_form_is_exact(p)
    if any(r.timed_out for r in results):
        catalog.exhaustive = False
        raise BudgetExceeded(f"search over C_{p}^2 ran out of its {budget}s budget", catalog)
    logger.info("max zero-sumfree length over C_%d^2: %d (%d orbits, %d nodes)",
                p, catalog.max_length, catalog.count, catalog.nodes)
    return catalog


def _make_catalog(p: int, best: int, forms) -> ExtremalCatalog:
    entries = sorted(forms)
    for seq in entries:
        if not is_zero_sumfree(seq):
            raise TheoremViolation("catalog", f"catalog entry {seq} is not zero-sumfree")
    histogram = collections.Counter(seq.h for seq in entries)
    return ExtremalCatalog(
        p=p, max_length=best, entries=entries,
        min_h=min(histogram) if histogram else None,
        h_histogram=dict(sorted(histogram.items())),
    )


def _randomized_catalog(config: SearchConfig) -> ExtremalCatalog:
    p = config.p
    length = config.target_length or 2 * p - 2
    while length > 0:
        forms = set()
        for i in range(config.samples):
            try:
                seq = random_zero_sumfree(p, length, config.seed + i)
            except GenerationFailed:
                continue
            forms.add(canonical_form(seq))
        if forms:
            catalog = _make_catalog(p, length, forms)
            catalog.exhaustive = False
            catalog.canonical_exact = canonical_form_is_exact(p)
            logger.info("randomized search over C_%d^2: %d orbits of length %d from %d samples",
                        p, catalog.count, length, config.samples)
            return catalog
        logger.info("no zero-sumfree sample of length %d over C_%d^2, try shorter", length, p)
        length -= 1
    return ExtremalCatalog(p=p, exhaustive=False, canonical_exact=canonical_form_is_exact(p))


def spot_check_pruned(catalog: ExtremalCatalog) -> int:
    """
    Re-verify that every recorded pruned prefix has a zero-sum subsequence.
    """
    for prefix in catalog.pruned:
        if find_zero_sum(prefix) is None:
            raise TheoremViolation("search-pruning", f"pruned prefix {prefix} is zero-sumfree")
    return len(catalog.pruned)


class PropertyBReport(BaseModel):
    p: int
    length: int
    count: int
    bound: int
    min_h: Optional[int] = None
    h_histogram: Dict[int, int] = Field(default_factory=dict)
    holds: bool = True
    minimal_form_holds: bool = True
    catalog: Optional[ExtremalCatalog] = None


def verify_property_b(p: int, config: SearchConfig = None) -> PropertyBReport:
    """
    Every zero-sumfree S over C_p² with |S| = 2p − 2 has h(S) >= p − 2, and the minimal
    zero-sum sequence S·(−σ(S)) has some element p − 1 times.
    """
    config = config or SearchConfig(p=p)
    if config.mode != "exhaustive":
        raise ArgumentError("property B needs an exhaustive catalog")
    config = config.model_copy(update={"p": p, "target_length": 2 * p - 2})
    catalog = max_zero_sumfree_length(p, config)
    if catalog.max_length != 2 * p - 2:
        raise TheoremViolation("property-b", f"max zero-sumfree length {catalog.max_length} != 2p − 2")

    report = PropertyBReport(p=p, length=2 * p - 2, count=catalog.count, bound=p - 2,
                             min_h=catalog.min_h, h_histogram=catalog.h_histogram, catalog=catalog)
    spec = GroupSpec(p, 2)
    for seq in catalog.entries:
        if seq.h < p - 2:
            report.holds = False
            logger.error("property B fails on %s: h = %d", seq, seq.h)
        minus_sigma = tuple((-c) % p for c in seq.sigma)
        closed = seq.concat(Sequence(spec, [(minus_sigma, 1)]))
        if not (is_minimal_zero_sum(closed) and closed.h >= p - 1):
            report.minimal_form_holds = False
            logger.error("minimal zero-sum form fails on %s", closed)
    if not (report.holds and report.minimal_form_holds):
        raise TheoremViolation("property-b", f"property B fails over C_{p}^2", report)
    return report


def random_zero_sumfree(p: int, length: int, seed: int = 0, attempts: int = None) -> Sequence:
    """
    A verified zero-sumfree sequence over C_p² of the given length, by seeded greedy
    extension with backtracking. Deterministic per seed.
    """
    spec = make_group(p, 2)
    if length < 0:
        raise ArgumentError(f"length must be >= 0, got {length}")
    if length > 2 * p - 2:
        raise GenerationFailed(f"no zero-sumfree sequence of length {length} > 2p − 2 = {2 * p - 2} exists")
    attempts = attempts or Environment.instance().settings.random_attempts
    rng = random.Random(seed)
    nonzero = list(spec.nonzero_elements())
    node_budget = 8 * (length + 1) * len(nonzero)

    for attempt in range(attempts):
        chosen: List[Element] = []
        nodes = 0

        def extend(bits: SubsumBitset) -> bool:
            nonlocal nodes
            if len(chosen) == length:
                return True
            nodes += 1
            if nodes > node_budget:
                return False
            order = nonzero[:]
            rng.shuffle(order)
            for x in order:
                extended = bits.add(x)
                if extended.has_zero:
                    continue
                chosen.append(x)
                if extend(extended):
                    return True
                chosen.pop()
                if nodes > node_budget:
                    return False
            return False

        if extend(SubsumBitset(spec)):
            seq = Sequence.from_elements(spec, chosen)
            if not is_zero_sumfree(seq):
                raise TheoremViolation("random-zero-sumfree", f"generated {seq} has a zero-sum")
            logger.debug("zero-sumfree sequence of length %d over C_%d^2 after %d attempts", length, p, attempt + 1)
            return seq
    raise GenerationFailed(f"no zero-sumfree sequence of length {length} over C_{p}^2 in {attempts} attempts")
