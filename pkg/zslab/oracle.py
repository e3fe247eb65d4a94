# coding: utf-8

"""
Brute-force oracles: enumeration of all 2^|S| index subsets, of bounded
sub-multisets and of residue assignments. Slow by construction; used to
cross-check the fast engines.
"""

import itertools
from typing import Dict, Set, List, Optional, Tuple

from .errors import LengthGuard
from .group import Element, element_sum, projections, add, scalar_mul
from .sequence import Sequence

import logging
logger = logging.getLogger(__name__)


BRUTE_FORCE_LIMIT = 22


def _elements(seq: Sequence) -> List[Element]:
    elements = list(seq)
    if len(elements) > BRUTE_FORCE_LIMIT:
        raise LengthGuard(f"brute force over 2^{len(elements)} subsets refused (limit {BRUTE_FORCE_LIMIT})")
    return elements


def brute_subsums_by_length(seq: Sequence) -> Dict[int, Set[Element]]:
    elements = _elements(seq)
    layers: Dict[int, Set[Element]] = {}
    for c in range(len(elements) + 1):
        layers[c] = {element_sum(seq.spec, combo) for combo in itertools.combinations(elements, c)}
    return layers


def brute_subsums(seq: Sequence, kind: str = "all", k: int = None) -> Set[Element]:
    layers = brute_subsums_by_length(seq)
    s = len(seq)
    match kind:
        case "all":
            cards = range(1, s + 1)
        case "exact":
            cards = [k]
        case "upto":
            cards = range(1, k + 1)
        case "atleast":
            cards = range(k, s + 1)
        case _:
            raise ValueError(f"unknown subsum kind: {kind}")
    return set().union(*(layers[c] for c in cards)) if cards else set()


def brute_count_zero_sums(seq: Sequence) -> int:
    elements = _elements(seq)
    zero = seq.spec.zero
    count = 0
    for c in range(len(elements) + 1):
        for combo in itertools.combinations(elements, c):
            if element_sum(seq.spec, combo) == zero:
                count += 1
    return count


def brute_find_zero_sum(seq: Sequence, length: int = None) -> Optional[Sequence]:
    elements = _elements(seq)
    lengths = [length] if length else range(1, len(elements) + 1)
    for c in lengths:
        for combo in itertools.combinations(elements, c):
            if element_sum(seq.spec, combo) == seq.spec.zero:
                return Sequence.from_elements(seq.spec, combo)
    return None


def brute_bounded_sums(seq: Sequence, max_card: int) -> Dict[Element, int]:
    """
    Elements reachable as a sum of 1 to ``max_card`` terms of S, each mapped to the
    fewest terms reaching it.

    Walks sub-multisets by per-element usage counts; a repeated (position, budget,
    partial sum) state has the same completions and is walked once.
    """
    spec = seq.spec
    entries = list(seq.entries)
    reached: Dict[Element, int] = {}
    seen: Set[Tuple[int, int, Element]] = set()

    def walk(index: int, left: int, total: Element, used: int):
        if (index, left, total) in seen:
            return
        seen.add((index, left, total))
        if index == len(entries):
            if used and used < reached.get(total, max_card + 1):
                reached[total] = used
            return
        g, m = entries[index]
        for k in range(min(m, left) + 1):
            walk(index + 1, left - k, add(spec, total, scalar_mul(spec, k, g)), used + k)

    walk(0, max_card, spec.zero, 0)
    return reached

def brute_min_square_assignment(s: int, m_cap: int, p: int) -> int:
    """
    Minimum of sum j_i^2 over assignments of residues j_i in [-(p-1)/2, (p-1)/2]
    to ``s`` items, each residue value used at most ``m_cap`` times.

    Branch and bound over the per-residue usage counts with residues taken by increasing |j|;
    the bound cost + left·j² is admissible, so the result does not rely on the greedy argument.
    """
    half = (p - 1) // 2
    values = sorted(range(-half, half + 1), key=lambda j: (abs(j), j))
    best = None

    def walk(index: int, left: int, cost: int):
        nonlocal best
        if left == 0:
            if best is None or cost < best:
                best = cost
            return
        if index == len(values):
            return
        j = values[index]
        if best is not None and cost + left * j * j >= best:
            return
        for used in range(min(m_cap, left), -1, -1):
            walk(index + 1, left - used, cost + used * j * j)

    walk(0, s, 0)
    if best is None:
        raise ValueError(f"{s} items don't fit {len(values)} residues with cap {m_cap}")
    return best


def brute_lemma_3_3_lhs(seq: Sequence, basis) -> int:
    """
    Nonzero b such that some index set has first basis coordinate sum 0 and second coordinate sum b.
    """
    elements = _elements(seq)
    p = seq.spec.p
    coords = [projections(basis, g) for g in elements]
    found = set()
    for c in range(1, len(coords) + 1):
        for combo in itertools.combinations(coords, c):
            if sum(a for a, _ in combo) % p == 0:
                b = sum(b for _, b in combo) % p
                if b:
                    found.add(b)
    return len(found)
