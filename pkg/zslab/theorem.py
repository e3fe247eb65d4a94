# coding: utf-8

"""
Constructive side of the multiplicity theorems over C_p ⊕ C_p.

:func:`analyze_theorem_1_1` follows the case analysis of the proof: with
a maximal squarefree subsequence T and the most frequent first coordinate
a of T, the entries W = (a, b_1) ... (a, b_{h0}) are combined with the rest
of S into an explicit zero-sum subsequence. Every inequality the proof
takes from "p sufficiently large" is re-checked on the instance; when one
fails the case is inapplicable and the next one is tried. The exact
subsum DP decides whatever the cases leave open.
"""

import enum
import math
from typing import Optional, List, Tuple

from .charsum import AsymptoticParams
from .checkpoint import StepChecks, require
from .constants import MIN_C_EFF
from .errors import (
    RankUnsupported, CaseInapplicable, TheoremViolation, BadLength, HasShortZeroSum,
    MemoryCapExceeded, FeasibilityGuard, ArgumentError,
)
from .group import Basis, Element, standard_basis, projections, recombine, order_p_subgroups, change_basis, GroupSpec
from .lemmas import find_n_or_2n_zero_sum, find_gao_translate, cauchy_davenport_check, LemmaReport
from .sequence import Sequence
from .serialization import BaseModel, Field
from .subsum import (
    SubsumTable, ZeroSumWitness, find_zero_sum, find_subsequence, is_zero_sumfree, is_minimal_zero_sum,
)

import logging
logger = logging.getLogger(__name__)


class VerdictKind(str, enum.Enum):
    HYPOTHESIS_FAILS = "HypothesisFails"
    CONCLUSION_HOLDS = "ConclusionHolds"
    ZERO_SUM_FOUND = "ZeroSumFound"
    SMALL_PRIME_COUNTEREXAMPLE = "SmallPrimeCounterexample"


class CaseState(BaseModel):
    """
    Objects of the case analysis, all in coordinates of ``basis``.
    """
    S: Sequence
    basis: Basis
    coords: Sequence
    T: Sequence
    h0: int
    a: int
    W: Sequence
    S1: Sequence
    h1: Optional[int] = None
    k: Optional[int] = None
    l: Optional[int] = None
    t: Optional[int] = None


class Verdict(BaseModel):
    kind: VerdictKind
    case: Optional[str] = None
    h: int
    bound: int
    length: int
    length_bound: float
    c_eff: float
    witness: Optional[ZeroSumWitness] = None
    basis: Optional[Basis] = None
    attempts: List[str] = Field(default_factory=list)


def _check_params(seq: Sequence, epsilon: float, c: float):
    if seq.spec.r != 2:
        raise RankUnsupported(f"the case analysis needs rank 2, got {seq.spec.r}")
    if not 0 < epsilon < 0.25:
        raise ArgumentError(f"epsilon must be in (0, 1/4), got {epsilon}")
    if not c > 0:
        raise ArgumentError(f"c must be > 0, got {c}")


def to_basis(seq: Sequence, basis: Basis) -> Sequence:
    return seq.map(lambda g: projections(basis, g))


def from_basis(seq: Sequence, basis: Basis) -> Sequence:
    return seq.map(lambda coeffs: recombine(basis, coeffs))


def build_case_state(seq: Sequence, basis: Basis = None) -> CaseState:
    basis = basis or standard_basis(seq.spec)
    coords = to_basis(seq, basis)
    T = coords.max_squarefree()
    by_first = {}
    for g in T.support:
        by_first.setdefault(g[0], []).append(g)
    # smallest residue among the maximizers
    a = min(by_first, key=lambda key: (-len(by_first[key]), key)) if by_first else 0
    W = Sequence.from_elements(seq.spec, by_first.get(a, []))
    return CaseState(S=seq, basis=basis, coords=coords, T=T, h0=len(W), a=a, W=W, S1=coords.divide(W))


def _nonzero_first(seq: Sequence) -> Sequence:
    return Sequence(seq.spec, ((g, m) for g, m in seq.entries if g[0]))


def _lift(part: Sequence, residues: Sequence) -> Sequence:
    """
    Entries of ``part`` whose first coordinates form the rank-1 multiset ``residues``.
    """
    need = {u[0]: m for u, m in residues.entries}
    picks = []
    for g, m in part.entries:
        take = min(m, need.get(g[0], 0))
        if take:
            picks.append((g, take))
            need[g[0]] -= take
    assert not any(need.values()), "residue multiset does not lift"
    return Sequence(part.spec, picks)


def _first_coordinate_witness(part: Sequence, target: int, max_len: int) -> Optional[Sequence]:
    """
    Nonempty S' | part with σ(φ_1(S')) = target and |S'| <= max_len, smallest length first.
    """
    projected = part.project(0)
    found = find_subsequence(projected, (target % part.spec.p,), range(1, max_len + 1))
    return None if found is None else _lift(part, found)


def _b_values(W: Sequence) -> Sequence:
    spec = GroupSpec(W.spec.p, 1)
    return Sequence.from_elements(spec, [(g[1],) for g in W])


def _finish(state: CaseState, witness_coords: Sequence, label: str) -> ZeroSumWitness:
    witness = ZeroSumWitness.of(state.S, from_basis(witness_coords, state.basis), label)
    if not witness.verify():
        raise TheoremViolation(label, f"constructed subsequence {witness.witness} is not a zero-sum of S")
    return witness


def case1_extract(state: CaseState) -> ZeroSumWitness:
    """
    h0 ≥ ⌊√(4p−7)⌋+1: k of the W entries have Σ_l of their b-values equal to all of C_p.
    """
    spec = state.S.spec
    p = spec.p
    K = math.isqrt(4 * p - 7) + 1
    if state.h0 < K:
        raise CaseInapplicable(f"case1: h0={state.h0} < ⌊√(4p−7)⌋+1={K}")
    state.k, state.l = K, K // 2
    head = Sequence(spec, state.W.entries[:K])
    S2 = state.coords.divide(head)
    nonzero = _nonzero_first(S2)
    state.t = len(S2) - len(nonzero)
    if len(nonzero) < p:
        raise CaseInapplicable(f"case1: only {len(nonzero)} entries of S_2 have nonzero first coordinate, need {p}")

    S3 = _first_coordinate_witness(nonzero, -state.l * state.a, len(nonzero))
    if S3 is None:
        raise TheoremViolation("case1", "Σ(φ_1(S_2)) does not cover ⟨e_1⟩")

    b_values = _b_values(head)
    target = (-S3.sigma[1]) % p
    chosen = find_subsequence(b_values, (target,), [state.l])
    if chosen is None:
        raise TheoremViolation("case1", f"Σ_{state.l} of {K} distinct b-values misses {target}")
    picked = {u[0] for u in chosen}
    part_w = Sequence(spec, ((g, 1) for g in head.support if g[1] in picked))
    return _finish(state, S3.concat(part_w), "case1")


def case2_extract(state: CaseState, c_eff: float) -> ZeroSumWitness:
    """
    c·p^{1/4} ≤ h0 ≤ ⌊√(4p−7)⌋: combine σ(S_4) + Σ_k(W) with Σ(S_5) ∩ ⟨e_2⟩ by Cauchy–Davenport.
    """
    spec = state.S.spec
    p = spec.p
    upper = math.isqrt(4 * p - 7)
    if not c_eff * p ** 0.25 <= state.h0 <= upper:
        raise CaseInapplicable(f"case2: h0={state.h0} outside [{c_eff * p ** 0.25:.3f}, {upper}]")
    k = state.h0 // 2
    state.k = k
    state.h1 = state.S1.project(0).h
    nonzero = _nonzero_first(state.S1)
    if len(nonzero) < p:
        raise CaseInapplicable(f"case2: only {len(nonzero)} entries of S_1 have nonzero first coordinate, need {p}")

    S4 = _first_coordinate_witness(nonzero, -k * state.a, state.h1)
    if S4 is None:
        raise TheoremViolation("case2", f"no S_4 with σ(φ_1(S_4)) = −k·a and |S_4| <= h_1 = {state.h1}")

    b_values = _b_values(state.W)
    b_table = SubsumTable(b_values, max_card=k)
    shift = S4.sigma[1]
    a_set = {(shift + u[0]) % p: u for u in b_table.layer(k)}

    S5 = state.S1.divide(S4)
    s5_table = SubsumTable(S5)
    b_set = {}
    for b in range(p):
        for card in range(1, len(S5) + 1):
            found = s5_table.witness(card, (0, b))
            if found is not None:
                b_set[b] = found
                break
    if 0 in b_set:
        return _finish(state, b_set[0], "case2")

    if len(a_set) + len(b_set) < p + 1:
        raise CaseInapplicable(f"case2: |A| + |B| = {len(a_set)} + {len(b_set)} < p + 1")
    cauchy_davenport_check(a_set, b_set, p)

    for value in sorted(a_set):
        if (-value) % p in b_set:
            u = a_set[value]
            chosen = b_table.witness(k, u)
            picked = {x[0] for x in chosen}
            part_w = Sequence(spec, ((g, 1) for g in state.W.support if g[1] in picked))
            return _finish(state, S4.concat(part_w).concat(b_set[(-value) % p]), "case2")
    raise TheoremViolation("case2", "A + B = C_p but no pair sums to 0")


def case3_rebasis(state: CaseState, params: AsymptoticParams, c_eff: float = None) -> Optional[Basis]:
    """
    Find a coset g + H of an order-p subgroup carrying more than ⌊c·p^{1/2−ε}⌋ entries
    and return a basis whose e_2 spans H; None when every coset is below the cap.
    """
    spec = state.S.spec
    if spec.r != 2:
        raise RankUnsupported(f"case3 needs rank 2, got {spec.r}")
    p = spec.p
    c_eff = c_eff if c_eff is not None else max(params.c, MIN_C_EFF)
    cap = math.floor(c_eff * p ** (0.5 - params.epsilon))

    heaviest: Tuple[int, Optional[object], int] = (0, None, 0)
    for line in order_p_subgroups(spec):
        loads = {}
        for g, m in state.S.entries:
            level = line.coset_index(g)
            loads[level] = loads.get(level, 0) + m
        for level in sorted(loads):
            if loads[level] > heaviest[0]:
                heaviest = (loads[level], line, level)

    load, line, level = heaviest
    if load <= cap:
        logger.debug("case3: heaviest coset carries %d <= cap %d", load, cap)
        return None
    logger.debug("case3: coset %d of %s carries %d > cap %d", level, line, load, cap)
    return change_basis(spec, line.complement(), line.direction)


def analyze_theorem_1_1(seq: Sequence, epsilon: float, c: float, bound: int = None) -> Verdict:
    """
    Either certify h(S) ≥ ⌊p^{1/4−ε}⌋, or extract a verified zero-sum subsequence, or
    report a small-prime counterexample confirmed by the exact DP.

    Parameters
    ----------
    bound : int, optional
        Replaces ⌊p^{1/4−ε}⌋, which is 1 for every prime a desk computation can reach.
    """
    _check_params(seq, epsilon, c)
    p = seq.spec.p
    c_eff = max(c, MIN_C_EFF)
    bound = math.floor(p ** (0.25 - epsilon)) if bound is None else bound
    length_bound = 2 * p - c * math.sqrt(p)
    verdict = Verdict(kind=VerdictKind.HYPOTHESIS_FAILS, h=seq.h, bound=bound, length=len(seq),
                      length_bound=length_bound, c_eff=c_eff)

    if len(seq) < length_bound:
        return verdict
    if seq.h >= bound:
        verdict.kind = VerdictKind.CONCLUSION_HOLDS
        return verdict

    params = AsymptoticParams(epsilon=epsilon, c=c)
    basis = standard_basis(seq.spec)
    for attempt in range(2):
        state = build_case_state(seq, basis)
        for extract in (case1_extract, lambda st: case2_extract(st, c_eff)):
            try:
                witness = extract(state)
            except CaseInapplicable as err:
                verdict.attempts.append(str(err))
                continue
            verdict.kind = VerdictKind.ZERO_SUM_FOUND
            verdict.case = witness.constraint if attempt == 0 else f"case3+{witness.constraint}"
            verdict.witness = witness
            verdict.basis = basis
            return verdict

        if attempt:
            break
        basis = case3_rebasis(state, params, c_eff)
        if basis is None:
            verdict.attempts.append("case3: every coset below the cap")
            break
        verdict.attempts.append(f"case3: rebasis to {basis}")

    verdict.case = "fallback-dp"
    witness = find_zero_sum(seq)
    if witness is not None:
        verdict.kind = VerdictKind.ZERO_SUM_FOUND
        verdict.witness = witness
    else:
        verdict.kind = VerdictKind.SMALL_PRIME_COUNTEREXAMPLE
    return verdict


class Theorem12Report(BaseModel):
    S: Sequence
    k: int
    W: Optional[Sequence] = None
    lemma: Optional[LemmaReport] = None
    T: Optional[Sequence] = None
    T1: Optional[Sequence] = None
    g: Optional[Element] = None
    R: Optional[Sequence] = None
    verdict: Optional[Verdict] = None
    checks: StepChecks = Field(default_factory=StepChecks)


def reduce_theorem_1_2(seq: Sequence, epsilon: float, c: float, bound: int = None) -> Theorem12Report:
    """
    Pad S with zeros to length 3p − 2, take a zero-sum T of length p or 2p, strip its zeros
    and remove one element; the rest is a long zero-sumfree sequence for the case analysis.
    """
    _check_params(seq, epsilon, c)
    p = seq.spec.p
    s = len(seq)
    lower = 3 * p - c * math.sqrt(p) - 1
    if not lower <= s <= 3 * p - 2:
        raise BadLength(f"needs {lower:.3f} <= |S| <= {3 * p - 2}, got {s}")
    k = 3 * p - 2 - s
    if k >= p:
        raise BadLength(f"padding k = {k} must be below p = {p}")
    short = find_zero_sum(seq, "short")
    if short is not None:
        raise HasShortZeroSum(f"S has a zero-sum subsequence of length {short.length} <= {p}: {short.witness}")

    report = Theorem12Report(S=seq, k=k)
    checks = report.checks
    zero = seq.spec.zero

    with checks.step("pad", report) as step:
        report.W = seq.pad_zeros(k)
        require(len(report.W) == 3 * p - 2, f"|W| = {len(report.W)}")
        step.detail = f"k = {k}"

    with checks.step("lemma-3.5", report) as step:
        report.lemma = find_n_or_2n_zero_sum(report.W)
        report.T = report.lemma.certificate["witness"].witness
        require(len(report.T) in (p, 2 * p), f"|T| = {len(report.T)}")
        step.detail = f"|T| = {len(report.T)}"

    with checks.step("strip-zeros", report):
        zeros = report.T.multiplicity(zero)
        report.T1 = report.T.divide(Sequence(seq.spec, [(zero, zeros)]))
        require(len(report.T1) > 0 and report.T1.sigma == zero, "T_1 must be a nonempty zero-sum")
        require(report.T1.divides(seq), "T_1 must divide S")

    with checks.step("length", report):
        require(len(report.T1) > p, f"|T_1| = {len(report.T1)} <= p contradicts no short zero-sum")
        require(len(report.T) == 2 * p, f"|T| = {len(report.T)} != 2p")
        require(len(report.T1) >= 2 * p - k, f"|T_1| = {len(report.T1)} < 2p − k")

    with checks.step("minimal", report):
        require(is_minimal_zero_sum(report.T1), "T_1 is not minimal zero-sum")

    with checks.step("remove-element", report) as step:
        report.g = report.T1.support[0]
        report.R = report.T1.divide(Sequence(seq.spec, [(report.g, 1)]))
        require(is_zero_sumfree(report.R), "T_1·g^{-1} is not zero-sumfree")
        floor_c = math.floor(c * math.sqrt(p))
        require(len(report.R) >= 2 * p - floor_c, f"|T_1·g^-1| = {len(report.R)} < 2p − ⌊c√p⌋ = {2 * p - floor_c}")
        step.detail = f"g = {report.g}"

    with checks.step("theorem-1.1", report) as step:
        report.verdict = analyze_theorem_1_1(report.R, epsilon, c, bound)
        require(report.verdict.kind in (VerdictKind.CONCLUSION_HOLDS, VerdictKind.SMALL_PRIME_COUNTEREXAMPLE),
                f"verdict {report.verdict.kind.value} on a long zero-sumfree sequence")
        step.detail = report.verdict.kind.value
    return report


class Theorem13Report(BaseModel):
    S: Sequence
    k: int
    lemma: Optional[LemmaReport] = None
    g: Optional[Element] = None
    T: Optional[Sequence] = None
    translated: Optional[Sequence] = None
    h_S: int
    h_T: Optional[int] = None
    verdict: Optional[Verdict] = None
    checks: StepChecks = Field(default_factory=StepChecks)


def reduce_theorem_1_3(seq: Sequence, epsilon: float, c: float, bound: int = None) -> Theorem13Report:
    """
    Reduce a long sequence without a zero-sum subsequence of length p² to a zero-sumfree
    translate g + T with |T| = |S| − p² + 1, and analyze that.
    """
    _check_params(seq, epsilon, c)
    p = seq.spec.p
    order = seq.spec.order
    s = len(seq)
    lower = order + 2 * p - c * math.sqrt(p) - 1
    if s < lower or s <= order:
        raise BadLength(f"needs |S| >= max(p² + 2p − c√p − 1, p² + 1) = {max(lower, order + 1):.3f}, got {s}")

    k = s - order
    report = Theorem13Report(S=seq, k=k, h_S=seq.h)
    checks = report.checks
    try:
        lemma = find_gao_translate(seq, k)
    except MemoryCapExceeded as err:
        raise FeasibilityGuard(f"length-{order} zero-sum query is infeasible: {err}") from err

    with checks.step("lemma-3.6", report) as step:
        report.lemma = lemma
        report.g = lemma.certificate["g"]
        report.T = lemma.certificate["T"]
        report.translated = lemma.certificate["translated"]
        require(report.T.divides(seq), "T must divide S")
        step.detail = f"g = {report.g}, |T| = {len(report.T)}"

    with checks.step("translate-length", report):
        require(len(report.T) == k + 1, f"|T| = {len(report.T)} != k + 1")
        require(len(report.T) >= 2 * p - c * math.sqrt(p), f"|T| = {len(report.T)} < 2p − c√p")

    with checks.step("zero-sumfree", report):
        require(is_zero_sumfree(report.translated), "g + T is not zero-sumfree")

    with checks.step("theorem-1.1", report) as step:
        report.verdict = analyze_theorem_1_1(report.translated, epsilon, c, bound)
        require(report.verdict.kind in (VerdictKind.CONCLUSION_HOLDS, VerdictKind.SMALL_PRIME_COUNTEREXAMPLE),
                f"verdict {report.verdict.kind.value} on a long zero-sumfree sequence")
        step.detail = report.verdict.kind.value

    with checks.step("multiplicity-chain", report) as step:
        report.h_T = report.T.h
        require(report.h_S >= report.h_T == report.translated.h, "h(S) >= h(T) = h(g + T) fails")
        step.detail = f"h(S) = {report.h_S} >= h(T) = h(g+T) = {report.h_T}"
    return report
