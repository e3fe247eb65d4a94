# coding: utf-8

"""
Character sums over C_p^r.

For a sequence S = g_1 ... g_s and a character χ the product
f(χ) = Π (1 + χ(g_i)) expands to Σ_g c_g χ(g), so summing over all
characters counts the zero-sum index sets. A per-coset cap on S bounds
every non-principal |f(χ)| by an explicit envelope.
"""

import math
from fractions import Fraction
from typing import Optional, List, Tuple, Dict

import numpy as np
import sympy

from .constants import CHARSUM_LENGTH_LIMIT, COUNT_WIDTH_LIMIT, ENVELOPE_SLACK, REL_TOLERANCE, DEFAULT_THRESHOLD_CAP, \
    THRESHOLD_CAP_LIMIT
from .environment import Environment
from .errors import LengthGuard, BadM, CapViolated, NotFound, TheoremViolation, ArgumentError
from .group import GroupSpec, CharacterId, character_level, element_table
from .sequence import Sequence
from .serialization import BaseModel, Field
from .subsum import count_zero_sum_subsequences

import logging
logger = logging.getLogger(__name__)


class AsymptoticParams(BaseModel):
    epsilon: float = Field(gt=0, lt=0.5, allow_inf_nan=False)
    c: float = Field(gt=0, allow_inf_nan=False)
    r: int = Field(2, ge=2)

    def M(self, p: int) -> int:
        """
        The coset cap ⌊c·p^{1/2−ε}⌋.
        """
        return math.floor(self.c * p ** (0.5 - self.epsilon))


class VDecomposition(BaseModel):
    s: int
    M: int
    k: int
    q: int
    v: int


class CharSpectrum(BaseModel):
    spec: GroupSpec
    s: int
    chars: np.ndarray
    values: np.ndarray

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def value(self, chi: CharacterId) -> complex:
        return complex(self.values[self.spec.index(chi.j)])

    def __len__(self):
        return len(self.values)


def _check_length(seq: Sequence, limit: int):
    if len(seq) > limit:
        raise LengthGuard(f"|S|={len(seq)} exceeds the limit {limit} for double-precision character sums")


def _roots(p: int) -> np.ndarray:
    roots = np.exp(2j * np.pi * np.arange(p) / p)
    roots[0] = 1.0
    if p == 2:
        roots[1] = -1.0
    return roots


def f_value(seq: Sequence, chi: CharacterId) -> complex:
    _check_length(seq, CHARSUM_LENGTH_LIMIT)
    spec = seq.spec
    if chi.is_principal:
        return complex(2.0 ** len(seq), 0.0)
    roots = _roots(spec.p)
    value = complex(1.0, 0.0)
    for g, m in seq.entries:
        factor = complex(1.0 + roots[character_level(spec, chi, g)])
        for _ in range(m):
            value *= factor
    return value


def spectrum(seq: Sequence) -> CharSpectrum:
    """
    f(χ) for every character at once, characters in lexicographic j order.
    """
    _check_length(seq, CHARSUM_LENGTH_LIMIT)
    spec = seq.spec
    chars = element_table(spec.p, spec.r)
    roots = _roots(spec.p)
    values = np.ones(spec.order, dtype=complex)
    for g, m in seq.entries:
        levels = chars @ np.asarray(g, dtype=np.int64) % spec.p
        factors = 1.0 + roots[levels]
        for _ in range(m):
            values *= factors
    return CharSpectrum(spec=spec, s=len(seq), chars=chars, values=values)


class IdentityReport(BaseModel):
    s: int
    order: int
    sum_over_chi: float
    sum_imag: float
    zero_sum_count: int
    expected: int
    relative_error: float
    holds: bool


def spectrum_identity_check(seq: Sequence) -> IdentityReport:
    """
    Compare Σ_χ f(χ) with |G|·Z(S), Z(S) counting zero-sum index sets including the empty one.
    """
    _check_length(seq, COUNT_WIDTH_LIMIT)
    spectrum_ = spectrum(seq)
    total = math.fsum(spectrum_.values.real)
    total_imag = math.fsum(spectrum_.values.imag)
    count = count_zero_sum_subsequences(seq)
    expected = seq.spec.order * count
    error = abs(complex(total, total_imag) - expected) / expected
    return IdentityReport(
        s=len(seq), order=seq.spec.order, sum_over_chi=total, sum_imag=total_imag,
        zero_sum_count=count, expected=expected, relative_error=error, holds=error < REL_TOLERANCE,
    )


def v_decompose(s: int, M: int) -> VDecomposition:
    """
    Write s = (2k−1)M + q with q in [0, 2M−1] and v = 2M(1² + ... + (k−1)²) + q·k².

    For s < M every item fits residue 0: k = 1, q = 0, v = 0.
    """
    if M < 1:
        raise BadM(f"M must be >= 1, got {M}")
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    if s < M:
        return VDecomposition(s=s, M=M, k=1, q=0, v=0)
    k = (s + M) // (2 * M)
    q = s + M - 2 * k * M
    v = 2 * M * sum(j * j for j in range(1, k)) + q * k * k
    return VDecomposition(s=s, M=M, k=k, q=q, v=v)


def v_closed_form(s: int, M: int, q: int) -> Fraction:
    return Fraction((s - q - M) * (s - q + M) * (s - q) + 3 * q * (s - q + M) ** 2, 12 * M * M)


def v_lower_bound(s: int, M: int) -> Fraction:
    return Fraction(s * (s * s - M * M), 12 * M * M)


def v_greedy(s: int, M: int, p: int) -> int:
    """
    Minimal Σ j_i² by filling residues 0, ±1, ±2, ... with at most M items each.
    """
    half = (p - 1) // 2
    total, left = 0, s
    for j in range(0, half + 1):
        slots = M if j == 0 else 2 * M
        used = min(slots, left)
        total += used * j * j
        left -= used
        if not left:
            return total
    raise ValueError(f"{s} items don't fit {p} residues with cap {M}")


def level_counts(seq: Sequence, chi: CharacterId) -> Dict[int, int]:
    """
    Number of entries of S in each coset of Ker χ, keyed by ⟨j, g⟩ mod p.
    """
    counts: Dict[int, int] = {}
    for g, m in seq.entries:
        level = character_level(seq.spec, chi, g)
        counts[level] = counts.get(level, 0) + m
    return counts


def hyperplane_characters(spec: GroupSpec) -> List[CharacterId]:
    """
    One character per hyperplane (first nonzero coordinate of j equal to 1).
    """
    chars = []
    for j in spec.nonzero_elements():
        first = next(c for c in j if c)
        if first == 1:
            chars.append(CharacterId(j))
    return chars


def max_hyperplane_load(seq: Sequence) -> int:
    """
    Largest |S_{g+H}| over all subgroups H of index p and all their cosets.
    """
    return max((max(level_counts(seq, chi).values(), default=0)
                for chi in hyperplane_characters(seq.spec)), default=0)


class EnvelopeReport(BaseModel):
    j: Tuple[int, ...]
    s: int
    M: int
    k: int
    q: int
    v: int
    abs_f: float
    envelope: float
    holds: bool
    v_lower_bound: Optional[float] = None
    lower_bound_ok: Optional[bool] = None


def envelope(s: int, v: int, p: int) -> float:
    return 2.0 ** s * math.exp(-math.pi ** 2 * v / (2 * p * p))


def check_coset_cap(seq: Sequence, chi: CharacterId, M: int):
    counts = level_counts(seq, chi)
    heaviest = max(counts.values(), default=0)
    if heaviest > M:
        level = max(counts, key=lambda key: (counts[key], -key))
        raise CapViolated(f"coset <j,g> = {level} of Ker χ{chi.j} carries {heaviest} > M = {M} entries")


def a1_envelope_check(seq: Sequence, params: AsymptoticParams, chi: CharacterId) -> EnvelopeReport:
    if chi.is_principal:
        raise ArgumentError("the envelope is stated for non-principal characters")
    p = seq.spec.p
    M = params.M(p)
    s = len(seq)
    if M < 1:
        if s:
            raise CapViolated(f"M = {M} admits no entries")
        M = 1
    check_coset_cap(seq, chi, M)

    decomposition = v_decompose(s, M)
    abs_f = abs(f_value(seq, chi))
    bound = envelope(s, decomposition.v, p)
    holds = abs_f <= bound + ENVELOPE_SLACK * 2.0 ** s
    report = EnvelopeReport(
        j=chi.j, s=s, M=M, k=decomposition.k, q=decomposition.q, v=decomposition.v,
        abs_f=abs_f, envelope=bound, holds=holds,
    )
    if s >= M:
        lower = v_lower_bound(s, M)
        report.v_lower_bound = float(lower)
        report.lower_bound_ok = decomposition.v >= lower
    if not holds:
        logger.error("envelope violated for χ%s: |f| = %r > %r", chi.j, abs_f, bound)
    return report


class SpectralBound(BaseModel):
    p: int
    r: int
    s: int
    M: int
    v: int
    order: int
    lower: float
    rules_out: bool


def spectral_bound(p: int, r: int, s: int, M: int) -> SpectralBound:
    """
    Final inequality of the character-sum argument: a zero-sumfree capped S forces
    |G| = Σ_χ f(χ) ≥ 2^s (1 − (|G| − 1)·exp(−π²v/(2p²))). When the right side exceeds |G|
    no capped sequence of length s can be zero-sumfree.
    """
    v = v_decompose(s, M).v
    order = p ** r
    lower = 2.0 ** s * (1.0 - (order - 1) * math.exp(-math.pi ** 2 * v / (2 * p * p)))
    return SpectralBound(p=p, r=r, s=s, M=M, v=v, order=order, lower=lower, rules_out=lower > order)


def spectrum_rows(spectrum_: CharSpectrum, params: AsymptoticParams = None, seq: Sequence = None) -> List[dict]:
    """
    CSV rows ``j1..jr, re_f, im_f, abs_f, envelope, holds``; the envelope columns are
    filled only when ``params`` are given and the coset cap holds for that character.
    """
    spec = spectrum_.spec
    M = params.M(spec.p) if params else None
    v = None
    if params and M >= 1:
        v = v_decompose(spectrum_.s, M).v

    rows = []
    for j, value in zip(spectrum_.chars, spectrum_.values):
        chi = CharacterId(j)
        row = {f"j{i + 1}": int(c) for i, c in enumerate(j)}
        row.update(re_f=float(value.real), im_f=float(value.imag), abs_f=float(abs(value)), envelope=None, holds=None)
        if v is not None and seq is not None and not chi.is_principal:
            try:
                check_coset_cap(seq, chi, M)
            except CapViolated:
                pass
            else:
                bound = envelope(spectrum_.s, v, spec.p)
                row["envelope"] = bound
                row["holds"] = row["abs_f"] <= bound + ENVELOPE_SLACK * 2.0 ** spectrum_.s
        rows.append(row)
    return rows


class ThresholdConditions(BaseModel):
    p: int
    M: int
    cond_i_lhs: float
    cond_i_rhs: float
    cond_ii_lhs: float
    cond_ii_rhs: float
    cond_i: bool
    cond_ii: bool

    @property
    def ok(self) -> bool:
        return self.M >= 1 and self.cond_i and self.cond_ii


def _cond_ii_lhs(s: float, M: float, p: float) -> float:
    return math.pi ** 2 * s * (s * s - M * M) / (24 * M * M * p * p)


def threshold_conditions(p: int, params: AsymptoticParams, s: int = None) -> ThresholdConditions:
    s = p if s is None else s
    M = params.M(p)
    cond_i_lhs = float(s * s - M * M)
    cond_i_rhs = p * p / 2
    cond_ii_lhs = _cond_ii_lhs(s, M, p) if M >= 1 else 0.0
    cond_ii_rhs = math.log(2) + params.r * math.log(p)
    return ThresholdConditions(
        p=p, M=M, cond_i_lhs=cond_i_lhs, cond_i_rhs=cond_i_rhs,
        cond_ii_lhs=cond_ii_lhs, cond_ii_rhs=cond_ii_rhs,
        cond_i=2 * (s * s - M * M) > p * p, cond_ii=M >= 1 and cond_ii_lhs > cond_ii_rhs,
    )


class ThresholdReport(BaseModel):
    epsilon: float
    c: float
    r: int
    p_threshold: int
    M_at_p: int
    lhs: float
    rhs: float
    cond_i_lhs: float
    cond_i_rhs: float
    lhs_next_s: float
    scan_cap: int


# widens the float M by a relative margin on both sides
_M_BRACKET = 1e-12


def _candidates(lo: int, hi: int, params: AsymptoticParams) -> np.ndarray:
    """
    Superset of the integers in [lo, hi) meeting both conditions with s = p.

    Condition (i) is compared exactly in int64. M is evaluated in float64, so it is
    bracketed and the smaller bracket end is used; both conditions only get harder
    as M grows. :func:`threshold_conditions` has the final say.
    """
    x = np.arange(lo, hi, dtype=np.int64)
    root = params.c * x.astype(np.float64) ** (0.5 - params.epsilon)
    m_lo = np.floor(root * (1 - _M_BRACKET)).astype(np.int64)
    m_hi = np.floor(root * (1 + _M_BRACKET)).astype(np.int64)
    gap = x * x - m_lo * m_lo
    cond_i = 2 * gap > x * x
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = np.pi ** 2 * gap.astype(np.float64) / (24.0 * (m_lo * m_lo).astype(np.float64) * x)
    rhs = np.log(2) + params.r * np.log(x)
    ok = (m_hi >= 1) & cond_i & ((m_lo < 1) | (lhs > rhs * (1 - _M_BRACKET)))
    return x[ok]


def effective_threshold(params: AsymptoticParams, cap: int = None, chunk: int = 1_000_000) -> ThresholdReport:
    """
    Smallest prime p for which, with s = p and M = ⌊c·p^{1/2−ε}⌋ ≥ 1,
    (i) s² − M² > p²/2 and (ii) π²·s·(s² − M²)/(24·M²·p²) > ln(2·p^r).
    """
    cap = cap or Environment.instance().settings.threshold_cap or DEFAULT_THRESHOLD_CAP
    if cap > THRESHOLD_CAP_LIMIT:
        raise ArgumentError(f"threshold scan cap must be <= {THRESHOLD_CAP_LIMIT}, got {cap}")
    logger.info("threshold scan for eps=%s, c=%s, r=%s up to %d", params.epsilon, params.c, params.r, cap)
    lo = 2
    while lo <= cap:
        hi = min(lo + chunk, cap + 1)
        for candidate in _candidates(lo, hi, params):
            candidate = int(candidate)
            if not sympy.isprime(candidate):
                continue
            conditions = threshold_conditions(candidate, params)
            if not conditions.ok:
                # the vectorized filter over-approximates
                continue
            lhs_next = _cond_ii_lhs(candidate + 1, conditions.M, candidate)
            if lhs_next < conditions.cond_ii_lhs:
                raise TheoremViolation("threshold-monotonicity",
                                       f"inequality value decreases from s=p to s=p+1 at p={candidate}")
            return ThresholdReport(
                epsilon=params.epsilon, c=params.c, r=params.r, p_threshold=candidate, M_at_p=conditions.M,
                lhs=conditions.cond_ii_lhs, rhs=conditions.cond_ii_rhs,
                cond_i_lhs=conditions.cond_i_lhs, cond_i_rhs=conditions.cond_i_rhs,
                lhs_next_s=lhs_next, scan_cap=cap,
            )
        logger.debug("no threshold below %d", hi)
        lo = hi
    raise NotFound(f"no prime <= {cap} satisfies both inequalities for eps={params.epsilon}, c={params.c}")
