# coding: utf-8

import random

import pytest
from assertpy import assert_that

from zslab import oracle
from zslab.charsum import AsymptoticParams
from zslab.constants import MIN_C_EFF
from zslab.errors import (
    ArgumentError, RankUnsupported, CaseInapplicable, BadLength, HasShortZeroSum, HasFullLengthZeroSum,
    FeasibilityGuard,
)
from zslab.group import make_group, make_basis, automorphisms, apply_matrix, change_basis, projections
from zslab.search import random_zero_sumfree
from zslab.sequence import Sequence
from zslab.theorem import (
    VerdictKind, analyze_theorem_1_1, build_case_state, case1_extract, case2_extract, case3_rebasis,
    to_basis, from_basis, reduce_theorem_1_2, reduce_theorem_1_3,
)


# five distinct b-values over first coordinate 1 and seven copies of (2, 0)
CASE1_ENTRIES = [((1, b), 1) for b in range(5)] + [((2, 0), 7)]

# four distinct b-values over first coordinate 1, three copies of e_2 and seven of (6, 1)
CASE2_ENTRIES = [((0, 1), 3), ((1, 0), 1), ((1, 1), 1), ((1, 2), 1), ((1, 3), 1), ((6, 1), 7)]


class CaseStateTestCase:

    def test_basis_round_trip(self):
        spec = make_group(7, 2)
        basis = make_basis(spec, [(1, 3), (2, 5)])
        S = Sequence(spec, CASE2_ENTRIES)
        assert_that(from_basis(to_basis(S, basis), basis)).is_equal_to(S)

    def test_state(self):
        state = build_case_state(Sequence(make_group(7, 2), CASE2_ENTRIES))
        assert_that(state.a).is_equal_to(1)
        assert_that(state.h0).is_equal_to(4)
        assert_that(state.W.support).is_equal_to(((1, 0), (1, 1), (1, 2), (1, 3)))
        assert_that(len(state.S1)).is_equal_to(10)

    def test_smallest_residue_wins_ties(self):
        spec = make_group(5, 2)
        state = build_case_state(Sequence.from_elements(spec, [(3, 0), (3, 1), (2, 0), (2, 4)]))
        assert_that(state.a).is_equal_to(2)


class CaseExtractTestCase:

    def setup_class(self):
        self.spec = make_group(7, 2)

    def test_case1(self):
        S = Sequence(self.spec, CASE1_ENTRIES)
        witness = case1_extract(build_case_state(S))
        assert_that(witness.verify()).is_true()
        assert_that(witness.constraint).is_equal_to("case1")
        assert_that(witness.witness).is_equal_to(Sequence(self.spec, [((2, 0), 6), ((1, 3), 1), ((1, 4), 1)]))

    def test_case1_inapplicable(self):
        with pytest.raises(CaseInapplicable):
            case1_extract(build_case_state(Sequence(self.spec, CASE2_ENTRIES)))

    def test_case2(self):
        S = Sequence(self.spec, CASE2_ENTRIES)
        witness = case2_extract(build_case_state(S), 1.0)
        assert_that(witness.verify()).is_true()
        assert_that(witness.constraint).is_equal_to("case2")
        assert_that(witness.witness).is_equal_to(
            Sequence(self.spec, [((6, 1), 2), ((1, 0), 1), ((1, 2), 1), ((0, 1), 3)])
        )

    def test_case2_outside_band(self):
        with pytest.raises(CaseInapplicable):
            case2_extract(build_case_state(Sequence(self.spec, CASE2_ENTRIES)), 9.0)

    def test_case3_rebasis(self):
        state = build_case_state(Sequence(self.spec, CASE2_ENTRIES))
        params = AsymptoticParams(epsilon=0.2, c=1)
        basis = case3_rebasis(state, params, 1.0)
        # the coset y = 1 of the line through (1, 0) carries 11 entries
        assert_that(basis.vectors).is_equal_to(((0, 1), (1, 0)))
        assert_that(case3_rebasis(state, params, 100.0)).is_none()


class Theorem11TestCase:

    def setup_class(self):
        self.spec = make_group(7, 2)

    def test_parameters(self):
        S = Sequence(self.spec, [((1, 0), 6), ((0, 1), 6)])
        with pytest.raises(ArgumentError):
            analyze_theorem_1_1(S, 0.3, 2)
        with pytest.raises(ArgumentError):
            analyze_theorem_1_1(S, 0.1, 0)
        with pytest.raises(RankUnsupported):
            analyze_theorem_1_1(Sequence(make_group(7, 1), [((1,), 6)]), 0.1, 2)

    def test_hypothesis_fails(self):
        verdict = analyze_theorem_1_1(Sequence(self.spec, [((1, 0), 3)]), 0.1, 2)
        assert_that(verdict.kind).is_equal_to(VerdictKind.HYPOTHESIS_FAILS)
        assert_that(verdict.length_bound).is_close_to(14 - 2 * 7 ** 0.5, 1e-12)

    def test_conclusion_holds(self):
        S = Sequence(self.spec, [((1, 0), 6), ((0, 1), 6)])
        verdict = analyze_theorem_1_1(S, 0.1, 2)
        assert_that(verdict.kind).is_equal_to(VerdictKind.CONCLUSION_HOLDS)
        assert_that(verdict.bound).is_equal_to(1)
        assert_that(verdict.c_eff).is_equal_to(9.0)

    def test_case1_through_engine(self):
        verdict = analyze_theorem_1_1(Sequence(self.spec, CASE1_ENTRIES), 0.1, 2, bound=8)
        assert_that(verdict.kind).is_equal_to(VerdictKind.ZERO_SUM_FOUND)
        assert_that(verdict.case).is_equal_to("case1")
        assert_that(verdict.witness.verify()).is_true()

    def test_fallback(self):
        verdict = analyze_theorem_1_1(Sequence(self.spec, CASE2_ENTRIES), 0.1, 2, bound=8)
        assert_that(verdict.kind).is_equal_to(VerdictKind.ZERO_SUM_FOUND)
        assert_that(verdict.case).is_equal_to("fallback-dp")
        assert_that(verdict.attempts).is_length(3)
        assert_that(verdict.witness.verify()).is_true()

    def test_small_prime_counterexample(self):
        S = Sequence(self.spec, [((1, 0), 6), ((0, 1), 6)])
        verdict = analyze_theorem_1_1(S, 0.1, 2, bound=8)
        assert_that(verdict.kind).is_equal_to(VerdictKind.SMALL_PRIME_COUNTEREXAMPLE)
        assert_that(verdict.witness).is_none()

    def _random_instance(self, rng: random.Random, seed: int) -> Sequence:
        if seed % 2:
            return random_zero_sumfree(7, rng.randint(9, 10), seed=seed)
        nonzero = list(self.spec.nonzero_elements())
        return Sequence.from_elements(self.spec, [rng.choice(nonzero) for _ in range(rng.randint(9, 13))])

    @pytest.mark.slow
    def test_sound_on_random_instances(self):
        rng = random.Random(2024)
        for i in range(1000):
            S = self._random_instance(rng, i)
            verdict = analyze_theorem_1_1(S, 0.1, 2, bound=8)
            if S.h >= 8:
                assert_that(verdict.kind, repr(S)).is_equal_to(VerdictKind.CONCLUSION_HOLDS)
            elif oracle.brute_find_zero_sum(S) is None:
                assert_that(verdict.kind, repr(S)).is_equal_to(VerdictKind.SMALL_PRIME_COUNTEREXAMPLE)
            else:
                assert_that(verdict.kind, repr(S)).is_equal_to(VerdictKind.ZERO_SUM_FOUND)
                assert_that(verdict.witness.verify()).is_true()
                assert_that(verdict.witness.witness.divides(S)).is_true()

    @pytest.mark.parametrize("c", [0.5, 1, 2, 5, 8.9, 9, 12])
    def test_c_below_the_floor_is_normalized(self, c):
        rng = random.Random(9)
        for i in range(60):
            S = self._random_instance(rng, i)
            verdict = analyze_theorem_1_1(S, 0.1, c, bound=8)
            assert_that(verdict.c_eff).is_equal_to(max(c, MIN_C_EFF))
            if len(S) < verdict.length_bound:
                assert_that(verdict.kind).is_equal_to(VerdictKind.HYPOTHESIS_FAILS)
                continue
            if c <= MIN_C_EFF:
                reference = analyze_theorem_1_1(S, 0.1, MIN_C_EFF, bound=8)
                assert_that(verdict.kind, repr(S)).is_equal_to(reference.kind)
                assert_that(verdict.case, repr(S)).is_equal_to(reference.case)

    def test_verdict_kind_is_basis_independent(self):
        rng = random.Random(77)
        matrices = automorphisms(self.spec)
        for i in range(100):
            S = self._random_instance(rng, i)
            m = rng.choice(matrices)
            if i % 2:
                image = S.map(lambda g: apply_matrix(self.spec, m, g))
            else:
                basis = change_basis(self.spec, (m[0][0], m[1][0]), (m[0][1], m[1][1]))
                image = S.map(lambda g: projections(basis, g))
            verdict = analyze_theorem_1_1(S, 0.1, 2, bound=8)
            moved = analyze_theorem_1_1(image, 0.1, 2, bound=8)
            assert_that(moved.kind, f"{S!r} -> {image!r}").is_equal_to(verdict.kind)
            assert_that(moved.h).is_equal_to(verdict.h)
            if moved.witness is not None:
                assert_that(moved.witness.verify()).is_true()


class Theorem12TestCase:

    def test_c2(self, seq):
        S = seq(2, 2, (1, 0), (0, 1), (1, 1))
        report = reduce_theorem_1_2(S, 0.1, 2)
        assert_that(report.k).is_equal_to(1)
        assert_that(report.T1).is_equal_to(S)
        assert_that(report.g).is_equal_to((0, 1))
        assert_that(report.R).is_equal_to(seq(2, 2, (1, 0), (1, 1)))
        assert_that(report.verdict.kind).is_equal_to(VerdictKind.CONCLUSION_HOLDS)
        assert_that(report.checks.passed).is_true()
        assert_that([step.name for step in report.checks.steps]).is_equal_to(
            ["pad", "lemma-3.5", "strip-zeros", "length", "minimal", "remove-element", "theorem-1.1"]
        )

    def test_c3(self, seq):
        S = seq(3, 2, ((1, 0), 2), ((0, 1), 2), (1, 1))
        report = reduce_theorem_1_2(S, 0.1, 2)
        assert_that(report.k).is_equal_to(2)
        assert_that(report.T1).is_equal_to(S)
        assert_that(report.R).is_equal_to(seq(3, 2, (0, 1), ((1, 0), 2), (1, 1)))
        assert_that(report.verdict.kind).is_equal_to(VerdictKind.CONCLUSION_HOLDS)

    def test_bound_override(self, seq):
        report = reduce_theorem_1_2(seq(3, 2, ((1, 0), 2), ((0, 1), 2), (1, 1)), 0.1, 2, bound=5)
        assert_that(report.verdict.kind).is_equal_to(VerdictKind.SMALL_PRIME_COUNTEREXAMPLE)
        assert_that(report.checks.passed).is_true()

    def test_short_zero_sum(self, seq):
        with pytest.raises(HasShortZeroSum):
            reduce_theorem_1_2(seq(3, 2, ((1, 0), 3), ((0, 1), 3), (1, 1)), 0.1, 2)

    def test_bad_length(self, seq):
        with pytest.raises(BadLength):
            reduce_theorem_1_2(seq(3, 2, (1, 0), (0, 1)), 0.1, 2)


class Theorem13TestCase:

    def test_c2(self, seq):
        report = reduce_theorem_1_3(seq(2, 2, ((1, 0), 3), (0, 1), (1, 1)), 0.1, 2)
        assert_that(report.k).is_equal_to(1)
        assert_that(report.g).is_equal_to((0, 0))
        assert_that(report.T).is_equal_to(seq(2, 2, (0, 1), (1, 0)))
        assert_that(report.verdict.kind).is_equal_to(VerdictKind.CONCLUSION_HOLDS)
        assert_that(report.h_S).is_equal_to(3)
        assert_that(report.h_T).is_equal_to(1)
        assert_that(report.checks.passed).is_true()

    def test_full_length_zero_sum(self, seq):
        with pytest.raises(HasFullLengthZeroSum):
            reduce_theorem_1_3(seq(2, 2, ((1, 0), 4), (0, 1)), 0.1, 2)

    def test_too_short(self, seq):
        with pytest.raises(BadLength):
            reduce_theorem_1_3(seq(2, 2, ((1, 0), 3), (0, 1)), 0.1, 2)

    def test_feasibility_guard(self, seq, fresh_environment):
        fresh_environment.update(mem_cap=16)
        with pytest.raises(FeasibilityGuard):
            reduce_theorem_1_3(seq(2, 2, ((1, 0), 3), (0, 1), (1, 1)), 0.1, 2)
