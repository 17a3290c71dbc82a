"""Unlikelihood measure tests, anchored by independent oracles.

The hand oracle below evaluates the multinomial probability with exact
integer factorials from the math module, independent of the gammaln-based
implementation under test.
"""

import math
from itertools import combinations

import numpy as np
import pytest

from citestats import (
    BinnedRecord,
    CitationDistribution,
    SPIRES_DISTRIBUTION,
    log_max_probability,
    log_record_probability,
    unlikelihood_r,
)


def oracle_log_record(counts, probs) -> float:
    """Direct formula with exact factorials; requires integer counts."""
    n = sum(counts)
    total = math.log10(math.factorial(n))
    for c, p in zip(counts, probs):
        if c:
            total += c * math.log10(p) - math.log10(math.factorial(c))
    return total


def compositions(total, bins):
    """All integer count vectors with the given sum (stars and bars)."""
    for cuts in combinations(range(total + bins - 1), bins - 1):
        prev = -1
        counts = []
        for cut in cuts:
            counts.append(cut - prev - 1)
            prev = cut
        counts.append(total + bins - 2 - prev)
        yield tuple(counts)


A_COUNTS = (0, 0, 0, 0, 10, 0)
B_COUNTS = (9, 0, 0, 0, 0, 1)


class TestLogRecordProbability:
    def test_author_a_matches_oracle(self):
        got = log_record_probability(BinnedRecord(A_COUNTS), SPIRES_DISTRIBUTION)
        want = oracle_log_record(A_COUNTS, SPIRES_DISTRIBUTION.probabilities)
        assert got == pytest.approx(want, abs=1e-9)
        assert got == pytest.approx(-16.0206, abs=1e-3)

    def test_author_b_matches_oracle(self):
        got = log_record_probability(BinnedRecord(B_COUNTS), SPIRES_DISTRIBUTION)
        want = oracle_log_record(B_COUNTS, SPIRES_DISTRIBUTION.probabilities)
        assert got == pytest.approx(want, abs=1e-9)
        assert got == pytest.approx(-6.8966, abs=1e-3)

    def test_single_paper_reduces_to_log_probability(self):
        got = log_record_probability(BinnedRecord((0, 0, 1, 0, 0, 0)), SPIRES_DISTRIBUTION)
        assert got == pytest.approx(math.log10(0.224), abs=1e-12)

    def test_empty_record_is_certain(self):
        assert log_record_probability(BinnedRecord((0,) * 6), SPIRES_DISTRIBUTION) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="bin count mismatch"):
            log_record_probability(BinnedRecord((1, 0)), SPIRES_DISTRIBUTION)

    def test_record_outside_support(self):
        dist = CitationDistribution((0.5, 0.5, 0.0))
        with pytest.raises(ValueError, match="outside distribution support"):
            log_record_probability(BinnedRecord((0, 1, 2)), dist)

    def test_zero_probability_bin_with_zero_count_is_fine(self):
        dist = CitationDistribution((0.5, 0.5, 0.0))
        got = log_record_probability(BinnedRecord((1, 1, 0)), dist)
        assert got == pytest.approx(math.log10(2 * 0.25), abs=1e-12)

    def test_random_records_match_oracle(self):
        rng = np.random.default_rng(99)
        probs = SPIRES_DISTRIBUTION.probabilities
        for _ in range(100):
            counts = tuple(int(c) for c in rng.integers(0, 8, size=6))
            got = log_record_probability(BinnedRecord(counts), SPIRES_DISTRIBUTION)
            assert got == pytest.approx(oracle_log_record(counts, probs), abs=1e-9)


class TestLogMaxProbability:
    def test_n10_reference_value(self):
        got = log_max_probability(10, SPIRES_DISTRIBUTION)
        assert got == pytest.approx(-1.5686, abs=1e-3)

    def test_n10_dominates_integer_records_up_to_small_margin(self):
        # The Gamma-continued reference sits near, but not exactly at, the
        # best integer record; enumerate all compositions of 10 to bound the
        # excess. The enumerated worst case is ~0.187.
        log_max = log_max_probability(10, SPIRES_DISTRIBUTION)
        best = max(
            log_record_probability(BinnedRecord(c), SPIRES_DISTRIBUTION)
            for c in compositions(10, 6)
        )
        assert best - log_max == pytest.approx(0.18698, abs=1e-4)
        assert best - log_max < 0.2

    def test_n0_is_certain(self):
        assert log_max_probability(0, SPIRES_DISTRIBUTION) == 0.0

    def test_two_bin_symmetric_case_is_exact(self):
        dist = CitationDistribution((0.5, 0.5))
        assert log_max_probability(2, dist) == pytest.approx(math.log10(0.5), abs=1e-12)

    def test_negative_n_rejected(self):
        with pytest.raises(ValueError):
            log_max_probability(-1, SPIRES_DISTRIBUTION)


class TestUnlikelihood:
    def test_author_a(self):
        result = unlikelihood_r(BinnedRecord(A_COUNTS), SPIRES_DISTRIBUTION)
        assert result.r == pytest.approx(14.4, abs=0.1)
        assert result.r == pytest.approx(result.log10_max - result.log10_record, abs=1e-9)

    def test_author_b(self):
        result = unlikelihood_r(BinnedRecord(B_COUNTS), SPIRES_DISTRIBUTION)
        assert result.r == pytest.approx(5.33, abs=0.05)

    def test_a_b_gap_is_nine_decades(self):
        r_a = unlikelihood_r(BinnedRecord(A_COUNTS), SPIRES_DISTRIBUTION).r
        r_b = unlikelihood_r(BinnedRecord(B_COUNTS), SPIRES_DISTRIBUTION).r
        assert r_a - r_b == pytest.approx(9.1, abs=0.2)

    def test_symmetric_mode_scores_zero(self):
        dist = CitationDistribution((0.5, 0.5))
        result = unlikelihood_r(BinnedRecord((1, 1)), dist)
        assert abs(result.r) < 1e-12

    def test_raw_vs_renormalized_difference_is_small(self):
        renorm = SPIRES_DISTRIBUTION.renormalized()
        for counts in (A_COUNTS, B_COUNTS):
            raw = unlikelihood_r(BinnedRecord(counts), SPIRES_DISTRIBUTION).r
            adj = unlikelihood_r(BinnedRecord(counts), renorm).r
            assert abs(raw - adj) < 0.05

    def test_no_underflow_at_ten_thousand_papers(self):
        counts = (0, 0, 0, 0, 10_000, 0)
        result = unlikelihood_r(BinnedRecord(counts), SPIRES_DISTRIBUTION)
        assert np.isfinite(result.r)
        assert result.r > 1000  # ~1000x the 10-paper record's unlikelihood

    def test_exhaustive_r_lower_bound_small_n(self):
        # r is not exactly non-negative: the continuous reference point can
        # sit slightly below the best integer record. Enumerating every
        # composition with N <= 6 bounds the dip; the worst case is ~-0.155.
        worst = min(
            unlikelihood_r(BinnedRecord(c), SPIRES_DISTRIBUTION).r
            for n in range(0, 7)
            for c in compositions(n, 6)
        )
        assert worst == pytest.approx(-0.15529, abs=1e-4)
        assert worst > -0.2

    def test_multinomial_completeness(self):
        # With an exactly normalized distribution the probabilities of all
        # compositions of N must sum to 1.
        dist = SPIRES_DISTRIBUTION.renormalized()
        for n in range(0, 7):
            total = sum(
                10.0 ** log_record_probability(BinnedRecord(c), dist)
                for c in compositions(n, 6)
            )
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_monte_carlo_frequencies_small(self):
        # Cheap version of the sampling oracle: N = 3, 200k draws.
        dist = SPIRES_DISTRIBUTION.renormalized()
        probs = dist.as_array()
        rng = np.random.default_rng(5)
        m = 200_000
        draws = rng.multinomial(3, probs, size=m)
        seen, counts = np.unique(draws, axis=0, return_counts=True)
        freq = {tuple(int(v) for v in row): c / m for row, c in zip(seen, counts)}
        for comp in compositions(3, 6):
            p = 10.0 ** log_record_probability(BinnedRecord(comp), dist)
            se = math.sqrt(p * (1 - p) / m)
            assert abs(freq.get(comp, 0.0) - p) <= 3 * se + 1e-12
