"""Multinomial unlikelihood of a citation record.

The probability of drawing a binned record ``{n_i}`` of ``N`` papers at
random from a bin distribution ``P(i)`` is the multinomial

    P({n_i}) = N! * prod_i P(i)^{n_i} / n_i!

The most probable same-size record places ``n_i = N * P(i)`` papers in each
bin; since these are generally non-integer, the factorials are continued as
``Gamma(n_i + 1)``. The unlikelihood

    r = log10 P({n_i}_max) - log10 P({n_i})

is 0 for a record at the multinomial mode and grows as the record becomes
less probable. All arithmetic is carried out in log10 space, so records of
10^4+ papers score without underflow.

Because the continuous reference point is not an exact stationary point of
the Gamma-continued objective, r can be marginally negative (worst case
about -0.16) for records adjacent to the mode; callers should not assume
r >= 0 exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .corpus import BinnedRecord, CitationDistribution

__all__ = [
    "Unlikelihood",
    "log_record_probability",
    "log_max_probability",
    "unlikelihood_r",
]

_LN10 = np.log(10.0)


@dataclass(frozen=True)
class Unlikelihood:
    """Unlikelihood score of one record: ``r = log10_max - log10_record``."""

    r: float
    log10_record: float
    log10_max: float


def _log10_factorial(x: np.ndarray | float) -> np.ndarray | float:
    """log10 Gamma(x + 1); equals log10 x! at integer x."""
    return gammaln(np.asarray(x, dtype=float) + 1.0) / _LN10


def _check_support(counts: np.ndarray, probs: np.ndarray) -> None:
    if counts.shape != probs.shape:
        raise ValueError(
            f"bin count mismatch: record has {counts.size} bins, "
            f"distribution has {probs.size}"
        )
    if np.any((counts > 0) & (probs == 0.0)):
        raise ValueError("record outside distribution support")


def log_record_probability(
    binned: BinnedRecord, dist: CitationDistribution
) -> float:
    """log10 of the multinomial probability of a binned record.

    Raises ValueError when the record and distribution sizes differ, or when
    the record puts papers in a zero-probability bin.
    """
    counts = np.asarray(binned.counts, dtype=float)
    probs = dist.as_array()
    _check_support(counts, probs)
    # 0 * log(0) := 0 for empty bins, including empty zero-probability bins.
    terms = np.where(counts > 0, counts * np.log10(np.where(probs > 0, probs, 1.0)), 0.0)
    total = float(_log10_factorial(counts.sum()) + terms.sum() - _log10_factorial(counts).sum())
    return total


def log_max_probability(n_papers: int, dist: CitationDistribution) -> float:
    """log10 probability of the most probable record of ``n_papers`` papers.

    Evaluates the multinomial at the generally non-integer configuration
    ``n_i = N * P(i)``, with each factorial continued as Gamma(n_i + 1).
    Returns 0.0 for an empty record.
    """
    if n_papers < 0:
        raise ValueError(f"paper count must be >= 0, got {n_papers}")
    if n_papers == 0:
        return 0.0
    probs = dist.as_array()
    mode = n_papers * probs
    terms = np.where(mode > 0, mode * np.log10(np.where(probs > 0, probs, 1.0)), 0.0)
    return float(_log10_factorial(n_papers) + terms.sum() - _log10_factorial(mode).sum())


def unlikelihood_r(binned: BinnedRecord, dist: CitationDistribution) -> Unlikelihood:
    """Unlikelihood r of a binned record under a bin distribution."""
    log_record = log_record_probability(binned, dist)
    log_max = log_max_probability(binned.total, dist)
    return Unlikelihood(r=log_max - log_record, log10_record=log_record, log10_max=log_max)
