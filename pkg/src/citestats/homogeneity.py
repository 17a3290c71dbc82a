"""Cross-field citation-culture analysis.

Different fields cite at very different rates, so raw indicator values are
not comparable across them. This module detects such inhomogeneity (mean
ratios and a two-sample chi-square test over citation bins) and compares
authors fairly via within-field percentiles, combined across fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import (
    BinnedRecord,
    BinningScheme,
    CitationRecord,
    Corpus,
    Paper,
)
from .indicators import Indicator, indicator_value

__all__ = [
    "FieldPartition",
    "HomogeneityReport",
    "CrossFieldRank",
    "partition_by_field",
    "mean_ratio",
    "pooled_bin_counts",
    "chi_square_homogeneity",
    "gamma_q",
    "percentile_of",
    "cross_field_rank",
]


@dataclass(frozen=True)
class FieldPartition:
    """Sub-corpora keyed by field tag; each paper belongs to exactly one."""

    fields: Mapping[str, Corpus]

    def __post_init__(self):
        if any(not tag for tag in self.fields):
            raise ValueError("field tags must be non-empty")
        object.__setattr__(self, "fields", dict(self.fields))

    def tags(self) -> tuple[str, ...]:
        return tuple(self.fields)

    def __getitem__(self, tag: str) -> Corpus:
        return self.fields[tag]

    def __contains__(self, tag: str) -> bool:
        return tag in self.fields


@dataclass(frozen=True)
class HomogeneityReport:
    """Two-field comparison: citation-mean ratio and chi-square homogeneity.

    ``mean_ratio`` is None when the report was computed from pooled bin
    counts alone, which carry no per-paper citation means.
    """

    chi_square: float
    degrees_of_freedom: int
    p_value: float
    mean_ratio: float | None = None


@dataclass(frozen=True)
class CrossFieldRank:
    """Per-field percentiles of one author and their combined score."""

    per_field: Mapping[str, float]
    weights: Mapping[str, int]
    combined: float


def partition_by_field(corpus: Corpus) -> FieldPartition:
    """Split a corpus into per-field sub-corpora.

    Each author's papers are filtered by tag; an author appears in a field's
    sub-corpus only with the papers tagged for that field. Untagged papers
    belong to no field and are dropped here.
    """
    by_tag: dict[str, list[CitationRecord]] = {}
    for rec in corpus:
        papers_by_tag: dict[str, list[Paper]] = {}
        for paper in rec.papers:
            if paper.field_tag:
                papers_by_tag.setdefault(paper.field_tag, []).append(paper)
        for tag, papers in papers_by_tag.items():
            by_tag.setdefault(tag, []).append(
                CitationRecord(author_id=rec.author_id, papers=tuple(papers))
            )
    if not by_tag:
        raise ValueError("corpus has no field tags")
    return FieldPartition({tag: Corpus(tuple(recs)) for tag, recs in by_tag.items()})


def _mean_citations(corpus: Corpus) -> float:
    total = 0
    papers = 0
    for paper in corpus.iter_papers():
        total += paper.citations
        papers += 1
    if papers == 0:
        raise ValueError("sub-corpus has no papers")
    return total / papers


def mean_ratio(a: Corpus, b: Corpus) -> float:
    """Ratio of mean citations per paper between two sub-corpora."""
    mean_b = _mean_citations(b)
    if mean_b == 0:
        raise ValueError("ratio undefined: second sub-corpus has zero mean citations")
    return _mean_citations(a) / mean_b


def pooled_bin_counts(corpus: Corpus, scheme: BinningScheme) -> tuple[int, ...]:
    """Pool all papers of a sub-corpus into citation-bin counts."""
    counts = [0] * scheme.num_bins
    for paper in corpus.iter_papers():
        counts[scheme.bin_index(paper.citations)] += 1
    return tuple(counts)


def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).

    Series expansion of P(a, x) for x < a + 1, Lentz continued fraction for
    Q(a, x) otherwise; absolute accuracy ~1e-10.
    """
    if a <= 0:
        raise ValueError(f"gamma_q requires a > 0, got {a}")
    if x < 0:
        raise ValueError(f"gamma_q requires x >= 0, got {x}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        # P(a, x) = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n))
        term = 1.0 / a
        total = term
        denom = a
        for _ in range(1000):
            denom += 1.0
            term *= x / denom
            total += term
            if abs(term) < abs(total) * 1e-15:
                break
        log_p = a * math.log(x) - x - math.lgamma(a) + math.log(total)
        return max(0.0, min(1.0, 1.0 - math.exp(log_p)))
    # Q(a, x) = x^a e^-x / Gamma(a) * 1/(x+1-a- 1(1-a)/(x+3-a- ...))
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    log_q = a * math.log(x) - x - math.lgamma(a) + math.log(h)
    return max(0.0, min(1.0, math.exp(log_q)))


def _as_counts(values: BinnedRecord | Sequence[int]) -> np.ndarray:
    if isinstance(values, BinnedRecord):
        return np.asarray(values.counts, dtype=float)
    return np.asarray(values, dtype=float)


def chi_square_homogeneity(
    a: BinnedRecord | Sequence[int], b: BinnedRecord | Sequence[int]
) -> HomogeneityReport:
    """Two-sample chi-square test that two count vectors share a distribution.

    Bins empty on both sides are dropped and the degrees of freedom adjusted
    accordingly; the p-value is Q(df/2, chi2/2).
    """
    a_arr = _as_counts(a)
    b_arr = _as_counts(b)
    if a_arr.shape != b_arr.shape:
        raise ValueError("count vectors must have matching bin counts")
    if np.any(a_arr < 0) or np.any(b_arr < 0):
        raise ValueError("counts must be non-negative")
    if a_arr.sum() == 0 or b_arr.sum() == 0:
        raise ValueError("all bins empty on one side")
    keep = (a_arr + b_arr) > 0
    a_arr, b_arr = a_arr[keep], b_arr[keep]
    total_a, total_b = a_arr.sum(), b_arr.sum()
    pooled = (a_arr + b_arr) / (total_a + total_b)
    expected_a = total_a * pooled
    expected_b = total_b * pooled
    chi2 = float(
        (((a_arr - expected_a) ** 2) / expected_a).sum()
        + (((b_arr - expected_b) ** 2) / expected_b).sum()
    )
    df = int(a_arr.size - 1)
    p_value = 1.0 if df == 0 else gamma_q(df / 2.0, chi2 / 2.0)
    return HomogeneityReport(chi_square=chi2, degrees_of_freedom=df, p_value=p_value)


def percentile_of(author: CitationRecord, peers: Corpus, indicator: Indicator) -> float:
    """Mid-rank percentile of an author within a peer group, in [0, 1].

    The author's own value joins the comparison set (any record in ``peers``
    with the author's id is excluded first): fraction of the set strictly
    below the author's value plus half the fraction equal to it. Depends
    only on ranks, so any strictly monotone rescaling of the indicator
    leaves it unchanged.
    """
    own = indicator_value(indicator, author)
    values = [
        indicator_value(indicator, rec)
        for rec in peers
        if rec.author_id != author.author_id
    ]
    values.append(own)
    below = sum(1 for v in values if v < own)
    equal = sum(1 for v in values if v == own)
    return (below + 0.5 * equal) / len(values)


def cross_field_rank(
    author_records: Mapping[str, CitationRecord],
    partition: FieldPartition,
    indicator: Indicator,
) -> CrossFieldRank:
    """Combine an author's within-field percentiles across fields.

    Each field's percentile is computed against that field's peers; the
    combined score is the paper-count-weighted average of the per-field
    percentiles, reported alongside the full per-field breakdown.
    """
    if not author_records:
        raise ValueError("no field records supplied")
    per_field: dict[str, float] = {}
    weights: dict[str, int] = {}
    for tag, record in author_records.items():
        if tag not in partition:
            raise ValueError(f"unknown field tag {tag!r}")
        if not record.papers:
            raise ValueError(f"empty record for field {tag!r}")
        per_field[tag] = percentile_of(record, partition[tag], indicator)
        weights[tag] = len(record)
    total = sum(weights.values())
    combined = sum(per_field[t] * weights[t] for t in per_field) / total
    return CrossFieldRank(per_field=per_field, weights=weights, combined=combined)
