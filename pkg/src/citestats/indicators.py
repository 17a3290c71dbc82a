"""Scalar author-quality indicators computed from a citation record."""

from __future__ import annotations

import enum
import hashlib
import statistics
from dataclasses import dataclass
from typing import Callable, Union

from .corpus import CitationRecord

__all__ = [
    "IndicatorKind",
    "IndicatorValue",
    "Indicator",
    "evaluate",
    "indicator_value",
    "hash_null",
    "resolve_indicator",
]


class IndicatorKind(enum.Enum):
    MEAN_CITATIONS = "mean_citations"
    MEDIAN_CITATIONS = "median_citations"
    TOTAL_CITATIONS = "total_citations"
    MAX_CITATIONS = "max_citations"
    H_INDEX = "h_index"
    PAPERS_PER_YEAR = "papers_per_year"


@dataclass(frozen=True)
class IndicatorValue:
    value: float
    kind: IndicatorKind


# Anything usable to rank authors: a named kind or a custom scoring function.
Indicator = Union[IndicatorKind, Callable[[CitationRecord], float]]


def _h_index(citations: tuple[int, ...]) -> int:
    ranked = sorted(citations, reverse=True)
    h = 0
    for i, c in enumerate(ranked, start=1):
        if c >= i:
            h = i
        else:
            break
    return h


def _papers_per_year(record: CitationRecord) -> float:
    years = [p.year for p in record.papers if p.year is not None]
    if not years:
        raise ValueError(f"year data required for author {record.author_id!r}")
    span = max(years) - min(years) + 1
    return len(record.papers) / span


def evaluate(kind: IndicatorKind, record: CitationRecord) -> IndicatorValue:
    """Evaluate one indicator on a non-empty citation record.

    mean/median/total/max act on the citation counts; h_index is the largest
    h such that at least h papers have >= h citations; papers_per_year
    divides the paper count by the inclusive career span in years.
    """
    if not record.papers:
        raise ValueError(
            f"indicator undefined for empty record (author {record.author_id!r})"
        )
    cits = record.citation_counts()
    if kind is IndicatorKind.MEAN_CITATIONS:
        value = sum(cits) / len(cits)
    elif kind is IndicatorKind.MEDIAN_CITATIONS:
        value = float(statistics.median(cits))
    elif kind is IndicatorKind.TOTAL_CITATIONS:
        value = float(sum(cits))
    elif kind is IndicatorKind.MAX_CITATIONS:
        value = float(max(cits))
    elif kind is IndicatorKind.H_INDEX:
        value = float(_h_index(cits))
    elif kind is IndicatorKind.PAPERS_PER_YEAR:
        value = _papers_per_year(record)
    else:
        raise ValueError(f"unknown indicator kind: {kind!r}")
    return IndicatorValue(value=value, kind=kind)


def indicator_value(indicator: Indicator, record: CitationRecord) -> float:
    """Scalar value of a named kind or custom indicator function."""
    if isinstance(indicator, IndicatorKind):
        return evaluate(indicator, record).value
    return float(indicator(record))


def hash_null(record: CitationRecord) -> float:
    """Null indicator: a stable hash of the author id.

    Orders authors by something unrelated to their citation record (the
    digital analogue of binning by hair color or alphabetically), giving a
    reference point with no predictive power. Stable across processes,
    unlike the built-in ``hash``.
    """
    digest = hashlib.blake2b(record.author_id.encode("utf-8"), digest_size=8).digest()
    return float(int.from_bytes(digest, "big"))


def resolve_indicator(name: str) -> Indicator:
    """Map a CLI indicator name to its implementation."""
    if name == "hash":
        return hash_null
    try:
        return IndicatorKind(name)
    except ValueError:
        valid = ", ".join([k.value for k in IndicatorKind] + ["hash"])
        raise ValueError(f"unknown indicator {name!r} (choose from: {valid})") from None
