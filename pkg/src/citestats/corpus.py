"""Domain model: papers, authors, corpora, citation bins, and file ingestion.

A corpus is immutable once loaded; every analysis in this package takes it
as read-only input.
"""

from __future__ import annotations

import csv
import io
import json
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

import numpy as np

__all__ = [
    "Paper",
    "CitationRecord",
    "Corpus",
    "BinningScheme",
    "BinnedRecord",
    "CitationDistribution",
    "CorpusFormatError",
    "SPIRES_SCHEME",
    "SPIRES_DISTRIBUTION",
    "bin_paper",
    "bin_record",
    "empirical_distribution",
    "load_corpus",
    "serialize_corpus",
    "load_scheme",
]

CSV_HEADER = ["author_id", "paper_id", "citations", "year", "field"]


class CorpusFormatError(ValueError):
    """Raised when an input file violates the corpus schema."""


@dataclass(frozen=True)
class Paper:
    """A single publication, reduced to its citation count."""

    citations: int
    year: int | None = None
    field_tag: str | None = None

    def __post_init__(self):
        if self.citations < 0:
            raise ValueError(f"citations must be >= 0, got {self.citations}")
        if self.year is not None and not (1800 <= self.year <= 2200):
            raise ValueError(f"year out of range [1800, 2200]: {self.year}")


@dataclass(frozen=True)
class CitationRecord:
    """One author's papers, in publication-list order."""

    author_id: str
    papers: tuple[Paper, ...]

    def __post_init__(self):
        if not self.author_id:
            raise ValueError("author_id must be non-empty")
        object.__setattr__(self, "papers", tuple(self.papers))

    def __len__(self) -> int:
        return len(self.papers)

    def citation_counts(self) -> tuple[int, ...]:
        return tuple(p.citations for p in self.papers)


@dataclass(frozen=True)
class Corpus:
    """An immutable collection of citation records with unique author ids."""

    authors: tuple[CitationRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "authors", tuple(self.authors))
        index = {}
        for rec in self.authors:
            if rec.author_id in index:
                raise ValueError(f"duplicate author_id: {rec.author_id!r}")
            index[rec.author_id] = rec
        object.__setattr__(self, "_by_id", index)

    def __len__(self) -> int:
        return len(self.authors)

    def __iter__(self) -> Iterator[CitationRecord]:
        return iter(self.authors)

    def __contains__(self, author_id: str) -> bool:
        return author_id in self._by_id

    def get(self, author_id: str) -> CitationRecord:
        return self._by_id[author_id]

    def iter_papers(self) -> Iterator[Paper]:
        for rec in self.authors:
            yield from rec.papers

    def total_papers(self) -> int:
        return sum(len(rec) for rec in self.authors)

    def field_tags(self) -> tuple[str, ...]:
        """Distinct non-empty field tags, in first-appearance order."""
        seen: dict[str, None] = {}
        for paper in self.iter_papers():
            if paper.field_tag:
                seen.setdefault(paper.field_tag)
        return tuple(seen)


@dataclass(frozen=True)
class BinningScheme:
    """Half-open citation-count intervals; the last interval is unbounded.

    ``boundaries`` are the lower edges: ``(0, 1, 10)`` defines the bins
    [0, 1), [1, 10), [10, inf).
    """

    boundaries: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "boundaries", tuple(int(b) for b in self.boundaries))
        if len(self.boundaries) < 2:
            raise ValueError("a binning scheme needs at least 2 bins")
        if self.boundaries[0] != 0:
            raise ValueError("first bin boundary must be 0")
        if any(a >= b for a, b in zip(self.boundaries, self.boundaries[1:])):
            raise ValueError("bin boundaries must be strictly increasing")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(self.boundaries):
                raise ValueError("labels must match the number of bins")

    @property
    def num_bins(self) -> int:
        return len(self.boundaries)

    def bin_index(self, citations: int) -> int:
        """Index of the unique bin containing a citation count."""
        if citations < 0:
            raise ValueError(f"citations must be >= 0, got {citations}")
        return bisect_right(self.boundaries, citations) - 1

    def interval(self, index: int) -> tuple[int, int | None]:
        """(lower, upper) edges of a bin; upper is None for the last bin."""
        lo = self.boundaries[index]
        hi = self.boundaries[index + 1] if index + 1 < self.num_bins else None
        return lo, hi

    def label(self, index: int) -> str:
        if self.labels is not None:
            return self.labels[index]
        lo, hi = self.interval(index)
        return f"{lo}+" if hi is None else f"{lo}-{hi - 1}"


@dataclass(frozen=True)
class BinnedRecord:
    """Per-bin paper counts of one author's record."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError("bin counts must be non-negative")

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def num_bins(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class CitationDistribution:
    """Probabilities over citation bins.

    Construction tolerates a small normalization defect (|sum - 1| <= 1e-3)
    so that published, rounded bin probabilities can be used verbatim;
    :meth:`renormalized` returns an exactly normalized copy.
    """

    probabilities: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        object.__setattr__(self, "probabilities", probs)
        if any(p < 0 for p in probs):
            raise ValueError("bin probabilities must be non-negative")
        total = sum(probs)
        if abs(total - 1.0) > 1e-3:
            raise ValueError(f"bin probabilities must sum to ~1, got {total}")

    @property
    def num_bins(self) -> int:
        return len(self.probabilities)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probabilities, dtype=float)

    def renormalized(self) -> "CitationDistribution":
        arr = self.as_array()
        return CitationDistribution(tuple(arr / arr.sum()))


# Citation-summary intervals of the SPIRES high-energy-physics database,
# with the measured probability that a paper falls in each interval.
SPIRES_SCHEME = BinningScheme(
    boundaries=(0, 1, 10, 50, 100, 500),
    labels=("unknown", "less known", "known", "well-known", "famous", "renowned"),
)
SPIRES_DISTRIBUTION = CitationDistribution(
    (0.267, 0.444, 0.224, 0.0380, 0.0250, 0.00184)
)


def bin_paper(citations: int, scheme: BinningScheme) -> int:
    """Map a citation count to its bin index. Total over all counts >= 0."""
    return scheme.bin_index(citations)


def bin_record(record: CitationRecord, scheme: BinningScheme) -> BinnedRecord:
    """Count an author's papers per citation bin."""
    counts = [0] * scheme.num_bins
    for paper in record.papers:
        counts[scheme.bin_index(paper.citations)] += 1
    return BinnedRecord(tuple(counts))


def empirical_distribution(
    papers: Iterable[Paper], scheme: BinningScheme
) -> CitationDistribution:
    """Bin-frequency distribution of a paper collection."""
    counts = np.zeros(scheme.num_bins, dtype=float)
    total = 0
    for paper in papers:
        counts[scheme.bin_index(paper.citations)] += 1
        total += 1
    if total == 0:
        raise ValueError("no papers")
    return CitationDistribution(tuple(counts / total))


def _parse_int(text: str, what: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise CorpusFormatError(f"line {line}: invalid {what}: {text!r}") from None


def _load_csv(stream: IO[str]) -> Corpus:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise CorpusFormatError("empty file: missing CSV header") from None
    if [h.strip() for h in header] != CSV_HEADER:
        raise CorpusFormatError(
            f"line 1: expected header {','.join(CSV_HEADER)!r}, got {','.join(header)!r}"
        )
    papers_by_author: dict[str, list[Paper]] = {}
    seen_paper_ids: set[tuple[str, str]] = set()
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise CorpusFormatError(
                f"line {line_no}: expected {len(CSV_HEADER)} fields, got {len(row)}"
            )
        author_id, paper_id, citations_s, year_s, field_s = (v.strip() for v in row)
        if not author_id:
            raise CorpusFormatError(f"line {line_no}: empty author_id")
        key = (author_id, paper_id)
        if paper_id:
            if key in seen_paper_ids:
                raise CorpusFormatError(
                    f"line {line_no}: duplicate paper {paper_id!r} for author {author_id!r}"
                )
            seen_paper_ids.add(key)
        citations = _parse_int(citations_s, "citations", line_no)
        if citations < 0:
            raise CorpusFormatError(f"line {line_no}: negative citations: {citations}")
        year = _parse_int(year_s, "year", line_no) if year_s else None
        try:
            paper = Paper(citations=citations, year=year, field_tag=field_s or None)
        except ValueError as exc:
            raise CorpusFormatError(f"line {line_no}: {exc}") from None
        papers_by_author.setdefault(author_id, []).append(paper)
    return Corpus(
        tuple(
            CitationRecord(author_id=aid, papers=tuple(papers))
            for aid, papers in papers_by_author.items()
        )
    )


def _load_json(stream: IO[str]) -> Corpus:
    try:
        data = json.load(stream)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(data, list):
        raise CorpusFormatError("corpus JSON must be an array of author objects")
    records = []
    seen_authors: set[str] = set()
    for i, entry in enumerate(data):
        if not isinstance(entry, dict) or "author_id" not in entry:
            raise CorpusFormatError(f"author #{i}: expected object with 'author_id'")
        author_id = str(entry["author_id"])
        if author_id in seen_authors:
            raise CorpusFormatError(f"author #{i}: duplicate author_id {author_id!r}")
        seen_authors.add(author_id)
        papers = []
        seen_paper_ids: set[str] = set()
        for j, p in enumerate(entry.get("papers", [])):
            if not isinstance(p, dict) or "citations" not in p:
                raise CorpusFormatError(
                    f"author {author_id!r} paper #{j}: expected object with 'citations'"
                )
            paper_id = str(p["paper_id"]) if "paper_id" in p else ""
            if paper_id:
                if paper_id in seen_paper_ids:
                    raise CorpusFormatError(
                        f"author {author_id!r}: duplicate paper {paper_id!r}"
                    )
                seen_paper_ids.add(paper_id)
            try:
                papers.append(
                    Paper(
                        citations=int(p["citations"]),
                        year=int(p["year"]) if p.get("year") is not None else None,
                        field_tag=p.get("field") or None,
                    )
                )
            except (TypeError, ValueError) as exc:
                raise CorpusFormatError(
                    f"author {author_id!r} paper #{j}: {exc}"
                ) from None
        records.append(CitationRecord(author_id=author_id, papers=tuple(papers)))
    return Corpus(tuple(records))


def load_corpus(source: str | Path | IO[str], fmt: str = "csv") -> Corpus:
    """Load a corpus from a path or open text stream.

    CSV schema: header ``author_id,paper_id,citations,year,field``; one paper
    per row; ``year`` and ``field`` may be empty; rows of one author are kept
    in file order even when authors interleave. JSON schema: array of
    ``{author_id, papers: [{paper_id, citations, year?, field?}]}``.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown corpus format: {fmt!r}")
    loader = _load_csv if fmt == "csv" else _load_json
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return loader(fh)
    return loader(source)


def serialize_corpus(corpus: Corpus, fmt: str = "csv") -> str:
    """Render a corpus in the CSV or JSON interchange schema.

    Paper ids are generated positionally (``p0``, ``p1``, ...) per author;
    they are not part of the in-memory model, so load(serialize(c)) == c.
    """
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in corpus:
            for j, paper in enumerate(rec.papers):
                writer.writerow(
                    [
                        rec.author_id,
                        f"p{j}",
                        paper.citations,
                        "" if paper.year is None else paper.year,
                        paper.field_tag or "",
                    ]
                )
        return buf.getvalue()
    if fmt == "json":
        data = [
            {
                "author_id": rec.author_id,
                "papers": [
                    {
                        "paper_id": f"p{j}",
                        "citations": paper.citations,
                        **({"year": paper.year} if paper.year is not None else {}),
                        **({"field": paper.field_tag} if paper.field_tag else {}),
                    }
                    for j, paper in enumerate(rec.papers)
                ],
            }
            for rec in corpus
        ]
        return json.dumps(data, indent=2) + "\n"
    raise ValueError(f"unknown corpus format: {fmt!r}")


def load_scheme(source: str | Path | IO[str]) -> tuple[BinningScheme, CitationDistribution | None]:
    """Load a binning-scheme config.

    Accepts either a JSON array of lower edges (``[0, 1, 10, 50, 100, 500]``)
    or an object ``{"boundaries": [...], "probabilities": [...], "labels": [...]}``
    where ``probabilities`` and ``labels`` are optional.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = json.load(source)
    if isinstance(data, list):
        return BinningScheme(tuple(data)), None
    if isinstance(data, dict) and "boundaries" in data:
        scheme = BinningScheme(
            tuple(data["boundaries"]),
            tuple(data["labels"]) if data.get("labels") else None,
        )
        dist = None
        if data.get("probabilities") is not None:
            dist = CitationDistribution(tuple(data["probabilities"]))
            if dist.num_bins != scheme.num_bins:
                raise ValueError("probabilities must match the number of bins")
        return scheme, dist
    raise ValueError("scheme config must be an edge array or an object with 'boundaries'")
