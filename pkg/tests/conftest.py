"""Shared fixtures and the acceptance-criteria summary hook."""

from __future__ import annotations

import numpy as np
import pytest

from citestats import CitationRecord, Corpus, Paper

_acceptance_results: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, outcome in _acceptance_results:
        status = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{status}  {name}")


@pytest.fixture
def author_a() -> CitationRecord:
    """Ten papers with 100 citations each."""
    return CitationRecord("A", tuple(Paper(100) for _ in range(10)))


@pytest.fixture
def author_b() -> CitationRecord:
    """One paper with 1000 citations, nine with none."""
    return CitationRecord("B", (Paper(1000),) + tuple(Paper(0) for _ in range(9)))


@pytest.fixture
def ab_corpus(author_a, author_b) -> Corpus:
    return Corpus((author_a, author_b))


def make_two_field_corpus(
    num_authors: int = 50,
    papers_per_author: int = 40,
    scale: int = 2,
    seed: int = 11,
    clone_id: str | None = None,
) -> Corpus:
    """Two-field corpus where field 'hi' cites at ``scale`` times field 'lo'.

    Field 'lo' authors draw skewed citation counts; field 'hi' authors carry
    the same draws multiplied by ``scale``, so the mean ratio is exactly
    ``scale`` and the rank structure of the two fields is identical. With
    ``clone_id`` set, one extra author appears in both fields, citations
    scaled accordingly.
    """
    rng = np.random.default_rng(seed)
    records = []

    def draw_counts() -> np.ndarray:
        # lognormal-ish skew, similar shape to real citation data
        return np.floor(rng.lognormal(mean=1.5, sigma=1.3, size=papers_per_author)).astype(int)

    base_draws = [draw_counts() for _ in range(num_authors)]
    for i, counts in enumerate(base_draws):
        records.append(
            CitationRecord(
                f"lo-{i:03d}", tuple(Paper(int(c), field_tag="lo") for c in counts)
            )
        )
    for i, counts in enumerate(base_draws):
        records.append(
            CitationRecord(
                f"hi-{i:03d}",
                tuple(Paper(int(c) * scale, field_tag="hi") for c in counts),
            )
        )
    if clone_id is not None:
        counts = draw_counts()
        papers = tuple(Paper(int(c), field_tag="lo") for c in counts) + tuple(
            Paper(int(c) * scale, field_tag="hi") for c in counts
        )
        records.append(CitationRecord(clone_id, papers))
    return Corpus(tuple(records))
