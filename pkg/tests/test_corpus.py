"""Domain model, binning, and ingestion tests."""

import io
import json

import numpy as np
import pytest

from citestats import (
    BinnedRecord,
    BinningScheme,
    CitationDistribution,
    CitationRecord,
    Corpus,
    CorpusFormatError,
    Paper,
    SPIRES_DISTRIBUTION,
    SPIRES_SCHEME,
    bin_paper,
    bin_record,
    empirical_distribution,
    load_corpus,
    load_scheme,
    serialize_corpus,
)

AB_CSV = (
    "author_id,paper_id,citations,year,field\n"
    "A,a1,100,2001,\n"
    "A,a2,50,,\n"
)


def linear_scan_bin(citations: int, boundaries) -> int:
    """Reference binning: walk the intervals one by one."""
    for i, lo in enumerate(boundaries):
        hi = boundaries[i + 1] if i + 1 < len(boundaries) else None
        if citations >= lo and (hi is None or citations < hi):
            return i
    raise AssertionError("unreachable: bins cover all counts")


class TestBinPaper:
    @pytest.mark.parametrize(
        "citations,expected",
        [(0, 0), (1, 1), (9, 1), (10, 2), (49, 2), (50, 3), (99, 3), (100, 4), (499, 4), (500, 5), (12345, 5)],
    )
    def test_interval_edges(self, citations, expected):
        assert bin_paper(citations, SPIRES_SCHEME) == expected

    def test_exhaustive_against_linear_scan(self):
        for c in range(0, 1001):
            assert bin_paper(c, SPIRES_SCHEME) == linear_scan_bin(c, SPIRES_SCHEME.boundaries)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            bin_paper(-1, SPIRES_SCHEME)


class TestBinRecord:
    def test_author_a(self, author_a):
        assert bin_record(author_a, SPIRES_SCHEME).counts == (0, 0, 0, 0, 10, 0)

    def test_author_b(self, author_b):
        assert bin_record(author_b, SPIRES_SCHEME).counts == (9, 0, 0, 0, 0, 1)

    def test_empty_record(self):
        rec = CitationRecord("x", ())
        assert bin_record(rec, SPIRES_SCHEME).counts == (0, 0, 0, 0, 0, 0)

    def test_counts_sum_to_paper_count(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(0, 40))
            papers = tuple(Paper(int(c)) for c in rng.integers(0, 2000, size=n))
            rec = CitationRecord("x", papers)
            binned = bin_record(rec, SPIRES_SCHEME)
            assert binned.total == n == len(rec)


class TestTypes:
    def test_paper_validation(self):
        with pytest.raises(ValueError):
            Paper(-1)
        with pytest.raises(ValueError):
            Paper(0, year=1500)
        Paper(0, year=2001)  # fine

    def test_record_needs_author_id(self):
        with pytest.raises(ValueError):
            CitationRecord("", (Paper(1),))

    def test_corpus_rejects_duplicate_ids(self):
        rec = CitationRecord("dup", (Paper(1),))
        with pytest.raises(ValueError, match="duplicate author_id"):
            Corpus((rec, rec))

    def test_binned_record_rejects_negative(self):
        with pytest.raises(ValueError):
            BinnedRecord((1, -1))

    def test_scheme_validation(self):
        with pytest.raises(ValueError):
            BinningScheme((0,))
        with pytest.raises(ValueError):
            BinningScheme((1, 10))
        with pytest.raises(ValueError):
            BinningScheme((0, 10, 10))
        with pytest.raises(ValueError):
            BinningScheme((0, 1), labels=("only-one",))

    def test_scheme_intervals_and_labels(self):
        assert SPIRES_SCHEME.interval(0) == (0, 1)
        assert SPIRES_SCHEME.interval(5) == (500, None)
        assert SPIRES_SCHEME.label(5) == "renowned"
        bare = BinningScheme((0, 1, 10))
        assert bare.label(1) == "1-9"
        assert bare.label(2) == "10+"

    def test_distribution_tolerates_table_rounding(self):
        # the published bin probabilities sum to 0.99984
        assert abs(sum(SPIRES_DISTRIBUTION.probabilities) - 0.99984) < 1e-12

    def test_distribution_rejects_bad_sums(self):
        with pytest.raises(ValueError):
            CitationDistribution((0.5, 0.4))
        with pytest.raises(ValueError):
            CitationDistribution((1.2, -0.2))

    def test_renormalized_sums_to_one(self):
        renorm = SPIRES_DISTRIBUTION.renormalized()
        assert abs(sum(renorm.probabilities) - 1.0) < 1e-12


class TestLoadCorpusCsv:
    def test_two_rows_one_author(self):
        corpus = load_corpus(io.StringIO(AB_CSV), "csv")
        assert len(corpus) == 1
        rec = corpus.get("A")
        assert rec.citation_counts() == (100, 50)
        assert rec.papers[0].year == 2001
        assert rec.papers[1].year is None

    def test_header_only_is_empty_corpus(self):
        corpus = load_corpus(io.StringIO("author_id,paper_id,citations,year,field\n"), "csv")
        assert len(corpus) == 0

    def test_negative_citations_rejected_with_line(self):
        text = "author_id,paper_id,citations,year,field\nA,a1,-1,,\n"
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_corpus(io.StringIO(text), "csv")

    def test_malformed_row_names_line(self):
        text = "author_id,paper_id,citations,year,field\nA,a1,5,,\nB,b1\n"
        with pytest.raises(CorpusFormatError, match="line 3"):
            load_corpus(io.StringIO(text), "csv")

    def test_non_integer_citations(self):
        text = "author_id,paper_id,citations,year,field\nA,a1,many,,\n"
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_corpus(io.StringIO(text), "csv")

    def test_duplicate_paper_id_rejected(self):
        text = (
            "author_id,paper_id,citations,year,field\n"
            "A,a1,5,,\n"
            "A,a1,6,,\n"
        )
        with pytest.raises(CorpusFormatError, match="duplicate paper"):
            load_corpus(io.StringIO(text), "csv")

    def test_same_paper_id_across_authors_ok(self):
        text = (
            "author_id,paper_id,citations,year,field\n"
            "A,p1,5,,\n"
            "B,p1,6,,\n"
        )
        corpus = load_corpus(io.StringIO(text), "csv")
        assert len(corpus) == 2

    def test_bad_header_rejected(self):
        with pytest.raises(CorpusFormatError, match="header"):
            load_corpus(io.StringIO("author,citations\nA,1\n"), "csv")

    def test_interleaved_authors_keep_row_order(self):
        text = (
            "author_id,paper_id,citations,year,field\n"
            "A,a1,1,,\n"
            "B,b1,10,,\n"
            "A,a2,2,,\n"
        )
        corpus = load_corpus(io.StringIO(text), "csv")
        assert corpus.get("A").citation_counts() == (1, 2)
        assert [rec.author_id for rec in corpus] == ["A", "B"]

    def test_field_tags_parsed(self):
        text = "author_id,paper_id,citations,year,field\nA,a1,5,2000,math\n"
        corpus = load_corpus(io.StringIO(text), "csv")
        assert corpus.get("A").papers[0].field_tag == "math"
        assert corpus.field_tags() == ("math",)


class TestLoadCorpusJson:
    def test_basic(self):
        data = [
            {"author_id": "A", "papers": [{"paper_id": "a1", "citations": 3, "year": 1999}]},
            {"author_id": "B", "papers": []},
        ]
        corpus = load_corpus(io.StringIO(json.dumps(data)), "json")
        assert len(corpus) == 2
        assert corpus.get("A").papers[0].year == 1999
        assert len(corpus.get("B")) == 0

    def test_duplicate_author_rejected(self):
        data = [{"author_id": "A", "papers": []}, {"author_id": "A", "papers": []}]
        with pytest.raises(CorpusFormatError, match="duplicate author_id"):
            load_corpus(io.StringIO(json.dumps(data)), "json")

    def test_invalid_json(self):
        with pytest.raises(CorpusFormatError, match="invalid JSON"):
            load_corpus(io.StringIO("{nope"), "json")

    def test_negative_citations(self):
        data = [{"author_id": "A", "papers": [{"citations": -2}]}]
        with pytest.raises(CorpusFormatError):
            load_corpus(io.StringIO(json.dumps(data)), "json")

    def test_unknown_format(self):
        with pytest.raises(ValueError, match="unknown corpus format"):
            load_corpus(io.StringIO(""), "xml")


class TestRoundTrip:
    def _corpus(self) -> Corpus:
        rng = np.random.default_rng(3)
        records = []
        for i in range(8):
            n = int(rng.integers(1, 12))
            papers = tuple(
                Paper(
                    int(c),
                    year=int(rng.integers(1990, 2020)) if rng.random() < 0.6 else None,
                    field_tag=rng.choice(["x", "y"]) if rng.random() < 0.5 else None,
                )
                for c in rng.integers(0, 800, size=n)
            )
            records.append(CitationRecord(f"auth-{i}", papers))
        return Corpus(tuple(records))

    def test_csv_round_trip(self):
        corpus = self._corpus()
        text = serialize_corpus(corpus, "csv")
        assert load_corpus(io.StringIO(text), "csv") == corpus

    def test_json_round_trip_keeps_empty_authors(self):
        corpus = Corpus(
            (
                CitationRecord("a", (Paper(5, year=2000, field_tag="x"),)),
                CitationRecord("empty", ()),
            )
        )
        text = serialize_corpus(corpus, "json")
        assert load_corpus(io.StringIO(text), "json") == corpus


class TestEmpiricalDistribution:
    def test_four_papers(self):
        papers = [Paper(0), Paper(0), Paper(5), Paper(50)]
        dist = empirical_distribution(papers, SPIRES_SCHEME)
        assert dist.probabilities == (0.5, 0.25, 0.0, 0.25, 0.0, 0.0)

    def test_single_bin(self):
        papers = [Paper(200)] * 7
        dist = empirical_distribution(papers, SPIRES_SCHEME)
        assert dist.probabilities == (0.0, 0.0, 0.0, 0.0, 1.0, 0.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="no papers"):
            empirical_distribution([], SPIRES_SCHEME)

    def test_monte_carlo_frequencies_match_bin_probabilities(self):
        # Draw 10^6 papers from the (normalized) bin distribution and check
        # the empirical frequencies against the published values bin by bin.
        rng = np.random.default_rng(2024)
        probs = SPIRES_DISTRIBUTION.as_array()
        norm = probs / probs.sum()
        m = 1_000_000
        counts = rng.multinomial(m, norm)
        papers = []
        for b, count in enumerate(counts):
            papers.extend([Paper(SPIRES_SCHEME.boundaries[b])] * int(count))
        dist = empirical_distribution(papers, SPIRES_SCHEME)
        freqs = dist.as_array()
        for b in range(6):
            se = np.sqrt(probs[b] * (1 - probs[b]) / m)
            assert abs(freqs[b] - probs[b]) < 3 * se


class TestLoadScheme:
    def test_edge_array(self):
        scheme, dist = load_scheme(io.StringIO("[0,1,10,50,100,500]"))
        assert scheme == BinningScheme((0, 1, 10, 50, 100, 500))
        assert dist is None

    def test_object_with_probabilities(self):
        payload = {
            "boundaries": [0, 10],
            "probabilities": [0.7, 0.3],
            "labels": ["low", "high"],
        }
        scheme, dist = load_scheme(io.StringIO(json.dumps(payload)))
        assert scheme.num_bins == 2
        assert dist is not None and dist.probabilities == (0.7, 0.3)

    def test_probabilities_must_match_bins(self):
        payload = {"boundaries": [0, 10], "probabilities": [1.0]}
        with pytest.raises(ValueError):
            load_scheme(io.StringIO(json.dumps(payload)))

    def test_garbage_rejected(self):
        with pytest.raises(ValueError):
            load_scheme(io.StringIO('"nope"'))
