"""Bayesian evaluation of how well an indicator discriminates authors.

Pipeline: rank authors by an indicator, cut the ranking into quantile bins,
build each bin's empirical per-paper citation distribution, then ask Bayes'
theorem how confidently a record can be traced back to its own bin:

    P(bin | record)  ~  P(record | bin) * p(bin)

Averaging the posteriors of the authors assigned to bin ``beta`` gives a
row of the confusion matrix P(alpha | beta). An informative indicator
yields diagonal-dominant rows; an indicator unrelated to the records yields
rows equal to the prior.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .corpus import (
    BinnedRecord,
    BinningScheme,
    CitationDistribution,
    CitationRecord,
    Corpus,
    bin_record,
)
from .indicators import Indicator, indicator_value
from .synthetic import GenerativeModel, sample_corpus

__all__ = [
    "AuthorBinning",
    "ConditionalDistributions",
    "Posterior",
    "AuthorPosterior",
    "ConfusionMatrix",
    "AssignmentMetrics",
    "CurvePoint",
    "bin_authors",
    "conditional_distributions",
    "posterior",
    "author_posteriors",
    "confusion_matrix",
    "assignment_metrics",
    "kl_divergence",
    "mean_pairwise_kl",
    "adjacent_kl_table",
    "accuracy_curve",
    "log_error_slope",
]


@dataclass(frozen=True)
class AuthorBinning:
    """Quantile assignment of authors to indicator bins.

    ``bin_members`` lists author ids per bin in ranking order; ``prior`` is
    the occupancy fraction of each bin.
    """

    num_bins: int
    bin_members: tuple[tuple[str, ...], ...]
    prior: tuple[float, ...]

    def __post_init__(self):
        assignment = {}
        for b, members in enumerate(self.bin_members):
            for author_id in members:
                assignment[author_id] = b
        object.__setattr__(self, "_assignment", assignment)

    @property
    def assignment(self) -> dict[str, int]:
        """Mapping author_id -> assigned bin index."""
        return dict(self._assignment)

    def bin_of(self, author_id: str) -> int:
        return self._assignment[author_id]


@dataclass(frozen=True, eq=False)
class ConditionalDistributions:
    """Per-author-bin citation distributions P(i | bin).

    ``counts[b, i]`` is the raw number of papers of bin-``b`` authors in
    citation bin ``i``; rows are smoothed with ``pseudocount`` per citation
    bin and normalized on access.
    """

    counts: np.ndarray
    pseudocount: float
    scheme: BinningScheme

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=float)
        object.__setattr__(self, "counts", counts)
        if self.pseudocount < 0:
            raise ValueError("pseudocount must be >= 0")
        totals = counts.sum(axis=1) + self.pseudocount * counts.shape[1]
        if np.any(totals == 0):
            empty = int(np.flatnonzero(counts.sum(axis=1) == 0)[0])
            raise ValueError(
                f"author bin {empty} has no papers and pseudocount is 0"
            )
        object.__setattr__(self, "_matrix", (counts + self.pseudocount) / totals[:, None])

    @property
    def num_author_bins(self) -> int:
        return self.counts.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Smoothed row-stochastic matrix, one row per author bin."""
        return self._matrix.copy()

    def row(self, author_bin: int) -> CitationDistribution:
        return CitationDistribution(tuple(self._matrix[author_bin]))

    def row_without(self, author_bin: int, binned: BinnedRecord) -> np.ndarray:
        """Row ``author_bin`` with one author's own paper counts removed."""
        counts = self.counts[author_bin] - np.asarray(binned.counts, dtype=float)
        if np.any(counts < -1e-9):
            raise ValueError("record is not contained in its bin's counts")
        counts = np.clip(counts, 0.0, None)
        total = counts.sum() + self.pseudocount * counts.size
        if total == 0:
            raise ValueError(
                f"author bin {author_bin} is empty after leave-one-out "
                "and pseudocount is 0"
            )
        return (counts + self.pseudocount) / total


@dataclass(frozen=True)
class Posterior:
    """Normalized posterior over author bins for one record."""

    probabilities: tuple[float, ...]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probabilities, dtype=float)

    def argmax(self) -> int:
        return int(np.argmax(self.probabilities))


class AuthorPosterior(NamedTuple):
    author_id: str
    assigned_bin: int
    posterior: Posterior


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """P(alpha | beta): row = assigned bin, column = posterior bin."""

    matrix: np.ndarray
    row_counts: tuple[int, ...]

    @property
    def num_bins(self) -> int:
        return self.matrix.shape[0]

    def diagonal_dominant(self) -> bool:
        """True when every row's maximum sits on the diagonal."""
        return bool(np.all(self.matrix.argmax(axis=1) == np.arange(self.num_bins)))


@dataclass(frozen=True)
class AssignmentMetrics:
    argmax_accuracy: float
    mean_correct_mass: float
    per_bin_accuracy: tuple[float, ...]
    per_bin_correct_mass: tuple[float, ...]


class CurvePoint(NamedTuple):
    n_papers: int
    argmax_accuracy: float
    mean_correct_mass: float


def bin_authors(corpus: Corpus, indicator: Indicator, num_bins: int = 10) -> AuthorBinning:
    """Rank authors by an indicator and cut into contiguous quantile bins.

    Authors are sorted ascending by indicator value with ties broken by
    author_id, then split into ``num_bins`` groups whose sizes differ by at
    most one (the first ``len(corpus) % num_bins`` groups take the extra
    author). The prior is each group's occupancy fraction.
    """
    if num_bins < 2:
        raise ValueError(f"num_bins must be >= 2, got {num_bins}")
    if len(corpus) < num_bins:
        raise ValueError(
            f"too few authors: {len(corpus)} authors for {num_bins} bins"
        )
    failures = []
    scored = []
    for rec in corpus:
        try:
            scored.append((indicator_value(indicator, rec), rec.author_id))
        except ValueError as exc:
            failures.append(f"{rec.author_id!r}: {exc}")
    if failures:
        raise ValueError(
            "indicator undefined for some authors: " + "; ".join(failures)
        )
    scored.sort()
    base, extra = divmod(len(scored), num_bins)
    members = []
    start = 0
    for b in range(num_bins):
        size = base + (1 if b < extra else 0)
        members.append(tuple(author_id for _, author_id in scored[start : start + size]))
        start += size
    sizes = np.array([len(m) for m in members], dtype=float)
    prior = tuple(sizes / sizes.sum())
    return AuthorBinning(num_bins=num_bins, bin_members=tuple(members), prior=prior)


def conditional_distributions(
    corpus: Corpus,
    binning: AuthorBinning,
    scheme: BinningScheme,
    pseudocount: float = 0.5,
) -> ConditionalDistributions:
    """Empirical per-paper citation distribution of each author bin.

    P(i|bin) = (papers of the bin's authors in citation bin i + pseudocount)
    / (total papers of the bin + pseudocount * number of citation bins).
    """
    counts = np.zeros((binning.num_bins, scheme.num_bins), dtype=float)
    for b, members in enumerate(binning.bin_members):
        for author_id in members:
            rec = corpus.get(author_id)
            counts[b] += np.asarray(bin_record(rec, scheme).counts, dtype=float)
    return ConditionalDistributions(counts=counts, pseudocount=pseudocount, scheme=scheme)


def _log_likelihoods(rec_counts: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Per-row log10 P(record | row), multinomial coefficient omitted."""
    safe_log = np.where(matrix > 0, np.log10(np.where(matrix > 0, matrix, 1.0)), 0.0)
    loglik = safe_log @ rec_counts
    impossible = ((matrix == 0) & (rec_counts > 0)[None, :]).any(axis=1)
    return np.where(impossible, -np.inf, loglik)


def posterior(
    binned: BinnedRecord,
    conditionals: ConditionalDistributions,
    prior: Sequence[float],
) -> Posterior:
    """Posterior over author bins for one binned record.

    Works in log10 space and normalizes with a max shift; the multinomial
    coefficient is constant across bins and cancels.
    """
    prior_arr = np.asarray(prior, dtype=float)
    matrix = conditionals.matrix
    if prior_arr.size != matrix.shape[0]:
        raise ValueError(
            f"prior has {prior_arr.size} entries for {matrix.shape[0]} author bins"
        )
    if abs(prior_arr.sum() - 1.0) > 1e-9:
        raise ValueError(f"prior must sum to 1, got {prior_arr.sum()}")
    rec_counts = np.asarray(binned.counts, dtype=float)
    if rec_counts.size != matrix.shape[1]:
        raise ValueError(
            f"record has {rec_counts.size} citation bins, "
            f"conditionals have {matrix.shape[1]}"
        )
    with np.errstate(divide="ignore"):
        log_mass = _log_likelihoods(rec_counts, matrix) + np.log10(prior_arr)
    return Posterior(tuple(_normalize_log_mass(log_mass)))


def _normalize_log_mass(log_mass: np.ndarray) -> np.ndarray:
    peak = log_mass.max()
    if peak == -np.inf:
        raise ValueError("record outside distribution support of every author bin")
    weights = 10.0 ** (log_mass - peak)
    return weights / weights.sum()


def author_posteriors(
    corpus: Corpus,
    binning: AuthorBinning,
    conditionals: ConditionalDistributions,
    leave_one_out: bool = False,
) -> list[AuthorPosterior]:
    """Posterior of every author's record, in corpus order.

    With ``leave_one_out``, each author's own papers are removed from their
    bin's conditional counts before that author's posterior is computed.
    """
    prior_arr = np.asarray(binning.prior, dtype=float)
    base_matrix = conditionals.matrix
    with np.errstate(divide="ignore"):
        log_prior = np.log10(prior_arr)
    results = []
    for rec in corpus:
        beta = binning.bin_of(rec.author_id)
        binned = bin_record(rec, conditionals.scheme)
        matrix = base_matrix
        if leave_one_out:
            matrix = base_matrix.copy()
            matrix[beta] = conditionals.row_without(beta, binned)
        rec_counts = np.asarray(binned.counts, dtype=float)
        log_mass = _log_likelihoods(rec_counts, matrix) + log_prior
        probs = _normalize_log_mass(log_mass)
        results.append(AuthorPosterior(rec.author_id, beta, Posterior(tuple(probs))))
    return results


def confusion_matrix(
    corpus: Corpus,
    binning: AuthorBinning,
    conditionals: ConditionalDistributions,
    leave_one_out: bool = False,
) -> ConfusionMatrix:
    """Average the posteriors of each assigned bin's authors into rows."""
    posteriors = author_posteriors(corpus, binning, conditionals, leave_one_out)
    num_bins = binning.num_bins
    sums = np.zeros((num_bins, conditionals.num_author_bins))
    counts = np.zeros(num_bins, dtype=int)
    for ap in posteriors:
        sums[ap.assigned_bin] += ap.posterior.as_array()
        counts[ap.assigned_bin] += 1
    if np.any(counts == 0):
        empty = int(np.flatnonzero(counts == 0)[0])
        raise ValueError(f"author bin {empty} has no authors")
    return ConfusionMatrix(matrix=sums / counts[:, None], row_counts=tuple(counts))


def assignment_metrics(
    matrix: ConfusionMatrix, per_author_posteriors: Iterable[AuthorPosterior]
) -> AssignmentMetrics:
    """Accuracy summary of an author binning.

    argmax accuracy is the fraction of authors whose posterior mode equals
    their assigned bin; correct-bin mass is the posterior probability of the
    assigned bin, averaged per bin (the confusion diagonal) and overall.
    """
    num_bins = matrix.num_bins
    hits = np.zeros(num_bins)
    mass = np.zeros(num_bins)
    counts = np.zeros(num_bins)
    for ap in per_author_posteriors:
        counts[ap.assigned_bin] += 1
        mass[ap.assigned_bin] += ap.posterior.probabilities[ap.assigned_bin]
        if ap.posterior.argmax() == ap.assigned_bin:
            hits[ap.assigned_bin] += 1
    if counts.sum() == 0:
        raise ValueError("no posteriors supplied")
    safe = np.where(counts > 0, counts, 1.0)
    return AssignmentMetrics(
        argmax_accuracy=float(hits.sum() / counts.sum()),
        mean_correct_mass=float(mass.sum() / counts.sum()),
        per_bin_accuracy=tuple(hits / safe),
        per_bin_correct_mass=tuple(mass / safe),
    )


def kl_divergence(
    p: CitationDistribution | Sequence[float],
    q: CitationDistribution | Sequence[float],
) -> float:
    """Kullback-Leibler divergence sum(p * ln(p/q)) in nats.

    Zero-probability bins of ``p`` contribute nothing; a bin where p > 0 but
    q = 0 makes the divergence undefined and raises ValueError.
    """
    p_arr = p.as_array() if isinstance(p, CitationDistribution) else np.asarray(p, float)
    q_arr = q.as_array() if isinstance(q, CitationDistribution) else np.asarray(q, float)
    if p_arr.shape != q_arr.shape:
        raise ValueError("distributions must have matching bin counts")
    if np.any((p_arr > 0) & (q_arr == 0)):
        raise ValueError("support violation: p > 0 where q = 0")
    mask = p_arr > 0
    return float(np.sum(p_arr[mask] * np.log(p_arr[mask] / q_arr[mask])))


def mean_pairwise_kl(conditionals: ConditionalDistributions) -> float:
    """Mean KL over all ordered pairs of distinct conditional rows."""
    matrix = conditionals.matrix
    k = matrix.shape[0]
    if k < 2:
        return 0.0
    total = 0.0
    for a in range(k):
        for b in range(k):
            if a != b:
                total += kl_divergence(matrix[a], matrix[b])
    return total / (k * (k - 1))


def adjacent_kl_table(
    conditionals: ConditionalDistributions,
) -> list[tuple[int, int, float, float]]:
    """KL divergences between neighbouring author bins.

    Returns (lower bin, upper bin, KL(lower||upper), KL(upper||lower)) for
    each adjacent pair.
    """
    matrix = conditionals.matrix
    return [
        (
            b,
            b + 1,
            kl_divergence(matrix[b], matrix[b + 1]),
            kl_divergence(matrix[b + 1], matrix[b]),
        )
        for b in range(matrix.shape[0] - 1)
    ]


CurveSource = Union[Corpus, GenerativeModel]


def accuracy_curve(
    source: CurveSource,
    indicator: Indicator,
    ns: Sequence[int],
    trials: int = 3,
    seed: int = 0,
    *,
    num_bins: int = 10,
    pseudocount: float = 0.5,
    num_authors: int = 1000,
    scheme: BinningScheme | None = None,
) -> list[CurvePoint]:
    """Assignment accuracy as a function of the number of papers scored.

    Binning and conditionals are built once from the full records; for each
    requested ``n``, every author's record is subsampled to ``n`` papers
    (without replacement, ``trials`` times) and re-scored against the
    full-data conditionals. Results are averaged over trials and are
    deterministic for a given seed: the subsampling stream for each
    (n, trial) pair is derived from (seed, n, trial).

    ``source`` may be a corpus whose authors all have at least ``max(ns)``
    papers, or a generative model, which is sampled at ``num_authors``
    authors with ``max(ns)`` papers each.
    """
    ns = list(ns)
    if not ns:
        raise ValueError("empty N list")
    if any(n < 1 for n in ns):
        raise ValueError("every N must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    max_n = max(ns)
    if isinstance(source, GenerativeModel):
        import dataclasses

        model = dataclasses.replace(source, papers_per_author=max_n)
        corpus = sample_corpus(model, num_authors, seed).corpus
        if scheme is None:
            scheme = source.scheme
    else:
        corpus = source
        short = [rec.author_id for rec in corpus if len(rec) < max_n]
        if short:
            raise ValueError(
                f"insufficient papers for requested N={max_n}: "
                + ", ".join(repr(a) for a in short[:5])
            )
        if scheme is None:
            from .corpus import SPIRES_SCHEME

            scheme = SPIRES_SCHEME
    binning = bin_authors(corpus, indicator, num_bins)
    conditionals = conditional_distributions(corpus, binning, scheme, pseudocount)
    matrix = conditionals.matrix
    with np.errstate(divide="ignore"):
        log_prior = np.log10(np.asarray(binning.prior, dtype=float))
    # Pre-bin every paper once; subsampling then works on bin indices.
    paper_bins = [
        np.array([scheme.bin_index(p.citations) for p in rec.papers], dtype=int)
        for rec in corpus
    ]
    assigned = np.array([binning.bin_of(rec.author_id) for rec in corpus], dtype=int)
    points = []
    for n in sorted(ns):
        acc_trials = []
        mass_trials = []
        for trial in range(trials):
            rng = np.random.default_rng(np.random.SeedSequence([seed, n, trial]))
            hits = 0
            mass = 0.0
            for idx, bins_all in enumerate(paper_bins):
                take = rng.choice(bins_all.size, size=n, replace=False)
                rec_counts = np.bincount(
                    bins_all[take], minlength=scheme.num_bins
                ).astype(float)
                log_mass = _log_likelihoods(rec_counts, matrix) + log_prior
                probs = _normalize_log_mass(log_mass)
                if int(probs.argmax()) == assigned[idx]:
                    hits += 1
                mass += probs[assigned[idx]]
            acc_trials.append(hits / len(paper_bins))
            mass_trials.append(mass / len(paper_bins))
        points.append(
            CurvePoint(n, float(np.mean(acc_trials)), float(np.mean(mass_trials)))
        )
    return points


def log_error_slope(points: Sequence[CurvePoint]) -> float:
    """Least-squares slope of ln(1 - mean correct mass) against N.

    A negative slope means the residual error shrinks (at least)
    exponentially as more papers are scored.
    """
    if len(points) < 2:
        raise ValueError("need at least 2 curve points to fit a slope")
    ns = np.array([p.n_papers for p in points], dtype=float)
    err = np.array([max(1.0 - p.mean_correct_mass, 1e-300) for p in points])
    slope, _ = np.polyfit(ns, np.log(err), 1)
    return float(slope)
