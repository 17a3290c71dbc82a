"""Seeded generative models for desk-scale citation corpora.

Each model is a mixture of author-quality classes, each class a full
citation-bin distribution. Sampling is reproducible and order-independent:
every author draws from a private substream derived from (master seed,
author index), so generating authors in any order, or in parallel, yields
the same corpus.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Mapping

import numpy as np

from .corpus import (
    BinningScheme,
    CitationDistribution,
    CitationRecord,
    Corpus,
    Paper,
    SPIRES_DISTRIBUTION,
    SPIRES_SCHEME,
)

__all__ = [
    "GenerativeModel",
    "SyntheticCorpus",
    "PRESET_NAMES",
    "tilted_distributions",
    "preset_model",
    "sample_corpus",
    "model_from_json",
]

PRESET_NAMES = ("separated", "homogeneous", "table1_global")

# Authors with no papers in the unbounded top bin still need a concrete
# citation number when sampled; cap that bin at 10x its lower edge
# (500 -> 5000 for the default scheme).
_TOP_BIN_CAP_FACTOR = 10


@dataclass(frozen=True)
class GenerativeModel:
    """Mixture of author-quality classes over a citation-binning scheme."""

    class_distributions: tuple[CitationDistribution, ...]
    class_weights: tuple[float, ...]
    papers_per_author: int | tuple[int, int]
    scheme: BinningScheme = SPIRES_SCHEME

    def __post_init__(self):
        if not self.class_distributions:
            raise ValueError("a model needs at least one quality class")
        if len(self.class_weights) != len(self.class_distributions):
            raise ValueError("class_weights must match class_distributions")
        if any(w < 0 for w in self.class_weights):
            raise ValueError("class weights must be non-negative")
        if abs(sum(self.class_weights) - 1.0) > 1e-9:
            raise ValueError(f"class weights must sum to 1, got {sum(self.class_weights)}")
        for dist in self.class_distributions:
            if dist.num_bins != self.scheme.num_bins:
                raise ValueError("every class distribution must match the scheme")
        if isinstance(self.papers_per_author, tuple):
            lo, hi = self.papers_per_author
            if not (0 <= lo <= hi):
                raise ValueError(f"invalid papers_per_author range: {self.papers_per_author}")
        elif self.papers_per_author < 0:
            raise ValueError("papers_per_author must be >= 0")

    @property
    def num_classes(self) -> int:
        return len(self.class_distributions)


@dataclass(frozen=True)
class SyntheticCorpus:
    """A sampled corpus plus its ground-truth class labels.

    ``true_classes`` is meaningful only inside the synthetic world; real
    corpora have no such labels.
    """

    corpus: Corpus
    true_classes: Mapping[str, int]


def tilted_distributions(
    separation: float,
    num_classes: int = 10,
    base: CitationDistribution = SPIRES_DISTRIBUTION,
) -> tuple[CitationDistribution, ...]:
    """Stochastically ordered class distributions from an exponential tilt.

    Class k reweights the base distribution by exp(separation * (k - mid) * i)
    over bin index i, with mid the middle class, then renormalizes. Larger k
    shifts mass to higher citation bins; separation 0 leaves every class
    equal to the base. Centering the exponent on the middle class keeps low
    and high classes distinguishable at the same time instead of piling all
    of them onto the top bin.
    """
    probs = base.as_array()
    idx = np.arange(probs.size)
    mid = (num_classes - 1) / 2.0
    rows = []
    for k in range(num_classes):
        tilted = probs * np.exp(separation * (k - mid) * idx)
        rows.append(CitationDistribution(tuple(tilted / tilted.sum())))
    return tuple(rows)


def preset_model(
    name: str,
    papers_per_author: int | tuple[int, int] = 50,
    separation: float = 0.5,
    num_classes: int = 10,
) -> GenerativeModel:
    """Named generative models.

    ``table1_global``: one class drawing every paper from the SPIRES
    citation-summary distribution. ``homogeneous``: alias of the same
    single-class world, used as the no-structure null. ``separated``:
    ``num_classes`` classes tilted apart by ``separation`` (see
    :func:`tilted_distributions`), uniformly weighted.
    """
    if name in ("table1_global", "homogeneous"):
        return GenerativeModel(
            class_distributions=(SPIRES_DISTRIBUTION,),
            class_weights=(1.0,),
            papers_per_author=papers_per_author,
        )
    if name == "separated":
        rows = tilted_distributions(separation, num_classes)
        return GenerativeModel(
            class_distributions=rows,
            class_weights=(1.0 / num_classes,) * num_classes,
            papers_per_author=papers_per_author,
        )
    raise ValueError(f"unknown preset {name!r} (choose from: {', '.join(PRESET_NAMES)})")


def _bin_intervals(scheme: BinningScheme) -> tuple[np.ndarray, np.ndarray]:
    """Inclusive integer (low, high) sampling interval per bin."""
    lows = np.asarray(scheme.boundaries, dtype=np.int64)
    highs = np.empty_like(lows)
    highs[:-1] = lows[1:] - 1
    highs[-1] = lows[-1] * _TOP_BIN_CAP_FACTOR
    return lows, highs


def sample_corpus(model: GenerativeModel, num_authors: int, seed: int) -> SyntheticCorpus:
    """Draw a corpus of ``num_authors`` authors from a generative model.

    Per author: a quality class from the mixture weights, a paper count,
    then per paper a citation bin from the class distribution and a concrete
    citation count uniform over the bin's integer interval. Fully
    determined by (model, num_authors, seed).
    """
    if num_authors < 1:
        raise ValueError(f"num_authors must be >= 1, got {num_authors}")
    width = max(5, len(str(num_authors - 1)))
    lows, highs = _bin_intervals(model.scheme)
    class_probs = np.asarray(model.class_weights, dtype=float)
    class_probs = class_probs / class_probs.sum()
    bin_probs = [d.as_array() / d.as_array().sum() for d in model.class_distributions]
    records = []
    true_classes: dict[str, int] = {}
    for index in range(num_authors):
        rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
        author_id = f"author-{index:0{width}d}"
        klass = int(rng.choice(model.num_classes, p=class_probs))
        if isinstance(model.papers_per_author, tuple):
            lo, hi = model.papers_per_author
            n_papers = int(rng.integers(lo, hi + 1))
        else:
            n_papers = model.papers_per_author
        bins = rng.choice(model.scheme.num_bins, size=n_papers, p=bin_probs[klass])
        citations = rng.integers(lows[bins], highs[bins] + 1)
        papers = tuple(Paper(citations=int(c)) for c in citations)
        records.append(CitationRecord(author_id=author_id, papers=papers))
        true_classes[author_id] = klass
    return SyntheticCorpus(corpus=Corpus(tuple(records)), true_classes=true_classes)


def model_from_json(source: str | Path | IO[str]) -> GenerativeModel:
    """Load a custom model from the JSON scheme
    ``{classes: [{weight, probabilities[]}], papers_per_author}``.

    ``papers_per_author`` may be an integer or a two-element [low, high]
    range; an optional ``boundaries`` array overrides the default scheme.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = json.load(source)
    if not isinstance(data, dict) or "classes" not in data:
        raise ValueError("model JSON must be an object with a 'classes' array")
    scheme = (
        BinningScheme(tuple(data["boundaries"]))
        if data.get("boundaries")
        else SPIRES_SCHEME
    )
    dists = []
    weights = []
    for i, cls in enumerate(data["classes"]):
        if "weight" not in cls or "probabilities" not in cls:
            raise ValueError(f"class #{i} needs 'weight' and 'probabilities'")
        weights.append(float(cls["weight"]))
        dists.append(CitationDistribution(tuple(cls["probabilities"])))
    ppa = data.get("papers_per_author", 50)
    if isinstance(ppa, list):
        ppa = (int(ppa[0]), int(ppa[1]))
    else:
        ppa = int(ppa)
    return GenerativeModel(
        class_distributions=tuple(dists),
        class_weights=tuple(weights),
        papers_per_author=ppa,
        scheme=scheme,
    )
