"""Citation-record statistics.

A toolkit for three questions about author citation records:

* How improbable is a record? (:mod:`citestats.improbability` scores records
  against a citation-bin distribution with a multinomial unlikelihood r.)
* How well does a scalar indicator discriminate authors?
  (:mod:`citestats.bayes` inverts bin-conditional citation distributions
  with Bayes' theorem and measures re-assignment accuracy.)
* Are two bodies of literature comparable at all?
  (:mod:`citestats.homogeneity` tests sub-corpora for a shared citation
  culture and ranks authors within, then across, their peer groups.)

:mod:`citestats.synthetic` generates seeded desk-scale corpora with
controllable author-quality separation so all of the above can be exercised
without proprietary databases.
"""

from .bayes import (
    AssignmentMetrics,
    AuthorBinning,
    ConditionalDistributions,
    ConfusionMatrix,
    CurvePoint,
    Posterior,
    accuracy_curve,
    adjacent_kl_table,
    assignment_metrics,
    author_posteriors,
    bin_authors,
    conditional_distributions,
    confusion_matrix,
    kl_divergence,
    log_error_slope,
    mean_pairwise_kl,
    posterior,
)
from .corpus import (
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
from .homogeneity import (
    CrossFieldRank,
    FieldPartition,
    HomogeneityReport,
    chi_square_homogeneity,
    cross_field_rank,
    gamma_q,
    mean_ratio,
    partition_by_field,
    percentile_of,
    pooled_bin_counts,
)
from .improbability import (
    Unlikelihood,
    log_max_probability,
    log_record_probability,
    unlikelihood_r,
)
from .indicators import (
    IndicatorKind,
    IndicatorValue,
    evaluate,
    hash_null,
    indicator_value,
    resolve_indicator,
)
from .synthetic import (
    GenerativeModel,
    SyntheticCorpus,
    model_from_json,
    preset_model,
    sample_corpus,
    tilted_distributions,
)

__version__ = "0.1.0"
