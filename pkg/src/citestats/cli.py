"""Command-line frontend.

Commands: score, eval-indicator, curve, homogeneity, rank, simulate.
Exit codes: 0 on success, 2 on usage or input errors. Diagnostics go to
stderr; data goes to stdout or the --out file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import bayes, homogeneity as homog
from .corpus import (
    BinningScheme,
    CitationDistribution,
    CitationRecord,
    Corpus,
    SPIRES_DISTRIBUTION,
    SPIRES_SCHEME,
    bin_record,
    load_corpus,
    load_scheme,
    serialize_corpus,
)
from .improbability import unlikelihood_r
from .indicators import resolve_indicator
from .synthetic import PRESET_NAMES, model_from_json, preset_model, sample_corpus

__all__ = ["main"]

_MAX_SEED = 2**64 - 1


def _seed(text: str) -> int:
    value = int(text)
    if not (0 <= value <= _MAX_SEED):
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _ns_list(text: str) -> list[int]:
    if not text.strip():
        return []
    return [int(part) for part in text.split(",")]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citestats",
        description="Citation-record statistics: unlikelihood scoring, "
        "indicator evaluation, and cross-field comparison.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="corpus file (.json parsed as JSON, else CSV)")
    common.add_argument(
        "--format",
        choices=("table", "csv", "json"),
        default="table",
        help="output format (default: table)",
    )
    common.add_argument("--bins", help="binning-scheme config (JSON)")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--seed", type=_seed, default=0, help="master RNG seed")

    analysis = argparse.ArgumentParser(add_help=False)
    analysis.add_argument(
        "--indicator",
        default="mean_citations",
        help="indicator name (mean_citations, median_citations, total_citations, "
        "max_citations, h_index, papers_per_year, hash)",
    )
    analysis.add_argument("--num-bins", type=int, default=10, help="author bins (default 10)")
    analysis.add_argument(
        "--pseudocount", type=float, default=0.5, help="smoothing pseudocount (default 0.5)"
    )
    analysis.add_argument(
        "--leave-one-out",
        action="store_true",
        help="remove each author's own papers from their bin's conditionals",
    )

    simulate_src = argparse.ArgumentParser(add_help=False)
    simulate_src.add_argument(
        "--simulate",
        metavar="PRESET",
        choices=PRESET_NAMES,
        help="generate the input corpus from a preset instead of --input",
    )
    simulate_src.add_argument("--authors", type=int, default=1000, help="synthetic authors")
    simulate_src.add_argument("--papers", type=int, default=50, help="papers per author")
    simulate_src.add_argument(
        "--separation", type=float, default=0.5, help="class separation knob"
    )

    p_score = sub.add_parser(
        "score", parents=[common, simulate_src], help="unlikelihood r per author"
    )
    p_score.add_argument(
        "--renormalize",
        action="store_true",
        help="renormalize the bin distribution to sum exactly to 1",
    )
    p_score.set_defaults(func=cmd_score)

    p_eval = sub.add_parser(
        "eval-indicator",
        parents=[common, analysis, simulate_src],
        help="confusion matrix and accuracy metrics for one indicator",
    )
    p_eval.add_argument(
        "--kl-bits", action="store_true", help="report KL divergences in bits"
    )
    p_eval.set_defaults(func=cmd_eval_indicator)

    p_curve = sub.add_parser(
        "curve",
        parents=[common, analysis, simulate_src],
        help="assignment accuracy vs number of papers",
    )
    p_curve.add_argument(
        "--ns", type=_ns_list, required=True, help="comma-separated paper counts"
    )
    p_curve.add_argument("--trials", type=int, default=3, help="subsample trials per N")
    p_curve.set_defaults(func=cmd_curve)

    p_homog = sub.add_parser(
        "homogeneity", parents=[common], help="field-pair homogeneity reports"
    )
    p_homog.set_defaults(func=cmd_homogeneity)

    p_rank = sub.add_parser(
        "rank", parents=[common, analysis], help="within-field percentiles per author"
    )
    p_rank.set_defaults(func=cmd_rank)

    p_sim = sub.add_parser(
        "simulate", parents=[common, simulate_src], help="emit a synthetic corpus"
    )
    p_sim.add_argument("--preset", choices=PRESET_NAMES, help="generative preset")
    p_sim.add_argument("--model", help="custom model JSON file")
    p_sim.add_argument(
        "--classes-out", help="also write ground-truth classes (CSV) to this path"
    )
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def _emit(text: str, args: argparse.Namespace) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_input_corpus(args: argparse.Namespace) -> Corpus:
    if getattr(args, "simulate", None):
        model = preset_model(
            args.simulate, papers_per_author=args.papers, separation=args.separation
        )
        return sample_corpus(model, args.authors, args.seed).corpus
    if not args.input:
        raise ValueError("missing --input (or --simulate where supported)")
    path = Path(args.input)
    if not path.exists():
        raise ValueError(f"input file not found: {path}")
    fmt = "json" if path.suffix.lower() == ".json" else "csv"
    return load_corpus(path, fmt)


def _load_binning(args: argparse.Namespace) -> tuple[BinningScheme, CitationDistribution | None]:
    if args.bins:
        path = Path(args.bins)
        if not path.exists():
            raise ValueError(f"bins config not found: {path}")
        return load_scheme(path)
    return SPIRES_SCHEME, SPIRES_DISTRIBUTION


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _table_text(header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = [
        "  ".join(cell.ljust(w) for cell, w in zip(header, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    lines += [
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows
    ]
    return "\n".join(lines) + "\n"


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def cmd_score(args: argparse.Namespace) -> int:
    corpus = _load_input_corpus(args)
    scheme, dist = _load_binning(args)
    if dist is None:
        raise ValueError(
            "scoring requires bin probabilities; add a 'probabilities' array "
            "to the bins config"
        )
    if args.renormalize:
        dist = dist.renormalized()
    scored = []
    for rec in corpus:
        binned = bin_record(rec, scheme)
        result = unlikelihood_r(binned, dist)
        scored.append((rec.author_id, binned, result))
    scored.sort(key=lambda item: (-item[2].r, item[0]))
    if args.format == "json":
        payload = [
            {
                "author_id": author_id,
                "papers": binned.total,
                "counts": list(binned.counts),
                "log10_probability": result.log10_record,
                "r": result.r,
            }
            for author_id, binned, result in scored
        ]
        _emit(_json_text(payload), args)
        return 0
    header = ["author_id", "papers", "counts", "log10_probability", "r"]
    rows = [
        [
            author_id,
            str(binned.total),
            "|".join(str(c) for c in binned.counts),
            f"{result.log10_record:.4f}",
            f"{result.r:.4f}",
        ]
        for author_id, binned, result in scored
    ]
    text = _csv_text(header, rows) if args.format == "csv" else _table_text(header, rows)
    _emit(text, args)
    return 0


def _confusion_csv(matrix: bayes.ConfusionMatrix) -> str:
    header = ["assigned"] + [str(a) for a in range(matrix.num_bins)] + ["authors"]
    rows = [
        [str(b)]
        + [f"{matrix.matrix[b, a]:.6f}" for a in range(matrix.num_bins)]
        + [str(matrix.row_counts[b])]
        for b in range(matrix.num_bins)
    ]
    return _csv_text(header, rows)


def cmd_eval_indicator(args: argparse.Namespace) -> int:
    corpus = _load_input_corpus(args)
    scheme, _ = _load_binning(args)
    indicator = resolve_indicator(args.indicator)
    binning = bayes.bin_authors(corpus, indicator, args.num_bins)
    conditionals = bayes.conditional_distributions(
        corpus, binning, scheme, args.pseudocount
    )
    posteriors = bayes.author_posteriors(
        corpus, binning, conditionals, args.leave_one_out
    )
    matrix = bayes.confusion_matrix(corpus, binning, conditionals, args.leave_one_out)
    metrics = bayes.assignment_metrics(matrix, posteriors)
    kl_scale = 1.0 / np.log(2.0) if args.kl_bits else 1.0
    kl_unit = "bits" if args.kl_bits else "nats"
    adjacent = [
        (lo, hi, fwd * kl_scale, bwd * kl_scale)
        for lo, hi, fwd, bwd in bayes.adjacent_kl_table(conditionals)
    ]
    if args.format == "json":
        payload = {
            "indicator": args.indicator,
            "num_bins": binning.num_bins,
            "confusion_matrix": {
                "rows": [[float(x) for x in row] for row in matrix.matrix],
                "row_counts": list(matrix.row_counts),
            },
            "metrics": {
                "argmax_accuracy": metrics.argmax_accuracy,
                "mean_correct_mass": metrics.mean_correct_mass,
                "per_bin_accuracy": list(metrics.per_bin_accuracy),
                "per_bin_correct_mass": list(metrics.per_bin_correct_mass),
            },
            "adjacent_kl": [
                {"lower": lo, "upper": hi, "kl_lower_upper": fwd, "kl_upper_lower": bwd}
                for lo, hi, fwd, bwd in adjacent
            ],
            "kl_unit": kl_unit,
        }
        _emit(_json_text(payload), args)
        return 0
    sections = [f"# confusion matrix P(alpha|beta), indicator={args.indicator}"]
    sections.append(_confusion_csv(matrix).rstrip("\n"))
    sections.append("# metrics")
    metrics_rows = [
        ["argmax_accuracy", f"{metrics.argmax_accuracy:.6f}"],
        ["mean_correct_mass", f"{metrics.mean_correct_mass:.6f}"],
    ]
    for b in range(binning.num_bins):
        metrics_rows.append(
            [f"bin_{b}_accuracy", f"{metrics.per_bin_accuracy[b]:.6f}"]
        )
        metrics_rows.append(
            [f"bin_{b}_correct_mass", f"{metrics.per_bin_correct_mass[b]:.6f}"]
        )
    kl_rows = [
        [str(lo), str(hi), f"{fwd:.6g}", f"{bwd:.6g}"] for lo, hi, fwd, bwd in adjacent
    ]
    if args.format == "csv":
        sections.append(_csv_text(["metric", "value"], metrics_rows).rstrip("\n"))
        sections.append(f"# adjacent KL ({kl_unit})")
        sections.append(
            _csv_text(
                ["lower", "upper", "kl_lower_upper", "kl_upper_lower"], kl_rows
            ).rstrip("\n")
        )
    else:
        sections.append(_table_text(["metric", "value"], metrics_rows).rstrip("\n"))
        sections.append(f"# adjacent KL ({kl_unit})")
        sections.append(
            _table_text(
                ["lower", "upper", "kl_lower_upper", "kl_upper_lower"], kl_rows
            ).rstrip("\n")
        )
    _emit("\n".join(sections) + "\n", args)
    return 0


def cmd_curve(args: argparse.Namespace) -> int:
    if not args.ns:
        raise ValueError("empty N list")
    scheme, _ = _load_binning(args)
    indicator = resolve_indicator(args.indicator)
    if args.simulate:
        source = preset_model(
            args.simulate, papers_per_author=max(args.ns), separation=args.separation
        )
        points = bayes.accuracy_curve(
            source,
            indicator,
            args.ns,
            trials=args.trials,
            seed=args.seed,
            num_bins=args.num_bins,
            pseudocount=args.pseudocount,
            num_authors=args.authors,
            scheme=scheme if args.bins else None,
        )
    else:
        corpus = _load_input_corpus(args)
        points = bayes.accuracy_curve(
            corpus,
            indicator,
            args.ns,
            trials=args.trials,
            seed=args.seed,
            num_bins=args.num_bins,
            pseudocount=args.pseudocount,
            scheme=scheme,
        )
    slope = bayes.log_error_slope(points) if len(points) >= 2 else float("nan")
    if args.format == "json":
        payload = {
            "points": [
                {
                    "n_papers": p.n_papers,
                    "argmax_accuracy": p.argmax_accuracy,
                    "mean_correct_mass": p.mean_correct_mass,
                }
                for p in points
            ],
            "ln_error_slope": slope,
        }
        _emit(_json_text(payload), args)
        return 0
    lines = ["N\targmax_accuracy\tmean_correct_mass"]
    lines += [
        f"{p.n_papers}\t{p.argmax_accuracy:.6f}\t{p.mean_correct_mass:.6f}"
        for p in points
    ]
    lines.append(f"# ln_error_slope = {slope:.6f}")
    _emit("\n".join(lines) + "\n", args)
    return 0


def cmd_homogeneity(args: argparse.Namespace) -> int:
    corpus = _load_input_corpus(args)
    scheme, _ = _load_binning(args)
    partition = homog.partition_by_field(corpus)
    tags = sorted(partition.tags())
    if len(tags) < 2:
        print(
            f"notice: only one field ({tags[0]!r}); nothing to compare",
            file=sys.stderr,
        )
        _emit("", args)
        return 0
    reports = []
    for i, tag_a in enumerate(tags):
        for tag_b in tags[i + 1 :]:
            ratio = homog.mean_ratio(partition[tag_a], partition[tag_b])
            counts_a = homog.pooled_bin_counts(partition[tag_a], scheme)
            counts_b = homog.pooled_bin_counts(partition[tag_b], scheme)
            test = homog.chi_square_homogeneity(counts_a, counts_b)
            reports.append((tag_a, tag_b, ratio, test))
    if args.format == "json":
        payload = [
            {
                "field_a": tag_a,
                "field_b": tag_b,
                "mean_ratio": ratio,
                "chi_square": test.chi_square,
                "degrees_of_freedom": test.degrees_of_freedom,
                "p_value": test.p_value,
            }
            for tag_a, tag_b, ratio, test in reports
        ]
        _emit(_json_text(payload), args)
        return 0
    if args.format == "csv":
        rows = [
            [
                tag_a,
                tag_b,
                f"{ratio:.6g}",
                f"{test.chi_square:.6g}",
                str(test.degrees_of_freedom),
                f"{test.p_value:.6g}",
            ]
            for tag_a, tag_b, ratio, test in reports
        ]
        _emit(
            _csv_text(
                ["field_a", "field_b", "mean_ratio", "chi_square", "df", "p_value"],
                rows,
            ),
            args,
        )
        return 0
    blocks = []
    for tag_a, tag_b, ratio, test in reports:
        rows = [
            ["mean_ratio", f"{ratio:.6g}"],
            ["chi_square", f"{test.chi_square:.6g}"],
            ["degrees_of_freedom", str(test.degrees_of_freedom)],
            ["p_value", f"{test.p_value:.6g}"],
        ]
        blocks.append(
            f"{tag_a} vs {tag_b}\n" + _table_text(["metric", "value"], rows).rstrip("\n")
        )
    _emit("\n\n".join(blocks) + "\n", args)
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    corpus = _load_input_corpus(args)
    indicator = resolve_indicator(args.indicator)
    partition = homog.partition_by_field(corpus)
    results = []
    for rec in corpus:
        by_tag: dict[str, list] = {}
        for paper in rec.papers:
            if paper.field_tag:
                by_tag.setdefault(paper.field_tag, []).append(paper)
        if not by_tag:
            continue
        records = {
            tag: CitationRecord(author_id=rec.author_id, papers=tuple(papers))
            for tag, papers in by_tag.items()
        }
        results.append((rec.author_id, homog.cross_field_rank(records, partition, indicator)))
    if args.format == "json":
        payload = [
            {
                "author_id": author_id,
                "combined": rank.combined,
                "fields": {
                    tag: {
                        "papers": rank.weights[tag],
                        "percentile": rank.per_field[tag],
                    }
                    for tag in sorted(rank.per_field)
                },
            }
            for author_id, rank in results
        ]
        _emit(_json_text(payload), args)
        return 0
    header = ["author_id", "field", "papers", "percentile", "combined"]
    rows = []
    for author_id, rank in results:
        for tag in sorted(rank.per_field):
            rows.append(
                [
                    author_id,
                    tag,
                    str(rank.weights[tag]),
                    f"{rank.per_field[tag]:.6f}",
                    f"{rank.combined:.6f}",
                ]
            )
    text = _csv_text(header, rows) if args.format == "csv" else _table_text(header, rows)
    _emit(text, args)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.model:
        path = Path(args.model)
        if not path.exists():
            raise ValueError(f"model file not found: {path}")
        model = model_from_json(path)
        import dataclasses

        model = dataclasses.replace(model, papers_per_author=args.papers)
    else:
        preset = args.preset or args.simulate
        if not preset:
            raise ValueError("simulate needs --preset NAME or --model PATH")
        model = preset_model(
            preset, papers_per_author=args.papers, separation=args.separation
        )
    result = sample_corpus(model, args.authors, args.seed)
    fmt = "json" if args.format == "json" else "csv"
    _emit(serialize_corpus(result.corpus, fmt), args)
    if args.classes_out:
        rows = [
            [author_id, str(result.true_classes[author_id])]
            for author_id in sorted(result.true_classes)
        ]
        with open(args.classes_out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_csv_text(["author_id", "true_class"], rows))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
