"""Command-line entry point.

Subcommands: pipeline, synth (subspaces | segments), evaluate, preprocess,
metrics. Exit codes: 0 success, 2 usage error, 3 invalid data, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import ingest, metrics, synth
from .config import build_config, parse_k, parse_tau, read_config_file, METHODS
from .errors import (FormatError, NumericalError, ParameterError,
                     UsvClustError, ValidationError)
from .pipeline import evaluate, load_features, run_pipeline, write_outputs


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="usvclust",
        description="Two-step sparse subspace clustering for vocalization "
                    "spectrogram segments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pipe = sub.add_parser("pipeline", help="run the full clustering pipeline")
    pipe.add_argument("--config", help="flat key = value config file")
    pipe.add_argument("--input", help="segment archive (dir or .ssca) or vector CSV")
    pipe.add_argument("--output_dir", help="directory for labels, centroids, metrics")
    pipe.add_argument("--method", choices=METHODS)
    pipe.add_argument("--k", help="cluster count or comma list, e.g. 20,40,60")
    pipe.add_argument("--tau", help="outlier threshold in (-1,1], or preset dba/c57")
    pipe.add_argument("--lambda", dest="lam", type=float,
                      help="L1 weight for lasso_ssc")
    pipe.add_argument("--denoise_eps", type=float,
                      help="zero coefficients below this magnitude")
    pipe.add_argument("--f", type=int, help="target frequency bins")
    pipe.add_argument("--t", type=int, help="target time bins")
    pipe.add_argument("--seed", type=int)
    pipe.add_argument("--export_embedding", action="store_const", const=True,
                      help="also write the clustering-space coordinates")
    pipe.add_argument("--sparsity_k", type=int, help="atom budget for omp_ssc")
    pipe.add_argument("--max_iter", type=int, help="coordinate descent sweep cap")
    pipe.add_argument("--tol", type=float, help="coordinate descent tolerance")
    pipe.add_argument("--dump_coefficients", action="store_const", const=True,
                      help="also write the sparse coefficients as triplets")

    syn = sub.add_parser("synth", help="generate synthetic datasets")
    syn_sub = syn.add_subparsers(dest="synth_kind", required=True)

    ssp = syn_sub.add_parser("subspaces", help="union-of-subspaces vectors")
    ssp.add_argument("--n", type=int, default=3, help="number of subspaces")
    ssp.add_argument("--dim", type=int, default=3, help="dimension of each subspace")
    ssp.add_argument("--points", type=int, default=50, help="points per subspace")
    ssp.add_argument("--ambient", type=int, default=64, help="ambient dimension")
    ssp.add_argument("--noise", type=float, default=0.0, help="noise scale")
    ssp.add_argument("--outliers", type=int, default=0, help="sphere outliers")
    ssp.add_argument("--seed", type=int, default=0)
    ssp.add_argument("--output", default="subspaces.csv", help="vector CSV path")
    ssp.add_argument("--labels", help="truth labels path "
                     "(default: <output stem>_labels.csv)")

    sseg = syn_sub.add_parser("segments", help="procedural spectrogram segments")
    sseg.add_argument("--n", type=int, default=200, help="total segment count")
    sseg.add_argument("--classes", type=int, default=5, help="contour families")
    sseg.add_argument("--outlier_frac", type=float, default=0.0)
    sseg.add_argument("--seed", type=int, default=0)
    sseg.add_argument("--output", default="segments.ssca",
                      help="archive path (.ssca file or directory)")
    sseg.add_argument("--labels", help="truth labels path "
                      "(default: <output stem>_labels.csv)")

    ev = sub.add_parser("evaluate", help="recompute metrics from stored labels")
    ev.add_argument("--labels", required=True, help="labels CSV from a pipeline run")
    ev.add_argument("--input", required=True, help="the original pipeline input")
    ev.add_argument("--f", type=int, default=64)
    ev.add_argument("--t", type=int, default=64)
    ev.add_argument("--method", default="stored",
                    help="method name to repeat in the report")
    ev.add_argument("--output", help="also write the report to this path")

    pre = sub.add_parser("preprocess", help="write preprocessed feature vectors")
    pre.add_argument("--input", required=True, help="segment archive")
    pre.add_argument("--output", required=True, help="vector CSV path")
    pre.add_argument("--f", type=int, default=64)
    pre.add_argument("--t", type=int, default=64)

    met = sub.add_parser("metrics", help="centroid distance statistics")
    met.add_argument("--centroids", required=True,
                     help="centroid directory or vector CSV")

    return parser


def _cmd_pipeline(args) -> int:
    file_values = read_config_file(args.config) if args.config else None
    flag_values = {
        "input": args.input,
        "output_dir": args.output_dir,
        "method": args.method,
        "k": parse_k(args.k) if args.k is not None else None,
        "tau": parse_tau(args.tau) if args.tau is not None else None,
        "lam": args.lam,
        "denoise_eps": args.denoise_eps,
        "f": args.f,
        "t": args.t,
        "seed": args.seed,
        "export_embedding": args.export_embedding,
        "sparsity_k": args.sparsity_k,
        "max_iter": args.max_iter,
        "tol": args.tol,
        "dump_coefficients": args.dump_coefficients,
    }
    cfg = build_config(file_values, flag_values)
    results = run_pipeline(cfg)
    write_outputs(cfg, results)
    for res in results:
        print(f"k={res.k}: " + ", ".join(res.report.to_lines()[2:6]))
    return 0


def _default_labels_path(output: str) -> str:
    p = Path(output)
    return str(p.with_name(p.stem + "_labels.csv"))


def _cmd_synth(args) -> int:
    labels_path = args.labels or _default_labels_path(args.output)
    if args.synth_kind == "subspaces":
        spec = synth.SubspaceSpec(
            ambient_dim=args.ambient, n_subspaces=args.n,
            dims=(args.dim,) * args.n, points_per=args.points,
            noise_sigma=args.noise, outlier_count=args.outliers, seed=args.seed,
        )
        features, labels = synth.generate_subspaces(spec)
        ingest.write_vectors(features.ids, features.data.T, args.output)
        ingest.write_label_rows(features.ids, labels, labels < 0, labels_path)
        print(f"wrote {features.n} vectors to {args.output}")
    else:
        archive, labels = synth.generate_segments(
            args.n, args.classes, args.seed, outlier_frac=args.outlier_frac)
        ingest.write_archive(archive, args.output)
        ingest.write_label_rows(archive.ids, labels, labels < 0, labels_path)
        print(f"wrote {len(archive)} segments to {args.output}")
    print(f"wrote truth labels to {labels_path}")
    return 0


def _cmd_evaluate(args) -> int:
    rep = evaluate(args.labels, args.input, f=args.f, t=args.t, method=args.method)
    for line in rep.to_lines():
        print(line)
    if args.output:
        metrics.write_report(rep, args.output)
    return 0


def _cmd_preprocess(args) -> int:
    features, _ = load_features(args.input, args.f, args.t)
    ingest.write_vectors(features.ids, features.data.T, args.output)
    print(f"wrote {features.n} feature vectors to {args.output}")
    return 0


def _cmd_metrics(args) -> int:
    path = Path(args.centroids)
    if path.is_dir():
        cents = ingest.read_centroid_dir(path)
    else:
        _, cents = ingest.read_vectors(path)
    print("d_cos_hmean=%.17g" % metrics.hmean_cosine_distance(cents))
    print("d_cos_std=%.17g" % metrics.std_cosine_distance(cents))
    return 0


_DISPATCH = {
    "pipeline": _cmd_pipeline,
    "synth": _cmd_synth,
    "evaluate": _cmd_evaluate,
    "preprocess": _cmd_preprocess,
    "metrics": _cmd_metrics,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _DISPATCH[args.command](args)
    except ParameterError as exc:
        print(f"usvclust: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, FormatError) as exc:
        print(f"usvclust: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"usvclust: {exc}", file=sys.stderr)
        return 4
    except UsvClustError as exc:  # pragma: no cover - base class safety net
        print(f"usvclust: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
