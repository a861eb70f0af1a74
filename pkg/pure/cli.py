"""Command-line entry point.

Exit codes: 0 success, 2 input error, 3 insufficient data.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence
from loguru import logger
from pydantic import ValidationError
from pure.config import LoguruLogConfig, settings
from pure.core import io as pure_io
from pure.core import stats
from pure.core.pipeline import (
    evaluate_all,
    image_pairs,
    object_pairs,
    quantify_all,
    quantify_row,
    run_sweep,
    simulate_dataset,
)
from pure.core.detmetrics import aggregate
from pure.core.simulator import noise_for_dropout
from pure.exceptions import PureError
from pure.models.report import ReportDocument, ReportHeader
from pure.models.run_config import RunConfig
from pure.models.simulation import NoiseModel, SceneSpec
from pure.models.statistics import CorrelationResult
from pure.models.uncertainty import DbscanParams

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INSUFFICIENT = 3


def float_list(value: str) -> list[float]:
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got '{value}'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=settings.eps, help="DBSCAN radius in pixels")
    common.add_argument("--min-samples", type=int, default=settings.min_samples)
    common.add_argument("--iou-threshold", type=float, default=settings.iou_threshold)
    common.add_argument("--t-runs", type=int, default=None, help=f"MC runs per image (default {settings.t_runs})")
    common.add_argument("--seed", type=int, default=settings.seed)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--log-level", default=None)

    noise = argparse.ArgumentParser(add_help=False)
    noise.add_argument("--noise-sigma", type=float_list, default=[0.0], help="corner sigma levels, comma-separated")
    noise.add_argument("--dropout-ratio", type=float_list, default=None, help="dropout ratio levels, comma-separated")
    noise.add_argument("--sigma-range", type=float, nargs=2, default=None, metavar=("LO", "HI"))
    noise.add_argument("--miss-rate", type=float, default=0.0)
    noise.add_argument("--spurious-rate", type=float, default=0.0)
    noise.add_argument("--n-images", type=int, default=100)
    noise.add_argument("--n-objects", type=int, nargs=2, default=[1, 4], metavar=("MIN", "MAX"))

    parser = argparse.ArgumentParser(prog="pure", description="Prediction-surface uncertainty for MC detections")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    quantify = commands.add_parser("quantify", parents=[common], help="per-image uncertainty report")
    quantify.add_argument("--predictions", type=Path, required=True)

    evaluate = commands.add_parser("evaluate", parents=[common], help="uncertainty plus detection metrics")
    evaluate.add_argument("--predictions", type=Path, required=True)
    evaluate.add_argument("--ground-truth", type=Path, required=True)
    evaluate.add_argument("--allow-missing", action="store_true")
    evaluate.add_argument("--class-aware", action="store_true")

    correlate = commands.add_parser("correlate", parents=[common], help="correlate uncertainty with IoU")
    correlate.add_argument("--report", type=Path, default=None)
    correlate.add_argument("--predictions", type=Path, default=None)
    correlate.add_argument("--ground-truth", type=Path, default=None)
    correlate.add_argument("--method", choices=["pearson", "spearman"], default="pearson")
    correlate.add_argument("--pairing", choices=["image", "object"], default="image")

    commands.add_parser("simulate", parents=[common, noise], help="write simulated ground truth and predictions")
    commands.add_parser("sweep", parents=[common, noise], help="simulate and analyse a noise sweep")

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--log-level", default=None)
    return parser


def to_config(args: argparse.Namespace) -> RunConfig:
    values = {key: value for key, value in vars(args).items() if value is not None and key != "log_level"}
    values["epsilon"] = values.pop("eps", settings.eps)
    values["t_runs_override"] = args.__dict__.get("t_runs") is not None
    values.setdefault("t_runs", settings.t_runs)
    values.setdefault("image_width", settings.image_width)
    values.setdefault("image_height", settings.image_height)
    return RunConfig.model_validate(values)


def dbscan_params(config: RunConfig) -> DbscanParams:
    return DbscanParams(epsilon=config.epsilon, min_samples=config.min_samples)


def header_for(config: RunConfig, **extra) -> ReportHeader:
    if config.subcommand in ("simulate", "sweep"):
        extra.setdefault("sigma_range", config.sigma_range)
        extra.setdefault("n_images", config.n_images)
        extra.setdefault("n_objects", config.n_objects)
    return ReportHeader(
        command=config.subcommand,
        t_runs=config.t_runs if config.t_runs_override or config.subcommand in ("simulate", "sweep") else None,
        eps=config.epsilon,
        min_samples=config.min_samples,
        iou_threshold=config.iou_threshold if config.subcommand != "quantify" else None,
        seed=config.seed if config.subcommand in ("simulate", "sweep") else None,
        **extra,
    )


def emit_report(doc: ReportDocument, config: RunConfig, out: Optional[Path] = None):
    out = out or config.out
    text = pure_io.write_report(doc, config.format)
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    if config.format == "csv":
        # CSV holds rows only; parameters and aggregates go alongside
        meta = ReportDocument(header=doc.header, summary=doc.summary)
        out.with_suffix(".meta.json").write_text(meta.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("wrote {n} rows to {out}", n=len(doc.rows), out=out)


def read_predictions(config: RunConfig):
    return pure_io.parse_predictions(
        config.predictions.read_text(encoding="utf-8"),
        t_runs=config.t_runs if config.t_runs_override else None,
        source=str(config.predictions),
    )


def cmd_quantify(config: RunConfig) -> ReportDocument:
    reports = quantify_all(read_predictions(config), dbscan_params(config))
    doc = ReportDocument(header=header_for(config), rows=[quantify_row(report) for report in reports])
    emit_report(doc, config)
    return doc


def cmd_evaluate(config: RunConfig) -> ReportDocument:
    truths = pure_io.load_ground_truth_dir(config.ground_truth)
    run = evaluate_all(
        read_predictions(config),
        truths,
        dbscan_params(config),
        config.iou_threshold,
        allow_missing=config.allow_missing,
        class_aware=config.class_aware,
    )
    doc = ReportDocument(header=header_for(config), rows=run.rows, summary=aggregate(run.records))
    emit_report(doc, config)
    return doc


def cmd_correlate(config: RunConfig) -> CorrelationResult:
    if config.pairing == "object":
        truths = pure_io.load_ground_truth_dir(config.ground_truth)
        reports = quantify_all(read_predictions(config), dbscan_params(config))
        xs, ys = object_pairs(reports, truths)
    else:
        text = config.report.read_text(encoding="utf-8")
        doc = pure_io.parse_report(text, pure_io.report_format_for(config.report), source=str(config.report))
        xs, ys = image_pairs(doc.rows)

    result = stats.correlate(xs, ys, config.method)
    print(f"method={result.method} r={result.r!r} p_value={result.p_value!r} n={result.n}")
    payload = result.model_dump_json()
    if config.out is not None:
        config.out.parent.mkdir(parents=True, exist_ok=True)
        config.out.write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)
    return result


def noise_levels(config: RunConfig) -> list[tuple[float, NoiseModel]]:
    if config.dropout_ratio:
        return [
            (p, noise_for_dropout(p, spurious_rate=config.spurious_rate, seed=config.seed))
            for p in config.dropout_ratio
        ]
    return [
        (
            sigma,
            NoiseModel(
                corner_sigma=sigma,
                miss_rate=config.miss_rate,
                spurious_rate=config.spurious_rate,
                seed=config.seed,
            ),
        )
        for sigma in config.noise_sigma
    ]


def scene_for(config: RunConfig) -> SceneSpec:
    return SceneSpec(
        image_width=config.image_width,
        image_height=config.image_height,
        n_objects=config.n_objects,
        seed=config.seed,
    )


def cmd_simulate(config: RunConfig) -> list[Path]:
    levels = noise_levels(config)
    written = []
    for level, noise in levels:
        directory = config.out if len(levels) == 1 else config.out / f"level-{level!r}"
        dataset = simulate_dataset(config.n_images, scene_for(config), noise, config.t_runs, config.sigma_range)

        truth_dir = directory / "ground_truth"
        truth_dir.mkdir(parents=True, exist_ok=True)
        for item in dataset:
            path = truth_dir / f"{item.truths.image_id}.txt"
            path.write_text(pure_io.write_kitti_labels(item.truths), encoding="utf-8")
            written.append(path)

        predictions_path = directory / "predictions.jsonl"
        predictions_path.write_text(
            pure_io.write_predictions(item.predictions for item in dataset), encoding="utf-8"
        )
        written.append(predictions_path)

        header = header_for(
            config,
            dropout_ratio=noise.dropout_ratio,
            noise_sigma=None if config.sigma_range else noise.corner_sigma,
            miss_rate=noise.miss_rate,
            spurious_rate=noise.spurious_rate,
        )
        manifest = directory / "manifest.json"
        manifest.write_text(header.model_dump_json(indent=2) + "\n", encoding="utf-8")
        written.append(manifest)
        logger.info("simulated {n} images at level {level} into {directory}", n=len(dataset), level=level, directory=directory)
    return written


def cmd_sweep(config: RunConfig):
    results = run_sweep(
        noise_levels(config),
        config.n_images,
        scene_for(config),
        config.t_runs,
        dbscan_params(config),
        config.iou_threshold,
    )
    for row, doc in results:
        if config.out is not None:
            suffix = "json" if config.format == "json" else "csv"
            emit_report(doc, config, config.out / f"level-{row.level!r}.{suffix}")
        print(
            f"level={row.level!r} sigma={row.corner_sigma!r} miss={row.miss_rate!r} "
            f"mean_U={row.mean_uncertainty!r} mean_iou={row.mean_avg_iou!r} "
            f"r={row.r!r} p={row.p_value!r} n={row.n_pairs}"
        )
    if config.out is not None:
        (config.out / "sweep.json").write_text(
            json.dumps([row.model_dump(mode="json") for row, _ in results], indent=2) + "\n",
            encoding="utf-8",
        )
    return results


def cmd_serve(config: RunConfig):
    import uvicorn

    uvicorn.run("pure.main:app", host=config.host, port=config.port)


COMMANDS = {
    "quantify": cmd_quantify,
    "evaluate": cmd_evaluate,
    "correlate": cmd_correlate,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "serve": cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    LoguruLogConfig(level=args.log_level).configure()
    try:
        config = to_config(args)
        COMMANDS[config.subcommand](config)
    except ValidationError as exc:
        message = "; ".join(error["msg"] for error in exc.errors())
        logger.error("invalid configuration: {message}", message=message)
        print(f"pure: {message}", file=sys.stderr)
        return EXIT_INPUT
    except PureError as exc:
        logger.error("{name}: {exc}", name=type(exc).__name__, exc=exc)
        print(f"pure: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        logger.error("I/O failure: {exc}", exc=exc)
        print(f"pure: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
