"""Batch wiring shared by the CLI and the HTTP service."""
import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence
from loguru import logger
from pure.core import detmetrics, stats
from pure.core.geometry import iou
from pure.core.simulator import generate_scene, make_generator, simulate_runs
from pure.core.surface import quantify, representative_boxes
from pure.exceptions import ConstantSeries, MissingGroundTruth, TooFewSamples
from pure.models.evaluation import EvaluationRecord, GroundTruthSet
from pure.models.geometry import BoundingBox
from pure.models.prediction import PredictionSet
from pure.models.report import ReportDocument, ReportHeader, ReportRow, SweepRow
from pure.models.simulation import NoiseModel, SceneSpec, SimulationResult
from pure.models.statistics import CorrelationResult
from pure.models.uncertainty import DbscanParams, UncertaintyReport

# Scene seeds of one dataset are seed * SEED_STRIDE + image index
SEED_STRIDE = 1_000_000
_SIGMA_SALT = 0x5167


def quantify_all(prediction_sets: Sequence[PredictionSet], params: DbscanParams) -> list[UncertaintyReport]:
    """Quantify every image; output is sorted by image id."""
    ordered = sorted(prediction_sets, key=lambda ps: ps.image_id)
    return [quantify(ps, params) for ps in ordered]


def quantify_row(report: UncertaintyReport, record: Optional[EvaluationRecord] = None) -> ReportRow:
    metrics = {}
    if record is not None:
        metrics = dict(
            avg_iou=record.avg_iou,
            precision=record.precision,
            recall=record.recall,
            f1=record.f1,
        )
    return ReportRow(
        image_id=report.image_id,
        uncertainty=report.uncertainty,
        defined=report.defined,
        noise_count=report.noise_count,
        n_clusters=len(report.clusters),
        **metrics,
    )


def cluster_label(report: UncertaintyReport, cluster_id: int) -> Optional[str]:
    """Most common class label among a cluster's members."""
    labels = Counter(m.class_label for m in report.clusters[cluster_id].members if m.class_label is not None)
    if not labels:
        return None
    return labels.most_common(1)[0][0]


def evaluate_report(
    report: UncertaintyReport,
    truths: GroundTruthSet,
    t: float,
    class_aware: bool = False,
) -> EvaluationRecord:
    """Evaluate the representative boxes of an image against its ground truth."""
    representatives = representative_boxes(report)
    labels = [cluster_label(report, rep.cluster_id) for rep in representatives] if class_aware else None
    return detmetrics.evaluate(
        [rep.box for rep in representatives],
        truths,
        t=t,
        class_aware=class_aware,
        prediction_labels=labels,
    )


@dataclass
class EvaluationRun:
    reports: list[UncertaintyReport]
    records: list[EvaluationRecord]
    rows: list[ReportRow]


def evaluate_all(
    prediction_sets: Sequence[PredictionSet],
    truths_by_image: dict[str, GroundTruthSet],
    params: DbscanParams,
    t: float,
    allow_missing: bool = False,
    class_aware: bool = False,
) -> EvaluationRun:
    """Quantify and evaluate a dataset.

    Images that have ground truth but no predictions are evaluated with zero
    predictions. Images without ground truth raise ``MissingGroundTruth``
    unless ``allow_missing`` is set, in which case their row has no metrics.
    """
    by_image = {ps.image_id: ps for ps in prediction_sets}
    for image_id, truths in truths_by_image.items():
        if image_id not in by_image:
            by_image[image_id] = PredictionSet(image_id=image_id, t_runs=1)

    reports, records, rows = [], [], []
    for image_id in sorted(by_image):
        report = quantify(by_image[image_id], params)
        truths = truths_by_image.get(image_id)
        if truths is None:
            if not allow_missing:
                raise MissingGroundTruth(image_id)
            logger.warning("no ground truth for image {image_id}, metrics left empty", image_id=image_id)
            reports.append(report)
            rows.append(quantify_row(report))
            continue
        record = evaluate_report(report, truths, t, class_aware=class_aware)
        reports.append(report)
        records.append(record)
        rows.append(quantify_row(report, record))
    return EvaluationRun(reports=reports, records=records, rows=rows)


def image_pairs(rows: Sequence[ReportRow]) -> tuple[list[float], list[float]]:
    """(uncertainty, avg_iou) of every row that has both."""
    usable = [row for row in rows if row.defined and row.uncertainty is not None and row.avg_iou is not None]
    return [row.uncertainty for row in usable], [row.avg_iou for row in usable]


def object_pairs(
    reports: Sequence[UncertaintyReport],
    truths_by_image: dict[str, GroundTruthSet],
) -> tuple[list[float], list[float]]:
    """(cluster uncertainty, IoU of its representative box) for every matched cluster."""
    xs, ys = [], []
    for report in reports:
        truths = truths_by_image.get(report.image_id)
        if truths is None or not report.defined:
            continue
        representatives = representative_boxes(report)
        result = detmetrics.match([rep.box for rep in representatives], truths)
        for pair in result.pairs:
            representative = representatives[pair.prediction_index]
            xs.append(report.clusters[representative.cluster_id].cluster_uncertainty)
            ys.append(iou(representative.box, truths.boxes[pair.truth_index]))
    return xs, ys


def simulate_dataset(
    n_images: int,
    scene: SceneSpec,
    noise: NoiseModel,
    t_runs: int,
    sigma_range: Optional[tuple[float, float]] = None,
) -> list[SimulationResult]:
    """Simulate ``n_images`` scenes with their MC runs.

    Scene i uses seed ``scene.seed * SEED_STRIDE + i`` so that datasets built
    with the same seed share their scenes across noise levels. With
    ``sigma_range`` each image draws its own corner sigma uniformly.
    """
    sigma_rng = make_generator(noise.seed, _SIGMA_SALT) if sigma_range else None
    results = []
    for index in range(n_images):
        image_id = f"img-{index:05d}"
        truths = generate_scene(scene.model_copy(update={"seed": scene.seed * SEED_STRIDE + index}), image_id)
        image_noise = noise
        if sigma_rng is not None:
            low, high = sigma_range
            image_noise = noise.model_copy(update={"corner_sigma": float(sigma_rng.uniform(low, high))})
        predictions = simulate_runs(truths, image_noise, t_runs)
        results.append(SimulationResult(truths=truths, predictions=predictions))
    return results


def try_correlate(xs: Sequence[float], ys: Sequence[float], method: str = "pearson") -> Optional[CorrelationResult]:
    try:
        return stats.correlate(xs, ys, method)
    except (ConstantSeries, TooFewSamples) as exc:
        logger.info("correlation skipped: {reason}", reason=exc)
        return None


def _mean(values: Sequence[float]) -> Optional[float]:
    return math.fsum(values) / len(values) if values else None


def single_pass(predictions: PredictionSet, run: int = 0) -> list[BoundingBox]:
    """Boxes of one MC run, the output a deterministic detector would give."""
    return [d.box for d in predictions.detections if d.run_index == run]


def run_sweep(
    levels: Sequence[tuple[float, NoiseModel]],
    n_images: int,
    scene: SceneSpec,
    t_runs: int,
    params: DbscanParams,
    t: float,
) -> list[tuple[SweepRow, ReportDocument]]:
    """Simulate, quantify, evaluate and correlate once per noise level.

    All levels share scene seeds and noise seeds, so differences between
    levels come from the noise parameters alone. The single-pass baseline
    evaluates the detections of run 0 directly.
    """
    results = []
    for level, noise in levels:
        logger.info(
            "sweep level {level}: sigma={sigma} miss={miss} spurious={spurious}",
            level=level,
            sigma=noise.corner_sigma,
            miss=noise.miss_rate,
            spurious=noise.spurious_rate,
        )
        dataset = simulate_dataset(n_images, scene, noise, t_runs)
        truths_by_image = {item.truths.image_id: item.truths for item in dataset}
        run = evaluate_all([item.predictions for item in dataset], truths_by_image, params, t)
        baseline_records = [
            detmetrics.evaluate(single_pass(item.predictions), item.truths, t=t) for item in dataset
        ]

        xs, ys = image_pairs(run.rows)
        correlation = try_correlate(xs, ys)
        summary = detmetrics.aggregate(run.records)
        row = SweepRow(
            level=level,
            dropout_ratio=noise.dropout_ratio,
            corner_sigma=noise.corner_sigma,
            miss_rate=noise.miss_rate,
            n_images=n_images,
            mean_uncertainty=_mean([r.uncertainty for r in run.rows if r.defined]),
            mean_avg_iou=_mean([r.avg_iou for r in run.records]),
            r=correlation.r if correlation else None,
            p_value=correlation.p_value if correlation else None,
            n_pairs=len(xs),
            mc=summary,
            baseline=detmetrics.aggregate(baseline_records),
        )
        header = ReportHeader(
            command="sweep",
            t_runs=t_runs,
            eps=params.epsilon,
            min_samples=params.min_samples,
            iou_threshold=t,
            dropout_ratio=noise.dropout_ratio,
            noise_sigma=noise.corner_sigma,
            miss_rate=noise.miss_rate,
            spurious_rate=noise.spurious_rate,
            seed=noise.seed,
            n_images=n_images,
            n_objects=scene.n_objects,
        )
        results.append((row, ReportDocument(header=header, rows=run.rows, summary=summary)))
    return results
