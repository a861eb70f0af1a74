"""Matching of predicted boxes to ground truth and IoU-thresholded metrics."""
import math
from typing import Optional, Sequence
from pure.core.geometry import iou
from pure.exceptions import InvalidThreshold, LengthMismatch
from pure.models.evaluation import (
    DatasetSummary,
    EvaluationRecord,
    GroundTruthSet,
    MatchPair,
    MatchResult,
    MetricAggregate,
)
from pure.models.geometry import BoundingBox


def match(
    predictions: Sequence[BoundingBox],
    truths: GroundTruthSet,
    class_aware: bool = False,
    prediction_labels: Optional[Sequence[Optional[str]]] = None,
) -> MatchResult:
    """Greedy one-to-one matching by descending IoU.

    Ties are broken by lower prediction index, then lower truth index. Only
    couples with IoU > 0 are paired. In class-aware mode a couple also needs
    equal labels.
    """
    if class_aware and (prediction_labels is None or len(prediction_labels) != len(predictions)):
        raise LengthMismatch("class-aware matching needs one label per prediction")
    truth_labels = truths.class_labels

    candidates = []
    for p_index, prediction in enumerate(predictions):
        for t_index, truth in enumerate(truths.boxes):
            if class_aware and (truth_labels is None or prediction_labels[p_index] != truth_labels[t_index]):
                continue
            overlap = iou(prediction, truth)
            if overlap > 0.0:
                candidates.append((-overlap, p_index, t_index))
    candidates.sort()

    taken_predictions: set[int] = set()
    taken_truths: set[int] = set()
    pairs = []
    for neg_overlap, p_index, t_index in candidates:
        if p_index in taken_predictions or t_index in taken_truths:
            continue
        taken_predictions.add(p_index)
        taken_truths.add(t_index)
        pairs.append(MatchPair(prediction_index=p_index, truth_index=t_index, iou=-neg_overlap))

    return MatchResult(
        pairs=pairs,
        unmatched_predictions=[i for i in range(len(predictions)) if i not in taken_predictions],
        unmatched_ground_truths=[i for i in range(len(truths.boxes)) if i not in taken_truths],
    )


def ratio(numerator: float, denominator: float) -> float:
    return numerator / denominator if denominator else 0.0


def f1_score(precision: float, recall: float) -> float:
    return ratio(2 * precision * recall, precision + recall)


def evaluate(
    predictions: Sequence[BoundingBox],
    truths: GroundTruthSet,
    t: float = 0.5,
    class_aware: bool = False,
    prediction_labels: Optional[Sequence[Optional[str]]] = None,
) -> EvaluationRecord:
    """Precision, recall, F1 and average IoU of one image at threshold ``t``.

    A matched pair below ``t`` counts as a false positive and a false negative.
    """
    if not 0.0 < t < 1.0:
        raise InvalidThreshold(f"IoU threshold must be in (0, 1), got {t}")

    result = match(predictions, truths, class_aware=class_aware, prediction_labels=prediction_labels)
    tp = sum(1 for pair in result.pairs if pair.iou >= t)
    fp = len(predictions) - tp
    fn = len(truths.boxes) - tp
    avg_iou = ratio(math.fsum(pair.iou for pair in result.pairs), len(result.pairs))
    precision = ratio(tp, tp + fp)
    recall = ratio(tp, tp + fn)

    return EvaluationRecord(
        image_id=truths.image_id,
        avg_iou=min(1.0, avg_iou),
        n_pairs=len(result.pairs),
        tp=tp,
        fp=fp,
        fn=fn,
        precision=precision,
        recall=recall,
        f1=f1_score(precision, recall),
        threshold=t,
    )


def aggregate(records: Sequence[EvaluationRecord]) -> DatasetSummary:
    """Dataset metrics as a mean of per-image values and from pooled counts."""
    n = len(records)
    tp = sum(r.tp for r in records)
    fp = sum(r.fp for r in records)
    fn = sum(r.fn for r in records)
    n_pairs = sum(r.n_pairs for r in records)

    per_image_mean = MetricAggregate(
        aggregation="per_image_mean",
        avg_iou=ratio(math.fsum(r.avg_iou for r in records), n),
        precision=ratio(math.fsum(r.precision for r in records), n),
        recall=ratio(math.fsum(r.recall for r in records), n),
        f1=ratio(math.fsum(r.f1 for r in records), n),
    )
    pooled_precision = ratio(tp, tp + fp)
    pooled_recall = ratio(tp, tp + fn)
    pooled = MetricAggregate(
        aggregation="pooled",
        avg_iou=ratio(math.fsum(r.avg_iou * r.n_pairs for r in records), n_pairs),
        precision=pooled_precision,
        recall=pooled_recall,
        f1=f1_score(pooled_precision, pooled_recall),
    )
    return DatasetSummary(n_images=n, tp=tp, fp=fp, fn=fn, per_image_mean=per_image_mean, pooled=pooled)
