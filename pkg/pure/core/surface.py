"""Prediction-surface uncertainty.

The detections of T Monte-Carlo runs are grouped into object hypotheses by
clustering their box centers. For every cluster the convex hull of each of the
four box corners is measured; the cluster's uncertainty is the mean of the four
hull areas and the image uncertainty is the unweighted mean over clusters.
"""
import math
from typing import Sequence
from loguru import logger
from pure.core.clustering import dbscan
from pure.core.geometry import box_center, convex_hull, polygon_area
from pure.exceptions import DegenerateBox, InsufficientSamples
from pure.models.geometry import BoundingBox, Point2
from pure.models.prediction import Detection, PredictionSet
from pure.models.uncertainty import (
    NOISE,
    DbscanParams,
    ObjectCluster,
    RepresentativeBox,
    UncertaintyReport,
)


def collect_centers(ps: PredictionSet) -> list[tuple[Point2, int]]:
    """Box center of every detection, paired with the detection's index."""
    return [(box_center(d.box), index) for index, d in enumerate(ps.detections)]


def prediction_variance(values: Sequence[float]) -> float:
    """Sample variance with the T - 1 denominator, computed in two passes."""
    if len(values) < 2:
        raise InsufficientSamples(f"variance needs at least 2 values, got {len(values)}")
    mean = math.fsum(values) / len(values)
    return math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1)


def build_cluster(cluster_id: int, members: list[Detection]) -> ObjectCluster:
    corner_points = tuple(list(points) for points in zip(*(m.box.corners() for m in members)))
    corner_areas = tuple(polygon_area(convex_hull(points)) for points in corner_points)

    coordinate_variances = None
    variance_uncertainty = None
    if len(members) >= 2:
        columns = zip(*(m.box.as_tuple() for m in members))
        coordinate_variances = tuple(prediction_variance(column) for column in columns)
        variance_uncertainty = math.fsum(coordinate_variances) / 4

    return ObjectCluster(
        cluster_id=cluster_id,
        members=members,
        corner_points=corner_points,
        corner_areas=corner_areas,
        cluster_uncertainty=sum(corner_areas) / 4,
        coordinate_variances=coordinate_variances,
        variance_uncertainty=variance_uncertainty,
    )


def quantify(ps: PredictionSet, params: DbscanParams) -> UncertaintyReport:
    """Cluster the detections of one image and measure its uncertainty.

    Noise detections are left out of every cluster and only counted. An image
    without clusters gets ``defined=False`` and no uncertainty value.
    """
    centers = collect_centers(ps)
    if not centers:
        return UncertaintyReport(
            image_id=ps.image_id,
            t_runs=ps.t_runs,
            dropout_ratio=ps.dropout_ratio,
        )

    assignment = dbscan([center for center, _ in centers], params)
    grouped: list[list[Detection]] = [[] for _ in range(assignment.n_clusters)]
    for (_, index), label in zip(centers, assignment.labels):
        if label != NOISE:
            grouped[label].append(ps.detections[index])

    clusters = [build_cluster(cluster_id, members) for cluster_id, members in enumerate(grouped)]
    uncertainty = None
    if clusters:
        uncertainty = math.fsum(c.cluster_uncertainty for c in clusters) / len(clusters)

    logger.debug(
        "quantify: image {image_id} | {n} detections | {clusters} clusters | {noise} noise | U={u}",
        image_id=ps.image_id,
        n=len(ps.detections),
        clusters=len(clusters),
        noise=assignment.noise_count,
        u=uncertainty,
    )
    return UncertaintyReport(
        image_id=ps.image_id,
        clusters=clusters,
        noise_count=assignment.noise_count,
        uncertainty=uncertainty,
        defined=bool(clusters),
        t_runs=ps.t_runs,
        dropout_ratio=ps.dropout_ratio,
    )


def representative_boxes(report: UncertaintyReport) -> list[RepresentativeBox]:
    """Component-wise mean box of each cluster, ordered by cluster id."""
    boxes = []
    for cluster in sorted(report.clusters, key=lambda c: c.cluster_id):
        n = len(cluster.members)
        x1, y1, x2, y2 = (
            math.fsum(column) / n for column in zip(*(m.box.as_tuple() for m in cluster.members))
        )
        if not (x1 < x2 and y1 < y2):
            raise DegenerateBox(cluster.cluster_id, (x1, y1, x2, y2))
        boxes.append(RepresentativeBox(cluster_id=cluster.cluster_id, box=BoundingBox(x1=x1, y1=y1, x2=x2, y2=y2)))
    return boxes
