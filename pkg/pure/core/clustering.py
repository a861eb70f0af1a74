"""DBSCAN over box centers.

Points are scanned in input order. A point is core when at least
``min_samples`` points (itself included) lie within Euclidean distance
``epsilon``. A border point belongs to the first cluster whose expansion
reaches it, so results are reproducible for a given input order.
"""
from collections import deque
from typing import Sequence
import numpy as np
from loguru import logger
from pure.exceptions import EmptyInput
from pure.models.geometry import Point2
from pure.models.uncertainty import NOISE, ClusterAssignment, DbscanParams


def neighborhoods(points: Sequence[Point2], epsilon: float) -> list[np.ndarray]:
    """Indices within ``epsilon`` of each point, ascending, the point itself included."""
    coords = np.array([p.as_tuple() for p in points], dtype=np.float64)
    dx = coords[:, None, 0] - coords[None, :, 0]
    dy = coords[:, None, 1] - coords[None, :, 1]
    within = np.hypot(dx, dy) <= epsilon
    return [np.flatnonzero(row) for row in within]


def dbscan(points: Sequence[Point2], params: DbscanParams) -> ClusterAssignment:
    if len(points) == 0:
        raise EmptyInput("DBSCAN needs at least one point")

    neighbors = neighborhoods(points, params.epsilon)
    core = [len(n) >= params.min_samples for n in neighbors]
    labels = [NOISE] * len(points)
    n_clusters = 0

    for seed, is_core in enumerate(core):
        if labels[seed] != NOISE or not is_core:
            continue
        cluster_id = n_clusters
        n_clusters += 1
        labels[seed] = cluster_id
        frontier = deque(neighbors[seed].tolist())
        while frontier:
            j = frontier.popleft()
            if labels[j] != NOISE:
                continue
            labels[j] = cluster_id
            if core[j]:
                frontier.extend(k for k in neighbors[j].tolist() if labels[k] == NOISE)

    assignment = ClusterAssignment(labels=labels, core=core)
    logger.debug(
        "dbscan: {n} points | {clusters} clusters | {noise} noise | eps={eps} min_samples={min_samples}",
        n=len(points),
        clusters=n_clusters,
        noise=assignment.noise_count,
        eps=params.epsilon,
        min_samples=params.min_samples,
    )
    return assignment
