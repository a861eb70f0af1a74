"""Seeded stand-in for a Monte-Carlo dropout detector.

Scenes are random ground-truth layouts; runs are perturbed copies of the
ground truth. All randomness comes from numpy's Philox counter-based
generator, keyed by the seed and (for runs) the CRC-32 of the image id, so
every scene and every prediction set is reproducible in isolation.
"""
import math
import zlib
from typing import Optional
import numpy as np
from loguru import logger
from pure.exceptions import InfeasibleScene
from pure.models.evaluation import GroundTruthSet
from pure.models.geometry import BoundingBox
from pure.models.prediction import Detection, PredictionSet
from pure.models.simulation import NoiseModel, SceneSpec

# Dropout ratios of a standard sweep: 0.10, 0.15, ..., 0.50
DROPOUT_RATIOS = tuple(round(0.10 + 0.05 * i, 2) for i in range(9))

# Minimum side length of an emitted box, in pixels
MIN_BOX_SIDE = 1.0


def make_generator(seed: int, *salt: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *salt])))


def image_salt(image_id: str) -> int:
    return zlib.crc32(image_id.encode("utf-8"))


def generate_scene(spec: SceneSpec, image_id: Optional[str] = None) -> GroundTruthSet:
    """Place boxes uniformly so that every pair of centers is farther apart than ``min_separation``."""
    rng = make_generator(spec.seed)
    low, high = spec.n_objects
    n_objects = int(rng.integers(low, high, endpoint=True))
    smallest, largest = spec.box_size

    boxes: list[BoundingBox] = []
    centers: list[tuple[float, float]] = []
    for _ in range(n_objects):
        for _ in range(spec.max_retries):
            width, height = rng.uniform(smallest, largest, size=2)
            x1 = rng.uniform(0.0, spec.image_width - width)
            y1 = rng.uniform(0.0, spec.image_height - height)
            center = (x1 + width / 2, y1 + height / 2)
            if all(math.dist(center, other) > spec.min_separation for other in centers):
                break
        else:
            raise InfeasibleScene(
                f"could not place object {len(boxes) + 1} of {n_objects} with separation "
                f"{spec.min_separation} after {spec.max_retries} retries"
            )
        centers.append(center)
        boxes.append(BoundingBox(x1=float(x1), y1=float(y1), x2=float(x1 + width), y2=float(y1 + height)))

    return GroundTruthSet(
        image_id=image_id or f"scene-{spec.seed:08d}",
        boxes=boxes,
        class_labels=["Car"] * len(boxes),
        image_width=spec.image_width,
        image_height=spec.image_height,
    )


def clamp_box(x1: float, y1: float, x2: float, y2: float, width: float, height: float) -> BoundingBox:
    """Clamp to the image, keeping x2 >= x1 + 1 and y2 >= y1 + 1."""
    x1 = min(max(x1, 0.0), width - MIN_BOX_SIDE)
    y1 = min(max(y1, 0.0), height - MIN_BOX_SIDE)
    x2 = min(max(x2, x1 + MIN_BOX_SIDE), width)
    y2 = min(max(y2, y1 + MIN_BOX_SIDE), height)
    return BoundingBox(x1=float(x1), y1=float(y1), x2=float(x2), y2=float(y2))


def image_bounds(truths: GroundTruthSet) -> tuple[float, float]:
    if truths.image_width is not None and truths.image_height is not None:
        return truths.image_width, truths.image_height
    # Unknown image size: use the truths' extent
    width = max((b.x2 for b in truths.boxes), default=MIN_BOX_SIDE)
    height = max((b.y2 for b in truths.boxes), default=MIN_BOX_SIDE)
    return max(width, MIN_BOX_SIDE), max(height, MIN_BOX_SIDE)


def simulate_runs(truths: GroundTruthSet, noise: NoiseModel, t_runs: int) -> PredictionSet:
    """Emit ``t_runs`` perturbed detection runs of the ground truth.

    Each truth survives a run with probability 1 - miss_rate and has each
    corner coordinate jittered by Gaussian noise; Poisson(spurious_rate)
    uniformly placed false boxes are added per run.
    """
    if t_runs < 1:
        raise ValueError("t_runs must be at least 1")
    rng = make_generator(noise.seed, image_salt(truths.image_id))
    width, height = image_bounds(truths)
    labels = truths.class_labels or [None] * len(truths.boxes)
    small, large = noise.spurious_size

    detections: list[Detection] = []
    for run in range(t_runs):
        for truth, label in zip(truths.boxes, labels):
            missed = rng.random() < noise.miss_rate
            jitter = rng.normal(0.0, noise.corner_sigma, size=4)
            if missed:
                continue
            box = truth if noise.corner_sigma == 0.0 else clamp_box(
                truth.x1 + jitter[0],
                truth.y1 + jitter[1],
                truth.x2 + jitter[2],
                truth.y2 + jitter[3],
                width,
                height,
            )
            detections.append(Detection(box=box, run_index=run, class_label=label))

        for _ in range(int(rng.poisson(noise.spurious_rate))):
            box_w = min(rng.uniform(small, large), width)
            box_h = min(rng.uniform(small, large), height)
            x1 = rng.uniform(0.0, width - box_w)
            y1 = rng.uniform(0.0, height - box_h)
            detections.append(
                Detection(box=clamp_box(x1, y1, x1 + box_w, y1 + box_h, width, height), run_index=run)
            )

    logger.debug(
        "simulate: image {image_id} | {n} detections over {t} runs | sigma={sigma} miss={miss} spurious={spurious}",
        image_id=truths.image_id,
        n=len(detections),
        t=t_runs,
        sigma=noise.corner_sigma,
        miss=noise.miss_rate,
        spurious=noise.spurious_rate,
    )
    return PredictionSet(
        image_id=truths.image_id,
        t_runs=t_runs,
        dropout_ratio=noise.dropout_ratio,
        detections=detections,
    )


def noise_for_dropout(
    p: float,
    sigma_per_unit: float = 40.0,
    miss_per_unit: float = 0.2,
    spurious_rate: float = 0.0,
    seed: int = 0,
) -> NoiseModel:
    """Map a dropout ratio to detector noise: more dropout, more jitter and more misses."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"dropout ratio must lie in [0, 1], got {p}")
    return NoiseModel(
        corner_sigma=p * sigma_per_unit,
        miss_rate=min(p * miss_per_unit, 0.99),
        spurious_rate=spurious_rate,
        seed=seed,
        dropout_ratio=p,
    )
