import math
from typing import Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator
from .custom_types import ImageId, NonNegativeFloat, Probability
from .geometry import BoundingBox, Point2
from .prediction import Detection, PredictionSet

# Label of points that belong to no cluster; never a valid cluster id
NOISE = -1

CORNER_NAMES = ("x1y1", "x1y2", "x2y1", "x2y2")

CornerClouds = tuple[list[Point2], list[Point2], list[Point2], list[Point2]]
CornerAreas = tuple[NonNegativeFloat, NonNegativeFloat, NonNegativeFloat, NonNegativeFloat]


class DbscanParams(BaseModel):
    epsilon: float = Field(100.0, gt=0.0)
    min_samples: int = Field(3, ge=1)

    model_config = ConfigDict(frozen=True)


class ClusterAssignment(BaseModel):
    labels: list[int]
    core: list[bool]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_labels(self):
        if len(self.labels) != len(self.core):
            raise ValueError("labels and core flags must have the same length")
        ids = {label for label in self.labels if label != NOISE}
        if any(label < NOISE for label in self.labels):
            raise ValueError("cluster ids must be >= 0 or NOISE")
        if ids != set(range(len(ids))):
            raise ValueError("cluster ids must be contiguous from 0")
        with_core = {label for label, is_core in zip(self.labels, self.core) if is_core}
        if with_core != ids:
            raise ValueError("every cluster needs at least one core point")
        return self

    @property
    def n_clusters(self) -> int:
        return max(self.labels, default=NOISE) + 1

    @property
    def noise_count(self) -> int:
        return sum(1 for label in self.labels if label == NOISE)


class ObjectCluster(BaseModel):
    """One object hypothesis: MC detections grouped by their box centers."""

    cluster_id: int = Field(..., ge=0)
    members: list[Detection] = Field(..., min_length=1)
    corner_points: CornerClouds
    corner_areas: CornerAreas
    cluster_uncertainty: NonNegativeFloat
    # Single-output variance baseline over x1, y1, x2, y2; absent below two members
    coordinate_variances: Optional[tuple[float, float, float, float]] = None
    variance_uncertainty: Optional[float] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_corners(self):
        for name, points in zip(CORNER_NAMES, self.corner_points):
            if len(points) != len(self.members):
                raise ValueError(f"corner {name} has {len(points)} points for {len(self.members)} members")
        if not math.isclose(self.cluster_uncertainty, sum(self.corner_areas) / 4, rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError("cluster_uncertainty must be the mean of the corner areas")
        return self


class UncertaintyReport(BaseModel):
    image_id: ImageId
    clusters: list[ObjectCluster] = []
    noise_count: int = Field(0, ge=0)
    uncertainty: Optional[NonNegativeFloat] = None
    defined: bool = False
    t_runs: Optional[int] = None
    dropout_ratio: Optional[Probability] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_defined(self):
        if self.defined != (len(self.clusters) >= 1):
            raise ValueError("defined must be true exactly when there is at least one cluster")
        if self.defined and self.uncertainty is None:
            raise ValueError("a defined report needs an uncertainty value")
        if not self.defined and self.uncertainty is not None:
            raise ValueError("an undefined report has no uncertainty value")
        return self

    @property
    def n_detections(self) -> int:
        return sum(len(cluster.members) for cluster in self.clusters) + self.noise_count


class RepresentativeBox(BaseModel):
    cluster_id: int
    box: BoundingBox

    model_config = ConfigDict(frozen=True)


class QuantifyRequest(BaseModel):
    predictions: PredictionSet
    params: DbscanParams = DbscanParams()
