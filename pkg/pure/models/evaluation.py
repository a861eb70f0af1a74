from typing import Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator
from .custom_types import ImageId
from .geometry import BoundingBox


class GroundTruthSet(BaseModel):
    image_id: ImageId
    boxes: list[BoundingBox] = []
    class_labels: Optional[list[str]] = None
    image_width: Optional[float] = Field(None, gt=0)
    image_height: Optional[float] = Field(None, gt=0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_labels(self):
        if self.class_labels is not None and len(self.class_labels) != len(self.boxes):
            raise ValueError("class_labels must be parallel to boxes")
        return self


class MatchPair(BaseModel):
    prediction_index: int
    truth_index: int
    iou: float = Field(..., gt=0.0, le=1.0)

    model_config = ConfigDict(frozen=True)


class MatchResult(BaseModel):
    pairs: list[MatchPair] = []
    unmatched_predictions: list[int] = []
    unmatched_ground_truths: list[int] = []

    model_config = ConfigDict(frozen=True)


class EvaluationRecord(BaseModel):
    image_id: ImageId
    avg_iou: float = Field(..., ge=0.0, le=1.0)
    n_pairs: int = Field(0, ge=0)
    tp: int = Field(..., ge=0)
    fp: int = Field(..., ge=0)
    fn: int = Field(..., ge=0)
    precision: float = Field(..., ge=0.0, le=1.0)
    recall: float = Field(..., ge=0.0, le=1.0)
    f1: float = Field(..., ge=0.0, le=1.0)
    threshold: float

    model_config = ConfigDict(frozen=True)


class MetricAggregate(BaseModel):
    aggregation: Literal["per_image_mean", "pooled"]
    avg_iou: float
    precision: float
    recall: float
    f1: float


class DatasetSummary(BaseModel):
    """Dataset-level metrics under both aggregation schemes."""

    n_images: int
    tp: int
    fp: int
    fn: int
    per_image_mean: MetricAggregate
    pooled: MetricAggregate


class EvaluateRequest(BaseModel):
    predictions: list[BoundingBox] = []
    truths: GroundTruthSet
    iou_threshold: float = 0.5
    class_aware: bool = False
    prediction_labels: Optional[list[Optional[str]]] = None
