from typing import Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator
from .custom_types import ImageId, Pixel, Probability
from .geometry import BoundingBox


class Detection(BaseModel):
    box: BoundingBox
    run_index: int = Field(..., ge=0)
    confidence: Optional[Probability] = None
    class_label: Optional[str] = None

    model_config = ConfigDict(frozen=True)


class PredictionSet(BaseModel):
    """All detections for one image across T Monte-Carlo runs."""

    image_id: ImageId
    t_runs: int = Field(..., ge=1)
    dropout_ratio: Optional[Probability] = None
    detections: list[Detection] = []

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_run_indices(self):
        for index, detection in enumerate(self.detections):
            if detection.run_index >= self.t_runs:
                raise ValueError(
                    f"detection {index} has run_index {detection.run_index} but t_runs is {self.t_runs}"
                )
        return self


class PredictionRecord(BaseModel):
    """One line of the prediction JSONL wire format."""

    image_id: ImageId
    run: int = Field(..., ge=0)
    x1: Pixel
    y1: Pixel
    x2: Pixel
    y2: Pixel
    confidence: Optional[Probability] = None
    label: Optional[str] = None

    model_config = ConfigDict(extra="ignore")

    def to_detection(self) -> Detection:
        return Detection(
            box=BoundingBox(x1=self.x1, y1=self.y1, x2=self.x2, y2=self.y2),
            run_index=self.run,
            confidence=self.confidence,
            class_label=self.label,
        )

    @classmethod
    def from_detection(cls, image_id: str, detection: Detection) -> "PredictionRecord":
        box = detection.box
        return cls(
            image_id=image_id,
            run=detection.run_index,
            x1=box.x1,
            y1=box.y1,
            x2=box.x2,
            y2=box.y2,
            confidence=detection.confidence,
            label=detection.class_label,
        )
