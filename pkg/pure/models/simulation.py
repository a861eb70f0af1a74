from typing import Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator
from .custom_types import NonNegativeFloat, Probability
from .evaluation import GroundTruthSet
from .prediction import PredictionSet


class SceneSpec(BaseModel):
    image_width: int = Field(1280, gt=0)
    image_height: int = Field(720, gt=0)
    n_objects: tuple[int, int] = (1, 4)
    box_size: tuple[float, float] = (40.0, 160.0)
    seed: int = Field(0, ge=0)
    min_separation: NonNegativeFloat = 200.0
    max_retries: int = Field(1000, ge=1)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_ranges(self):
        low, high = self.n_objects
        if low < 0 or low > high:
            raise ValueError(f"n_objects range {self.n_objects} is empty or negative")
        smallest, largest = self.box_size
        if smallest <= 0 or smallest > largest:
            raise ValueError(f"box_size range {self.box_size} is empty or non-positive")
        if largest > min(self.image_width, self.image_height):
            raise ValueError("box_size range does not fit in the image")
        return self


class NoiseModel(BaseModel):
    """Perturbations applied to ground truth to emulate MC-dropout detections."""

    corner_sigma: NonNegativeFloat = 0.0
    miss_rate: float = Field(0.0, ge=0.0, lt=1.0)
    spurious_rate: NonNegativeFloat = 0.0
    seed: int = Field(0, ge=0)
    spurious_size: tuple[float, float] = (20.0, 120.0)
    dropout_ratio: Optional[Probability] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_spurious_size(self):
        smallest, largest = self.spurious_size
        if smallest < 1.0 or smallest > largest:
            raise ValueError(f"spurious_size range {self.spurious_size} is invalid")
        return self


class SimulationResult(BaseModel):
    truths: GroundTruthSet
    predictions: PredictionSet


class SimulateRequest(BaseModel):
    scene: SceneSpec = SceneSpec()
    noise: NoiseModel = NoiseModel()
    t_runs: int = Field(20, ge=1)
    image_id: Optional[str] = None
