from pathlib import Path
from typing import Literal, Optional
from pydantic import BaseModel, Field, model_validator
from .custom_types import Probability

Subcommand = Literal["quantify", "evaluate", "correlate", "simulate", "sweep", "serve"]


class RunConfig(BaseModel):
    """Resolved configuration of one CLI invocation."""

    subcommand: Subcommand
    predictions: Optional[Path] = None
    ground_truth: Optional[Path] = None
    report: Optional[Path] = None
    epsilon: float = Field(100.0, gt=0.0)
    min_samples: int = Field(3, ge=1)
    iou_threshold: float = Field(0.5, gt=0.0, lt=1.0)
    t_runs: int = Field(20, ge=1)
    t_runs_override: bool = False
    noise_sigma: list[float] = [0.0]
    dropout_ratio: Optional[list[Probability]] = None
    sigma_range: Optional[tuple[float, float]] = None
    miss_rate: float = Field(0.0, ge=0.0, lt=1.0)
    spurious_rate: float = Field(0.0, ge=0.0)
    seed: int = Field(0, ge=0)
    n_images: int = Field(100, ge=1)
    n_objects: tuple[int, int] = (1, 4)
    image_width: int = Field(1280, gt=0)
    image_height: int = Field(720, gt=0)
    out: Optional[Path] = None
    format: Literal["csv", "json"] = "csv"
    allow_missing: bool = False
    class_aware: bool = False
    method: Literal["pearson", "spearman"] = "pearson"
    pairing: Literal["image", "object"] = "image"
    host: str = "127.0.0.1"
    port: int = 8000

    @model_validator(mode="after")
    def check_inputs(self):
        needs = {
            "quantify": ["predictions"],
            "evaluate": ["predictions", "ground_truth"],
            "correlate": ["predictions", "ground_truth"] if self.pairing == "object" else ["report"],
            "simulate": ["out"],
        }.get(self.subcommand, [])
        for name in needs:
            path = getattr(self, name)
            if path is None:
                raise ValueError(f"--{name.replace('_', '-')} is required for {self.subcommand}")
            if name != "out" and not path.exists():
                raise ValueError(f"{path} does not exist")
        if any(sigma < 0 for sigma in self.noise_sigma):
            raise ValueError("noise sigma levels must be >= 0")
        if not self.noise_sigma:
            raise ValueError("--noise-sigma needs at least one level")
        if self.dropout_ratio is not None and not self.dropout_ratio:
            raise ValueError("--dropout-ratio needs at least one level")
        if self.sigma_range is not None:
            low, high = self.sigma_range
            if not 0 <= low <= high:
                raise ValueError(f"sigma range {self.sigma_range} is invalid")
            if len(self.dropout_ratio or self.noise_sigma) > 1:
                raise ValueError("--sigma-range draws sigma per image and takes a single noise level")
        return self
