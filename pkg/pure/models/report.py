from typing import Optional
from pydantic import BaseModel, ConfigDict
from .custom_types import ImageId
from .evaluation import DatasetSummary

REPORT_COLUMNS = (
    "image_id",
    "uncertainty",
    "defined",
    "noise_count",
    "n_clusters",
    "avg_iou",
    "precision",
    "recall",
    "f1",
)


class ReportHeader(BaseModel):
    """Run configuration echoed into every report."""

    command: str
    t_runs: Optional[int] = None
    eps: float
    min_samples: int
    iou_threshold: Optional[float] = None
    dropout_ratio: Optional[float] = None
    noise_sigma: Optional[float] = None
    miss_rate: Optional[float] = None
    spurious_rate: Optional[float] = None
    sigma_range: Optional[tuple[float, float]] = None
    seed: Optional[int] = None
    n_images: Optional[int] = None
    n_objects: Optional[tuple[int, int]] = None


class ReportRow(BaseModel):
    image_id: ImageId
    uncertainty: Optional[float] = None
    defined: bool
    noise_count: int
    n_clusters: int
    avg_iou: Optional[float] = None
    precision: Optional[float] = None
    recall: Optional[float] = None
    f1: Optional[float] = None

    model_config = ConfigDict(frozen=True)


class ReportDocument(BaseModel):
    header: Optional[ReportHeader] = None
    rows: list[ReportRow] = []
    summary: Optional[DatasetSummary] = None


class SweepRow(BaseModel):
    """One noise level of a sweep experiment."""

    level: float
    dropout_ratio: Optional[float] = None
    corner_sigma: float
    miss_rate: float
    n_images: int
    mean_uncertainty: Optional[float] = None
    mean_avg_iou: Optional[float] = None
    r: Optional[float] = None
    p_value: Optional[float] = None
    n_pairs: int
    mc: Optional[DatasetSummary] = None
    baseline: Optional[DatasetSummary] = None
