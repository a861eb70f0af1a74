from typing import Literal
from pydantic import BaseModel, ConfigDict, Field


class CorrelationResult(BaseModel):
    r: float = Field(..., ge=-1.0, le=1.0)
    p_value: float = Field(..., ge=0.0, le=1.0)
    n: int = Field(..., ge=3)
    method: Literal["pearson", "spearman"] = "pearson"

    model_config = ConfigDict(frozen=True)


class CorrelateRequest(BaseModel):
    xs: list[float]
    ys: list[float]
    method: Literal["pearson", "spearman"] = "pearson"
