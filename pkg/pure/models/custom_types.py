import math
from typing import Annotated
from pydantic import AfterValidator, Field


# Finite real coordinate in pixel space
def validate_finite(v: float) -> float:
    if not math.isfinite(v):
        raise ValueError("value must be finite")
    return v

Pixel = Annotated[float, AfterValidator(validate_finite)]

NonNegativeFloat = Annotated[float, Field(ge=0.0), AfterValidator(validate_finite)]

Probability = Annotated[float, Field(ge=0.0, le=1.0)]

ImageId = Annotated[str, Field(min_length=1)]
