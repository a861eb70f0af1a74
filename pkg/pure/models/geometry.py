from pydantic import BaseModel, ConfigDict, model_validator
from .custom_types import Pixel


class Point2(BaseModel):
    x: Pixel
    y: Pixel

    model_config = ConfigDict(frozen=True)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


class BoundingBox(BaseModel):
    """Axis-aligned rectangle in pixel coordinates, (x1, y1) top-left."""

    x1: Pixel
    y1: Pixel
    x2: Pixel
    y2: Pixel

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_corners(self):
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise ValueError(
                f"box ({self.x1}, {self.y1}, {self.x2}, {self.y2}) needs x1 < x2 and y1 < y2"
            )
        return self

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    @property
    def area(self) -> float:
        return self.width * self.height

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x1, self.y1, self.x2, self.y2)

    def corners(self) -> tuple[Point2, Point2, Point2, Point2]:
        """Corners in the order (x1,y1), (x1,y2), (x2,y1), (x2,y2)."""
        return (
            Point2(x=self.x1, y=self.y1),
            Point2(x=self.x1, y=self.y2),
            Point2(x=self.x2, y=self.y1),
            Point2(x=self.x2, y=self.y2),
        )


class Polygon(BaseModel):
    """Counter-clockwise vertex list. Fewer than three vertices is degenerate."""

    vertices: list[Point2] = []

    model_config = ConfigDict(frozen=True)

    @property
    def is_degenerate(self) -> bool:
        return len(self.vertices) < 3
