"""Box, hull and overlap primitives."""
import math
from typing import Iterable
from pure.exceptions import EmptyInput
from pure.models.geometry import BoundingBox, Point2, Polygon

# Absolute tolerance of the orientation predicate
ORIENTATION_TOLERANCE = 1e-9


def box_center(b: BoundingBox) -> Point2:
    return Point2(x=b.x1 + (b.x2 - b.x1) / 2, y=b.y1 + (b.y2 - b.y1) / 2)


def cross(o: tuple[float, float], a: tuple[float, float], b: tuple[float, float]) -> float:
    """Z component of (a - o) x (b - o); positive for a counter-clockwise turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point2]) -> Polygon:
    """Monotone chain hull, counter-clockwise, collinear boundary points dropped.

    One distinct point yields a 1-vertex polygon and collinear input yields the
    two extreme points; both have zero area.
    """
    coords = sorted({p.as_tuple() for p in points})
    if not coords:
        raise EmptyInput("convex hull of an empty point set")
    if len(coords) <= 2:
        return Polygon(vertices=[Point2(x=x, y=y) for x, y in coords])

    lower: list[tuple[float, float]] = []
    for p in coords:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= ORIENTATION_TOLERANCE:
            lower.pop()
        lower.append(p)

    upper: list[tuple[float, float]] = []
    for p in reversed(coords):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= ORIENTATION_TOLERANCE:
            upper.pop()
        upper.append(p)

    # Collinear input collapses to the two extremes here
    chain = lower[:-1] + upper[:-1]
    return Polygon(vertices=[Point2(x=x, y=y) for x, y in chain])


def polygon_area(p: Polygon) -> float:
    """Shoelace area. Degenerate polygons have area exactly 0."""
    if p.is_degenerate:
        return 0.0
    vertices = p.vertices
    terms = (
        a.x * b.y - b.x * a.y
        for a, b in zip(vertices, vertices[1:] + vertices[:1])
    )
    return abs(math.fsum(terms)) / 2


def intersection_area(a: BoundingBox, b: BoundingBox) -> float:
    width = min(a.x2, b.x2) - max(a.x1, b.x1)
    height = min(a.y2, b.y2) - max(a.y1, b.y1)
    if width <= 0 or height <= 0:
        return 0.0
    return width * height


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union (Jaccard index) of two boxes."""
    inter = intersection_area(a, b)
    if inter == 0.0:
        return 0.0
    union = a.area + b.area - inter
    return min(1.0, inter / union)
