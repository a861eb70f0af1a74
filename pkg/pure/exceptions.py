"""Errors raised by the uncertainty pipeline.

Every error carries the process exit code the CLI uses for it:
2 for bad or missing input, 3 when there is not enough data to compute a result.
"""


class PureError(Exception):
    """Base class for pipeline errors."""

    exit_code: int = 2


class EmptyInput(PureError):
    """An operation that needs at least one point received none."""


class DegenerateBox(PureError):
    """A cluster's mean box violates x1 < x2 or y1 < y2."""

    def __init__(self, cluster_id: int, box: tuple[float, float, float, float]):
        self.cluster_id = cluster_id
        self.box = box
        super().__init__(f"cluster {cluster_id} has a degenerate mean box {box}")


class InsufficientSamples(PureError):
    """Sample variance needs at least two values."""


class InvalidThreshold(PureError):
    """IoU threshold outside the open interval (0, 1)."""


class LengthMismatch(PureError):
    """Paired series have different lengths."""


class ConstantSeries(PureError):
    exit_code = 3


class TooFewSamples(PureError):
    exit_code = 3


class InfeasibleScene(PureError):
    """Objects could not be placed with the requested separation."""


class ConvergenceError(PureError):
    """The incomplete beta continued fraction did not converge."""


class MissingGroundTruth(PureError):
    def __init__(self, image_id: str):
        self.image_id = image_id
        super().__init__(f"no ground truth for image '{image_id}'")


class ParseError(PureError):
    """A malformed input line, located by its 1-based line number."""

    def __init__(self, line: int, reason: str, source: str | None = None):
        self.line = line
        self.reason = reason
        self.source = source
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {reason}")


class InvalidBox(ParseError):
    """A parsed box violates x1 < x2 or y1 < y2."""
