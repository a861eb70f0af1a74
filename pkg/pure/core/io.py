"""Readers and writers for predictions, ground truth and reports.

Prediction JSONL: one object per line with keys image_id, run, x1, y1, x2, y2
and optional confidence and label.

KITTI labels: whitespace-separated fields, field 1 the class, fields 5-8
left, top, right, bottom. ``DontCare`` lines are skipped.

Reports: CSV with the fixed column order of ``REPORT_COLUMNS`` or one JSON
document that also carries the run header and dataset summary.
"""
import csv
import io
import json
from pathlib import Path
from typing import Iterable, Literal, Optional
from loguru import logger
from pydantic import ValidationError
from pure.exceptions import InvalidBox, ParseError
from pure.models.evaluation import GroundTruthSet
from pure.models.geometry import BoundingBox
from pure.models.prediction import PredictionRecord, PredictionSet
from pure.models.report import REPORT_COLUMNS, ReportDocument, ReportRow

ReportFormat = Literal["csv", "json"]

KITTI_IGNORED_CLASS = "DontCare"
KITTI_MIN_FIELDS = 8


def _lines(stream: str):
    """Numbered lines, split on line feeds only; JSON strings may hold other Unicode line breaks."""
    for line_number, line in enumerate(stream.split("\n"), start=1):
        yield line_number, line.removesuffix("\r")


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    field = ".".join(str(part) for part in error["loc"]) or "record"
    return f"{field}: {error['msg']}"


def parse_predictions(
    stream: str,
    t_runs: Optional[int] = None,
    dropout_ratio: Optional[float] = None,
    source: Optional[str] = None,
) -> list[PredictionSet]:
    """Group JSONL prediction records by image, keeping input order.

    ``t_runs`` overrides the inferred 1 + max run index, which matters when
    trailing runs produced no detections.
    """
    grouped: dict[str, list[tuple[int, PredictionRecord]]] = {}
    for line_number, line in _lines(stream):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(line_number, f"invalid JSON: {exc.msg}", source) from exc
        if not isinstance(payload, dict):
            raise ParseError(line_number, "record must be a JSON object", source)
        try:
            record = PredictionRecord.model_validate(payload)
        except ValidationError as exc:
            raise ParseError(line_number, _first_error(exc), source) from exc
        if not (record.x1 < record.x2 and record.y1 < record.y2):
            raise InvalidBox(
                line_number,
                f"box ({record.x1}, {record.y1}, {record.x2}, {record.y2}) needs x1 < x2 and y1 < y2",
                source,
            )
        grouped.setdefault(record.image_id, []).append((line_number, record))

    prediction_sets = []
    for image_id, records in grouped.items():
        inferred = 1 + max(record.run for _, record in records)
        runs = inferred
        if t_runs is not None:
            if t_runs < inferred:
                line_number = next(n for n, record in records if record.run >= t_runs)
                raise ParseError(line_number, f"run index exceeds t_runs={t_runs} for image '{image_id}'", source)
            runs = t_runs
        prediction_sets.append(
            PredictionSet(
                image_id=image_id,
                t_runs=runs,
                dropout_ratio=dropout_ratio,
                detections=[record.to_detection() for _, record in records],
            )
        )

    logger.info(
        "parsed {n_sets} images with {n_records} detections{where}",
        n_sets=len(prediction_sets),
        n_records=sum(len(ps.detections) for ps in prediction_sets),
        where=f" from {source}" if source else "",
    )
    return prediction_sets


def write_predictions(prediction_sets: Iterable[PredictionSet]) -> str:
    lines = []
    for ps in prediction_sets:
        for detection in ps.detections:
            record = PredictionRecord.from_detection(ps.image_id, detection)
            lines.append(json.dumps(record.model_dump(exclude_none=True)))
    return "".join(line + "\n" for line in lines)


def parse_kitti_labels(stream: str, image_id: str, source: Optional[str] = None) -> GroundTruthSet:
    boxes: list[BoundingBox] = []
    labels: list[str] = []
    for line_number, line in _lines(stream):
        fields = line.split()
        if not fields:
            continue
        label = fields[0]
        if label == KITTI_IGNORED_CLASS:
            continue
        if len(fields) < KITTI_MIN_FIELDS:
            raise ParseError(line_number, f"expected at least {KITTI_MIN_FIELDS} fields, got {len(fields)}", source)
        try:
            left, top, right, bottom = (float(value) for value in fields[4:8])
        except ValueError as exc:
            raise ParseError(line_number, f"non-numeric box field: {exc}", source) from exc
        try:
            boxes.append(BoundingBox(x1=left, y1=top, x2=right, y2=bottom))
        except ValidationError as exc:
            raise InvalidBox(line_number, _first_error(exc), source) from exc
        labels.append(label)
    return GroundTruthSet(image_id=image_id, boxes=boxes, class_labels=labels)


def write_kitti_labels(truths: GroundTruthSet) -> str:
    """KITTI label lines; fields other than class and box are zero."""
    labels = truths.class_labels or ["Car"] * len(truths.boxes)
    lines = []
    for label, box in zip(labels, truths.boxes):
        coords = " ".join(repr(value) for value in box.as_tuple())
        lines.append(f"{label} 0.00 0 0.00 {coords} 0.00 0.00 0.00 0.00 0.00 0.00 0.00")
    return "".join(line + "\n" for line in lines)


def load_ground_truth_dir(directory: Path) -> dict[str, GroundTruthSet]:
    """One KITTI label file per image; the file stem is the image id."""
    truths = {}
    for path in sorted(directory.glob("*.txt")):
        truths[path.stem] = parse_kitti_labels(path.read_text(encoding="utf-8"), path.stem, source=str(path))
    logger.info("loaded ground truth for {n} images from {directory}", n=len(truths), directory=directory)
    return truths


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report(doc: ReportDocument, format: ReportFormat = "csv") -> str:
    if format == "json":
        return doc.model_dump_json(indent=2) + "\n"
    if format != "csv":
        raise ValueError(f"unknown report format '{format}'")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in doc.rows:
        values = row.model_dump()
        writer.writerow([_format_cell(values[column]) for column in REPORT_COLUMNS])
    return buffer.getvalue()


def _parse_csv_row(line_number: int, cells: dict[str, str], source: Optional[str]) -> ReportRow:
    values = {column: (cells.get(column) or None) for column in REPORT_COLUMNS}
    defined = values["defined"]
    if defined not in ("true", "false"):
        raise ParseError(line_number, f"defined must be true or false, got {defined!r}", source)
    values["defined"] = defined == "true"
    try:
        return ReportRow.model_validate(values)
    except ValidationError as exc:
        raise ParseError(line_number, _first_error(exc), source) from exc


def parse_report(stream: str, format: ReportFormat = "csv", source: Optional[str] = None) -> ReportDocument:
    if format == "json":
        try:
            return ReportDocument.model_validate_json(stream)
        except ValidationError as exc:
            raise ParseError(1, _first_error(exc), source) from exc
    if format != "csv":
        raise ValueError(f"unknown report format '{format}'")

    reader = csv.DictReader(io.StringIO(stream))
    if reader.fieldnames is None:
        return ReportDocument()
    if tuple(reader.fieldnames) != REPORT_COLUMNS:
        raise ParseError(1, f"unexpected report header {','.join(reader.fieldnames)}", source)
    # Data rows start on line 2
    rows = [_parse_csv_row(index, cells, source) for index, cells in enumerate(reader, start=2)]
    return ReportDocument(rows=rows)


def report_format_for(path: Path) -> ReportFormat:
    return "json" if path.suffix.lower() == ".json" else "csv"
