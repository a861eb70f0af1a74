import json
from pathlib import Path
import pytest
from pure.core.io import (
    load_ground_truth_dir,
    parse_kitti_labels,
    parse_predictions,
    parse_report,
    report_format_for,
    write_kitti_labels,
    write_predictions,
    write_report,
)
from pure.exceptions import InvalidBox, ParseError
from pure.models.evaluation import GroundTruthSet
from pure.models.report import REPORT_COLUMNS, ReportDocument, ReportHeader, ReportRow
from tests.oracles import box

VALID = '{"image_id": "a", "run": 0, "x1": 1.0, "y1": 2.0, "x2": 30.0, "y2": 40.0}'
KITTI_CAR = "Car 0.00 0 1.55 100.0 150.0 300.0 280.0 1.50 1.60 3.90 1.00 1.50 20.00 1.57"


def jsonl(*records):
    return "".join(json.dumps(r) + "\n" for r in records)


def record(image_id="a", run=0, x1=1.0, y1=2.0, x2=30.0, y2=40.0, **extra):
    return {"image_id": image_id, "run": run, "x1": x1, "y1": y1, "x2": x2, "y2": y2, **extra}


def test_empty_stream():
    assert parse_predictions("") == []
    assert parse_predictions("\n\n") == []


def test_grouping_by_image():
    stream = jsonl(record(run=0), record(run=1), record(run=1, x1=5.0))
    (ps,) = parse_predictions(stream)
    assert ps.image_id == "a"
    assert ps.t_runs == 2
    assert [d.run_index for d in ps.detections] == [0, 1, 1]


def test_images_keep_first_appearance_order():
    stream = jsonl(record("b"), record("a"), record("b", run=3))
    sets = parse_predictions(stream)
    assert [ps.image_id for ps in sets] == ["b", "a"]
    assert [ps.t_runs for ps in sets] == [4, 1]


def test_optional_fields_and_unknown_keys():
    stream = jsonl(record(confidence=0.9, label="Car", extra_field="ignored"))
    (ps,) = parse_predictions(stream, dropout_ratio=0.3)
    detection = ps.detections[0]
    assert detection.confidence == 0.9
    assert detection.class_label == "Car"
    assert ps.dropout_ratio == 0.3


def test_t_runs_override():
    (ps,) = parse_predictions(jsonl(record(run=0), record(run=2)), t_runs=20)
    assert ps.t_runs == 20


def test_t_runs_override_below_inferred_names_the_line():
    with pytest.raises(ParseError) as excinfo:
        parse_predictions(jsonl(record(run=0), record(run=1), record(run=5)), t_runs=3)
    assert excinfo.value.line == 3


CORRUPTED_LINES = [
    ("not json", ParseError),
    ('{"image_id": "a"', ParseError),
    ("[1, 2, 3]", ParseError),
    ("null", ParseError),
    ("42", ParseError),
    (json.dumps(record(x1=None)), ParseError),
    ('{"image_id": "a", "run": 0, "y1": 2.0, "x2": 30.0, "y2": 40.0}', ParseError),
    ('{"run": 0, "x1": 1.0, "y1": 2.0, "x2": 30.0, "y2": 40.0}', ParseError),
    (json.dumps(record(image_id="")), ParseError),
    (json.dumps(record(run=-1)), ParseError),
    (json.dumps(record(run="first")), ParseError),
    (json.dumps(record(run=1.5)), ParseError),
    (json.dumps(record(x1="left")), ParseError),
    ('{"image_id": "a", "run": 0, "x1": NaN, "y1": 2.0, "x2": 30.0, "y2": 40.0}', ParseError),
    ('{"image_id": "a", "run": 0, "x1": 1.0, "y1": 2.0, "x2": Infinity, "y2": 40.0}', ParseError),
    (json.dumps(record(confidence=1.5)), ParseError),
    (json.dumps(record(confidence=-0.1)), ParseError),
    (json.dumps(record(label=5)), ParseError),
    (json.dumps(record(x1=50.0)), InvalidBox),
    (json.dumps(record(y1=40.0)), InvalidBox),
]


@pytest.mark.parametrize("line, error", CORRUPTED_LINES)
def test_corrupted_line_is_located(line, error):
    stream = VALID + "\n\n" + line + "\n" + VALID + "\n"
    with pytest.raises(error) as excinfo:
        parse_predictions(stream, source="preds.jsonl")
    assert type(excinfo.value) is error
    assert excinfo.value.line == 3
    assert str(excinfo.value).startswith("preds.jsonl:3: ")


def test_error_without_source_names_line():
    with pytest.raises(ParseError, match=r"^line 1: "):
        parse_predictions("oops\n")


def test_unicode_line_separators_stay_inside_records():
    label = "car\u2028left\u2029\u0085"
    stream = json.dumps(record(label=label), ensure_ascii=False) + "\n{broken\n"
    assert "\u2028" in stream
    with pytest.raises(ParseError) as excinfo:
        parse_predictions(stream)
    assert excinfo.value.line == 2

    (ps,) = parse_predictions(json.dumps(record(label=label), ensure_ascii=False) + "\n")
    assert ps.detections[0].class_label == label


def test_crlf_line_endings():
    stream = jsonl(record(run=0), record(run=1)).replace("\n", "\r\n")
    (ps,) = parse_predictions(stream)
    assert ps.t_runs == 2
    truths = parse_kitti_labels(KITTI_CAR + "\r\n" + KITTI_CAR + "\r\n", "x")
    assert truths.class_labels == ["Car", "Car"]


def test_predictions_survive_writing():
    stream = jsonl(record("a", 0), record("a", 1, confidence=0.5), record("b", 0, label="Van"))
    sets = parse_predictions(stream)
    assert parse_predictions(write_predictions(sets)) == sets


def test_kitti_line():
    truths = parse_kitti_labels(KITTI_CAR + "\n", "000001")
    assert truths.image_id == "000001"
    assert [b.as_tuple() for b in truths.boxes] == [(100, 150, 300, 280)]
    assert truths.class_labels == ["Car"]


def test_kitti_dont_care_is_skipped():
    stream = "DontCare -1 -1 -10 500.0 170.0 590.0 190.0 -1 -1 -1 -1000 -1000 -1000 -10\n" + KITTI_CAR + "\n"
    truths = parse_kitti_labels(stream, "x")
    assert truths.class_labels == ["Car"]


def test_kitti_short_dont_care_is_skipped():
    truths = parse_kitti_labels("DontCare -1 -1\n" + KITTI_CAR + "\n", "x")
    assert truths.class_labels == ["Car"]


def test_kitti_empty_file():
    truths = parse_kitti_labels("", "empty")
    assert truths.boxes == []
    assert truths.class_labels == []


@pytest.mark.parametrize(
    "line, error",
    [
        ("Car 0.00 0 1.55 100.0", ParseError),
        ("Car 0.00 0 1.55 a 150.0 300.0 280.0", ParseError),
        ("Car 0.00 0 1.55 300.0 150.0 100.0 280.0", InvalidBox),
    ],
)
def test_kitti_bad_lines(line, error):
    with pytest.raises(error) as excinfo:
        parse_kitti_labels(KITTI_CAR + "\n" + line + "\n", "x", source="x.txt")
    assert excinfo.value.line == 2


def test_kitti_written_labels_parse_back():
    truths = GroundTruthSet(
        image_id="s", boxes=[box(1.5, 2.25, 40.125, 50.0), box(100, 100, 200, 260)], class_labels=["Car", "Van"]
    )
    parsed = parse_kitti_labels(write_kitti_labels(truths), "s")
    assert parsed.boxes == truths.boxes
    assert parsed.class_labels == ["Car", "Van"]


def test_ground_truth_directory(tmp_path: Path):
    (tmp_path / "000002.txt").write_text(KITTI_CAR + "\n", encoding="utf-8")
    (tmp_path / "000001.txt").write_text("", encoding="utf-8")
    (tmp_path / "notes.md").write_text("ignored", encoding="utf-8")
    truths = load_ground_truth_dir(tmp_path)
    assert list(truths) == ["000001", "000002"]
    assert len(truths["000002"].boxes) == 1


def rows():
    return [
        ReportRow(image_id="img-1", uncertainty=12.5, defined=True, noise_count=2, n_clusters=3,
                  avg_iou=0.8125, precision=0.75, recall=1.0, f1=0.8571428571428571),
        ReportRow(image_id="img-2", defined=False, noise_count=0, n_clusters=0),
    ]


def test_empty_report_is_header_only():
    assert write_report(ReportDocument()) == ",".join(REPORT_COLUMNS) + "\n"


def test_one_row_report():
    text = write_report(ReportDocument(rows=rows()[:1]))
    lines = text.splitlines()
    assert len(lines) == 2
    assert lines[1] == "img-1,12.5,true,2,3,0.8125,0.75,1.0,0.8571428571428571"


def test_undefined_row_has_empty_cells():
    line = write_report(ReportDocument(rows=rows()[1:])).splitlines()[1]
    assert line == "img-2,,false,0,0,,,,"


def test_csv_report_rewrites_identically():
    text = write_report(ReportDocument(rows=rows()))
    assert write_report(parse_report(text)) == text


def test_json_report_keeps_header():
    doc = ReportDocument(header=ReportHeader(command="quantify", t_runs=20, eps=100.0, min_samples=3), rows=rows())
    text = write_report(doc, format="json")
    assert parse_report(text, format="json") == doc
    assert write_report(parse_report(text, format="json"), format="json") == text


def test_report_with_wrong_header():
    with pytest.raises(ParseError) as excinfo:
        parse_report("image_id,score\nx,1\n")
    assert excinfo.value.line == 1


def test_report_with_bad_defined_cell():
    text = ",".join(REPORT_COLUMNS) + "\nimg,1.0,yes,0,1,,,,\n"
    with pytest.raises(ParseError) as excinfo:
        parse_report(text, source="r.csv")
    assert excinfo.value.line == 2


@pytest.mark.parametrize("name, expected", [("out.json", "json"), ("OUT.JSON", "json"), ("out.csv", "csv"), ("out", "csv")])
def test_report_format_for(name, expected):
    assert report_format_for(Path(name)) == expected
