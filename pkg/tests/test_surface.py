import math
import pytest
from pure.core.surface import (
    build_cluster,
    collect_centers,
    prediction_variance,
    quantify,
    representative_boxes,
)
from pure.exceptions import DegenerateBox, InsufficientSamples
from pure.models.geometry import BoundingBox
from pure.models.prediction import Detection
from pure.models.uncertainty import DbscanParams, ObjectCluster, UncertaintyReport
from tests.oracles import box, gift_wrap_area, prediction_set, two_pass_variance

DEFAULT = DbscanParams()

# Offsets whose convex hull is the unit square, plus interior points
UNIT_SQUARE_OFFSETS = [
    (0, 0), (1, 0), (1, 1), (0, 1),
    (0.5, 0.5), (0.25, 0.75), (0.75, 0.25), (0.1, 0.9),
    (0.9, 0.1), (0.4, 0.6), (0.6, 0.4), (0.3, 0.3),
]


def jittered(base, offsets):
    x1, y1, x2, y2 = base
    return [box(x1 + dx, y1 + dy, x2 + dx, y2 + dy) for dx, dy in offsets]


def noisy_scene(rng, objects=3, runs=20, sigma=6.0):
    boxes, run_indices = [], []
    for k in range(objects):
        x1, y1 = 50.0 + 400.0 * k, 80.0 + 150.0 * k
        for run in range(runs):
            jitter = rng.normal(0.0, sigma, size=4)
            boxes.append(box(x1 + jitter[0], y1 + jitter[1], x1 + 120 + jitter[2], y1 + 90 + jitter[3]))
            run_indices.append(run)
    return boxes, run_indices


def test_collect_centers():
    assert collect_centers(prediction_set([])) == []
    centers = collect_centers(prediction_set([box(0, 0, 10, 20)]))
    assert [(c.as_tuple(), i) for c, i in centers] == [((5, 10), 0)]

    ps = prediction_set([box(0, 0, 2, 2), box(4, 4, 8, 8), box(10, 0, 12, 4)], runs=[0, 1, 1])
    assert [(c.as_tuple(), i) for c, i in collect_centers(ps)] == [((1, 1), 0), ((6, 6), 1), ((11, 2), 2)]


def test_identical_boxes_have_zero_uncertainty():
    report = quantify(prediction_set([box(100, 100, 200, 180)] * 20), DEFAULT)
    assert report.defined
    assert len(report.clusters) == 1
    assert report.clusters[0].corner_areas == (0.0, 0.0, 0.0, 0.0)
    assert report.uncertainty == 0.0


def test_empty_image_is_undefined():
    report = quantify(prediction_set([], t_runs=20), DEFAULT)
    assert not report.defined
    assert report.uncertainty is None
    assert report.noise_count == 0
    assert report.clusters == []
    assert report.t_runs == 20


def test_unit_square_corner_clouds():
    boxes = jittered((100, 100, 200, 180), UNIT_SQUARE_OFFSETS)
    report = quantify(prediction_set(boxes), DEFAULT)
    (cluster,) = report.clusters
    for points in cluster.corner_points:
        assert gift_wrap_area([p.as_tuple() for p in points]) == pytest.approx(1.0)
    assert cluster.corner_areas == pytest.approx((1.0, 1.0, 1.0, 1.0))
    assert cluster.cluster_uncertainty == pytest.approx(1.0)
    assert report.uncertainty == pytest.approx(1.0)


def test_uncertainty_is_mean_over_clusters():
    small = jittered((0, 0, 50, 50), [(0, 0), (1, 0), (1, 1), (0, 1)])
    large = jittered((1000, 500, 1050, 550), [(0, 0), (3, 0), (3, 3), (0, 3)])
    report = quantify(prediction_set(small + large), DEFAULT)
    assert [c.cluster_uncertainty for c in report.clusters] == pytest.approx([1.0, 9.0])
    assert report.uncertainty == pytest.approx(5.0)


def test_noise_detections_are_counted_but_not_clustered():
    boxes = [box(100, 100, 200, 200)] * 5 + [box(900, 600, 950, 650)]
    report = quantify(prediction_set(boxes), DEFAULT)
    assert report.noise_count == 1
    assert len(report.clusters) == 1
    assert len(report.clusters[0].members) == 5
    assert report.n_detections == len(boxes)


def test_only_noise_is_undefined():
    boxes = [box(0, 0, 10, 10), box(600, 400, 610, 410)]
    report = quantify(prediction_set(boxes), DEFAULT)
    assert not report.defined
    assert report.noise_count == 2


@pytest.mark.parametrize("factor", [2.0, 3.0])
def test_scaling_multiplies_uncertainty_by_square(rng, factor):
    boxes, runs = noisy_scene(rng)
    scaled = [box(b.x1 * factor, b.y1 * factor, b.x2 * factor, b.y2 * factor) for b in boxes]
    base = quantify(prediction_set(boxes, runs=runs), DEFAULT)
    grown = quantify(prediction_set(scaled, runs=runs), DbscanParams(epsilon=DEFAULT.epsilon * factor))
    assert [len(c.members) for c in grown.clusters] == [len(c.members) for c in base.clusters]
    assert grown.uncertainty == pytest.approx(base.uncertainty * factor**2, rel=1e-9)


def spread_about_mean(members, factor):
    means = [math.fsum(column) / len(members) for column in zip(*(m.box.as_tuple() for m in members))]
    return [
        m.model_copy(update={"box": box(*(mean + factor * (c - mean) for mean, c in zip(means, m.box.as_tuple())))})
        for m in members
    ]


@pytest.mark.parametrize("factor", [2.0, 3.0])
def test_spreading_each_cluster_about_its_mean(rng, factor):
    boxes, runs = noisy_scene(rng, objects=3)
    base = quantify(prediction_set(boxes, runs=runs), DEFAULT)
    assert len(base.clusters) == 3

    spread = [spread_about_mean(c.members, factor) for c in base.clusters]
    for cluster, members in zip(base.clusters, spread):
        grown = build_cluster(cluster.cluster_id, members)
        assert grown.cluster_uncertainty == pytest.approx(cluster.cluster_uncertainty * factor**2, rel=1e-9)
        for area, base_area in zip(grown.corner_areas, cluster.corner_areas):
            assert area == pytest.approx(base_area * factor**2, rel=1e-9)

    detections = [m for members in spread for m in members]
    regrown = quantify(prediction_set([d.box for d in detections], runs=[d.run_index for d in detections]), DEFAULT)
    assert [len(c.members) for c in regrown.clusters] == [len(c.members) for c in base.clusters]
    assert regrown.uncertainty == pytest.approx(base.uncertainty * factor**2, rel=1e-9)


def test_translation_leaves_uncertainty_unchanged(rng):
    boxes, runs = noisy_scene(rng)
    moved = [box(b.x1 + 37.5, b.y1 - 12.25, b.x2 + 37.5, b.y2 - 12.25) for b in boxes]
    base = quantify(prediction_set(boxes, runs=runs), DEFAULT)
    shifted = quantify(prediction_set(moved, runs=runs), DEFAULT)
    assert shifted.uncertainty == pytest.approx(base.uncertainty, rel=1e-9)


def test_quantify_is_deterministic(rng):
    boxes, runs = noisy_scene(rng)
    ps = prediction_set(boxes, runs=runs)
    assert quantify(ps, DEFAULT) == quantify(ps, DEFAULT)


def test_corner_areas_match_gift_wrapping(rng):
    boxes, runs = noisy_scene(rng, objects=2, runs=30, sigma=10.0)
    report = quantify(prediction_set(boxes, runs=runs), DEFAULT)
    for cluster in report.clusters:
        for points, area in zip(cluster.corner_points, cluster.corner_areas):
            assert area == pytest.approx(gift_wrap_area([p.as_tuple() for p in points]), rel=1e-9)


def test_representative_boxes():
    same = quantify(prediction_set([box(0, 0, 2, 2)] * 3), DEFAULT)
    assert [r.box.as_tuple() for r in representative_boxes(same)] == [(0, 0, 2, 2)]

    two = quantify(prediction_set([box(0, 0, 2, 2), box(2, 2, 4, 4)]), DbscanParams(min_samples=1))
    assert [r.box.as_tuple() for r in representative_boxes(two)] == [(1, 1, 3, 3)]


def test_representative_boxes_of_empty_report():
    assert representative_boxes(quantify(prediction_set([]), DEFAULT)) == []


def test_degenerate_mean_box_raises():
    flat = Detection.model_construct(box=BoundingBox.model_construct(x1=1.0, y1=0.0, x2=1.0, y2=1.0), run_index=0)
    cluster = ObjectCluster.model_construct(cluster_id=0, members=[flat])
    report = UncertaintyReport.model_construct(image_id="flat", clusters=[cluster], defined=True, uncertainty=0.0)
    with pytest.raises(DegenerateBox) as excinfo:
        representative_boxes(report)
    assert excinfo.value.cluster_id == 0


@pytest.mark.parametrize(
    "values, expected",
    [
        ([4.2] * 6, 0.0),
        ([1, 3], 2.0),
        ([2, 4, 4, 4, 5, 5, 7, 9], 32 / 7),
    ],
)
def test_prediction_variance(values, expected):
    assert prediction_variance(values) == pytest.approx(expected, abs=1e-12)


def test_prediction_variance_matches_two_pass_reference(rng):
    for _ in range(200):
        values = rng.normal(500.0, 30.0, size=int(rng.integers(2, 50))).tolist()
        assert prediction_variance(values) == pytest.approx(two_pass_variance(values), rel=1e-9)


@pytest.mark.parametrize("values", [[], [1.0]])
def test_prediction_variance_needs_two_values(values):
    with pytest.raises(InsufficientSamples):
        prediction_variance(values)


def test_coordinate_variances_per_cluster():
    members = [Detection(box=b, run_index=i) for i, b in enumerate([box(1, 2, 11, 12), box(3, 2, 13, 16)])]
    cluster = build_cluster(0, members)
    assert cluster.coordinate_variances == pytest.approx((2.0, 0.0, 2.0, 8.0))
    assert cluster.variance_uncertainty == pytest.approx(3.0)
    assert cluster.corner_areas == (0.0, 0.0, 0.0, 0.0)


def test_single_member_cluster_has_no_variance():
    cluster = build_cluster(0, [Detection(box=box(0, 0, 5, 5), run_index=0)])
    assert cluster.coordinate_variances is None
    assert cluster.variance_uncertainty is None
    assert cluster.cluster_uncertainty == 0.0
