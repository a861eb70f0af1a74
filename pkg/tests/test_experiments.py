"""End-to-end experiments on the simulator; slow, run with ``pytest -m slow``."""
import pytest
from pure.core.pipeline import evaluate_all, image_pairs, run_sweep, simulate_dataset
from pure.core.stats import pearson, spearman
from pure.models.simulation import NoiseModel, SceneSpec
from pure.models.uncertainty import DbscanParams

pytestmark = pytest.mark.slow

PARAMS = DbscanParams()


def test_zero_noise_is_a_fixpoint():
    dataset = simulate_dataset(100, SceneSpec(seed=21), NoiseModel(seed=21), 20)
    truths = {item.truths.image_id: item.truths for item in dataset}
    run = evaluate_all([item.predictions for item in dataset], truths, PARAMS, 0.5)
    for row in run.rows:
        assert row.defined
        assert row.uncertainty == 0.0
        assert row.avg_iou == pytest.approx(1.0)
        assert (row.precision, row.recall) == (1.0, 1.0)


def test_uncertainty_rises_and_accuracy_falls_with_jitter():
    sigmas = [0.0, 1.0, 2.0, 5.0, 10.0, 20.0]
    levels = [(sigma, NoiseModel(corner_sigma=sigma, seed=5)) for sigma in sigmas]
    rows = [row for row, _ in run_sweep(levels, 200, SceneSpec(seed=5), 20, PARAMS, 0.5)]
    mean_u = [row.mean_uncertainty for row in rows]
    mean_iou = [row.mean_avg_iou for row in rows]
    assert spearman(sigmas, mean_u).r == pytest.approx(1.0)
    assert spearman(sigmas, mean_iou).r == pytest.approx(-1.0)


def test_uncertainty_correlates_negatively_with_iou():
    dataset = simulate_dataset(300, SceneSpec(seed=9), NoiseModel(seed=9), 20, sigma_range=(0.0, 15.0))
    truths = {item.truths.image_id: item.truths for item in dataset}
    run = evaluate_all([item.predictions for item in dataset], truths, PARAMS, 0.5)
    xs, ys = image_pairs(run.rows)
    result = pearson(xs, ys)
    assert result.n == 300
    assert result.r < 0
    assert result.p_value < 0.05
