import numpy as np
import pytest

from lcsvm import model_selection
from lcsvm.data_io import SampleSet, gen_synthetic
from lcsvm.errors import ConvergenceError, InputError, LcsvmError
from lcsvm.kernels import KernelSpec
from lcsvm.model_selection import (CellResult, GridSpec, cell_fold_kappas, grid_search_cv,
                                   select_best, stratified_kfold)
from lcsvm.svm import SolverSettings


def check_partition(labels, splits, folds):
    labels = np.asarray(labels)
    seen = np.concatenate([val for _, val in splits])
    assert sorted(seen.tolist()) == list(range(labels.size))
    sizes = [len(val) for _, val in splits]
    assert max(sizes) - min(sizes) <= 1
    for train, val in splits:
        assert not set(train) & set(val)
        assert len(train) + len(val) == labels.size
    for cls in np.unique(labels):
        per_fold = [int(np.sum(labels[val] == cls)) for _, val in splits]
        assert max(per_fold) - min(per_fold) <= 1
    assert len(splits) == folds


def test_ten_samples_two_classes_five_folds():
    labels = [0] * 5 + [1] * 5
    splits = stratified_kfold(labels, 5, seed=0)
    check_partition(labels, splits, 5)
    for _, val in splits:
        assert sorted(np.asarray(labels)[val].tolist()) == [0, 1]


def test_leave_one_out_on_single_class():
    splits = stratified_kfold([0] * 6, 6, seed=3)
    assert all(len(val) == 1 for _, val in splits)
    check_partition([0] * 6, splits, 6)


def test_same_seed_same_folds():
    labels = np.repeat([0, 1, 2], [7, 9, 11])
    a = stratified_kfold(labels, 4, seed=12)
    b = stratified_kfold(labels, 4, seed=12)
    for (ta, va), (tb, vb) in zip(a, b):
        np.testing.assert_array_equal(va, vb)
        np.testing.assert_array_equal(ta, tb)
    c = stratified_kfold(labels, 4, seed=13)
    assert any(not np.array_equal(va, vc) for (_, va), (_, vc) in zip(a, c))


def test_random_label_sets_partition_cleanly():
    rng = np.random.default_rng(0)
    for seed in range(20):
        folds = int(rng.integers(2, 6))
        k = int(rng.integers(1, 5))
        sizes = rng.integers(folds, 3 * folds + 1, size=k)
        labels = rng.permutation(np.repeat(np.arange(k), sizes))
        check_partition(labels, stratified_kfold(labels, folds, seed), folds)


def test_small_class_error_names_the_class():
    with pytest.raises(InputError, match="swamp"):
        stratified_kfold([0, 0, 0, 1, 1], 3, seed=0, classes=["water", "swamp"])


def test_grid_validation():
    with pytest.raises(InputError):
        GridSpec(c_values=())
    with pytest.raises(InputError):
        GridSpec(gamma_values=(0.0,))
    with pytest.raises(InputError):
        GridSpec(folds=1)
    with pytest.raises(InputError):
        GridSpec().cells("sigmoid")


def test_grid_cells_order():
    cells = GridSpec(c_values=(1, 10), gamma_values=(0.1, 1)).cells("rbf")
    assert [(c, k.gamma) for c, k in cells] == [(1, 0.1), (1, 1), (10, 0.1), (10, 1)]
    assert len(GridSpec().cells("linear")) == 3
    assert len(GridSpec(coef0_values=(0, 1)).cells("polynomial")) == 6


def test_equal_kappa_prefers_smaller_C_then_parameter():
    cells = [CellResult(100.0, KernelSpec.rbf(0.1), [0.9, 0.9]),
             CellResult(1.0, KernelSpec.rbf(1.0), [0.9, 0.9]),
             CellResult(1.0, KernelSpec.rbf(0.5), [0.9, 0.9]),
             CellResult(10.0, KernelSpec.rbf(0.1), [0.8, 0.8])]
    best = select_best(cells)
    assert (best.C, best.kernel.gamma) == (1.0, 0.5)


def test_failed_cells_are_skipped():
    cells = [CellResult(1.0, KernelSpec.linear(), [], error="boom"),
             CellResult(10.0, KernelSpec.linear(), [0.5])]
    assert select_best(cells).C == 10.0
    with pytest.raises(LcsvmError):
        select_best(cells[:1])


@pytest.fixture(scope="module")
def small_scene():
    return gen_synthetic(7, n_per_class=20).samples


def test_single_cell_grid(small_scene):
    result = grid_search_cv(small_scene, "linear", GridSpec(c_values=(1.0,)))
    assert len(result.cells) == 1
    assert result.best_params == {"C": 1.0, "kind": "linear"}


def test_rbf_grid_best_cell(small_scene):
    result = grid_search_cv(small_scene, "rbf", GridSpec())
    # regression values for seed 7, folds 5, seed 0
    assert result.best_params == {"C": 10.0, "kind": "rbf", "gamma": 0.1}
    assert result.mean_kappa == pytest.approx(0.9625, abs=1e-12)
    assert len(result.cells) == 9
    doc = result.to_dict()
    assert doc["best_params"] == result.best_params
    assert result.to_text().splitlines()[-1].startswith("best: C=10 rbf(gamma=0.1)")


def test_cell_kappas_reproducible(small_scene):
    splits = stratified_kfold(small_scene.labels, 5, 0)
    a = cell_fold_kappas(small_scene, KernelSpec.rbf(1.0), 10.0, splits)
    b = cell_fold_kappas(small_scene, KernelSpec.rbf(1.0), 10.0, splits)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)
    assert all(-1 <= v <= 1 for v in a)


def test_failing_cell_is_recorded(small_scene, monkeypatch):
    real = model_selection.cell_fold_kappas

    def flaky(samples, kernel, C, splits, settings=None):
        if C == 10.0:
            raise ConvergenceError("cap reached", violation=1.0)
        return real(samples, kernel, C, splits, settings)

    monkeypatch.setattr(model_selection, "cell_fold_kappas", flaky)
    result = grid_search_cv(small_scene, "linear", GridSpec(c_values=(1.0, 10.0)))
    assert [c.failed for c in result.cells] == [False, True]
    assert result.cells[1].to_dict()["mean_kappa"] is None
    assert "failed" in result.to_text()


def test_all_cells_failing_raises(small_scene):
    with pytest.raises(LcsvmError):
        grid_search_cv(small_scene, "linear", GridSpec(c_values=(100.0,)),
                       SolverSettings(kkt_tolerance=1e-12, max_passes=1))


def test_single_class_sample_set_rejected_at_training():
    samples = SampleSet(np.arange(10.0).reshape(-1, 1), [0] * 10, ["only"])
    with pytest.raises(InputError):
        grid_search_cv(samples, "linear", GridSpec(c_values=(1.0,)))
