import numpy as np
import pytest

from xglearn.engine import (
    CSV_HEADER,
    ExperimentConfig,
    IterationRecord,
    LearningCurve,
    aggregate_f1,
    discovered_red_clusters,
    emit_outputs,
    rasterize_surface,
    read_results_csv,
    run_experiment,
    run_fold,
    summary_report,
    write_results_csv,
)
from xglearn.learner import SvmHyperParams, svm_fit
from xglearn.strategies import StrategyKind
from xglearn.synthdata import BLUE, RED, Dataset, stratified_kfold

from conftest import SMALL_SYNTH

PARAMS = SvmHyperParams()


def small_config(**overrides) -> ExperimentConfig:
    base = dict(
        strategy=StrategyKind.XGL_SIMULATED,
        theta="argmax",
        budget=10,
        folds=3,
        k_clusters=4,
        seed=5,
        resolution=12,
        snapshot_iterations=(),
        synthetic=SMALL_SYNTH,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


# --- config validation and serialization ---


def test_config_rejects_bad_values():
    for kwargs in (
        dict(budget=-1),
        dict(folds=1),
        dict(k_clusters=0),
        dict(w=-0.1),
        dict(resolution=1),
        dict(theta=-2.0),
        dict(theta="hot"),
        dict(budget=5, snapshot_iterations=(6,)),
    ):
        with pytest.raises(ValueError):
            ExperimentConfig(**kwargs)


def test_config_snapshot_defaults_trim_to_budget():
    assert ExperimentConfig().snapshots() == (10, 70, 90, 140)
    assert ExperimentConfig(budget=80).snapshots() == (10, 70)
    assert ExperimentConfig(budget=150, snapshot_iterations=(3, 9)).snapshots() == (3, 9)


def test_config_flat_dict_round_trip():
    config = small_config(theta=0.7, count_labeled_mistakes=False)
    rebuilt = ExperimentConfig.from_flat_dict(config.to_flat_dict())
    assert rebuilt == config


def test_config_from_flat_dict_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown config keys"):
        ExperimentConfig.from_flat_dict({"budget": 10, "gamm": 5})


def test_config_accepts_strategy_strings():
    assert ExperimentConfig(strategy="random").strategy is StrategyKind.RANDOM
    with pytest.raises(ValueError):
        ExperimentConfig(strategy="nonsense")


# --- cluster discovery metric ---


def test_discovered_red_clusters(small_dataset):
    assert discovered_red_clusters(np.zeros(0, dtype=int), small_dataset) == 0
    reds = small_dataset.indices_of(RED)
    assert discovered_red_clusters(reds, small_dataset) == SMALL_SYNTH.n_clusters
    blues = small_dataset.indices_of(BLUE)
    assert discovered_red_clusters(blues, small_dataset) == 0
    one = discovered_red_clusters(reds[:1], small_dataset)
    assert one == 1


def test_discovered_requires_metadata():
    bare = Dataset(x=np.random.default_rng(0).random((4, 2)), y=np.array([RED, RED, BLUE, BLUE], dtype=np.int8))
    with pytest.raises(ValueError):
        discovered_red_clusters(np.array([0]), bare)


# --- surface rasterization ---


def test_rasterize_orientation_and_zero_crossing():
    x = np.array([[0.5, 0.9], [0.5, 0.1]])
    y = np.array([RED, BLUE], dtype=np.int8)
    model = svm_fit(x, y, PARAMS)
    raster = rasterize_surface(model, 11)
    grid = raster.values.reshape(11, 11)  # row = x2 index
    assert grid[10].mean() > 0 > grid[0].mean()  # red on top, blue at bottom
    # decision is antisymmetric about x2 = 0.5 along the center column
    assert abs(grid[5, 5]) < 1e-9
    col = grid[:, 5]
    assert np.allclose(col, -col[::-1], atol=1e-9)


def test_rasterize_constant_model():
    x = np.array([[0.2, 0.2], [0.8, 0.8]])
    model = svm_fit(x, np.array([BLUE, BLUE], dtype=np.int8), PARAMS)
    raster = rasterize_surface(model, 5)
    assert raster.values.shape == (25,)
    assert np.all(raster.values == float(BLUE))


def test_rasterize_validates_resolution(small_model):
    with pytest.raises(ValueError):
        rasterize_surface(small_model, 1)


# --- fold loop ---


def test_passive_is_a_single_record(small_dataset, small_splits):
    curve = run_fold(small_config(strategy=StrategyKind.PASSIVE), small_splits[0], small_dataset)
    assert len(curve.records) == 1
    only = curve.records[0]
    assert only.iteration == 0
    assert only.selected_index is None and not only.switched
    assert only.f1 == curve.passive_f1
    assert curve.switch_iteration is None


def test_budget_zero_yields_initial_record_only(small_dataset, small_splits):
    curve = run_fold(small_config(budget=0, strategy=StrategyKind.RANDOM), small_splits[0], small_dataset)
    assert len(curve.records) == 1
    assert curve.records[0].iteration == 0


def test_human_strategy_rejected_by_batch_engine(small_dataset, small_splits):
    with pytest.raises(ValueError):
        run_fold(small_config(strategy=StrategyKind.XGL_HUMAN), small_splits[0], small_dataset)


def test_run_fold_deterministic(small_dataset, small_splits):
    config = small_config(strategy=StrategyKind.RANDOM, budget=15)
    a = run_fold(config, small_splits[1], small_dataset)
    b = run_fold(config, small_splits[1], small_dataset)
    assert [r for r in a.records] == [r for r in b.records]
    assert a.passive_f1 == b.passive_f1


@pytest.mark.parametrize(
    "strategy",
    [StrategyKind.ACTIVE_UNCERTAINTY, StrategyKind.GUIDED, StrategyKind.RANDOM, StrategyKind.XGL_SIMULATED],
)
def test_selections_are_unique_pool_members(strategy, small_dataset, small_splits):
    config = small_config(strategy=strategy, budget=12)
    curve = run_fold(config, small_splits[0], small_dataset)
    assert len(curve.records) == 13
    picks = [r.selected_index for r in curve.records[1:]]
    assert len(set(picks)) == len(picks)
    assert set(picks) <= set(small_splits[0].train_indices.tolist())
    assert all(r.iteration == i for i, r in enumerate(curve.records))


def test_discovery_is_monotone(small_dataset, small_splits):
    curve = run_fold(small_config(budget=20), small_splits[0], small_dataset)
    series = [r.discovered_red_clusters for r in curve.records]
    assert all(b >= a for a, b in zip(series, series[1:]))
    assert 0 <= series[-1] <= SMALL_SYNTH.n_clusters


def test_pool_exhaustion_truncates(small_dataset):
    tiny = SMALL_SYNTH
    splits = stratified_kfold(small_dataset, 3, seed=5)
    n_train = splits[0].train_indices.size
    config = small_config(strategy=StrategyKind.RANDOM, budget=n_train + 10)
    curve = run_fold(config, splits[0], small_dataset)
    assert curve.truncated
    # initial 5 labels, so the loop can add n_train - 5 points
    assert len(curve.records) == n_train - 5 + 1
    assert tiny.n_clusters >= curve.records[-1].discovered_red_clusters


def test_xgl_replay_contract_small(small_dataset, small_splits):
    config = small_config(budget=45, k_clusters=4)
    for split in small_splits[:2]:
        curve = run_fold(config, split, small_dataset)
        flags = [r.switched for r in curve.records[1:]]
        # at most one False -> True transition, then it sticks
        transitions = sum(1 for a, b in zip(flags, flags[1:]) if a != b)
        assert transitions <= 1
        if transitions == 1:
            assert flags[-1] is True
        for record in curve.records[1:]:
            if not record.switched:
                assert record.preupdate_misclassified is True
                assert record.chosen_cluster is not None
            else:
                assert record.chosen_cluster is None


def test_max_kkt_residual_tracked(small_dataset, small_splits):
    curve = run_fold(small_config(budget=5), small_splits[0], small_dataset)
    assert 0 <= curve.max_kkt_residual <= 1e-3


# --- aggregation ---


def _fake_curve(fold_id, f1s, strategy=StrategyKind.RANDOM):
    records = [
        IterationRecord(
            iteration=i,
            f1=v,
            selected_index=None if i == 0 else i,
            chosen_cluster=None,
            switched=False,
            discovered_red_clusters=0,
        )
        for i, v in enumerate(f1s)
    ]
    return LearningCurve(
        fold_id=fold_id, strategy=strategy, theta=0.0, records=records, passive_f1=0.9
    )


def test_aggregate_identical_curves_has_zero_std():
    curves = [_fake_curve(i, [0.1, 0.5, 0.7]) for i in range(4)]
    mean, std = aggregate_f1(curves)
    assert mean.tolist() == [0.1, 0.5, 0.7]
    assert std.tolist() == [0.0, 0.0, 0.0]


def test_aggregate_truncates_to_shortest():
    curves = [_fake_curve(0, [0.2, 0.4, 0.6, 0.8]), _fake_curve(1, [0.4, 0.6])]
    mean, std = aggregate_f1(curves)
    assert mean.shape == (2,)
    assert np.allclose(mean, [0.3, 0.5])
    with pytest.raises(ValueError):
        aggregate_f1([])


def test_run_experiment_aggregates_and_snapshots():
    config = small_config(budget=6, snapshot_iterations=(0, 3, 6), strategy=StrategyKind.XGL_SIMULATED)
    result = run_experiment(config)
    assert len(result.curves) == 3
    assert result.mean_f1.shape == (7,)
    per_iter = np.array([[r.f1 for r in c.records] for c in result.curves])
    assert np.allclose(result.mean_f1, per_iter.mean(axis=0))
    # snapshots only captured on fold 0
    assert [len(c.snapshots) for c in result.curves] == [3, 0, 0]
    snap = result.curves[0].snapshots[0]
    assert snap.iteration == 0
    assert snap.raster.values.shape == (config.resolution**2,)
    assert snap.medoid_indices is not None and snap.medoid_indices.size == config.k_clusters


# --- persistence and artifacts ---


def test_csv_round_trip_exact(tmp_path):
    curves = [
        _fake_curve(0, [0.123456789012345, 0.5]),
        _fake_curve(1, [1 / 3, 2 / 3]),
    ]
    path = tmp_path / "r.csv"
    write_results_csv(curves, path)
    rows = read_results_csv(path)
    assert len(rows) == 4
    assert [r.f1 for r in rows] == [0.123456789012345, 0.5, 1 / 3, 2 / 3]
    assert rows[0].strategy == "random"
    assert rows[1].selected_index == 1
    assert rows[0].selected_index is None
    header = path.read_text().splitlines()[0]
    assert header == ",".join(CSV_HEADER)


def test_read_results_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        read_results_csv(path)


def test_emit_outputs_artifacts(tmp_path):
    config = small_config(budget=6, snapshot_iterations=(0, 6))
    result = run_experiment(config)
    paths = emit_outputs(result, tmp_path / "out.csv")
    assert paths["csv"].name == "out.csv"
    assert paths["curve"].name == "out_curve.svg"
    assert paths["summary"].name == "out_summary.txt"
    lines = paths["csv"].read_text().splitlines()
    assert len(lines) == 1 + 3 * 7  # header + folds x (budget + 1)
    svg = paths["curve"].read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    snap_files = sorted(p.name for p in tmp_path.glob("out_xgl_simulated_fold0_iter*.svg"))
    assert snap_files == ["out_xgl_simulated_fold0_iter000.svg", "out_xgl_simulated_fold0_iter006.svg"]

    # the mean curve survives the round trip exactly
    rows = read_results_csv(paths["csv"])
    by_fold = {}
    for row in rows:
        by_fold.setdefault(row.fold, []).append(row.f1)
    stack = np.array([by_fold[f] for f in sorted(by_fold)])
    assert np.array_equal(stack.mean(axis=0), result.mean_f1)


def test_emit_outputs_directory_target(tmp_path):
    config = small_config(budget=3, strategy=StrategyKind.RANDOM)
    result = run_experiment(config)
    paths = emit_outputs(result, tmp_path / "artifacts")
    assert paths["csv"] == tmp_path / "artifacts" / "results.csv"
    assert paths["csv"].exists()


def test_summary_report_contents():
    config = small_config(budget=8)
    result = run_experiment(config)
    report = summary_report(result)
    assert "final mean F1" in report
    assert "passive mean F1" in report
    assert "max KKT residual" in report
    assert f"strategy={config.strategy.value}" in report
