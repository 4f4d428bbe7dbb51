"""Cross-validated experiment loops and their artifacts.

``run_fold`` walks one fold through the interactive loop: fit on the labeled
set, rebuild the explanation (for XGL), let the strategy pick a point, move
it into the labeled set with its ground-truth label, refit, evaluate on the
held-out fold.  ``run_experiment`` repeats that over every fold and
aggregates; ``emit_outputs`` writes the CSV / SVG / summary files.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from xglearn import svgplot
from xglearn.explainer import GlobalExplanation, build_explanation
from xglearn.learner import (
    SvmHyperParams,
    SvmModel,
    decision_values,
    f1_score,
    predict,
    svm_fit,
)
from xglearn.strategies import (
    THETA_ARGMAX,
    QueryOutcome,
    SimulatedUser,
    StrategyKind,
    guided_query,
    random_query,
    uncertainty_query,
    xgl_simulated_query,
)
from xglearn.synthdata import (
    Dataset,
    FoldSplit,
    SyntheticConfig,
    generate_synthetic,
    initial_training_set,
    stratified_kfold,
)

DEFAULT_SNAPSHOT_ITERATIONS = (10, 70, 90, 140)

# Per-fold streams are derived from the run seed with distinct strides so the
# initial-set draw and the strategy draw never share a stream.
_INIT_STRIDE = 1009
_STRATEGY_STRIDE = 7919

CSV_HEADER = (
    "strategy",
    "theta",
    "fold",
    "iteration",
    "f1",
    "selected_index",
    "chosen_cluster",
    "switched",
    "discovered_red_clusters",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a batch run.

    ``snapshot_iterations=None`` means the default list trimmed to the
    budget.  ``synthetic=None`` derives the dataset from ``seed``.
    """

    strategy: StrategyKind = StrategyKind.XGL_SIMULATED
    theta: float | str = THETA_ARGMAX
    budget: int = 150
    folds: int = 10
    k_clusters: int = 10
    svm: SvmHyperParams = field(default_factory=SvmHyperParams)
    w: float = 0.5
    seed: int = 0
    snapshot_iterations: tuple[int, ...] | None = None
    resolution: int = 100
    synthetic: SyntheticConfig | None = None
    count_labeled_mistakes: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "strategy", StrategyKind(self.strategy))
        if self.budget < 0:
            raise ValueError(f"budget must be >= 0, got {self.budget}")
        if self.folds < 2:
            raise ValueError(f"folds must be >= 2, got {self.folds}")
        if self.k_clusters < 1:
            raise ValueError(f"k_clusters must be >= 1, got {self.k_clusters}")
        if not (np.isfinite(self.w) and self.w >= 0):
            raise ValueError(f"w must be finite and >= 0, got {self.w}")
        if self.resolution < 2:
            raise ValueError(f"resolution must be >= 2, got {self.resolution}")
        SimulatedUser(theta=self.theta)  # validates theta
        if self.snapshot_iterations is not None:
            snaps = tuple(int(s) for s in self.snapshot_iterations)
            object.__setattr__(self, "snapshot_iterations", snaps)
            if any(s < 0 or s > self.budget for s in snaps):
                raise ValueError(f"snapshot iterations must lie in [0, {self.budget}]")

    def snapshots(self) -> tuple[int, ...]:
        if self.snapshot_iterations is not None:
            return self.snapshot_iterations
        return tuple(s for s in DEFAULT_SNAPSHOT_ITERATIONS if s <= self.budget)

    def data_config(self) -> SyntheticConfig:
        if self.synthetic is not None:
            return self.synthetic
        return SyntheticConfig(seed=self.seed)

    def to_flat_dict(self) -> dict:
        data = self.data_config()
        return {
            "strategy": self.strategy.value,
            "theta": self.theta,
            "budget": self.budget,
            "folds": self.folds,
            "k_clusters": self.k_clusters,
            "gamma": self.svm.gamma,
            "c": self.svm.c,
            "w": self.w,
            "seed": self.seed,
            "snapshot_iterations": list(self.snapshots()),
            "resolution": self.resolution,
            "count_labeled_mistakes": self.count_labeled_mistakes,
            "n_blue": data.n_blue,
            "n_red": data.n_red,
            "grid_side": data.grid_side,
            "cluster_std": data.cluster_std,
            "exclusion_radius": data.exclusion_radius,
        }

    @classmethod
    def from_flat_dict(cls, mapping: dict) -> "ExperimentConfig":
        """Build a config from the flat key/value form used by config files."""
        from xglearn.cli import parse_strategy, parse_theta  # CLI string conventions

        known = {
            "strategy",
            "theta",
            "budget",
            "folds",
            "k_clusters",
            "gamma",
            "c",
            "w",
            "seed",
            "snapshot_iterations",
            "resolution",
            "count_labeled_mistakes",
            "n_blue",
            "n_red",
            "grid_side",
            "cluster_std",
            "exclusion_radius",
        }
        unknown = set(mapping) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")

        kwargs: dict = {}
        if "strategy" in mapping:
            raw = mapping["strategy"]
            kwargs["strategy"] = raw if isinstance(raw, StrategyKind) else parse_strategy(str(raw))
        if "theta" in mapping:
            kwargs["theta"] = parse_theta(str(mapping["theta"]))
        for key in ("budget", "folds", "k_clusters", "seed", "resolution"):
            if key in mapping:
                kwargs[key] = int(mapping[key])
        if "gamma" in mapping or "c" in mapping:
            kwargs["svm"] = SvmHyperParams(
                gamma=float(mapping.get("gamma", 100.0)), c=float(mapping.get("c", 100.0))
            )
        if "w" in mapping:
            kwargs["w"] = float(mapping["w"])
        if "snapshot_iterations" in mapping:
            kwargs["snapshot_iterations"] = tuple(int(s) for s in mapping["snapshot_iterations"])
        if "count_labeled_mistakes" in mapping:
            kwargs["count_labeled_mistakes"] = bool(mapping["count_labeled_mistakes"])

        synth_keys = {"n_blue", "n_red", "grid_side", "cluster_std", "exclusion_radius"}
        if synth_keys & set(mapping):
            base = SyntheticConfig(seed=int(mapping.get("seed", 0)))
            kwargs["synthetic"] = replace(
                base,
                n_blue=int(mapping.get("n_blue", base.n_blue)),
                n_red=int(mapping.get("n_red", base.n_red)),
                grid_side=int(mapping.get("grid_side", base.grid_side)),
                cluster_std=float(mapping.get("cluster_std", base.cluster_std)),
                exclusion_radius=float(mapping.get("exclusion_radius", base.exclusion_radius)),
            )
        return cls(**kwargs)


@dataclass(frozen=True)
class IterationRecord:
    """One loop step.  ``preupdate_misclassified`` is a replay diagnostic
    (was the selected point misclassified by the model that selected it);
    it is not part of the CSV schema."""

    iteration: int
    f1: float
    selected_index: int | None
    chosen_cluster: int | None
    switched: bool
    discovered_red_clusters: int
    preupdate_misclassified: bool | None = None


@dataclass
class SurfaceRaster:
    resolution: int
    values: np.ndarray  # (resolution^2,) row-major: row = x2 index, col = x1 index
    model_version: int


@dataclass
class Snapshot:
    """State captured after the refit at one snapshot iteration."""

    strategy: StrategyKind
    theta: float | str
    fold_id: int
    iteration: int
    raster: SurfaceRaster
    labeled_indices: np.ndarray
    medoid_indices: np.ndarray | None = None


@dataclass
class LearningCurve:
    fold_id: int
    strategy: StrategyKind
    theta: float | str
    records: list[IterationRecord]
    passive_f1: float
    truncated: bool = False
    max_kkt_residual: float = 0.0
    snapshots: list[Snapshot] = field(default_factory=list)

    def f1_series(self) -> np.ndarray:
        return np.array([r.f1 for r in self.records])

    @property
    def switch_iteration(self) -> int | None:
        for record in self.records:
            if record.switched:
                return record.iteration
        return None


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    curves: list[LearningCurve]
    mean_f1: np.ndarray
    std_f1: np.ndarray
    dataset: Dataset


def discovered_red_clusters(queried: np.ndarray, dataset: Dataset) -> int:
    """How many generative grid cells have at least one queried red point."""
    if dataset.red_cluster is None:
        raise ValueError("dataset lacks generator metadata (red cluster ids)")
    queried = np.asarray(queried, dtype=np.int64)
    if queried.size == 0:
        return 0
    cells = dataset.red_cluster[queried]
    return int(np.unique(cells[cells >= 0]).size)


def rasterize_surface(model: SvmModel, resolution: int) -> SurfaceRaster:
    """Decision values on the uniform resolution x resolution grid over [0,1]^2."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    axis = np.linspace(0.0, 1.0, resolution)
    points = np.column_stack([np.tile(axis, resolution), np.repeat(axis, resolution)])
    values = decision_values(model, points)
    if not np.all(np.isfinite(values)):
        raise ValueError("decision surface contains non-finite values")
    return SurfaceRaster(resolution=resolution, values=values, model_version=model.version)


def _evaluate(model: SvmModel, dataset: Dataset, fold: FoldSplit) -> float:
    preds = predict(model, dataset.x[fold.test_indices])
    return f1_score(preds, dataset.y[fold.test_indices])


def _fit_labeled(
    config: ExperimentConfig, dataset: Dataset, labeled: np.ndarray, version: int
) -> SvmModel:
    model = svm_fit(dataset.x[labeled], dataset.y[labeled], config.svm)
    model.version = version
    return model


def run_fold(
    config: ExperimentConfig,
    fold: FoldSplit,
    dataset: Dataset,
    capture_snapshots: bool = False,
) -> LearningCurve:
    """Run one fold's interactive loop and return its learning curve.

    The passive baseline (full train split) is fitted regardless of strategy
    so every curve carries a comparable ``passive_f1``.
    """
    if config.strategy == StrategyKind.XGL_HUMAN:
        raise ValueError("xgl_human runs live through the session service, not the batch engine")

    full_model = svm_fit(
        dataset.x[fold.train_indices], dataset.y[fold.train_indices], config.svm
    )
    passive_f1 = _evaluate(full_model, dataset, fold)
    max_kkt = full_model.kkt_residual

    if config.strategy == StrategyKind.PASSIVE:
        records = [
            IterationRecord(
                iteration=0,
                f1=passive_f1,
                selected_index=None,
                chosen_cluster=None,
                switched=False,
                discovered_red_clusters=discovered_red_clusters(fold.train_indices, dataset),
            )
        ]
        return LearningCurve(
            fold_id=fold.fold_id,
            strategy=config.strategy,
            theta=config.theta,
            records=records,
            passive_f1=passive_f1,
            max_kkt_residual=max_kkt,
        )

    is_xgl = config.strategy == StrategyKind.XGL_SIMULATED
    labeled = initial_training_set(
        fold, dataset, seed=config.seed + _INIT_STRIDE * (fold.fold_id + 1)
    )
    unlabeled = np.setdiff1d(fold.train_indices, labeled)
    rng = np.random.default_rng(config.seed + _STRATEGY_STRIDE * (fold.fold_id + 1))
    user = SimulatedUser(theta=config.theta, count_labeled_mistakes=config.count_labeled_mistakes)

    model = _fit_labeled(config, dataset, labeled, version=0)
    max_kkt = max(max_kkt, model.kkt_residual)
    explanation: GlobalExplanation | None = None
    if is_xgl:
        explanation = build_explanation(
            dataset, fold.train_indices, labeled, model, config.k_clusters, config.w,
            seed=config.seed,
        )

    records = [
        IterationRecord(
            iteration=0,
            f1=_evaluate(model, dataset, fold),
            selected_index=None,
            chosen_cluster=None,
            switched=False,
            discovered_red_clusters=discovered_red_clusters(labeled, dataset),
        )
    ]
    snapshot_at = set(config.snapshots()) if capture_snapshots else set()
    snapshots: list[Snapshot] = []

    def capture(iteration: int) -> None:
        medoids = None
        if explanation is not None:
            medoids = np.array([c.medoid_index for c in explanation.clusters])
        snapshots.append(
            Snapshot(
                strategy=config.strategy,
                theta=config.theta,
                fold_id=fold.fold_id,
                iteration=iteration,
                raster=rasterize_surface(model, config.resolution),
                labeled_indices=labeled.copy(),
                medoid_indices=medoids,
            )
        )

    if 0 in snapshot_at:
        capture(0)

    truncated = False
    switched_for_good = False
    last_class: int | None = None
    for iteration in range(1, config.budget + 1):
        if unlabeled.size == 0:
            truncated = True
            break

        if config.strategy == StrategyKind.ACTIVE_UNCERTAINTY:
            outcome = uncertainty_query(model, unlabeled, dataset)
        elif config.strategy == StrategyKind.GUIDED:
            outcome = guided_query(unlabeled, dataset, last_class, rng)
        elif config.strategy == StrategyKind.RANDOM:
            outcome = random_query(unlabeled, rng)
        elif switched_for_good:
            fallback = random_query(unlabeled, rng)
            outcome = QueryOutcome(selected_index=fallback.selected_index, switched=True)
        else:
            assert explanation is not None
            outcome = xgl_simulated_query(explanation, model, dataset, unlabeled, user, rng)
            if outcome.switched:
                switched_for_good = True

        selected = outcome.selected_index
        preupdate_mis = bool(
            predict(model, dataset.x[selected : selected + 1])[0] != dataset.y[selected]
        )
        labeled = np.sort(np.append(labeled, selected))
        unlabeled = unlabeled[unlabeled != selected]
        if config.strategy == StrategyKind.GUIDED:
            last_class = int(dataset.y[selected])

        model = _fit_labeled(config, dataset, labeled, version=iteration)
        max_kkt = max(max_kkt, model.kkt_residual)
        if is_xgl:
            explanation = build_explanation(
                dataset, fold.train_indices, labeled, model, config.k_clusters, config.w,
                seed=config.seed ^ iteration,
            )

        records.append(
            IterationRecord(
                iteration=iteration,
                f1=_evaluate(model, dataset, fold),
                selected_index=selected,
                chosen_cluster=outcome.chosen_cluster,
                switched=outcome.switched,
                discovered_red_clusters=discovered_red_clusters(labeled, dataset),
                preupdate_misclassified=preupdate_mis,
            )
        )
        if iteration in snapshot_at:
            capture(iteration)

    return LearningCurve(
        fold_id=fold.fold_id,
        strategy=config.strategy,
        theta=config.theta,
        records=records,
        passive_f1=passive_f1,
        truncated=truncated,
        max_kkt_residual=max_kkt,
        snapshots=snapshots,
    )


def aggregate_f1(curves: list[LearningCurve]) -> tuple[np.ndarray, np.ndarray]:
    """Per-iteration mean and standard deviation across folds.

    Curves are truncated to the shortest length so early pool exhaustion
    cannot skew the aggregate.
    """
    if not curves:
        raise ValueError("no curves to aggregate")
    length = min(len(c.records) for c in curves)
    stack = np.array([[r.f1 for r in c.records[:length]] for c in curves])
    return stack.mean(axis=0), stack.std(axis=0)


def run_experiment(
    config: ExperimentConfig,
    dataset: Dataset | None = None,
    capture_snapshots: bool = True,
) -> ExperimentResult:
    """Run every fold and aggregate.  Snapshots are captured on fold 0 only."""
    if dataset is None:
        dataset = generate_synthetic(config.data_config())
    splits = stratified_kfold(dataset, config.folds, seed=config.seed)
    curves = [
        run_fold(
            config,
            split,
            dataset,
            capture_snapshots=capture_snapshots and split.fold_id == 0,
        )
        for split in splits
    ]
    mean, std = aggregate_f1(curves)
    return ExperimentResult(config=config, curves=curves, mean_f1=mean, std_f1=std, dataset=dataset)


def _format_theta(theta: float | str) -> str:
    return theta if isinstance(theta, str) else repr(float(theta))


def write_results_csv(curves: list[LearningCurve], path: str | Path) -> None:
    """One row per (fold, iteration); floats serialized with full precision."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for curve in curves:
            for record in curve.records:
                writer.writerow(
                    [
                        curve.strategy.value,
                        _format_theta(curve.theta),
                        curve.fold_id,
                        record.iteration,
                        repr(float(record.f1)),
                        "" if record.selected_index is None else record.selected_index,
                        "" if record.chosen_cluster is None else record.chosen_cluster,
                        int(record.switched),
                        record.discovered_red_clusters,
                    ]
                )


@dataclass(frozen=True)
class ResultRow:
    strategy: str
    theta: str
    fold: int
    iteration: int
    f1: float
    selected_index: int | None
    chosen_cluster: int | None
    switched: bool
    discovered_red_clusters: int


def read_results_csv(path: str | Path) -> list[ResultRow]:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected results header: {header}")
        rows = []
        for raw in reader:
            rows.append(
                ResultRow(
                    strategy=raw[0],
                    theta=raw[1],
                    fold=int(raw[2]),
                    iteration=int(raw[3]),
                    f1=float(raw[4]),
                    selected_index=int(raw[5]) if raw[5] else None,
                    chosen_cluster=int(raw[6]) if raw[6] else None,
                    switched=raw[7] == "1",
                    discovered_red_clusters=int(raw[8]),
                )
            )
    return rows


def curve_series_from_rows(rows: list[ResultRow]) -> list[svgplot.CurveSeries]:
    """Group CSV rows into plottable mean curves, one per (strategy, theta)."""
    order: list[tuple[str, str]] = []
    folds: dict[tuple[str, str], dict[int, list[ResultRow]]] = {}
    for row in rows:
        key = (row.strategy, row.theta)
        if key not in folds:
            folds[key] = {}
            order.append(key)
        folds[key].setdefault(row.fold, []).append(row)

    series = []
    for key in order:
        per_fold = folds[key]
        length = min(len(v) for v in per_fold.values())
        stack = np.array(
            [[r.f1 for r in sorted(v, key=lambda r: r.iteration)[:length]] for v in per_fold.values()]
        )
        switches = [
            min((r.iteration for r in v if r.switched), default=None) for v in per_fold.values()
        ]
        switched_folds = [s for s in switches if s is not None]
        strategy, theta = key
        name = strategy if strategy != "xgl_simulated" else f"{strategy} (theta={theta})"
        series.append(
            svgplot.CurveSeries(
                name=name,
                mean=stack.mean(axis=0),
                std=stack.std(axis=0),
                color=svgplot.strategy_color(strategy),
                switch_iteration=(
                    float(np.mean(switched_folds)) if switched_folds else None
                ),
                dash="6,4" if strategy == "passive" else None,
            )
        )
    return series


def summary_report(result: ExperimentResult) -> str:
    """Human-readable recap of one experiment: curve endpoints, switch
    iterations, cluster discovery, solver health."""
    config = result.config
    lines = [
        "experiment summary",
        f"strategy={config.strategy.value} theta={_format_theta(config.theta)} "
        f"budget={config.budget} folds={config.folds} seed={config.seed}",
        f"svm gamma={config.svm.gamma} c={config.svm.c} k_clusters={config.k_clusters} "
        f"w={config.w}",
        "",
        f"final mean F1: {result.mean_f1[-1]:.4f} (std {result.std_f1[-1]:.4f})",
        f"passive mean F1: {np.mean([c.passive_f1 for c in result.curves]):.4f}",
        f"max KKT residual over all fits: {max(c.max_kkt_residual for c in result.curves):.3g}",
    ]
    switches = [c.switch_iteration for c in result.curves if c.switch_iteration is not None]
    if switches:
        lines.append(
            f"switch iteration: mean {np.mean(switches):.1f} over "
            f"{len(switches)}/{len(result.curves)} folds"
        )
    marks = sorted({*config.snapshots(), config.budget})
    for mark in marks:
        values = [
            c.records[mark].discovered_red_clusters
            for c in result.curves
            if mark < len(c.records)
        ]
        if values:
            lines.append(
                f"mean discovered red clusters @ iteration {mark}: {np.mean(values):.2f}"
            )
    truncated = [c.fold_id for c in result.curves if c.truncated]
    if truncated:
        lines.append(f"truncated folds (pool exhausted): {truncated}")
    return "\n".join(lines) + "\n"


def emit_outputs(result: ExperimentResult, out: str | Path) -> dict[str, Path]:
    """Write results CSV, curve SVG, snapshot surface SVGs, and the summary.

    ``out`` may be a directory or a ``.csv`` path; sibling artifacts share
    its stem.  The curve SVG is rendered from the CSV that was just written,
    so plotting from the file later reproduces identical bytes.
    """
    out = Path(out)
    if out.suffix == ".csv":
        directory, stem = out.parent, out.stem
    else:
        directory, stem = out, "results"
    directory.mkdir(parents=True, exist_ok=True)

    paths: dict[str, Path] = {}
    csv_path = directory / f"{stem}.csv"
    write_results_csv(result.curves, csv_path)
    paths["csv"] = csv_path

    series = curve_series_from_rows(read_results_csv(csv_path))
    curve_path = directory / f"{stem}_curve.svg"
    curve_path.write_text(svgplot.render_curves(series, title="F1 on the held-out fold"))
    paths["curve"] = curve_path

    summary_path = directory / f"{stem}_summary.txt"
    summary_path.write_text(summary_report(result))
    paths["summary"] = summary_path

    dataset = result.dataset
    for curve in result.curves:
        for snap in curve.snapshots:
            name = f"{stem}_{snap.strategy.value}_fold{snap.fold_id}_iter{snap.iteration:03d}.svg"
            medoid_xy = dataset.x[snap.medoid_indices] if snap.medoid_indices is not None else None
            svg = svgplot.render_surface(
                snap.raster.values,
                snap.raster.resolution,
                dataset.x,
                dataset.y,
                labeled_xy=dataset.x[snap.labeled_indices],
                medoid_xy=medoid_xy,
                title=f"{snap.strategy.value} fold {snap.fold_id} iteration {snap.iteration}",
            )
            snap_path = directory / name
            snap_path.write_text(svg)
            paths[name] = snap_path
    return paths
