"""Mutable state of one live labeling session.

The session trains on fold 0's train split and evaluates on fold 0's test
split, so the F1 history lines up with the batch curves.  All mutations are
serialized through one lock and guarded by an optimistic version check.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace

import numpy as np

from xglearn.engine import rasterize_surface
from xglearn.explainer import GlobalExplanation, build_explanation
from xglearn.learner import SvmHyperParams, SvmModel, f1_score, predict, svm_fit
from xglearn.service import schemas
from xglearn.synthdata import (
    SyntheticConfig,
    generate_synthetic,
    initial_training_set,
    label_name,
    label_value,
    stratified_kfold,
)

# Initial-set stream derivation, kept identical to the batch engine so a live
# session starts from the same five points as batch fold 0.
_INIT_STRIDE = 1009


class VersionConflictError(RuntimeError):
    def __init__(self, expected: int, got: int) -> None:
        super().__init__(f"state is at model_version {expected}, request carried {got}")
        self.expected = expected


class InvalidLabelRequestError(ValueError):
    pass


@dataclass(frozen=True)
class SessionConfig:
    seed: int = 0
    folds: int = 10
    test_fold: int = 0
    k_clusters: int = 10
    gamma: float = 100.0
    c: float = 100.0
    w: float = 0.5
    resolution: int = 100

    def svm(self) -> SvmHyperParams:
        return SvmHyperParams(gamma=self.gamma, c=self.c)


class LiveSession:
    def __init__(self, config: SessionConfig | None = None) -> None:
        self._lock = threading.Lock()
        self._initialize(config or SessionConfig())

    def _initialize(self, config: SessionConfig) -> None:
        self.config = config
        self.dataset = generate_synthetic(SyntheticConfig(seed=config.seed))
        splits = stratified_kfold(self.dataset, config.folds, seed=config.seed)
        self.split = splits[config.test_fold]
        self._pool_set = {int(i) for i in self.split.train_indices}
        initial = initial_training_set(
            self.split, self.dataset, seed=config.seed + _INIT_STRIDE * (config.test_fold + 1)
        )
        self.initial_indices = [int(i) for i in initial]
        # index -> label actually used for training (clients may disagree
        # with ground truth; their label wins)
        self.labeled: dict[int, int] = {i: int(self.dataset.y[i]) for i in self.initial_indices}
        self.extra_points: list[tuple[float, float, int]] = []
        self.version = 0
        self.f1_history: list[float] = []
        self._refit()

    def _refit(self) -> None:
        indices = list(self.labeled)
        x = self.dataset.x[indices]
        y = np.array([self.labeled[i] for i in indices], dtype=np.int8)
        if self.extra_points:
            x = np.vstack([x, [(p[0], p[1]) for p in self.extra_points]])
            y = np.append(y, np.array([p[2] for p in self.extra_points], dtype=np.int8))
        self.model: SvmModel = svm_fit(x, y, self.config.svm())
        self.model.version = self.version
        self.explanation: GlobalExplanation = build_explanation(
            self.dataset,
            self.split.train_indices,
            np.array(indices, dtype=np.int64),
            self.model,
            self.config.k_clusters,
            self.config.w,
            known_labels=self.labeled,
        )
        test = self.split.test_indices
        self.f1_history.append(f1_score(predict(self.model, self.dataset.x[test]), self.dataset.y[test]))

    def state_view(self) -> schemas.StateView:
        with self._lock:
            return self._state_view_locked()

    def _state_view_locked(self) -> schemas.StateView:
        pool = self.split.train_indices
        preds = predict(self.model, self.dataset.x[pool])
        cluster_of = {}
        for cluster in self.explanation.clusters:
            for index in cluster.member_indices:
                cluster_of[int(index)] = cluster.id

        points = [
            schemas.PointView(
                index=int(i),
                x1=float(self.dataset.x[i, 0]),
                x2=float(self.dataset.x[i, 1]),
                true_label=label_name(int(self.dataset.y[i])),
                predicted_label=label_name(int(p)),
                cluster_id=cluster_of.get(int(i)),
                labeled=int(i) in self.labeled,
            )
            for i, p in zip(pool, preds)
        ]
        clusters = [
            schemas.ClusterView(
                id=c.id,
                medoid_index=c.medoid_index,
                medoid_x1=float(c.medoid_xy[0]),
                medoid_x2=float(c.medoid_xy[1]),
                majority_label=label_name(c.majority_label),
                member_count=len(c.member_indices),
                x1_bounds=c.x1_bounds,
                x2_bounds=c.x2_bounds,
                description=c.description,
            )
            for c in self.explanation.clusters
        ]
        raster = rasterize_surface(self.model, self.config.resolution)
        return schemas.StateView(
            model_version=self.version,
            f1=self.f1_history[-1],
            f1_history=list(self.f1_history),
            labeled_indices=sorted(self.labeled),
            initial_indices=list(self.initial_indices),
            extra_points=[
                schemas.ExtraPointView(x1=p[0], x2=p[1], label=label_name(p[2]))
                for p in self.extra_points
            ],
            pool=points,
            explanation=schemas.ExplanationView(
                k=self.explanation.k,
                weight=self.explanation.weight_w,
                model_version=self.explanation.model_version,
                clusters=clusters,
            ),
            surface=schemas.SurfaceView(
                resolution=raster.resolution,
                values=[float(v) for v in raster.values],
                model_version=raster.model_version,
            ),
            config=schemas.SessionConfigView(
                seed=self.config.seed,
                folds=self.config.folds,
                test_fold=self.config.test_fold,
                k_clusters=self.config.k_clusters,
                gamma=self.config.gamma,
                c=self.config.c,
                w=self.config.w,
                resolution=self.config.resolution,
            ),
        )

    def submit(self, request: schemas.LabelRequest) -> schemas.StateView:
        with self._lock:
            if request.model_version != self.version:
                raise VersionConflictError(expected=self.version, got=request.model_version)
            label = label_value(request.label)
            if request.index is not None:
                index = int(request.index)
                if index in self.labeled:
                    raise InvalidLabelRequestError(f"index {index} is already labeled")
                if index not in self._pool_set:
                    raise InvalidLabelRequestError(f"index {index} is not in the training pool")
                self.labeled[index] = label
            else:
                self.extra_points.append((float(request.x1), float(request.x2), label))
            self.version += 1
            self._refit()
            return self._state_view_locked()

    def reset(self, request: schemas.ResetRequest) -> schemas.StateView:
        with self._lock:
            config = replace(
                self.config,
                **{
                    key: getattr(request, key)
                    for key in ("seed", "k_clusters", "gamma", "c", "w", "resolution")
                    if getattr(request, key) is not None
                },
            )
            self._initialize(config)
            return self._state_view_locked()

    def surface_view(self, resolution: int | None = None) -> schemas.SurfaceView:
        with self._lock:
            raster = rasterize_surface(self.model, resolution or self.config.resolution)
            return schemas.SurfaceView(
                resolution=raster.resolution,
                values=[float(v) for v in raster.values],
                model_version=raster.model_version,
            )
