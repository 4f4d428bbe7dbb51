"""Request and response bodies for the session service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, model_validator

Label = Literal["red", "blue"]

# Several payloads carry a "model_version" field, which collides with
# pydantic's default protected "model_" namespace.
_OPEN = ConfigDict(protected_namespaces=())


class PointView(BaseModel):
    index: int
    x1: float
    x2: float
    true_label: Label
    predicted_label: Label
    cluster_id: int | None
    labeled: bool


class ClusterView(BaseModel):
    id: int
    medoid_index: int
    medoid_x1: float
    medoid_x2: float
    majority_label: Label
    member_count: int
    x1_bounds: tuple[float, float]
    x2_bounds: tuple[float, float]
    description: str


class ExplanationView(BaseModel):
    model_config = _OPEN

    k: int
    weight: float
    model_version: int
    clusters: list[ClusterView]


class SurfaceView(BaseModel):
    model_config = _OPEN

    resolution: int
    values: list[float]
    model_version: int


class ExtraPointView(BaseModel):
    x1: float
    x2: float
    label: Label


class SessionConfigView(BaseModel):
    seed: int
    folds: int
    test_fold: int
    k_clusters: int
    gamma: float
    c: float
    w: float
    resolution: int


class StateView(BaseModel):
    model_config = _OPEN

    model_version: int
    f1: float
    f1_history: list[float]
    labeled_indices: list[int]
    initial_indices: list[int]
    extra_points: list[ExtraPointView]
    pool: list[PointView]
    explanation: ExplanationView
    surface: SurfaceView
    config: SessionConfigView


class LabelRequest(BaseModel):
    """Label an existing unlabeled pool point by index, or a brand-new point
    by coordinates.  ``model_version`` must match the state the client saw."""

    model_config = _OPEN

    model_version: int
    label: Label
    index: int | None = None
    x1: float | None = None
    x2: float | None = None

    @model_validator(mode="after")
    def _index_or_coordinates(self) -> "LabelRequest":
        has_coords = self.x1 is not None or self.x2 is not None
        if (self.index is None) == (not has_coords):
            raise ValueError("provide either an index or coordinates, not both")
        if has_coords:
            if self.x1 is None or self.x2 is None:
                raise ValueError("both x1 and x2 are required for a new point")
            if not (0.0 <= self.x1 <= 1.0 and 0.0 <= self.x2 <= 1.0):
                raise ValueError("coordinates must lie in [0, 1]^2")
        return self


class ResetRequest(BaseModel):
    """Rebuild the session; omitted fields keep their current values.

    ``theta`` is accepted for config-shape compatibility and ignored: a human
    session has no simulated annotator.
    """

    seed: int | None = None
    k_clusters: int | None = None
    gamma: float | None = None
    c: float | None = None
    w: float | None = None
    resolution: int | None = None
    theta: float | str | None = None
