"""Clustering-based global explanations of the current classifier.

The pool (training split) is augmented with a label feature -- the known
label for labeled points, the model's prediction otherwise, scaled by a
weight ``w`` -- and partitioned by PAM k-medoids.  Each cluster carries a
medoid prototype, a majority label, and a textual axis-aligned description.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from xglearn.learner import SvmModel, predict
from xglearn.synthdata import BLUE, RED, Dataset, label_name

# A swap is applied only when it lowers the total distance by more than this,
# so float noise cannot cycle the SWAP phase.
_SWAP_EPS = 1e-12
_MAX_SWAPS = 100_000


class StaleExplanationError(RuntimeError):
    """The explanation was built against a different model version."""


class KMedoidsResult(NamedTuple):
    assignment: np.ndarray  # (n,) cluster id per point
    medoids: np.ndarray  # (k,) point indices, one per cluster id
    cost: float
    cost_history: list[float]  # total cost after BUILD and after each swap


@dataclass
class Cluster:
    id: int
    medoid_index: int  # dataset index of the prototype
    medoid_xy: np.ndarray  # (2,) prototype coordinates
    member_indices: np.ndarray  # dataset indices, ascending
    majority_label: int
    x1_bounds: tuple[float, float]
    x2_bounds: tuple[float, float]
    description: str


@dataclass
class GlobalExplanation:
    clusters: list[Cluster]
    k: int
    weight_w: float
    model_version: int
    pool_indices: np.ndarray  # ascending dataset indices covered by the clusters


@njit(cache=True)
def _pam_build(dist, k):  # pragma: no cover - exercised via kmedoids
    """Greedy BUILD: start from the 1-medoid optimum, add best reducer each step."""
    n = dist.shape[0]
    medoids = np.empty(k, dtype=np.int64)
    best = -1
    best_total = np.inf
    for cand in range(n):
        total = 0.0
        for o in range(n):
            total += dist[cand, o]
        if total < best_total:
            best_total = total
            best = cand
    medoids[0] = best
    dnear = dist[best].copy()

    taken = np.zeros(n, dtype=np.bool_)
    taken[best] = True
    for step in range(1, k):
        best = -1
        best_gain = -1.0
        for cand in range(n):
            if taken[cand]:
                continue
            gain = 0.0
            for o in range(n):
                diff = dnear[o] - dist[cand, o]
                if diff > 0.0:
                    gain += diff
            if gain > best_gain:
                best_gain = gain
                best = cand
        medoids[step] = best
        taken[best] = True
        for o in range(n):
            if dist[best, o] < dnear[o]:
                dnear[o] = dist[best, o]
    return medoids


@njit(cache=True)
def _pam_swap(dist, medoids, eps, max_swaps):  # pragma: no cover - exercised via kmedoids
    """Best-improvement SWAP until no medoid/non-medoid exchange lowers cost.

    Swap deltas share the candidate-point scan: a point whose nearest medoid
    survives contributes min(0, d_cand - d_nearest) to every removal, and a
    correction term only to the removal of its own nearest medoid.
    """
    n = dist.shape[0]
    k = medoids.shape[0]
    is_medoid = np.zeros(n, dtype=np.bool_)
    for p in range(k):
        is_medoid[medoids[p]] = True

    d1 = np.empty(n)
    d2 = np.empty(n)
    n1 = np.empty(n, dtype=np.int64)
    acc = np.empty(k)
    history = [0.0 for _ in range(0)]

    swaps = 0
    while swaps < max_swaps:
        cost = 0.0
        for o in range(n):
            b1 = np.inf
            b2 = np.inf
            p1 = -1
            for p in range(k):
                d = dist[medoids[p], o]
                if d < b1:
                    b2 = b1
                    b1 = d
                    p1 = p
                elif d < b2:
                    b2 = d
            d1[o] = b1
            d2[o] = b2
            n1[o] = p1
            cost += b1
        history.append(cost)

        best_delta = -eps
        best_h = -1
        best_pos = -1
        for h in range(n):
            if is_medoid[h]:
                continue
            shared = 0.0
            for p in range(k):
                acc[p] = 0.0
            for o in range(n):
                d = dist[h, o]
                if d < d1[o]:
                    shared += d - d1[o]
                else:
                    alt = d if d < d2[o] else d2[o]
                    acc[n1[o]] += alt - d1[o]
            for p in range(k):
                delta = shared + acc[p]
                if delta < best_delta:
                    best_delta = delta
                    best_h = h
                    best_pos = p
        if best_h < 0:
            break
        is_medoid[medoids[best_pos]] = False
        is_medoid[best_h] = True
        medoids[best_pos] = best_h
        swaps += 1
    return medoids, history


def kmedoids(points: np.ndarray, k: int, seed: int | None = None) -> KMedoidsResult:
    """PAM (BUILD + SWAP) under Euclidean distance.

    The search is fully deterministic given the input order; ``seed`` is
    accepted for interface stability but has no effect.  Ties break toward
    the lowest index.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError("points must be a 2-D array")
    n = len(points)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")

    # Difference-based distances: slightly slower than the dot-product trick
    # but free of its cancellation noise, so costs are exactly reproducible.
    diff = points[:, None, :] - points[None, :, :]
    dist = np.ascontiguousarray(np.sqrt((diff**2).sum(axis=-1)))
    medoids = _pam_build(dist, k)
    medoids, history = _pam_swap(dist, medoids, _SWAP_EPS, _MAX_SWAPS)
    assignment = np.argmin(dist[medoids], axis=0)
    cost = float(np.min(dist[medoids], axis=0).sum())
    return KMedoidsResult(
        assignment=assignment.astype(np.int64),
        medoids=np.asarray(medoids, dtype=np.int64),
        cost=cost,
        cost_history=list(history),
    )


def augment(
    pool: np.ndarray,
    dataset: Dataset,
    labeled: np.ndarray,
    model: SvmModel,
    w: float,
    known_labels: dict[int, int] | None = None,
) -> np.ndarray:
    """Coordinates plus a label feature in {0, w}, shape (len(pool), 3).

    Labeled points use their known label (ground truth, or ``known_labels``
    overrides for live sessions); the rest use the model's prediction.
    """
    pool = np.asarray(pool, dtype=np.int64)
    labeled = np.asarray(labeled, dtype=np.int64)
    labels = predict(model, dataset.x[pool]).astype(np.int64)
    labeled_mask = np.isin(pool, labeled)
    truth = dataset.y[pool].astype(np.int64)
    labels[labeled_mask] = truth[labeled_mask]
    if known_labels:
        for idx, lab in known_labels.items():
            hits = np.flatnonzero(pool == idx)
            if hits.size:
                labels[hits[0]] = lab
    feature = np.where(labels == RED, float(w), 0.0)
    return np.column_stack([dataset.x[pool], feature])


def build_explanation(
    dataset: Dataset,
    pool: np.ndarray,
    labeled: np.ndarray,
    model: SvmModel,
    k: int,
    w: float,
    seed: int | None = None,
    known_labels: dict[int, int] | None = None,
) -> GlobalExplanation:
    """Cluster the augmented pool and describe each cluster.

    The majority label is the modal label feature of the members (ties go to
    red); the description is the axis-aligned bounding box of the members.
    """
    pool = np.sort(np.asarray(pool, dtype=np.int64))
    augmented = augment(pool, dataset, labeled, model, w, known_labels)
    result = kmedoids(augmented, k, seed)

    clusters = []
    for cid in range(k):
        positions = np.flatnonzero(result.assignment == cid)
        members = pool[positions]
        red_members = int((augmented[positions, 2] > 0.0).sum())
        majority = RED if 2 * red_members >= len(members) else BLUE
        xs = dataset.x[members]
        x1_bounds = (float(xs[:, 0].min()), float(xs[:, 0].max()))
        x2_bounds = (float(xs[:, 1].min()), float(xs[:, 1].max()))
        description = (
            f"x1 in [{x1_bounds[0]:.3f}, {x1_bounds[1]:.3f}] and "
            f"x2 in [{x2_bounds[0]:.3f}, {x2_bounds[1]:.3f}], "
            f"predicted {label_name(majority)}"
        )
        medoid_index = int(pool[result.medoids[cid]])
        clusters.append(
            Cluster(
                id=cid,
                medoid_index=medoid_index,
                medoid_xy=dataset.x[medoid_index].copy(),
                member_indices=members,
                majority_label=majority,
                x1_bounds=x1_bounds,
                x2_bounds=x2_bounds,
                description=description,
            )
        )
    return GlobalExplanation(
        clusters=clusters,
        k=k,
        weight_w=float(w),
        model_version=model.version,
        pool_indices=pool,
    )


def surrogate_fidelity(explanation: GlobalExplanation, model: SvmModel, dataset: Dataset) -> float:
    """Fraction of pool points whose cluster majority label matches the model."""
    if explanation.model_version != model.version:
        raise StaleExplanationError(
            f"explanation built for model version {explanation.model_version}, "
            f"got {model.version}"
        )
    agree = 0
    total = 0
    for cluster in explanation.clusters:
        preds = predict(model, dataset.x[cluster.member_indices])
        agree += int((preds == cluster.majority_label).sum())
        total += len(cluster.member_indices)
    return agree / total


def explanation_text(explanation: GlobalExplanation) -> str:
    """Render the explanation as a structured text document, one cluster per block."""
    lines = [
        f"global explanation: {explanation.k} clusters, "
        f"label weight {explanation.weight_w}, model version {explanation.model_version}"
    ]
    for cluster in explanation.clusters:
        lines.append(
            f"cluster {cluster.id}: medoid #{cluster.medoid_index} "
            f"({cluster.medoid_xy[0]:.3f}, {cluster.medoid_xy[1]:.3f}), "
            f"{len(cluster.member_indices)} members, {cluster.description}"
        )
    return "\n".join(lines)
