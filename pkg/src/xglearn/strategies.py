"""Query selection strategies for the guided learning loop.

All strategies pick from the unlabeled part of the training pool and return a
``QueryOutcome``.  Randomized strategies draw from a caller-supplied
generator so that runs are reproducible; deterministic ties always break
toward the lowest dataset index.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from xglearn.explainer import GlobalExplanation, StaleExplanationError
from xglearn.learner import SvmModel, decision_values, predict
from xglearn.synthdata import BLUE, RED, Dataset

THETA_ARGMAX = "argmax"


class StrategyKind(str, Enum):
    ACTIVE_UNCERTAINTY = "active_uncertainty"
    GUIDED = "guided"
    RANDOM = "random"
    XGL_SIMULATED = "xgl_simulated"
    XGL_HUMAN = "xgl_human"
    PASSIVE = "passive"


@dataclass(frozen=True)
class QueryOutcome:
    selected_index: int
    chosen_cluster: int | None = None
    switched: bool = False


@dataclass(frozen=True)
class SimulatedUser:
    """Cluster-picking behaviour: softmax temperature, or exact argmax."""

    theta: float | str = THETA_ARGMAX
    count_labeled_mistakes: bool = True

    def __post_init__(self) -> None:
        if isinstance(self.theta, str):
            if self.theta != THETA_ARGMAX:
                raise ValueError(f"theta must be a number or '{THETA_ARGMAX}', got {self.theta!r}")
        elif not (np.isfinite(self.theta) and self.theta >= 0):
            raise ValueError(f"theta must be finite and >= 0, got {self.theta}")


def _as_sorted(indices: np.ndarray) -> np.ndarray:
    out = np.asarray(indices, dtype=np.int64)
    if out.size == 0:
        raise ValueError("no unlabeled points left to query")
    return np.sort(out)


def uncertainty_query(model: SvmModel, unlabeled: np.ndarray, dataset: Dataset) -> QueryOutcome:
    """Point with the smallest absolute decision value."""
    unlabeled = _as_sorted(unlabeled)
    margins = np.abs(decision_values(model, dataset.x[unlabeled]))
    return QueryOutcome(selected_index=int(unlabeled[int(np.argmin(margins))]))


def guided_query(
    unlabeled: np.ndarray,
    dataset: Dataset,
    last_class: int | None,
    rng: np.random.Generator,
) -> QueryOutcome:
    """Density-style baseline: alternate classes, uniform within the class.

    Asks for red first, then keeps alternating against the class it was
    given last; if the wanted class has no unlabeled points left it takes
    the other one.
    """
    unlabeled = _as_sorted(unlabeled)
    wanted = RED if last_class in (None, BLUE) else BLUE
    pool = unlabeled[dataset.y[unlabeled] == wanted]
    if pool.size == 0:
        pool = unlabeled[dataset.y[unlabeled] == -wanted]
    return QueryOutcome(selected_index=int(rng.choice(pool)))


def random_query(unlabeled: np.ndarray, rng: np.random.Generator) -> QueryOutcome:
    """Uniform draw from the unlabeled pool."""
    unlabeled = _as_sorted(unlabeled)
    return QueryOutcome(selected_index=int(rng.choice(unlabeled)))


def cluster_choice_distribution(counts: np.ndarray, theta: float | str) -> np.ndarray:
    """Softmax over per-cluster mistake counts.

    p_i = exp(theta * m_i) / sum_j exp(theta * m_j), computed after
    subtracting the max for stability.  ``theta=0`` is uniform; the string
    ``"argmax"`` concentrates all mass on the first maximal count.
    """
    counts = np.asarray(counts, dtype=float)
    if counts.ndim != 1 or counts.size == 0:
        raise ValueError("counts must be a non-empty 1-D array")
    if isinstance(theta, str):
        if theta != THETA_ARGMAX:
            raise ValueError(f"theta must be a number or '{THETA_ARGMAX}', got {theta!r}")
        probs = np.zeros_like(counts)
        probs[int(np.argmax(counts))] = 1.0
        return probs
    if not (np.isfinite(theta) and theta >= 0):
        raise ValueError(f"theta must be finite and >= 0, got {theta}")
    scores = theta * counts
    scores -= scores.max()
    probs = np.exp(scores)
    return probs / probs.sum()


def xgl_simulated_query(
    explanation: GlobalExplanation,
    model: SvmModel,
    dataset: Dataset,
    unlabeled: np.ndarray,
    user: SimulatedUser,
    rng: np.random.Generator,
) -> QueryOutcome:
    """Simulated supervisor reacting to the global explanation.

    Counts the model's mistakes inside each cluster, samples a cluster from
    the softmax over those counts (restricted to clusters that still hold a
    misclassified unlabeled point), and returns the misclassified unlabeled
    point closest to that cluster's medoid.  When no cluster qualifies the
    explanation looks consistent, so the outcome switches to a uniform
    random draw.
    """
    if explanation.model_version != model.version:
        raise StaleExplanationError(
            f"explanation built for model version {explanation.model_version}, "
            f"got {model.version}"
        )
    unlabeled = _as_sorted(unlabeled)

    pool = explanation.pool_indices
    preds = predict(model, dataset.x[pool])
    wrong_pool = pool[preds != dataset.y[pool]]
    wrong_unlabeled = wrong_pool[np.isin(wrong_pool, unlabeled, assume_unique=True)]

    counts = []
    eligible = []
    for pos, cluster in enumerate(explanation.clusters):
        wrong_here = cluster.member_indices[
            np.isin(cluster.member_indices, wrong_pool, assume_unique=True)
        ]
        open_mistakes = int(np.isin(wrong_here, wrong_unlabeled, assume_unique=True).sum())
        counts.append(len(wrong_here) if user.count_labeled_mistakes else open_mistakes)
        if open_mistakes:
            eligible.append(pos)

    if not eligible:
        fallback = random_query(unlabeled, rng)
        return QueryOutcome(selected_index=fallback.selected_index, switched=True)

    counts = np.asarray(counts, dtype=float)
    if user.theta == THETA_ARGMAX:
        chosen = eligible[int(np.argmax(counts[eligible]))]
    else:
        probs = cluster_choice_distribution(counts[eligible], user.theta)
        chosen = int(rng.choice(np.asarray(eligible), p=probs))

    cluster = explanation.clusters[chosen]
    candidates = cluster.member_indices[
        np.isin(cluster.member_indices, wrong_unlabeled, assume_unique=True)
    ]
    gaps = np.linalg.norm(dataset.x[candidates] - cluster.medoid_xy[None, :], axis=1)
    selected = int(candidates[int(np.argmin(gaps))])
    return QueryOutcome(selected_index=selected, chosen_cluster=cluster.id)
