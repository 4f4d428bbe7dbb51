import numpy as np
import pytest

from conftest import SMALL_SYNTH
from oracles import best_single_swap, clustering_cost, pairwise_euclidean
from xglearn.explainer import (
    StaleExplanationError,
    augment,
    build_explanation,
    explanation_text,
    kmedoids,
    surrogate_fidelity,
)
from xglearn.learner import SvmHyperParams, predict, svm_fit
from xglearn.synthdata import BLUE, RED, Dataset


def constant_model(label):
    from xglearn.learner import SvmModel

    return SvmModel(
        support_x=np.zeros((0, 2)), coef=np.zeros(0), bias=float(label), params=SvmHyperParams()
    )


def test_kmedoids_k_equals_n():
    pts = np.random.default_rng(0).random((8, 2))
    result = kmedoids(pts, 8)
    assert result.cost == 0.0
    assert sorted(result.medoids.tolist()) == list(range(8))
    assert np.array_equal(np.sort(result.medoids[result.assignment]), np.arange(8))


def test_kmedoids_two_separated_pairs():
    pts = np.array([[0.0, 0.0], [0.01, 0.0], [1.0, 1.0], [1.0, 0.99]])
    result = kmedoids(pts, 2)
    groups = {tuple(sorted(np.flatnonzero(result.assignment == c))) for c in (0, 1)}
    assert groups == {(0, 1), (2, 3)}


@pytest.mark.parametrize("seed", range(6))
def test_kmedoids_has_no_improving_swap(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(12, 41))
    k = int(rng.integers(2, 6))
    pts = rng.random((n, 3))
    result = kmedoids(pts, k)
    dist = pairwise_euclidean(pts)
    assert abs(clustering_cost(dist, result.medoids) - result.cost) <= 1e-12
    delta, _, _ = best_single_swap(dist, result.medoids)
    assert delta >= -1e-12


def test_kmedoids_cost_history_non_increasing():
    pts = np.random.default_rng(3).random((60, 3))
    result = kmedoids(pts, 5)
    assert np.all(np.diff(result.cost_history) <= 1e-12)
    assert result.cost == result.cost_history[-1]


def test_kmedoids_seed_is_inert():
    pts = np.random.default_rng(1).random((30, 3))
    a = kmedoids(pts, 4, seed=0)
    b = kmedoids(pts, 4, seed=999)
    assert np.array_equal(a.medoids, b.medoids)
    assert np.array_equal(a.assignment, b.assignment)


def test_kmedoids_validation():
    pts = np.random.default_rng(0).random((5, 2))
    with pytest.raises(ValueError):
        kmedoids(pts, 6)
    with pytest.raises(ValueError):
        kmedoids(pts, 0)
    with pytest.raises(ValueError):
        kmedoids(pts.ravel(), 2)


def _toy_dataset():
    x = np.array([[0.1, 0.1], [0.2, 0.1], [0.8, 0.9], [0.9, 0.9]])
    y = np.array([BLUE, BLUE, RED, RED], dtype=np.int8)
    return Dataset(x=x, y=y)


def test_augment_uses_known_then_predicted_labels():
    ds = _toy_dataset()
    model = constant_model(BLUE)  # predicts blue everywhere
    pool = np.arange(4)
    out = augment(pool, ds, labeled=np.array([3]), model=model, w=0.5)
    assert out.shape == (4, 3)
    assert np.array_equal(out[:, :2], ds.x)
    # index 3 is a labeled red -> w; the rest fall back to the predicted blue -> 0
    assert out[:, 2].tolist() == [0.0, 0.0, 0.0, 0.5]
    raw = augment(pool, ds, labeled=np.array([3]), model=model, w=0.0)
    assert np.all(raw[:, 2] == 0.0)


def test_augment_label_overrides():
    ds = _toy_dataset()
    model = constant_model(BLUE)
    out = augment(
        np.arange(4), ds, labeled=np.array([0]), model=model, w=0.5, known_labels={0: RED}
    )
    assert out[0, 2] == 0.5


def test_build_explanation_partitions_pool(small_dataset, small_splits, small_model):
    split = small_splits[0]
    labeled = split.train_indices[:8]
    explanation = build_explanation(
        small_dataset, split.train_indices, labeled, small_model, k=4, w=0.5
    )
    assert explanation.k == 4
    assert len(explanation.clusters) == 4
    members = np.concatenate([c.member_indices for c in explanation.clusters])
    assert np.array_equal(np.sort(members), np.sort(split.train_indices))
    for cluster in explanation.clusters:
        assert cluster.medoid_index in cluster.member_indices
        xs = small_dataset.x[cluster.member_indices]
        assert cluster.x1_bounds[0] <= xs[:, 0].min() and xs[:, 0].max() <= cluster.x1_bounds[1]
        assert cluster.x2_bounds[0] <= xs[:, 1].min() and xs[:, 1].max() <= cluster.x2_bounds[1]
        assert cluster.x1_bounds[0] <= cluster.medoid_xy[0] <= cluster.x1_bounds[1]
        assert "x1 in [" in cluster.description and "predicted" in cluster.description


def test_build_explanation_is_deterministic(small_dataset, small_splits, small_model):
    split = small_splits[0]
    labeled = split.train_indices[:8]
    a = build_explanation(small_dataset, split.train_indices, labeled, small_model, k=4, w=0.5)
    b = build_explanation(small_dataset, split.train_indices, labeled, small_model, k=4, w=0.5)
    assert [c.medoid_index for c in a.clusters] == [c.medoid_index for c in b.clusters]
    assert all(
        np.array_equal(x.member_indices, y.member_indices) for x, y in zip(a.clusters, b.clusters)
    )


def test_unanimous_blue_pool():
    ds = _toy_dataset()
    model = constant_model(BLUE)
    explanation = build_explanation(ds, np.arange(4), np.zeros(0, dtype=int), model, k=2, w=0.5)
    assert all(c.majority_label == BLUE for c in explanation.clusters)


def test_majority_tie_goes_to_red():
    ds = _toy_dataset()
    model = constant_model(BLUE)
    # both labeled: one red, one blue -> k=1 cluster splits 1/1
    explanation = build_explanation(
        ds, np.array([0, 3]), np.array([0, 3]), model, k=1, w=0.5
    )
    assert explanation.clusters[0].majority_label == RED


def test_fidelity_constant_classifier_is_one():
    ds = _toy_dataset()
    model = constant_model(RED)
    explanation = build_explanation(ds, np.arange(4), np.zeros(0, dtype=int), model, k=2, w=0.5)
    assert surrogate_fidelity(explanation, model, ds) == 1.0


def test_fidelity_half_split_cluster():
    x = np.array([[0.25, 0.5], [0.26, 0.5], [0.75, 0.5], [0.76, 0.5]])
    y = np.array([RED, RED, BLUE, BLUE], dtype=np.int8)
    ds = Dataset(x=x, y=y)
    model = svm_fit(x[[0, 2]], y[[0, 2]], SvmHyperParams())
    explanation = build_explanation(ds, np.arange(4), np.zeros(0, dtype=int), model, k=1, w=0.5)
    assert surrogate_fidelity(explanation, model, ds) == 0.5


def test_fidelity_stale_version_raises(small_dataset, small_splits, small_model):
    split = small_splits[0]
    explanation = build_explanation(
        small_dataset, split.train_indices, split.train_indices[:6], small_model, k=3, w=0.5
    )
    small_model.version += 1
    try:
        with pytest.raises(StaleExplanationError):
            surrogate_fidelity(explanation, small_model, small_dataset)
    finally:
        small_model.version -= 1


def test_fidelity_beats_random_partitions(small_dataset, small_splits):
    split = small_splits[0]
    rng = np.random.default_rng(0)
    labeled = rng.choice(split.train_indices, size=30, replace=False)
    model = svm_fit(small_dataset.x[labeled], small_dataset.y[labeled], SvmHyperParams())
    pool = split.train_indices
    k = 4
    explanation = build_explanation(small_dataset, pool, labeled, model, k=k, w=0.5)
    fidelity = surrogate_fidelity(explanation, model, small_dataset)
    assert 0.0 <= fidelity <= 1.0

    augmented = augment(np.sort(pool), small_dataset, labeled, model, w=0.5)
    preds = predict(model, small_dataset.x[np.sort(pool)])
    reds = augmented[:, 2] > 0
    for _ in range(100):
        assignment = rng.integers(0, k, size=len(pool))
        agree = 0
        for cid in range(k):
            mask = assignment == cid
            if not mask.any():
                continue
            majority = RED if 2 * int(reds[mask].sum()) >= int(mask.sum()) else BLUE
            agree += int((preds[mask] == majority).sum())
        assert fidelity >= agree / len(pool)


def test_explanation_text_layout(small_dataset, small_splits, small_model):
    split = small_splits[0]
    explanation = build_explanation(
        small_dataset, split.train_indices, split.train_indices[:6], small_model, k=3, w=0.5
    )
    text = explanation_text(explanation)
    lines = text.splitlines()
    assert len(lines) == 4
    assert "3 clusters" in lines[0]
    assert all(line.startswith("cluster ") for line in lines[1:])
    assert all("members" in line for line in lines[1:])
