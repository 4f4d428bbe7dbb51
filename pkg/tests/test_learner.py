import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import two_class_problem
from oracles import pg_dual_solve
from xglearn.learner import (
    BLUE,
    RED,
    ConfusionCounts,
    ConvergenceError,
    SvmHyperParams,
    SvmModel,
    decision_value,
    decision_values,
    f1_from_counts,
    f1_score,
    max_kkt_violation,
    predict,
    rbf_kernel,
    svm_fit,
)

PARAMS = SvmHyperParams()


def test_hyperparams_validation():
    assert PARAMS.gamma == 100.0
    assert PARAMS.c == 100.0
    with pytest.raises(ValueError):
        SvmHyperParams(gamma=0.0)
    with pytest.raises(ValueError):
        SvmHyperParams(c=-1.0)


def test_rbf_kernel_basics():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    k = rbf_kernel(a, a, gamma=1.0)
    assert np.allclose(np.diag(k), 1.0)
    assert np.isclose(k[0, 1], np.exp(-1.0))
    assert np.allclose(k, k.T)


def test_two_point_model_symmetry():
    x = np.array([[0.25, 0.5], [0.75, 0.5]])
    y = np.array([RED, BLUE])
    model = svm_fit(x, y, PARAMS)
    assert abs(decision_value(model, np.array([[0.5, 0.5]]))) <= 1e-9
    values = decision_values(model, x)
    assert values[0] > 0 > values[1]
    assert np.array_equal(predict(model, x), y)


def test_xor_configuration_is_separated():
    x = np.array([[0.2, 0.2], [0.8, 0.8], [0.2, 0.8], [0.8, 0.2]])
    y = np.array([RED, RED, BLUE, BLUE])
    model = svm_fit(x, y, PARAMS)
    assert np.array_equal(predict(model, x), y)


@pytest.mark.parametrize("seed", range(6))
def test_dual_objective_matches_projected_gradient_oracle(seed):
    x, y = two_class_problem(seed)
    model = svm_fit(x, y, PARAMS)
    kernel = rbf_kernel(x, x, PARAMS.gamma)
    _, oracle_objective = pg_dual_solve(kernel, y.astype(float), PARAMS.c)
    assert abs(model.dual_objective - oracle_objective) <= 1e-4


@pytest.mark.parametrize("seed", range(6))
def test_fit_satisfies_kkt_and_constraints(seed):
    x, y = two_class_problem(seed, n=20)
    model = svm_fit(x, y, PARAMS)
    assert model.kkt_residual <= 1e-3
    assert max_kkt_violation(model, x, y) <= 1e-3
    assert np.all(model.alpha >= 0.0)
    assert np.all(model.alpha <= PARAMS.c)
    assert abs((model.alpha * y).sum()) <= 1e-8
    assert abs(model.coef.sum()) <= 1e-8


def test_free_support_vector_sits_on_margin():
    x, y = two_class_problem(3, n=30)
    model = svm_fit(x, y, PARAMS)
    free = (model.alpha > 1e-6) & (model.alpha < PARAMS.c - 1e-6)
    assert free.any()
    margins = y[free] * decision_values(model, x[free])
    assert np.abs(margins - 1.0).max() <= 2e-3


def test_one_class_fallback_is_constant():
    x = np.array([[0.1, 0.1], [0.2, 0.3], [0.4, 0.4]])
    red_model = svm_fit(x, np.array([RED, RED, RED]), PARAMS)
    assert red_model.is_constant
    assert np.all(predict(red_model, x) == RED)
    blue_model = svm_fit(x, np.array([BLUE, BLUE, BLUE]), PARAMS)
    assert np.all(predict(blue_model, x) == BLUE)
    assert np.allclose(decision_values(blue_model, x), -1.0)


def test_zero_decision_predicts_red():
    model = SvmModel(support_x=np.zeros((0, 2)), coef=np.zeros(0), bias=0.0, params=PARAMS)
    assert predict(model, np.array([[0.5, 0.5]]))[0] == RED


def test_fit_input_validation():
    with pytest.raises(ValueError):
        svm_fit(np.zeros((0, 2)), np.zeros(0), PARAMS)
    with pytest.raises(ValueError):
        svm_fit(np.zeros((3, 2)), np.array([1, -1]), PARAMS)


def test_iteration_cap_raises():
    x, y = two_class_problem(0)
    with pytest.raises(ConvergenceError):
        svm_fit(x, y, PARAMS, max_iter=1)


def test_fit_is_deterministic():
    x, y = two_class_problem(7, n=25)
    a = svm_fit(x, y, PARAMS)
    b = svm_fit(x, y, PARAMS)
    assert np.array_equal(a.alpha, b.alpha)
    assert a.bias == b.bias


def test_confusion_counts():
    preds = np.array([RED, RED, BLUE, BLUE, RED])
    truth = np.array([RED, BLUE, RED, BLUE, RED])
    counts = ConfusionCounts.from_predictions(preds, truth)
    assert (counts.tp, counts.fp, counts.fn, counts.tn) == (2, 1, 1, 1)
    assert counts.total == 5
    with pytest.raises(ValueError):
        ConfusionCounts.from_predictions(preds, truth[:3])
    with pytest.raises(ValueError):
        ConfusionCounts.from_predictions(np.zeros(0), np.zeros(0))


def test_f1_reference_values():
    # tp=8, fp=2, fn=4 -> F1 = 16/22
    assert abs(f1_from_counts(ConfusionCounts(tp=8, fp=2, fn=4, tn=3)) - 0.7273) <= 1e-4
    preds = np.array([RED, RED, BLUE])
    assert f1_score(preds, preds) == 1.0
    truth = np.array([RED, BLUE, RED])
    assert f1_score(np.full(3, BLUE), truth) == 0.0
    # no reds anywhere: vacuous, defined as 0
    assert f1_score(np.full(3, BLUE), np.full(3, BLUE)) == 0.0


@given(
    labels=st.lists(
        st.tuples(st.sampled_from([RED, BLUE]), st.sampled_from([RED, BLUE])),
        min_size=1,
        max_size=60,
    ),
    seed=st.integers(0, 2**32 - 1),
)
@settings(max_examples=60, deadline=None)
def test_f1_permutation_invariant_and_bounded(labels, seed):
    preds = np.array([p for p, _ in labels])
    truth = np.array([t for _, t in labels])
    base = f1_score(preds, truth)
    assert 0.0 <= base <= 1.0
    order = np.random.default_rng(seed).permutation(len(labels))
    assert f1_score(preds[order], truth[order]) == base
