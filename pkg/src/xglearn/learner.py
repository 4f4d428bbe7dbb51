"""Soft-margin RBF SVM trained by sequential minimal optimization, plus metrics.

The solver maximizes the usual dual

    max_a  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
    s.t.   0 <= a_i <= C,  sum_i a_i y_i = 0

with K(a, b) = exp(-gamma * ||a - b||^2), picking the maximal-KKT-violating
pair each step and solving the two-variable subproblem analytically.  The
kernel matrix is materialized up front; problem sizes here stay around 10^3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from xglearn.synthdata import BLUE, RED

DEFAULT_TOL = 1e-3
DEFAULT_MAX_ITER = 100_000


class ConvergenceError(RuntimeError):
    """SMO did not reach the KKT stopping criterion within the update cap."""


@dataclass(frozen=True)
class SvmHyperParams:
    gamma: float = 100.0
    c: float = 100.0

    def __post_init__(self) -> None:
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.c <= 0:
            raise ValueError("c must be positive")


@dataclass
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @classmethod
    def from_predictions(cls, preds: np.ndarray, truth: np.ndarray) -> "ConfusionCounts":
        preds = np.asarray(preds)
        truth = np.asarray(truth)
        if preds.shape != truth.shape:
            raise ValueError(f"length mismatch: {preds.shape} vs {truth.shape}")
        if preds.size == 0:
            raise ValueError("empty prediction list")
        return cls(
            tp=int(np.sum((preds == RED) & (truth == RED))),
            fp=int(np.sum((preds == RED) & (truth == BLUE))),
            fn=int(np.sum((preds == BLUE) & (truth == RED))),
            tn=int(np.sum((preds == BLUE) & (truth == BLUE))),
        )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass
class SvmModel:
    """Fitted state: support points with signed dual weights plus diagnostics.

    ``alpha`` keeps the full training-length multiplier vector so KKT checks
    can be replayed against the training set.  A one-class training set yields
    a constant fallback (empty supports, bias carries the class sign).
    ``version`` is bookkeeping for callers that retrain in a loop.
    """

    support_x: np.ndarray  # (m, d)
    coef: np.ndarray  # (m,) = alpha_i * y_i for support points
    bias: float
    params: SvmHyperParams
    alpha: np.ndarray = field(default_factory=lambda: np.zeros(0))
    n_iter: int = 0
    kkt_residual: float = 0.0
    dual_objective: float = 0.0
    version: int = 0

    @property
    def is_constant(self) -> bool:
        return len(self.coef) == 0


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """Pairwise exp(-gamma * ||a_i - b_j||^2), shape (len(a), len(b))."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    sq = (
        (a**2).sum(axis=1)[:, None]
        + (b**2).sum(axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


@njit(cache=True)
def _smo_solve(K, y, c, tol, max_iter):  # pragma: no cover - exercised via svm_fit
    """Maximal-violating-pair SMO.  Returns (alpha, grad, n_iter, gap)."""
    n = K.shape[0]
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 1/2 a'Qa - sum(a), Q_ij = y_i y_j K_ij
    it = 0
    gap = np.inf
    while it < max_iter:
        m_val = -np.inf
        m_idx = -1
        big_m_val = np.inf
        big_m_idx = -1
        for t in range(n):
            v = -y[t] * grad[t]
            if (y[t] > 0.0 and alpha[t] < c) or (y[t] < 0.0 and alpha[t] > 0.0):
                if v > m_val:
                    m_val = v
                    m_idx = t
            if (y[t] > 0.0 and alpha[t] > 0.0) or (y[t] < 0.0 and alpha[t] < c):
                if v < big_m_val:
                    big_m_val = v
                    big_m_idx = t
        if m_idx < 0 or big_m_idx < 0:
            gap = 0.0
            break
        gap = m_val - big_m_val
        if gap <= tol:
            break

        i = m_idx
        j = big_m_idx
        old_ai = alpha[i]
        old_aj = alpha[j]
        quad = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if quad <= 0.0:
            quad = 1e-12

        if y[i] != y[j]:
            delta = (-grad[i] - grad[j]) / quad
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0.0:
                if alpha[j] < 0.0:
                    alpha[j] = 0.0
                    alpha[i] = diff
            else:
                if alpha[i] < 0.0:
                    alpha[i] = 0.0
                    alpha[j] = -diff
            if diff > 0.0:
                if alpha[i] > c:
                    alpha[i] = c
                    alpha[j] = c - diff
            else:
                if alpha[j] > c:
                    alpha[j] = c
                    alpha[i] = c + diff
        else:
            delta = (grad[i] - grad[j]) / quad
            s = alpha[i] + alpha[j]
            alpha[i] -= delta
            alpha[j] += delta
            if s > c:
                if alpha[i] > c:
                    alpha[i] = c
                    alpha[j] = s - c
            else:
                if alpha[j] < 0.0:
                    alpha[j] = 0.0
                    alpha[i] = s
            if s > c:
                if alpha[j] > c:
                    alpha[j] = c
                    alpha[i] = s - c
            else:
                if alpha[i] < 0.0:
                    alpha[i] = 0.0
                    alpha[j] = s

        dai = alpha[i] - old_ai
        daj = alpha[j] - old_aj
        wi = y[i] * dai
        wj = y[j] * daj
        for t in range(n):
            grad[t] += y[t] * (K[i, t] * wi + K[j, t] * wj)
        it += 1
    return alpha, grad, it, gap


def svm_fit(
    x: np.ndarray,
    y: np.ndarray,
    params: SvmHyperParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SvmModel:
    """Fit the SVM on labeled examples (y in {+1 red, -1 blue}).

    A single-class input produces a constant-decision fallback model.  Raises
    ConvergenceError when the pair-update cap is hit before the duality gap
    closes, which signals pathological tolerance settings.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    if x.ndim != 2 or len(x) != len(y):
        raise ValueError("x must be (n, d) with matching labels")
    if len(y) == 0:
        raise ValueError("need at least one training example")

    classes = np.unique(y)
    if len(classes) == 1:
        return SvmModel(
            support_x=np.zeros((0, x.shape[1])),
            coef=np.zeros(0),
            bias=float(classes[0]),
            params=params,
            alpha=np.zeros(len(y)),
        )

    yf = y.astype(float)
    kernel = rbf_kernel(x, x, params.gamma)
    alpha, grad, n_iter, gap = _smo_solve(kernel, yf, float(params.c), float(tol), int(max_iter))
    if gap > tol:
        raise ConvergenceError(f"SMO still has KKT gap {gap:.3g} after {n_iter} pair updates")

    v = -yf * grad  # y_t - u_t, the bias candidates
    free = (alpha > 0.0) & (alpha < params.c)
    if free.any():
        bias = float(v[free].mean())
    else:
        up = ((yf > 0) & (alpha < params.c)) | ((yf < 0) & (alpha > 0))
        low = ((yf > 0) & (alpha > 0)) | ((yf < 0) & (alpha < params.c))
        bias = float((v[up].max() + v[low].min()) / 2.0)

    margins = (grad + 1.0) + yf * bias  # y_t * f(x_t)
    at_zero = alpha <= 0.0
    at_c = alpha >= params.c
    residual = np.where(
        at_zero,
        np.maximum(0.0, 1.0 - margins),
        np.where(at_c, np.maximum(0.0, margins - 1.0), np.abs(margins - 1.0)),
    )
    support = alpha > 1e-12
    return SvmModel(
        support_x=x[support].copy(),
        coef=(alpha * yf)[support],
        bias=bias,
        params=params,
        alpha=alpha,
        n_iter=n_iter,
        kkt_residual=float(residual.max()),
        dual_objective=float(0.5 * (alpha.sum() - alpha @ grad)),
    )


def decision_values(model: SvmModel, x: np.ndarray) -> np.ndarray:
    """Decision function sum_i coef_i K(support_i, x) + bias over rows of x."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if model.is_constant:
        return np.full(len(x), model.bias)
    return rbf_kernel(x, model.support_x, model.params.gamma) @ model.coef + model.bias


def decision_value(model: SvmModel, x: np.ndarray) -> float:
    return float(decision_values(model, x)[0])


def predict(model: SvmModel, x: np.ndarray) -> np.ndarray:
    """Label prediction; ties (decision value 0) go to red, the positive class."""
    values = decision_values(model, x)
    return np.where(values >= 0.0, RED, BLUE).astype(np.int8)


def max_kkt_violation(model: SvmModel, x: np.ndarray, y: np.ndarray) -> float:
    """Recompute the worst KKT residual of ``model`` on its training set."""
    alpha = model.alpha
    margins = np.asarray(y, dtype=float) * decision_values(model, x)
    c = model.params.c
    residual = np.where(
        alpha <= 0.0,
        np.maximum(0.0, 1.0 - margins),
        np.where(alpha >= c, np.maximum(0.0, margins - 1.0), np.abs(margins - 1.0)),
    )
    return float(residual.max())


def f1_score(preds: np.ndarray, truth: np.ndarray) -> float:
    """F1 of the red class; defined as 0 when precision + recall is 0."""
    counts = ConfusionCounts.from_predictions(preds, truth)
    return f1_from_counts(counts)


def f1_from_counts(counts: ConfusionCounts) -> float:
    denom = 2 * counts.tp + counts.fp + counts.fn
    if denom == 0:
        return 0.0
    return 2.0 * counts.tp / denom
