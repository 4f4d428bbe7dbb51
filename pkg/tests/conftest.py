import numpy as np
import pytest

from xglearn.learner import SvmHyperParams, svm_fit
from xglearn.synthdata import SyntheticConfig, generate_synthetic, stratified_kfold

# Small generator settings used wherever full scale would just burn time.
SMALL_SYNTH = SyntheticConfig(
    n_blue=120, n_red=30, grid_side=3, cluster_std=0.02, exclusion_radius=0.06, seed=5
)


@pytest.fixture(scope="session")
def small_dataset():
    return generate_synthetic(SMALL_SYNTH)


@pytest.fixture(scope="session")
def small_splits(small_dataset):
    return stratified_kfold(small_dataset, 3, seed=5)


@pytest.fixture(scope="session")
def default_dataset():
    return generate_synthetic(SyntheticConfig(seed=0))


@pytest.fixture(scope="session")
def small_model(small_dataset, small_splits):
    split = small_splits[0]
    return svm_fit(
        small_dataset.x[split.train_indices],
        small_dataset.y[split.train_indices],
        SvmHyperParams(),
    )


def two_class_problem(seed: int, n: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """Random points with random labels, nudged to contain both classes."""
    rng = np.random.default_rng(seed)
    x = rng.random((n, 2))
    y = np.where(rng.random(n) < 0.5, 1, -1)
    if len(np.unique(y)) == 1:
        y[0] = -y[0]
    return x, y
