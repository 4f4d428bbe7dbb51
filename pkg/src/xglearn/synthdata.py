"""Synthetic rare-class benchmark: grid-clustered red points in a uniform blue sea.

Red (positive, minority) points are sampled from Gaussian clusters centered on
a regular grid inside the unit square; blue points are rejection-sampled
uniformly outside an exclusion radius around every cluster center, so the two
classes have little or no overlap.  Everything is a pure function of
(config, seed).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

RED = 1
BLUE = -1

LABEL_NAMES = {RED: "red", BLUE: "blue"}
LABEL_VALUES = {name: value for value, name in LABEL_NAMES.items()}

# Rejection sampling draws candidate batches of this size until n_blue points
# are accepted; the batch count is capped so an infeasible exclusion radius
# fails loudly instead of spinning.
_REJECTION_BATCH = 4096
_MAX_REJECTION_BATCHES = 200


class GenerationError(RuntimeError):
    """Rejection sampling could not place the requested number of points."""


def label_name(value: int) -> str:
    try:
        return LABEL_NAMES[int(value)]
    except KeyError:
        raise ValueError(f"unknown label value {value!r}, expected {RED} or {BLUE}") from None


def label_value(name: str) -> int:
    try:
        return LABEL_VALUES[name]
    except KeyError:
        raise ValueError(f"unknown label {name!r}, expected 'red' or 'blue'") from None


@dataclass(frozen=True)
class SyntheticConfig:
    """Generator knobs for the benchmark.

    Defaults reproduce the standard instance: 941 blue and 100 red points,
    25 cluster centers on a 5x5 grid, cluster std 0.02 and exclusion radius
    0.06 (three sigmas).
    """

    n_blue: int = 941
    n_red: int = 100
    grid_side: int = 5
    cluster_std: float = 0.02
    exclusion_radius: float = 0.06
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_blue <= 0 or self.n_red <= 0:
            raise ValueError("class counts must be positive")
        if self.grid_side < 1:
            raise ValueError("grid_side must be >= 1")
        if self.cluster_std <= 0:
            raise ValueError("cluster_std must be positive")
        if self.exclusion_radius < self.cluster_std:
            raise ValueError("exclusion_radius must be >= cluster_std")

    @property
    def n_clusters(self) -> int:
        return self.grid_side**2

    def centers(self) -> np.ndarray:
        """Cluster centers, shape (grid_side**2, 2), row-major over the grid."""
        ticks = (2.0 * np.arange(self.grid_side) + 1.0) / (2.0 * self.grid_side)
        gx, gy = np.meshgrid(ticks, ticks, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass
class Dataset:
    """Generated benchmark examples in fixed order (red block, then blue block).

    ``red_cluster`` is generator metadata: the grid cell each red point was
    drawn from (-1 for blue points).  It is not preserved by the CSV format.
    """

    x: np.ndarray  # (n, 2) coordinates in [0, 1]^2
    y: np.ndarray  # (n,) labels, +1 red / -1 blue
    seed: int | None = None
    red_cluster: np.ndarray | None = None  # (n,) generating cell, -1 for blue
    config: SyntheticConfig | None = None

    def __len__(self) -> int:
        return len(self.y)

    @property
    def n_red(self) -> int:
        return int(np.sum(self.y == RED))

    @property
    def n_blue(self) -> int:
        return int(np.sum(self.y == BLUE))

    @property
    def meta(self) -> dict:
        return {"n_red": self.n_red, "n_blue": self.n_blue, "seed": self.seed}

    def indices_of(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.y == label)


@dataclass(frozen=True)
class FoldSplit:
    """One stratified train/test partition of the dataset indices."""

    fold_id: int
    train_indices: np.ndarray
    test_indices: np.ndarray


def generate_synthetic(config: SyntheticConfig) -> Dataset:
    """Draw the benchmark dataset deterministically from ``config.seed``.

    Red points pick one of the grid centers uniformly and add an isotropic
    Gaussian offset (clamped to the unit square).  Blue points are sampled
    uniformly on [0, 1]^2, rejecting anything within ``exclusion_radius`` of
    any center.

    Raises GenerationError when rejection sampling exhausts its attempt cap,
    which signals an infeasible exclusion radius.
    """
    rng = np.random.default_rng(config.seed)
    centers = config.centers()

    cluster_ids = rng.integers(0, len(centers), size=config.n_red)
    red = centers[cluster_ids] + rng.normal(0.0, config.cluster_std, size=(config.n_red, 2))
    np.clip(red, 0.0, 1.0, out=red)

    accepted: list[np.ndarray] = []
    n_accepted = 0
    for _ in range(_MAX_REJECTION_BATCHES):
        cand = rng.uniform(0.0, 1.0, size=(_REJECTION_BATCH, 2))
        d2 = ((cand[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        keep = cand[d2.min(axis=1) >= config.exclusion_radius**2]
        accepted.append(keep)
        n_accepted += len(keep)
        if n_accepted >= config.n_blue:
            break
    else:
        raise GenerationError(
            f"accepted only {n_accepted}/{config.n_blue} blue points after "
            f"{_MAX_REJECTION_BATCHES} batches; exclusion_radius too large?"
        )
    blue = np.concatenate(accepted)[: config.n_blue]

    x = np.concatenate([red, blue])
    y = np.concatenate(
        [np.full(config.n_red, RED, dtype=np.int8), np.full(config.n_blue, BLUE, dtype=np.int8)]
    )
    red_cluster = np.concatenate(
        [cluster_ids.astype(np.int16), np.full(config.n_blue, -1, dtype=np.int16)]
    )
    return Dataset(x=x, y=y, seed=config.seed, red_cluster=red_cluster, config=config)


def stratified_kfold(dataset: Dataset, k: int, seed: int) -> list[FoldSplit]:
    """Split indices into k stratified folds; every index lands in exactly one test set."""
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    test_sets: list[list[np.ndarray]] = [[] for _ in range(k)]
    for label in (RED, BLUE):
        members = dataset.indices_of(label)
        if len(members) < k:
            raise ValueError(
                f"class {label_name(label)} has {len(members)} members, needs >= {k}"
            )
        chunks = np.array_split(rng.permutation(members), k)
        for fold, chunk in enumerate(chunks):
            test_sets[fold].append(chunk)

    all_indices = np.arange(len(dataset))
    splits = []
    for fold in range(k):
        test = np.sort(np.concatenate(test_sets[fold]))
        train = np.setdiff1d(all_indices, test, assume_unique=True)
        splits.append(FoldSplit(fold_id=fold, train_indices=train, test_indices=test))
    return splits


def initial_training_set(split: FoldSplit, dataset: Dataset, seed: int) -> np.ndarray:
    """Seed labeled set: 5 train-pool indices with at least two per class.

    Two red and two blue indices are drawn uniformly without replacement, then
    a fifth index is drawn uniformly from the rest of the pool, so the class
    counts are always (2, 3) or (3, 2).
    """
    rng = np.random.default_rng(seed)
    pool = split.train_indices
    labels = dataset.y[pool]
    chosen: list[np.ndarray] = []
    for label in (RED, BLUE):
        members = pool[labels == label]
        if len(members) < 2:
            raise ValueError(f"train pool has fewer than 2 {label_name(label)} examples")
        chosen.append(rng.choice(members, size=2, replace=False))
    picked = np.concatenate(chosen)
    rest = np.setdiff1d(pool, picked, assume_unique=False)
    if len(rest) < 1:
        raise ValueError("train pool smaller than 5 examples")
    fifth = rng.choice(rest, size=1, replace=False)
    return np.sort(np.concatenate([picked, fifth]))


def to_csv(dataset: Dataset, path: str | Path) -> None:
    """Write the dataset as ``x1,x2,label`` rows; floats use shortest round-trip repr."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x1", "x2", "label"])
        for (x1, x2), label in zip(dataset.x, dataset.y):
            writer.writerow([repr(float(x1)), repr(float(x2)), label_name(label)])


def from_csv(path: str | Path) -> Dataset:
    """Read a ``x1,x2,label`` CSV.  Generator metadata is not recoverable."""
    xs: list[tuple[float, float]] = []
    ys: list[int] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["x1", "x2", "label"]:
            raise ValueError(f"unexpected dataset header {header!r}")
        for row in reader:
            if not row:
                continue
            x1, x2, label = row
            xs.append((float(x1), float(x2)))
            ys.append(label_value(label))
    return Dataset(x=np.asarray(xs, dtype=float), y=np.asarray(ys, dtype=np.int8))
