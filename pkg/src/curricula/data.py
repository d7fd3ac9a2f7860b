"""Datasets: synthetic generation, CSV loading, and stratified k-fold splits.

The synthetic generator produces three Gaussian blobs arranged so that
telling class 0 apart from classes {1, 2} is structurally easier than
telling 1 and 2 apart: classes 1 and 2 sit on a common axis with their
mean separation scaled by the overlap factor (0 means coincident means),
while class 0 is displaced by the full separation along an orthogonal
axis. Shrinking the overlap factor makes the fine task harder without
touching the coarse one.

CSV format: header ``id,label,f1,...,fd``, one sample per row, labels in
{0, 1, 2}, decimal feature values. Partition exports are rows of
``id,fold_index,split`` with split in {train, val, test}.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_CLASSES = (0, 1, 2)


class ParseError(ValueError):
    """A data file that does not match the documented format."""


@dataclass(frozen=True)
class Sample:
    id: int
    y: int
    features: np.ndarray


@dataclass(frozen=True)
class Dataset:
    """An immutable collection of feature vectors with fine labels.

    ``features`` is (n, d) float64, ``labels`` and ``ids`` are (n,) int64;
    ids are unique and non-negative. Arrays are frozen after construction
    so datasets can be shared freely across threads.
    """

    features: np.ndarray
    labels: np.ndarray
    ids: np.ndarray

    def __post_init__(self) -> None:
        features = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        labels = np.asarray(self.labels, dtype=np.int64).copy()
        ids = np.asarray(self.ids, dtype=np.int64).copy()
        if features.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {features.shape}")
        n = features.shape[0]
        if n == 0:
            raise ValueError("dataset must contain at least one sample")
        if features.shape[1] < 1:
            raise ValueError("feature dimension must be at least 1")
        if labels.shape != (n,) or ids.shape != (n,):
            raise ValueError("features, labels, and ids must have matching lengths")
        if not np.all(np.isfinite(features)):
            raise ValueError("features must be finite")
        if not np.isin(labels, _CLASSES).all():
            raise ValueError("labels must be 0, 1, or 2")
        if (ids < 0).any():
            raise ValueError("ids must be non-negative")
        if np.unique(ids).size != n:
            raise ValueError("ids must be unique")
        for arr in (features, labels, ids):
            arr.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "ids", ids)

    def __len__(self) -> int:
        return self.features.shape[0]

    def __getitem__(self, i: int) -> Sample:
        return Sample(id=int(self.ids[i]), y=int(self.labels[i]), features=self.features[i])

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple[int, int, int]:
        counts = np.bincount(self.labels, minlength=3)
        return int(counts[0]), int(counts[1]), int(counts[2])

    def subset(self, ids: np.ndarray) -> "Dataset":
        """The sub-dataset holding exactly the given ids, in the given order."""
        index_of = {int(v): i for i, v in enumerate(self.ids)}
        try:
            rows = np.array([index_of[int(v)] for v in np.asarray(ids).ravel()], dtype=np.int64)
        except KeyError as e:
            raise ValueError(f"id {e.args[0]} not present in dataset") from None
        return Dataset(self.features[rows], self.labels[rows], self.ids[rows])


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of the three-blob synthetic dataset.

    ``counts`` are the per-class sample counts (class 0, 1, 2). The means
    of classes 1 and 2 are ``overlap * separation`` apart; class 0 sits at
    distance ``separation`` along an orthogonal axis. ``noise`` is the
    isotropic Gaussian standard deviation.
    """

    counts: tuple[int, int, int]
    feature_dim: int = 2
    separation: float = 3.0
    overlap: float = 0.25
    noise: float = 1.0
    seed: int | None = None

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != 3 or any(c < 1 for c in counts):
            raise ValueError(f"counts must be three positive integers, got {self.counts!r}")
        object.__setattr__(self, "counts", counts)
        if self.feature_dim < 2:
            raise ValueError("feature_dim must be at least 2 (class 0 needs an orthogonal axis)")
        if not (self.separation > 0):
            raise ValueError(f"separation must be positive, got {self.separation}")
        if not (0.0 <= self.overlap <= 1.0):
            raise ValueError(f"overlap must lie in [0, 1], got {self.overlap}")
        if not (self.noise > 0):
            raise ValueError(f"noise must be positive, got {self.noise}")


def class_means(config: SynthConfig) -> np.ndarray:
    """The (3, d) matrix of blob means implied by a config."""
    d = config.feature_dim
    means = np.zeros((3, d))
    means[0, 1] = config.separation
    half = config.overlap * config.separation / 2.0
    means[1, 0] = -half
    means[2, 0] = half
    return means


def generate_synthetic(config: SynthConfig) -> Dataset:
    """Draw the three-blob dataset; deterministic given ``config.seed``."""
    if config.seed is None:
        raise ValueError("SynthConfig.seed must be set before generating data")
    rng = np.random.default_rng(config.seed)
    means = class_means(config)
    blocks = []
    labels = []
    for c, n_c in enumerate(config.counts):
        blocks.append(means[c] + config.noise * rng.standard_normal((n_c, config.feature_dim)))
        labels.append(np.full(n_c, c, dtype=np.int64))
    features = np.vstack(blocks)
    labels = np.concatenate(labels)
    ids = np.arange(features.shape[0], dtype=np.int64)
    return Dataset(features, labels, ids)


def load_csv(path: str | Path) -> Dataset:
    """Load a dataset from the documented ``id,label,f1,...,fd`` format."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file, no samples") from None
        header = [h.strip() for h in header]
        if len(header) < 3 or header[0] != "id" or header[1] != "label":
            raise ParseError(f"{path}: line 1: header must be 'id,label,f1,...,fd', got {','.join(header)!r}")
        dim = len(header) - 2

        ids, labels, rows = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != dim + 2:
                raise ParseError(f"{path}: line {lineno}: expected {dim + 2} columns, got {len(row)}")
            try:
                sample_id = int(row[0])
                label = int(row[1])
                values = [float(v) for v in row[2:]]
            except ValueError as e:
                raise ParseError(f"{path}: line {lineno}: {e}") from None
            if label not in _CLASSES:
                raise ParseError(f"{path}: line {lineno}: label must be 0, 1, or 2, got {label}")
            if sample_id < 0:
                raise ParseError(f"{path}: line {lineno}: id must be non-negative, got {sample_id}")
            if not all(np.isfinite(values)):
                raise ParseError(f"{path}: line {lineno}: features must be finite")
            ids.append(sample_id)
            labels.append(label)
            rows.append(values)

    if not rows:
        raise ParseError(f"{path}: no samples")
    if len(set(ids)) != len(ids):
        raise ParseError(f"{path}: duplicate sample ids")
    return Dataset(np.array(rows, dtype=np.float64), np.array(labels), np.array(ids))


def write_csv(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset in the format ``load_csv`` reads, at full precision."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "label"] + [f"f{i + 1}" for i in range(dataset.feature_dim)])
        for i in range(len(dataset)):
            writer.writerow(
                [int(dataset.ids[i]), int(dataset.labels[i])]
                + [repr(float(v)) for v in dataset.features[i]]
            )


@dataclass(frozen=True)
class FoldPartition:
    """Disjoint train/val/test id sets for one cross-validation iteration."""

    fold_index: int
    train_ids: np.ndarray
    val_ids: np.ndarray
    test_ids: np.ndarray

    def __post_init__(self) -> None:
        for name in ("train_ids", "val_ids", "test_ids"):
            arr = np.asarray(getattr(self, name), dtype=np.int64).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        sets = [set(self.train_ids.tolist()), set(self.val_ids.tolist()), set(self.test_ids.tolist())]
        total = len(self.train_ids) + len(self.val_ids) + len(self.test_ids)
        if len(sets[0] | sets[1] | sets[2]) != total:
            raise ValueError("train/val/test id sets must be pairwise disjoint")
        if len(self.train_ids) == 0 or len(self.test_ids) == 0:
            raise ValueError("train and test sets must be non-empty")


def stratified_kfold(
    dataset: Dataset, k: int, val_fraction: float = 0.2, seed: int = 0
) -> list[FoldPartition]:
    """Stratified k-fold partitions with a per-class train/validation split.

    Within each class, sample ids are shuffled once with the seeded
    generator and dealt round-robin into k folds, so per-class fold sizes
    differ by at most 1. Partition ``i`` uses fold ``i`` as the test set;
    the remaining ids of each class are reshuffled (generator seeded by
    ``[seed, i]``) and split val/train at ``val_fraction``, rounded to the
    nearest integer per class. All per-class counts therefore stay within
    one sample of exact proportionality.
    """
    if k < 2:
        raise ValueError(f"fold count must be at least 2, got {k}")
    if not (0.0 < val_fraction < 1.0):
        raise ValueError(f"val_fraction must lie in (0, 1), got {val_fraction}")
    counts = dataset.class_counts()
    for c in _CLASSES:
        if counts[c] < k:
            raise ValueError(
                f"class {c} has {counts[c]} samples; need at least k={k} for stratified folds"
            )

    rng = np.random.default_rng(seed)
    folds_by_class: list[list[np.ndarray]] = []
    for c in _CLASSES:
        class_ids = dataset.ids[dataset.labels == c]
        perm = rng.permutation(class_ids)
        folds_by_class.append([perm[j::k] for j in range(k)])

    partitions = []
    for i in range(k):
        split_rng = np.random.default_rng([seed, i])
        test_parts, val_parts, train_parts = [], [], []
        for c in _CLASSES:
            test_parts.append(folds_by_class[c][i])
            remaining = np.concatenate([folds_by_class[c][j] for j in range(k) if j != i])
            remaining = split_rng.permutation(remaining)
            n_val = int(val_fraction * len(remaining) + 0.5)
            val_parts.append(remaining[:n_val])
            train_parts.append(remaining[n_val:])
        partitions.append(
            FoldPartition(
                fold_index=i,
                train_ids=np.sort(np.concatenate(train_parts)),
                val_ids=np.sort(np.concatenate(val_parts)),
                test_ids=np.sort(np.concatenate(test_parts)),
            )
        )
    return partitions


def write_partitions_csv(partitions: list[FoldPartition], path: str | Path) -> None:
    """Export partitions as ``id,fold_index,split`` rows (split in train/val/test)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "fold_index", "split"])
        for part in partitions:
            for split, ids in (
                ("train", part.train_ids),
                ("val", part.val_ids),
                ("test", part.test_ids),
            ):
                for sample_id in ids:
                    writer.writerow([int(sample_id), part.fold_index, split])
