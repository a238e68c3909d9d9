from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, SingleClassDataset

UNLABELED = -1


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Feature matrix with integer labels indexing ``class_names``.

    A label of ``UNLABELED`` (-1) marks rows whose class is unknown (``?`` in
    ARFF); such rows can be predicted but not trained on.
    """

    feature_names: tuple
    X: np.ndarray
    y: np.ndarray
    class_names: tuple

    def __post_init__(self):
        X = np.array(self.X, dtype=np.float64, copy=True)
        y = np.array(self.y, dtype=np.int64, copy=True).ravel()
        names = tuple(str(n) for n in self.feature_names)
        classes = tuple(str(c) for c in self.class_names)
        if X.ndim == 1 and X.size == 0:
            X = X.reshape(0, len(names))
        if X.ndim != 2:
            raise DimensionMismatch("X must be two-dimensional")
        if X.shape[1] != len(names):
            raise DimensionMismatch(f"{X.shape[1]} columns but {len(names)} feature names")
        if X.shape[0] != y.shape[0]:
            raise DimensionMismatch(f"{X.shape[0]} rows but {y.shape[0]} labels")
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        if len(set(classes)) != len(classes):
            raise ValueError("class names must be unique")
        if not np.isfinite(X).all():
            raise ValueError("feature matrix contains NaN or infinite values")
        if y.size and (y.min() < UNLABELED or y.max() >= len(classes)):
            raise ValueError("labels must index class_names")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "class_names", classes)

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_counts(self) -> np.ndarray:
        labeled = self.y[self.y >= 0]
        return np.bincount(labeled, minlength=self.n_classes)

    def require_trainable(self):
        if (self.y < 0).any():
            raise ValueError("dataset contains unlabeled rows")
        if self.n_classes < 2 or np.count_nonzero(self.class_counts()) < 2:
            raise SingleClassDataset("training needs at least two populated classes")

    def subset(self, rows) -> "LabeledDataset":
        rows = np.asarray(rows, dtype=np.int64)
        return LabeledDataset(self.feature_names, self.X[rows], self.y[rows], self.class_names)

    def select_columns(self, columns) -> "LabeledDataset":
        columns = list(columns)
        return LabeledDataset(
            tuple(self.feature_names[c] for c in columns),
            self.X[:, columns], self.y, self.class_names,
        )

    def __eq__(self, other):
        return (isinstance(other, LabeledDataset)
                and self.feature_names == other.feature_names
                and self.class_names == other.class_names
                and np.array_equal(self.X, other.X)
                and np.array_equal(self.y, other.y))


@dataclass(frozen=True, eq=False)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, X) -> "Standardizer":
        X = np.asarray(X, dtype=np.float64)
        std = X.std(axis=0)
        std = np.where(std > 0, std, 1.0)
        return cls(X.mean(axis=0), std)

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.mean.shape[0]:
            raise DimensionMismatch(f"expected {self.mean.shape[0]} features, got {X.shape[-1]}")
        return (X - self.mean) / self.std
