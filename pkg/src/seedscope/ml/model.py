"""Training entry point and the immutable trained-model container."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch
from . import bayes, forest, knn, svm
from .dataset import LabeledDataset, Standardizer

KINDS = ("knn", "naive_bayes", "random_forest", "svm")
KIND_ALIASES = {"nb": "naive_bayes", "bayes": "naive_bayes", "rf": "random_forest",
                "forest": "random_forest", "knn": "knn", "svm": "svm",
                "naive_bayes": "naive_bayes", "random_forest": "random_forest"}

DEFAULTS = {
    "knn": {"k": 1},
    "naive_bayes": {"var_smoothing": 1e-9},
    "random_forest": {"trees": 100, "max_features": 0},
    "svm": {"c": 1.0, "max_epochs": 1000, "tol": 1e-4},
}

_BACKENDS = {"knn": knn, "naive_bayes": bayes, "random_forest": forest, "svm": svm}
_STANDARDIZED = {"knn", "svm"}
_SEEDED = {"random_forest", "svm"}


def canonical_kind(kind: str) -> str:
    try:
        return KIND_ALIASES[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown classifier {kind!r}; choose from {', '.join(KINDS)}") from None


def resolve_hyperparameters(kind: str, hp=None) -> dict:
    kind = canonical_kind(kind)
    merged = dict(DEFAULTS[kind])
    for key, value in (hp or {}).items():
        if value is None:
            continue
        if key not in merged:
            raise ValueError(f"{kind} has no hyperparameter {key!r}")
        merged[key] = type(DEFAULTS[kind][key])(value)
    if kind == "knn" and merged["k"] < 1:
        raise ValueError("k must be >= 1")
    if kind == "random_forest" and merged["trees"] < 1:
        raise ValueError("trees must be >= 1")
    if kind == "svm" and merged["c"] <= 0:
        raise ValueError("c must be positive")
    return merged


@dataclass(frozen=True, eq=False)
class TrainedModel:
    kind: str
    class_names: tuple
    feature_names: tuple
    hyperparameters: dict
    standardizer: Standardizer | None
    parameters: dict = field(repr=False)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def _prepare(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(f"model expects {self.n_features} features, got {X.shape[1]}")
        return self.standardizer.transform(X) if self.standardizer is not None else X

    def predict_scores(self, X) -> np.ndarray:
        """Per-class scores, rows summing to 1."""
        single = np.ndim(X) == 1
        out = _BACKENDS[self.kind].scores(self.parameters, self._prepare(X),
                                          len(self.class_names), **self.hyperparameters)
        return out[0] if single else out

    def predict(self, X) -> np.ndarray:
        """Predicted class indices: the score argmax (lowest index on ties);
        SVM settles equal votes by summed margins first."""
        single = np.ndim(X) == 1
        Z = self._prepare(X)
        if self.kind == "svm":
            out = svm.predict(self.parameters, Z, len(self.class_names))
        else:
            s = _BACKENDS[self.kind].scores(self.parameters, Z, len(self.class_names),
                                            **self.hyperparameters)
            out = np.argmax(s, axis=1)
        return out[0] if single else out


def train(kind: str, ds: LabeledDataset, hp=None, seed: int = 0) -> TrainedModel:
    """Fit one classifier; deterministic in ``(ds, hp, seed)``."""
    kind = canonical_kind(kind)
    params = resolve_hyperparameters(kind, hp)
    ds.require_trainable()
    X = ds.X
    standardizer = None
    if kind in _STANDARDIZED:
        standardizer = Standardizer.fit(X)
        X = standardizer.transform(X)
    extra = {"seed": int(seed)} if kind in _SEEDED else {}
    fitted = _BACKENDS[kind].fit(X, ds.y, ds.n_classes, **params, **extra)
    return TrainedModel(kind, ds.class_names, ds.feature_names, params, standardizer, fitted)
