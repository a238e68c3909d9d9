"""Stratified k-fold cross-validation and one-vs-rest AUC model selection."""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from ..errors import SingleClassDataset, UndefinedAuc
from ..metrics import ConfusionMatrix, confusion_from_predictions
from .dataset import LabeledDataset
from .model import TrainedModel, canonical_kind, resolve_hyperparameters, train


def stratified_kfold(ds_or_labels, k: int = 10, seed: int = 0) -> list[np.ndarray]:
    """Disjoint test folds covering every row.

    Each class is shuffled with a seeded generator and dealt round-robin,
    the dealing position carrying over from one class to the next so fold
    sizes stay within one of each other. If some class has fewer than ``k``
    members, ``k`` drops to that count (never below 2) with a warning.
    """
    y = ds_or_labels.y if isinstance(ds_or_labels, LabeledDataset) else np.asarray(ds_or_labels)
    y = np.asarray(y, dtype=np.int64)
    if (y < 0).any():
        raise ValueError("cannot stratify unlabeled rows")
    classes = np.unique(y)
    if len(classes) < 2:
        raise SingleClassDataset("stratification needs at least two classes")
    if k < 2:
        raise ValueError("k must be >= 2")
    smallest = int(min(np.count_nonzero(y == c) for c in classes))
    if smallest < k:
        new_k = max(2, smallest)
        warnings.warn(f"smallest class has {smallest} samples; using {new_k} folds instead of {k}",
                      stacklevel=2)
        k = new_k
    if k > len(y):
        raise ValueError("more folds than samples")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    position = 0
    for c in classes:
        members = rng.permutation(np.flatnonzero(y == c))
        for idx in members:
            folds[position % k].append(int(idx))
            position += 1
    return [np.sort(np.array(f, dtype=np.int64)) for f in folds]


def class_auc(column, positive) -> float:
    """Mann-Whitney AUC of one score column, mid-ranks for ties."""
    positive = np.asarray(positive, dtype=bool)
    n_pos = int(positive.sum())
    n_neg = positive.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAuc("class needs positive and negative samples")
    ranks = rankdata(column, method="average")
    u = float(ranks[positive].sum()) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def macro_ovr_auc(scores, y, n_classes: int | None = None) -> float:
    """Mean one-vs-rest AUC over the classes having both positives and
    negatives among ``y``."""
    scores = np.asarray(scores, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if scores.ndim != 2 or scores.shape[0] != y.shape[0]:
        raise ValueError("scores must be an (n, J) matrix matching y")
    J = scores.shape[1] if n_classes is None else n_classes
    aucs = []
    for j in range(J):
        positive = y == j
        if positive.any() and not positive.all():
            aucs.append(class_auc(scores[:, j], positive))
    if not aucs:
        raise UndefinedAuc("no class has both positive and negative samples")
    return math.fsum(aucs) / len(aucs)


@dataclass(frozen=True, eq=False)
class FoldResult:
    test_index: np.ndarray
    confusion: ConfusionMatrix
    auc: float  # NaN when undefined on this fold
    predictions: np.ndarray
    scores: np.ndarray


@dataclass(frozen=True, eq=False)
class CvReport:
    kind: str
    hyperparameters: dict
    k: int
    seed: int
    per_fold: tuple
    pooled: ConfusionMatrix
    selected_fold: int
    selected_model: TrainedModel | None = field(default=None, repr=False)
    flags: frozenset = frozenset()

    @property
    def pooled_predictions(self) -> np.ndarray:
        n = sum(len(f.test_index) for f in self.per_fold)
        out = np.empty(n, dtype=np.int64)
        for f in self.per_fold:
            out[f.test_index] = f.predictions
        return out

    @property
    def pooled_scores(self) -> np.ndarray:
        n = sum(len(f.test_index) for f in self.per_fold)
        J = self.per_fold[0].scores.shape[1]
        out = np.empty((n, J))
        for f in self.per_fold:
            out[f.test_index] = f.scores
        return out


def fold_seed(seed: int, fold: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(fold)]).generate_state(1)[0])


def _run_fold(args):
    kind, ds, hp, seed, fold, test = args
    train_rows = np.setdiff1d(np.arange(ds.n_samples), test)
    model = train(kind, ds.subset(train_rows), hp, fold_seed(seed, fold))
    held = ds.subset(test)
    scores = model.predict_scores(held.X)
    pred = model.predict(held.X)
    cm = confusion_from_predictions(held.y, pred, ds.n_classes, ds.class_names)
    try:
        auc = macro_ovr_auc(scores, held.y, ds.n_classes)
    except UndefinedAuc:
        auc = math.nan
    return FoldResult(np.asarray(test), cm, auc, pred, scores), model


def cross_validate(kind: str, ds: LabeledDataset, hp=None, k: int = 10, seed: int = 0,
                   jobs: int = 1) -> CvReport:
    """Stratified k-fold evaluation.

    Every fold is trained from scratch on the other folds (standardisation
    included), so nothing about held-out rows leaks into training. The fold
    with the largest macro AUC (lowest index on ties) supplies the selected
    model; the pooled matrix aggregates all held-out predictions. Fold
    seeds derive from ``(seed, fold)`` and results are gathered in fold
    order, so ``jobs`` never changes the outcome.
    """
    kind = canonical_kind(kind)
    hp = resolve_hyperparameters(kind, hp)
    ds.require_trainable()
    folds = stratified_kfold(ds, k, seed)
    tasks = [(kind, ds, hp, seed, i, test) for i, test in enumerate(folds)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_fold, tasks))
    else:
        results = [_run_fold(t) for t in tasks]
    per_fold = tuple(r[0] for r in results)
    pooled = per_fold[0].confusion
    for f in per_fold[1:]:
        pooled = pooled + f.confusion
    aucs = np.array([f.auc for f in per_fold])
    flags = set()
    if np.isnan(aucs).all():
        selected = 0
        flags.add("auc_undefined")
    else:
        selected = int(np.argmax(np.where(np.isnan(aucs), -np.inf, aucs)))
    return CvReport(kind, hp, len(folds), seed, per_fold, pooled, selected,
                    results[selected][1], frozenset(flags))
