"""Confusion matrices and the multi-class evaluation measures.

Per class ``i`` (one-vs-rest): sensitivity, specificity, precision and F1.
Aggregates: accuracy, macro specificity/sensitivity/precision, MAvG (geometric
mean of per-class recalls), MAvA (arithmetic mean of per-class recalls) and
MFM (mean per-class F-measure). Everything is reported in percent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyMatrix, LengthMismatch


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    counts: np.ndarray  # rows = true class, columns = predicted class
    class_names: tuple | None = None

    def __post_init__(self):
        c = np.array(self.counts, dtype=np.int64, copy=True)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("confusion matrix must be square")
        if (c < 0).any():
            raise ValueError("counts must be non-negative")
        names = tuple(self.class_names) if self.class_names is not None else tuple(
            str(i) for i in range(c.shape[0]))
        if len(names) != c.shape[0]:
            raise ValueError("class_names length does not match matrix size")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "class_names", names)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if self.class_names != other.class_names:
            raise ValueError("cannot merge matrices over different classes")
        return ConfusionMatrix(self.counts + other.counts, self.class_names)

    def __eq__(self, other):
        return (isinstance(other, ConfusionMatrix)
                and self.class_names == other.class_names
                and np.array_equal(self.counts, other.counts))


def confusion_from_predictions(y_true, y_pred, n_classes: int, class_names=None) -> ConfusionMatrix:
    t = np.asarray(y_true, dtype=np.int64).ravel()
    p = np.asarray(y_pred, dtype=np.int64).ravel()
    if t.shape != p.shape:
        raise LengthMismatch(f"{t.size} true labels vs {p.size} predictions")
    if t.size == 0:
        raise LengthMismatch("no samples")
    if t.min() < 0 or p.min() < 0 or t.max() >= n_classes or p.max() >= n_classes:
        raise ValueError(f"labels must lie in [0, {n_classes})")
    counts = np.bincount(t * n_classes + p, minlength=n_classes * n_classes)
    return ConfusionMatrix(counts.reshape(n_classes, n_classes), class_names)


@dataclass(frozen=True)
class ClassMetrics:
    name: str
    sensitivity: float
    specificity: float
    precision: float
    f1: float


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    macro_specificity: float
    macro_sensitivity: float
    macro_precision: float
    mavg: float
    mava: float
    mfm: float
    per_class: tuple = ()
    flags: frozenset = field(default=frozenset(), compare=False)

    HEADLINE = ("accuracy", "macro_specificity", "macro_sensitivity",
                "macro_precision", "mavg", "mava", "mfm")

    def headline(self) -> dict:
        return {k: getattr(self, k) for k in self.HEADLINE}


def _ratio(num: float, den: float) -> float | None:
    return num / den if den > 0 else None


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    c = cm.counts.astype(np.float64)
    total = c.sum()
    if total < 1:
        raise EmptyMatrix("confusion matrix holds no samples")
    J = c.shape[0]
    tp = np.diag(c)
    fn = c.sum(axis=1) - tp
    fp = c.sum(axis=0) - tp
    tn = total - tp - fn - fp
    flags = set()
    per_class = []
    for i in range(J):
        name = cm.class_names[i]
        sen = _ratio(tp[i], tp[i] + fn[i])
        spe = _ratio(tn[i], fp[i] + tn[i])
        pre = _ratio(tp[i], tp[i] + fp[i])
        if sen is None:
            flags.add(f"sensitivity:{name}")
            sen = 0.0
        if spe is None:
            flags.add(f"specificity:{name}")
            spe = 0.0
        if pre is None:
            flags.add(f"precision:{name}")
            pre = 0.0
        if pre + sen > 0:
            f1 = 2.0 * pre * sen / (pre + sen)
        else:
            flags.add(f"f1:{name}")
            f1 = 0.0
        per_class.append(ClassMetrics(name, sen, spe, pre, f1))
    sens = [m.sensitivity for m in per_class]
    if min(sens) == 0.0:
        mavg = 0.0
    else:
        mavg = math.exp(math.fsum(math.log(s) for s in sens) / J)
    mava = math.fsum(sens) / J
    # exp/log rounding must not break MAvG <= MAvA
    mavg = min(mavg, mava)
    return MetricsReport(
        accuracy=100.0 * float(tp.sum()) / float(total),
        macro_specificity=100.0 * math.fsum(m.specificity for m in per_class) / J,
        macro_sensitivity=100.0 * mava,
        macro_precision=100.0 * math.fsum(m.precision for m in per_class) / J,
        mavg=100.0 * mavg,
        mava=100.0 * mava,
        mfm=100.0 * math.fsum(m.f1 for m in per_class) / J,
        per_class=tuple(per_class),
        flags=frozenset(flags),
    )
