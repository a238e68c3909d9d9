"""Text/CSV rendering of evaluation results and the classifier x feature
category comparison grid."""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass
from itertools import combinations

from .features import CATEGORIES, category_columns
from .metrics import MetricsReport, compute_metrics
from .ml import KINDS, cross_validate

METRIC_COLUMNS = ("accuracy", "macro_specificity", "macro_sensitivity", "mavg", "mfm",
                  "mava", "macro_precision")
METRIC_HEADERS = ("Acc", "Spec", "Sen", "MAvG", "MFM", "MAvA", "Prec")
CATEGORY_LABELS = {"morph": "Morph", "texture": "Texture", "color": "Colour"}
CLASSIFIER_LABELS = {"knn": "kNN", "naive_bayes": "Naive Bayes",
                     "random_forest": "Random Forest", "svm": "SVM"}


def category_combinations() -> list[tuple[str, ...]]:
    """The 7 non-empty category subsets: singles, pairs, then all three."""
    combos = []
    for size in range(1, len(CATEGORIES) + 1):
        combos.extend(combinations(CATEGORIES, size))
    return combos


def combination_label(combo) -> str:
    if tuple(combo) == CATEGORIES:
        return "All"
    return "+".join(CATEGORY_LABELS[c] for c in combo)


def _fmt(v: float) -> str:
    return "nan" if isinstance(v, float) and math.isnan(v) else f"{v:.4f}"


def cv_rows(report) -> list[list[str]]:
    rows = []
    for i, fold in enumerate(report.per_fold):
        m = compute_metrics(fold.confusion)
        rows.append([str(i), str(len(fold.test_index)), _fmt(fold.auc)]
                    + [_fmt(getattr(m, c)) for c in METRIC_COLUMNS])
    m = compute_metrics(report.pooled)
    rows.append(["pooled", str(report.pooled.total), ""]
                + [_fmt(getattr(m, c)) for c in METRIC_COLUMNS])
    return rows


def render_cv_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["fold", "n", "auc"] + list(METRIC_COLUMNS))
    w.writerows(cv_rows(report))
    return buf.getvalue()


def render_metrics_text(m: MetricsReport) -> list[str]:
    lines = ["  " + "  ".join(f"{h:>8}" for h in METRIC_HEADERS),
             "  " + "  ".join(f"{getattr(m, c):8.2f}" for c in METRIC_COLUMNS)]
    lines.append("  per class: " + ", ".join(
        f"{pc.name} sen={100 * pc.sensitivity:.2f} spe={100 * pc.specificity:.2f} "
        f"pre={100 * pc.precision:.2f}" for pc in m.per_class))
    return lines


def render_cv_text(report) -> str:
    hp = ", ".join(f"{k}={v}" for k, v in sorted(report.hyperparameters.items()))
    lines = [f"classifier: {CLASSIFIER_LABELS[report.kind]} ({hp})",
             f"folds: {report.k}  seed: {report.seed}",
             "", "fold      n       AUC  " + "  ".join(f"{h:>8}" for h in METRIC_HEADERS)]
    for row in cv_rows(report):
        vals = row[3:]
        auc = row[2] or "-"
        lines.append(f"{row[0]:<6} {row[1]:>4} {auc:>9}  "
                     + "  ".join(f"{float(v):8.2f}" for v in vals))
    sel = report.selected_fold
    lines += ["", f"selected model: fold {sel} (AUC {_fmt(report.per_fold[sel].auc)})",
              "", "pooled confusion matrix (rows = true, columns = predicted):"]
    names = report.pooled.class_names
    width = max(6, *(len(n) for n in names))
    lines.append(" " * (width + 1) + " ".join(f"{n:>{width}}" for n in names))
    for name, row in zip(names, report.pooled.counts):
        lines.append(f"{name:>{width}} " + " ".join(f"{int(c):>{width}}" for c in row))
    pooled = compute_metrics(report.pooled)
    lines += ["", "pooled metrics (%):"] + render_metrics_text(pooled)
    if report.flags or pooled.flags:
        lines.append("flags: " + ", ".join(sorted(report.flags | pooled.flags)))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GridCell:
    classifier: str
    categories: tuple
    metrics: MetricsReport
    seconds: float


def compare_grid(ds, kinds=KINDS, combos=None, hp_by_kind=None, k=10, seed=0, jobs=1):
    """Cross-validate every classifier on every category subset present in
    ``ds``."""
    combos = combos or category_combinations()
    hp_by_kind = hp_by_kind or {}
    cells = []
    for kind in kinds:
        for combo in combos:
            cols = [c for cat in combo for c in category_columns(ds.feature_names, cat)]
            if not cols:
                raise ValueError(f"dataset has no {combination_label(combo)} columns")
            sub = ds.select_columns(cols)
            start = time.perf_counter()
            rep = cross_validate(kind, sub, hp_by_kind.get(kind), k, seed, jobs)
            elapsed = time.perf_counter() - start
            cells.append(GridCell(kind, tuple(combo), compute_metrics(rep.pooled), elapsed))
    return cells


def render_grid_text(cells) -> str:
    header = f"{'Classifier':<14} {'Descriptor':<16} " + " ".join(
        f"{h:>7}" for h in METRIC_HEADERS) + f" {'Time':>8}"
    lines = [header, "-" * len(header)]
    last = None
    for cell in cells:
        name = CLASSIFIER_LABELS[cell.classifier] if cell.classifier != last else ""
        last = cell.classifier
        lines.append(f"{name:<14} {combination_label(cell.categories):<16} " + " ".join(
            f"{getattr(cell.metrics, c):7.2f}" for c in METRIC_COLUMNS)
            + f" {cell.seconds:7.2f}s")
    return "\n".join(lines) + "\n"


def render_grid_csv(cells) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["classifier", "descriptor"] + list(METRIC_COLUMNS) + ["seconds"])
    for cell in cells:
        w.writerow([cell.classifier, combination_label(cell.categories)]
                   + [_fmt(getattr(cell.metrics, c)) for c in METRIC_COLUMNS]
                   + [f"{cell.seconds:.3f}"])
    return buf.getvalue()
