"""CSV mirror of a dataset: feature columns then ``class``."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..errors import MalformedArff
from ..ml.dataset import UNLABELED, LabeledDataset
from .arff import format_number


def write_csv(ds: LabeledDataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(ds.feature_names) + ["class"])
        for row, label in zip(ds.X, ds.y):
            cls = "?" if label == UNLABELED else ds.class_names[label]
            w.writerow([format_number(v) for v in row] + [cls])


def read_csv(path, class_names=None) -> LabeledDataset:
    """Inverse of :func:`write_csv`. Class order is first appearance unless
    ``class_names`` is given."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][-1] != "class":
        raise MalformedArff("CSV header must end with 'class'", 1)
    names = rows[0][:-1]
    labels = [r[-1] for r in rows[1:]]
    classes = list(class_names) if class_names else []
    if not class_names:
        for lab in labels:
            if lab != "?" and lab not in classes:
                classes.append(lab)
    index = {c: i for i, c in enumerate(classes)}
    X = np.empty((len(rows) - 1, len(names)))
    for i, r in enumerate(rows[1:]):
        if len(r) != len(names) + 1:
            raise MalformedArff(f"expected {len(names) + 1} fields", i + 2)
        X[i] = [float(v) for v in r[:-1]]
    y = [UNLABELED if lab == "?" else index[lab] for lab in labels]
    return LabeledDataset(names, X, y, classes)
