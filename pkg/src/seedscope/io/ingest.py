"""Batch feature extraction over a directory tree of scans.

Layout: one sub-directory per class holding multi-seed scans, the folder
name being the label. Scans placed directly in the root need a sidecar
``labels.csv`` with ``file,label`` rows. Rows come out sorted by relative
path, then region label, whatever the traversal or worker count.
"""
from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import SeedScopeError
from ..features import extract_features, feature_names, parse_categories
from ..ml.dataset import LabeledDataset
from ..segmentation import RegionFilter, crop_region, segment
from .images import IMAGE_SUFFIXES, load_image

SIDECAR = "labels.csv"
CROP_PAD = 2


@dataclass(frozen=True)
class FilterSettings:
    """Region filter with ``max_area=None`` meaning a quarter of the image."""

    min_area: float = 50
    max_area: float | None = None
    circ_min: float = 0.0
    circ_max: float = 1.0

    def for_image(self, width: int, height: int) -> RegionFilter:
        max_area = width * height / 4 if self.max_area is None else self.max_area
        return RegionFilter(self.min_area, max_area, self.circ_min, self.circ_max)


@dataclass
class IngestResult:
    dataset: LabeledDataset | None
    sources: list = field(default_factory=list)  # (relative path, region label)
    errors: list = field(default_factory=list)  # (relative path, message)


def discover(root) -> list[tuple[str, str]]:
    """``(relative path, label)`` for every scan under ``root``, sorted."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(root)
    found = []
    sidecar = {}
    if (root / SIDECAR).is_file():
        with open(root / SIDECAR, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if len(row) >= 2 and row[0] != "file":
                    sidecar[row[0].strip()] = row[1].strip()
    for p in root.iterdir():
        if p.is_dir():
            for img in p.rglob("*"):
                if img.is_file() and img.suffix.lower() in IMAGE_SUFFIXES:
                    found.append((img.relative_to(root).as_posix(), p.name))
        elif p.suffix.lower() in IMAGE_SUFFIXES and p.name in sidecar:
            found.append((p.name, sidecar[p.name]))
    return sorted(found)


def unlabeled_images(root) -> list[str]:
    root = Path(root)
    return sorted(p.relative_to(root).as_posix() for p in root.rglob("*")
                  if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES)


def extract_image(path, categories, settings: FilterSettings = FilterSettings()):
    """Feature rows for every accepted seed of one scan.

    Returns ``(rows, errors)`` where rows are ``(region_label, values)``;
    a seed whose descriptors are undefined is reported and skipped.
    """
    img = load_image(path)
    mask, regions = segment(img, settings.for_image(img.width, img.height))
    rows, errors = [], []
    for region in regions:
        crop, crop_mask = crop_region(img, mask, region, CROP_PAD)
        try:
            rows.append((region.label, extract_features(crop, crop_mask, region, categories)))
        except SeedScopeError as exc:
            errors.append(f"region {region.label}: {exc}")
    return rows, errors


def _work(args):
    root, rel, categories, settings = args
    try:
        rows, errors = extract_image(Path(root) / rel, categories, settings)
        return rows, errors, None
    except (SeedScopeError, OSError) as exc:
        return [], [], f"{type(exc).__name__}: {exc}"


def ingest_directory(root, categories="all", settings: FilterSettings | None = None,
                     jobs: int = 1) -> IngestResult:
    categories = parse_categories(categories)
    settings = settings or FilterSettings()
    items = discover(root)
    tasks = [(str(root), rel, categories, settings) for rel, _ in items]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(_work, tasks))
    else:
        outputs = [_work(t) for t in tasks]
    result = IngestResult(None)
    values, labels = [], []
    class_names = sorted({label for _, label in items})
    for (rel, label), (rows, region_errors, fatal) in zip(items, outputs):
        if fatal:
            result.errors.append((rel, fatal))
            continue
        result.errors.extend((rel, msg) for msg in region_errors)
        for region_label, vals in rows:
            values.append(vals)
            labels.append(class_names.index(label))
            result.sources.append((rel, region_label))
    names = feature_names(categories)
    X = np.array(values, dtype=np.float64).reshape(len(values), len(names))
    result.dataset = LabeledDataset(names, X, labels, class_names)
    return result
