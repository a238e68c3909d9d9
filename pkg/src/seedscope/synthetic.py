"""Synthetic blue-background scans for tests, demos and benchmarks.

Seeds are rotated ellipses. In :func:`hue_coded_corpus` class identity lives
only in hue: every class shares the shape distribution, the grey-level
(luma) of its base colour and the noise model, so shape and texture carry
no class signal.
"""
from __future__ import annotations

import colorsys
from pathlib import Path

import numpy as np

from .raster import LUMA_WEIGHTS, RgbRaster

NAVY = (25, 35, 140)


def ellipse_mask(height, width, cx, cy, a, b, angle_deg=0.0) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    t = np.deg2rad(angle_deg)
    u = (xx - cx) * np.cos(t) + (yy - cy) * np.sin(t)
    v = -(xx - cx) * np.sin(t) + (yy - cy) * np.cos(t)
    return (u / a) ** 2 + (v / b) ** 2 <= 1.0


def disc_mask(radius: int, margin: int = 3) -> np.ndarray:
    size = 2 * (radius + margin) + 1
    c = radius + margin
    yy, xx = np.mgrid[0:size, 0:size]
    return (xx - c) ** 2 + (yy - c) ** 2 <= radius * radius


def equal_luma_colour(hue: float, saturation: float = 0.55, luma: float = 120.0):
    r, g, b = colorsys.hsv_to_rgb(hue, saturation, 1.0)
    rgb = np.array([r, g, b]) * 255.0
    scale = luma / float(np.dot(LUMA_WEIGHTS, rgb))
    return tuple(float(c) for c in rgb * scale)


def render_scan(seeds, size=(200, 200), background=NAVY, rng=None, noise=6.0) -> RgbRaster:
    """``seeds``: iterable of ``(mask, colour, brightness_offset)`` with full
    image-sized boolean masks."""
    rng = rng if rng is not None else np.random.default_rng(0)
    h, w = size
    img = np.empty((h, w, 3))
    img[:] = background
    img += rng.normal(0.0, 3.0, size=(h, w, 1))
    for mask, colour, offset in seeds:
        shade = rng.normal(0.0, noise, size=(h, w, 1)) + offset
        img[mask] = (np.asarray(colour)[None, :] + shade[mask])
    return RgbRaster(np.clip(np.rint(img), 0, 255).astype(np.uint8))


def scatter_ellipses(rng, grid=3, cell=64, margin=6):
    """Random ellipses, one per grid cell, never touching."""
    shapes = []
    size = grid * cell + 2 * margin
    for gy in range(grid):
        for gx in range(grid):
            a = rng.uniform(10, 16)
            b = rng.uniform(6, 10)
            cx = margin + gx * cell + cell / 2 + rng.uniform(-6, 6)
            cy = margin + gy * cell + cell / 2 + rng.uniform(-6, 6)
            shapes.append(ellipse_mask(size, size, cx, cy, a, b, rng.uniform(0, 180)))
    return shapes, (size, size)


HUE_BANDS = (0.02, 0.09, 0.17, 0.30)


def hue_coded_corpus(root, n_classes=4, images_per_class=3, seed=0, hues=HUE_BANDS):
    """Write ``root/<class>/scan_<i>.png``; returns the number of seeds drawn."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    from .io.images import save_png

    count = 0
    for c in range(n_classes):
        folder = root / f"class_{c}"
        folder.mkdir(parents=True, exist_ok=True)
        base = equal_luma_colour(hues[c % len(hues)])
        for i in range(images_per_class):
            shapes, size = scatter_ellipses(rng)
            seeds = [(m, base, rng.uniform(-12, 12)) for m in shapes]
            save_png(folder / f"scan_{i}.png", render_scan(seeds, size, rng=rng))
            count += len(seeds)
    return count


def blob_dataset(n=400, n_classes=4, d=64, separation=10.0, seed=0):
    """Gaussian blobs with unit noise and class means ``separation`` apart
    pairwise, spread across all features by a random orthonormal basis.

    With ``d == 64`` the columns take the canonical descriptor names so the
    result can go through category selection and ``compare``.
    """
    from .features import ALL_NAMES
    from .ml.dataset import LabeledDataset

    if n_classes > d:
        raise ValueError("need at least as many features as classes")
    rng = np.random.default_rng(seed)
    basis, _ = np.linalg.qr(rng.standard_normal((d, n_classes)))
    means = (separation / np.sqrt(2.0)) * basis.T
    y = np.arange(n) % n_classes
    X = means[y] + rng.standard_normal((n, d))
    names = list(ALL_NAMES) if d == len(ALL_NAMES) else [f"f{i}" for i in range(d)]
    return LabeledDataset(names, X, y,
                          [f"class_{j}" for j in range(n_classes)])
