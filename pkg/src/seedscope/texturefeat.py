"""Grey-level texture descriptors: 12 histogram statistics over the seed
pixels and 4 Haralick statistics from co-occurrence matrices averaged over
the 0/45/90/135 degree offsets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import EmptyRegion, NoValidPairs
from .raster import BinaryMask, GrayRaster

ANGLES = (0, 45, 90, 135)

TEXTURE_NAMES = (
    "Min", "Max", "Mean", "StD", "Median", "Mode", "Skewness", "Kurtosis",
    "IntensitySum", "Uniformity", "Entropy", "SmoothnessR",
    "Energy", "Contrast", "Correlation", "Homogeneity",
)


def angle_offset(angle: int, distance: int = 1) -> tuple[int, int]:
    """``(dx, dy)`` of the neighbour; y grows downwards, so 90 is "up"."""
    d = distance
    try:
        return {0: (d, 0), 45: (d, -d), 90: (0, -d), 135: (-d, -d)}[angle]
    except KeyError:
        raise ValueError(f"angle must be one of {ANGLES}, got {angle}") from None


@dataclass(frozen=True)
class GrayHistogram:
    bins: np.ndarray
    total: int

    @classmethod
    def of(cls, gray: GrayRaster, mask: BinaryMask) -> "GrayHistogram":
        if gray.shape != mask.shape:
            raise ValueError("gray raster and mask dimensions differ")
        values = gray.pixels[mask.bits]
        if values.size == 0:
            raise EmptyRegion("mask selects no pixels")
        return cls(np.bincount(values, minlength=256).astype(np.int64), int(values.size))


@dataclass(frozen=True)
class FirstOrderStats:
    min: float
    max: float
    mean: float
    std: float
    median: float
    mode: float
    skewness: float
    kurtosis: float
    intensity_sum: float
    uniformity: float
    entropy: float
    smoothness_r: float
    flags: frozenset = field(default=frozenset(), compare=False)


def first_order_stats(gray: GrayRaster, mask: BinaryMask) -> FirstOrderStats:
    """Statistics of the grey levels under the mask.

    Population moments; lower median; the smallest most frequent level as
    mode; excess kurtosis. With zero spread, skewness and kurtosis are 0 and
    flagged.
    """
    hist = GrayHistogram.of(gray, mask)
    counts, n = hist.bins, hist.total
    levels = np.arange(256, dtype=np.float64)
    occupied = np.nonzero(counts)[0]
    p = counts / n
    mean = float(np.dot(p, levels))
    dev = levels - mean
    var = float(np.dot(p, dev ** 2))
    std = math.sqrt(var)
    flags = set()
    if std > 0:
        skew = float(np.dot(p, dev ** 3)) / std ** 3
        kurt = float(np.dot(p, dev ** 4)) / var ** 2 - 3.0
    else:
        skew = kurt = 0.0
        flags.update(("skewness", "kurtosis"))
    median = int(np.searchsorted(np.cumsum(counts), (n - 1) // 2 + 1))
    nz = p[occupied]
    return FirstOrderStats(
        min=float(occupied[0]),
        max=float(occupied[-1]),
        mean=mean,
        std=std,
        median=float(median),
        mode=float(np.argmax(counts)),
        skewness=skew,
        kurtosis=kurt,
        intensity_sum=float(np.dot(counts, levels)),
        uniformity=float(np.sum(p * p)),
        entropy=float(-np.sum(nz * np.log2(nz))),
        smoothness_r=1.0 - 1.0 / (1.0 + var / 255.0 ** 2),
        flags=frozenset(flags),
    )


@dataclass(frozen=True)
class Glcm:
    matrix: np.ndarray  # levels x levels, symmetric, sums to 1
    angle: int
    distance: int = 1

    @property
    def levels(self) -> int:
        return self.matrix.shape[0]


def glcm_counts(gray: GrayRaster, mask: BinaryMask, angle: int, distance: int = 1,
                levels: int = 256) -> np.ndarray:
    """Unnormalised symmetric co-occurrence counts of masked pixel pairs.

    Counts from disjoint tiles of an image add up elementwise, which is how
    partial results are merged.
    """
    if gray.shape != mask.shape:
        raise ValueError("gray raster and mask dimensions differ")
    if not 2 <= levels <= 256:
        raise ValueError("levels must be in [2, 256]")
    dx, dy = angle_offset(angle, distance)
    g = gray.pixels.astype(np.int64)
    if levels != 256:
        g = g * levels // 256
    m = mask.bits
    h, w = m.shape
    # source window such that source + offset stays inside the raster
    ys = slice(max(0, -dy), min(h, h - dy))
    xs = slice(max(0, -dx), min(w, w - dx))
    yt = slice(ys.start + dy, ys.stop + dy)
    xt = slice(xs.start + dx, xs.stop + dx)
    if ys.start >= ys.stop or xs.start >= xs.stop:
        return np.zeros((levels, levels), dtype=np.int64)
    valid = m[ys, xs] & m[yt, xt]
    a = g[ys, xs][valid]
    b = g[yt, xt][valid]
    counts = np.bincount(a * levels + b, minlength=levels * levels).reshape(levels, levels)
    return counts + counts.T


def build_glcm(gray: GrayRaster, mask: BinaryMask, angle: int, distance: int = 1,
               levels: int = 256) -> Glcm:
    counts = glcm_counts(gray, mask, angle, distance, levels)
    total = counts.sum()
    if total == 0:
        raise NoValidPairs(f"no foreground pixel pairs at {angle} degrees, distance {distance}")
    return Glcm(counts / total, angle, distance)


@dataclass(frozen=True)
class HaralickStats:
    energy: float
    contrast: float
    correlation: float
    homogeneity: float
    flags: frozenset = field(default=frozenset(), compare=False)


def haralick_stats(g: Glcm) -> HaralickStats:
    # a seed crop occupies a sliver of the 256 x 256 cells; work on those only
    matrix = np.asarray(g.matrix, dtype=np.float64)
    flat = matrix.ravel()
    idx = np.flatnonzero(flat != 0)
    p = flat[idx]
    i, j = np.divmod(idx, matrix.shape[1])
    i = i.astype(np.float64)
    j = j.astype(np.float64)
    diff = np.abs(i - j)
    mu = float(np.dot(p, i))
    var = float(np.dot(p, (i - mu) ** 2))
    flags = frozenset()
    if var > 0:
        correlation = float(np.dot(p, (i - mu) * (j - mu))) / var
    else:
        correlation = 1.0
        flags = frozenset({"correlation"})
    return HaralickStats(
        energy=float(np.dot(p, p)),
        contrast=float(np.dot(p, diff * diff)),
        correlation=correlation,
        homogeneity=float(np.sum(p / (1.0 + diff))),
        flags=flags,
    )


@dataclass(frozen=True)
class TextureFeatures:
    min: float
    max: float
    mean: float
    std: float
    median: float
    mode: float
    skewness: float
    kurtosis: float
    intensity_sum: float
    uniformity: float
    entropy: float
    smoothness_r: float
    glcm_energy: float
    glcm_contrast: float
    glcm_correlation: float
    glcm_homogeneity: float
    flags: frozenset = field(default=frozenset(), compare=False)
    per_angle: dict = field(default=None, compare=False, repr=False)

    def values(self) -> list[float]:
        skip = {"flags", "per_angle"}
        return [getattr(self, f.name) for f in fields(self) if f.name not in skip]


def extract_texture(gray: GrayRaster, mask: BinaryMask, levels: int = 256,
                    keep_per_angle: bool = False) -> TextureFeatures:
    """Histogram statistics plus angle-averaged Haralick statistics.

    Angles without any valid pixel pair are left out of the average.
    """
    first = first_order_stats(gray, mask)
    per_angle = {}
    for angle in ANGLES:
        try:
            per_angle[angle] = haralick_stats(build_glcm(gray, mask, angle, 1, levels))
        except NoValidPairs:
            continue
    if not per_angle:
        raise NoValidPairs("no valid pixel pair at any angle")
    stats = list(per_angle.values())
    flags = set(first.flags)
    for angle, st in per_angle.items():
        flags.update(f"{name}@{angle}" for name in st.flags)
    if len(per_angle) < len(ANGLES):
        flags.add("glcm_angles_skipped")

    def avg(attr):
        return float(sum(getattr(s, attr) for s in stats) / len(stats))

    return TextureFeatures(
        min=first.min, max=first.max, mean=first.mean, std=first.std,
        median=first.median, mode=first.mode, skewness=first.skewness,
        kurtosis=first.kurtosis, intensity_sum=first.intensity_sum,
        uniformity=first.uniformity, entropy=first.entropy,
        smoothness_r=first.smoothness_r,
        glcm_energy=avg("energy"), glcm_contrast=avg("contrast"),
        glcm_correlation=avg("correlation"), glcm_homogeneity=avg("homogeneity"),
        flags=frozenset(flags),
        per_angle=per_angle if keep_per_angle else None,
    )
