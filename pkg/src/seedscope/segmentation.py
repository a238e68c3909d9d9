"""Seed segmentation on blue-background scans.

Pipeline: blue-channel Otsu threshold combined with a blue-dominance test,
hole filling, 8-connected labelling with Moore contour tracing, then
area/circularity filtering and per-seed cropping.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import DegenerateHistogram
from .raster import BinaryMask, RgbRaster

# Clockwise neighbour order for y pointing down: W, NW, N, NE, E, SE, S, SW.
MOORE_DIRS = ((-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1))
_DIR_INDEX = {d: i for i, d in enumerate(MOORE_DIRS)}

_EIGHT = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True, eq=False)
class SeedRegion:
    """One 8-connected foreground component.

    ``pixels`` and ``contour`` are ``(n, 2)`` integer arrays of ``(x, y)``
    coordinates in full-image space; ``pixels`` is in raster order.
    """

    label: int
    pixels: np.ndarray
    bbox: tuple[int, int, int, int]
    centroid: tuple[float, float]
    contour: np.ndarray

    @property
    def area(self) -> int:
        return len(self.pixels)

    def pixel_set(self) -> set[tuple[int, int]]:
        return {(int(x), int(y)) for x, y in self.pixels}

    def local_mask(self, pad: int = 0) -> np.ndarray:
        """Boolean mask of the region over its bbox grown by ``pad``."""
        x0, y0, x1, y1 = self.bbox
        out = np.zeros((y1 - y0 + 1 + 2 * pad, x1 - x0 + 1 + 2 * pad), dtype=bool)
        out[self.pixels[:, 1] - y0 + pad, self.pixels[:, 0] - x0 + pad] = True
        return out


@dataclass(frozen=True)
class RegionFilter:
    min_area: float = 50
    max_area: float = math.inf
    circ_min: float = 0.0
    circ_max: float = 1.0

    def __post_init__(self):
        if self.min_area > self.max_area:
            raise ValueError("min_area must not exceed max_area")
        if self.circ_min > self.circ_max:
            raise ValueError("circ_min must not exceed circ_max")

    @classmethod
    def default_for(cls, width: int, height: int) -> "RegionFilter":
        return cls(min_area=50, max_area=width * height / 4)


def otsu_threshold(hist) -> int:
    """Otsu level ``t`` for the split ``{<= t, > t}`` of a 256-bin histogram.

    Between-class variances are compared exactly in integer arithmetic, so
    ties resolve to the smallest ``t`` deterministically.
    """
    counts = [int(c) for c in hist]
    if len(counts) != 256:
        raise ValueError("histogram must have 256 bins")
    if any(c < 0 for c in counts):
        raise ValueError("histogram counts must be non-negative")
    total = sum(counts)
    if total < 1:
        raise ValueError("histogram is empty")
    if sum(1 for c in counts if c) < 2:
        raise DegenerateHistogram("all histogram mass lies in one bin")
    grand = sum(i * c for i, c in enumerate(counts))
    # sigma_B^2 * total^2 = (total*S0 - n0*grand)^2 / (n0 * n1)
    best_t, best_num, best_den = 0, -1, 1
    n0 = s0 = 0
    for t in range(255):
        n0 += counts[t]
        s0 += t * counts[t]
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            num, den = 0, 1
        else:
            num, den = (total * s0 - n0 * grand) ** 2, n0 * n1
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    return best_t


def blue_background_mask(img: RgbRaster) -> BinaryMask:
    """Foreground = not-blue-enough pixels, with enclosed holes filled."""
    px = img.pixels
    blue = px[:, :, 2]
    not_dominant = blue <= np.maximum(px[:, :, 0], px[:, :, 1])
    hist = np.bincount(blue.ravel(), minlength=256)
    if np.count_nonzero(hist) < 2:
        # constant blue channel: no threshold exists, dominance alone decides
        fg = not_dominant
    else:
        fg = (blue < otsu_threshold(hist)) | not_dominant
    # default cross structure = 4-connected background, dual of 8-connected seeds
    fg = ndimage.binary_fill_holes(fg)
    return BinaryMask(fg)


def trace_contour(local: np.ndarray, start: tuple[int, int]) -> list[tuple[int, int]]:
    """Moore-neighbour trace of the outer boundary, clockwise.

    ``local`` is a boolean array indexed ``[y, x]``; ``start`` must be the
    topmost-then-leftmost foreground pixel. Stops by Jacob's criterion
    (start re-entered with the same first move).
    """
    h, w = local.shape

    def fg(x, y):
        return 0 <= x < w and 0 <= y < h and local[y, x]

    sx, sy = start
    contour = [start]
    # west of the start pixel is background by construction
    back = 0
    cur = start
    first_move = None
    while True:
        cx, cy = cur
        nxt = None
        for i in range(1, 9):
            d = (back + i) % 8
            dx, dy = MOORE_DIRS[d]
            if fg(cx + dx, cy + dy):
                nxt = (cx + dx, cy + dy)
                pdx, pdy = MOORE_DIRS[(d - 1) % 8]
                # previously examined (background) neighbour, seen from nxt
                back = _DIR_INDEX[(cx + pdx - nxt[0], cy + pdy - nxt[1])]
                break
        if nxt is None:
            return contour
        if first_move is None:
            first_move = nxt
        elif cur == start and nxt == first_move:
            contour.pop()
            return contour
        contour.append(nxt)
        cur = nxt


def _region_from_coords(label: int, ys: np.ndarray, xs: np.ndarray) -> SeedRegion:
    order = np.lexsort((xs, ys))
    ys, xs = ys[order], xs[order]
    x0, x1 = int(xs.min()), int(xs.max())
    y0, y1 = int(ys.min()), int(ys.max())
    local = np.zeros((y1 - y0 + 1, x1 - x0 + 1), dtype=bool)
    local[ys - y0, xs - x0] = True
    start = (int(xs[0]) - x0, int(ys[0]) - y0)
    contour = np.array(trace_contour(local, start), dtype=np.int64) + (x0, y0)
    pixels = np.stack([xs, ys], axis=1).astype(np.int64)
    centroid = (float(xs.mean()), float(ys.mean()))
    return SeedRegion(label, pixels, (x0, y0, x1, y1), centroid, contour)


def connected_components(mask: BinaryMask) -> list[SeedRegion]:
    """8-connected components labelled in raster order of first pixel."""
    labels, n = ndimage.label(mask.bits, structure=_EIGHT)
    if n == 0:
        return []
    regions = []
    for lab, sl in enumerate(ndimage.find_objects(labels), start=1):
        ys, xs = np.nonzero(labels[sl] == lab)
        regions.append(_region_from_coords(lab, ys + sl[0].start, xs + sl[1].start))
    # scipy's relabelling follows first-pixel raster order; make it explicit
    regions.sort(key=lambda r: (int(r.pixels[0, 1]), int(r.pixels[0, 0])))
    return [
        SeedRegion(i, r.pixels, r.bbox, r.centroid, r.contour)
        for i, r in enumerate(regions, start=1)
    ]


def region_circularity(region: SeedRegion) -> float:
    from .morphfeat import perimeter_length

    p = perimeter_length(region.contour)
    return 4.0 * math.pi * region.area / (p * p)


def filter_regions(regions, f: RegionFilter) -> list[SeedRegion]:
    """Keep regions inside the area and circularity windows.

    Circularity is clamped to 1 before comparison, as small digital blobs
    can exceed it.
    """
    kept = []
    for r in regions:
        if not f.min_area <= r.area <= f.max_area:
            continue
        circ = min(region_circularity(r), 1.0)
        if f.circ_min <= circ <= f.circ_max:
            kept.append(r)
    return kept


def crop_region(img: RgbRaster, mask: BinaryMask, r: SeedRegion, pad: int = 0):
    """Cut the padded bbox of ``r``; the returned mask holds only ``r``."""
    if img.shape != mask.shape:
        raise ValueError("image and mask dimensions differ")
    h, w = mask.shape
    x0, y0, x1, y1 = r.bbox
    if x1 >= w or y1 >= h:
        raise ValueError("region lies outside the mask")
    cx0, cy0 = max(0, x0 - pad), max(0, y0 - pad)
    cx1, cy1 = min(w - 1, x1 + pad), min(h - 1, y1 + pad)
    sub = np.zeros((cy1 - cy0 + 1, cx1 - cx0 + 1), dtype=bool)
    sub[r.pixels[:, 1] - cy0, r.pixels[:, 0] - cx0] = True
    crop = RgbRaster(img.pixels[cy0:cy1 + 1, cx0:cx1 + 1])
    return crop, BinaryMask(sub)


def segment(img: RgbRaster, region_filter: RegionFilter | None = None):
    """Mask, detect and filter seeds in one scan. Returns ``(mask, regions)``."""
    mask = blue_background_mask(img)
    f = region_filter or RegionFilter.default_for(img.width, img.height)
    return mask, filter_regions(connected_components(mask), f)
