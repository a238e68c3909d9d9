"""The 32 morphological descriptors of a segmented seed.

Geometry works on integer pixel coordinates ``(x, y)``. The convex hull is
taken over contour pixel centres. Its area is reported as a pixel count,
the number of lattice points inside or on the hull (Pick's theorem), so it
bounds the region's own pixel count from above.
"""
from __future__ import annotations

import math
import sys
from dataclasses import astuple, dataclass, field, fields

import numpy as np
from scipy import ndimage

from .errors import DegenerateRegion
from .raster import BinaryMask

BENDING_SAMPLES = 128
HARALICK_RATIO_SENTINEL = sys.float_info.max
SEGMENT_TOLERANCE = 1.0
BENDING_SMOOTHING = 2.0  # gaussian sigma, in resampled points

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> np.ndarray:
    """Andrew's monotone chain. Returns hull vertices counter-clockwise
    (positive shoelace orientation), collinear points dropped."""
    pts = sorted({(p[0], p[1]) for p in np.asarray(points).reshape(-1, 2).tolist()})
    if len(pts) <= 2:
        return np.array(pts, dtype=float).reshape(-1, 2)
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return np.array(hull, dtype=float).reshape(-1, 2)


def polygon_area(poly) -> float:
    p = np.asarray(poly, dtype=float).reshape(-1, 2)
    if len(p) < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def polygon_perimeter(poly) -> float:
    p = np.asarray(poly, dtype=float).reshape(-1, 2)
    if len(p) < 2:
        return 0.0
    if len(p) == 2:
        return 2.0 * math.dist(p[0], p[1])
    return float(np.hypot(*(np.roll(p, -1, axis=0) - p).T).sum())


def chain_length(contour) -> float:
    """Raw chain-code length: 1 per axial step, sqrt(2) per diagonal step."""
    pts = np.asarray(contour, dtype=np.int64).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("empty contour")
    if len(pts) == 1:
        return 4.0
    steps = np.abs(np.diff(np.vstack([pts, pts[:1]]), axis=0))
    diagonal = int(np.count_nonzero((steps[:, 0] == 1) & (steps[:, 1] == 1)))
    return (len(steps) - diagonal) + diagonal * math.sqrt(2.0)


def contour_polygon(contour, tol: float = SEGMENT_TOLERANCE) -> np.ndarray:
    """Vertices of a polygonal fit of a closed pixel contour.

    Hull vertices are mandatory breakpoints; between them, runs are merged
    greedily into straight chords while every skipped point stays within
    ``tol`` pixels of the chord. Digital straight runs become single edges,
    so axis-aligned sides keep their exact length while staircase bias on
    slanted and curved boundaries disappears.
    """
    pts = np.asarray(contour, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n <= 2:
        return pts.copy()
    hull = {tuple(p) for p in convex_hull(pts.astype(np.int64)).tolist()}
    breaks = []
    seen = set()
    for i, p in enumerate(pts.tolist()):
        key = tuple(p)
        if key in hull and key not in seen:
            breaks.append(i)
            seen.add(key)
    first = breaks[0]
    pts = np.roll(pts, -first, axis=0)
    breaks = [b - first for b in breaks] + [n]
    ext = np.vstack([pts, pts[:1]])
    verts = [0]
    for a, b in zip(breaks[:-1], breaks[1:]):
        i = a
        while i < b:
            j = i + 1
            while j < b:
                c = j + 1
                d = ext[c] - ext[i]
                length = math.hypot(d[0], d[1])
                mid = ext[i + 1:c] - ext[i]
                if length > 0:
                    dev = np.abs(mid[:, 0] * d[1] - mid[:, 1] * d[0]) / length
                else:
                    dev = np.hypot(mid[:, 0], mid[:, 1])
                if dev.max() > tol:
                    break
                j = c
            verts.append(j)
            i = j
    return ext[verts[:-1]]


def perimeter_length(contour) -> float:
    """Boundary length of a traced contour, measured on its polygonal fit.

    A lone pixel has no steps and gets the unit-square boundary, 4.
    """
    pts = np.asarray(contour).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("empty contour")
    if len(pts) == 1:
        return 4.0
    return polygon_perimeter(contour_polygon(pts))


def _sqdist(a, b):
    dx, dy = a[0] - b[0], a[1] - b[1]
    return dx * dx + dy * dy


@dataclass(frozen=True)
class Calipers:
    feret: float
    breadth: float
    feret_axis: tuple  # ((x, y), (x, y))
    breadth_axis: tuple


def feret_and_breadth(hull) -> Calipers:
    """Feret diameter by rotating calipers and the hull extent perpendicular
    to it."""
    h = [tuple(p) for p in np.asarray(hull, dtype=float).reshape(-1, 2).tolist()]
    n = len(h)
    if n == 0:
        raise ValueError("empty hull")
    if n == 1:
        p = h[0]
        return Calipers(0.0, 0.0, (p, p), (p, p))
    best, pair = -1.0, (h[0], h[1])
    if n == 2:
        best, pair = _sqdist(h[0], h[1]), (h[0], h[1])
    else:
        j = 1
        for i in range(n):
            ni = (i + 1) % n
            while abs(_cross(h[i], h[ni], h[(j + 1) % n])) > abs(_cross(h[i], h[ni], h[j])):
                j = (j + 1) % n
            # on a tie (parallel edges) both j and j+1 are antipodal
            for a in (h[i], h[ni]):
                for b in (h[j], h[(j + 1) % n]):
                    d = _sqdist(a, b)
                    if d > best:
                        best, pair = d, (a, b)
    feret = math.sqrt(best)
    p1, p2 = np.array(pair[0]), np.array(pair[1])
    direction = (p2 - p1) / feret
    normal = np.array([-direction[1], direction[0]])
    arr = np.array(h)
    across = arr @ normal
    lo, hi = int(np.argmin(across)), int(np.argmax(across))
    # never wider than the diameter; rounding can overshoot by an ulp
    breadth = min(float(across[hi] - across[lo]), feret)
    # breadth axis: perpendicular to the feret axis, midway (along the feret
    # direction) between the two extreme vertices
    t = 0.5 * ((arr[lo] - p1) @ direction + (arr[hi] - p1) @ direction)
    cross_pt = p1 + t * direction
    base = p1 @ normal
    b1 = cross_pt + normal * (across[lo] - base)
    b2 = cross_pt + normal * (across[hi] - base)
    return Calipers(feret, breadth, (tuple(p1), tuple(p2)), (tuple(b1), tuple(b2)))


def radii_stats(contour, centroid):
    """``(min_r, max_r, avg_radius, variance_radius)`` of centroid-to-contour
    distances (population variance)."""
    pts = np.asarray(contour, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("empty contour")
    r = np.hypot(pts[:, 0] - centroid[0], pts[:, 1] - centroid[1])
    return float(r.min()), float(r.max()), float(r.mean()), float(r.var())


def _resample_closed(pts: np.ndarray, n: int) -> tuple[np.ndarray, float]:
    closed = np.vstack([pts, pts[:1]])
    seg = np.hypot(*np.diff(closed, axis=0).T)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    s = np.arange(n) * (total / n)
    x = np.interp(s, cum, closed[:, 0])
    y = np.interp(s, cum, closed[:, 1])
    return np.stack([x, y], axis=1), total / n


def bending_energy(contour) -> tuple[float, bool]:
    """Sum of squared curvature along the contour.

    The polygonal fit is resampled at 128 equal arc-length steps and lightly
    smoothed (circular gaussian) before differencing; raw pixel staircases
    otherwise dominate the curvature. Returns ``(energy, degenerate)``;
    contours with fewer than 8 points give ``(0.0, True)``.
    """
    pts = np.asarray(contour, dtype=float).reshape(-1, 2)
    if len(pts) < 8:
        return 0.0, True
    samples, ds = _resample_closed(contour_polygon(pts), BENDING_SAMPLES)
    samples = ndimage.gaussian_filter1d(samples, BENDING_SMOOTHING, axis=0, mode="wrap")
    tangent = np.roll(samples, -1, axis=0) - np.roll(samples, 1, axis=0)
    theta = np.arctan2(tangent[:, 1], tangent[:, 0])
    dtheta = np.roll(theta, -1) - theta
    dtheta = (dtheta + np.pi) % (2 * np.pi) - np.pi
    kappa = dtheta / ds
    return float(np.sum(kappa * kappa) * ds), False


def interior_pixel_count(bits: np.ndarray) -> int:
    """Foreground pixels whose four 4-neighbours are all foreground
    (outside the array counts as background)."""
    b = np.pad(np.asarray(bits, dtype=bool), 1)
    core = b[1:-1, 1:-1]
    inner = core & b[:-2, 1:-1] & b[2:, 1:-1] & b[1:-1, :-2] & b[1:-1, 2:]
    return int(inner.sum())


def hull_pixel_count(hull) -> float:
    """Lattice points enclosed by an integer-vertex convex polygon,
    boundary included: ``A + B/2 + 1`` by Pick's theorem."""
    h = np.asarray(hull, dtype=np.int64).reshape(-1, 2)
    if len(h) == 0:
        return 0.0
    if len(h) == 1:
        return 1.0
    edges = np.abs(np.roll(h, -1, axis=0) - h)
    if len(h) == 2:
        return float(math.gcd(int(edges[0, 0]), int(edges[0, 1])) + 1)
    boundary = sum(math.gcd(int(dx), int(dy)) for dx, dy in edges)
    return polygon_area(h) + boundary / 2.0 + 1.0


@dataclass(frozen=True)
class MorphFeatures:
    area: float
    perimeter: float
    feret: float
    breadth: float
    asp_ratio: float
    convex_area: float
    convex_perimeter: float
    r_factor: float
    ar_equiv_d: float
    per_equiv_d: float
    min_r: float
    max_r: float
    avg_radius: float
    variance_radius: float
    equiv_ell_ar: float
    modification_ratio: float
    haralick_ratio: float
    thinness_r: float
    roundness: float
    compactness: float
    solidity: float
    convexity: float
    concavity: float
    ar_bbox: float
    rectangularity: float
    sphericity: float
    elongation: float
    bending_energy: float
    jaggedness: float
    circularity: float
    endocarp: float
    fb_to_cm: float
    flags: frozenset = field(default=frozenset(), compare=False)

    def values(self) -> list[float]:
        return [getattr(self, f.name) for f in fields(self) if f.name != "flags"]


MORPH_NAMES = (
    "Area", "Perimeter", "Feret", "Breadth", "AspRatio", "ConvexArea",
    "ConvexPerimeter", "RFactor", "ArEquivD", "PerEquivD", "MinR", "MaxR",
    "AvgRadius", "VarianceRadius", "EquivEllAr", "ModificationRatio",
    "HaralickRatio", "ThinnessR", "Roundness", "Compactness", "Solidity",
    "Convexity", "Concavity", "ArBBox", "Rectangularity", "Sphericity",
    "Elongation", "BendingEnergy", "Jaggedness", "Circularity", "Endocarp",
    "FBtoCM",
)


def extract_morph(mask_crop: BinaryMask, region) -> MorphFeatures:
    if region.area < 1:
        raise DegenerateRegion("region has no pixels")
    flags = set()
    area = float(region.area)
    perimeter = perimeter_length(region.contour)
    hull = convex_hull(region.contour)
    convex_area = hull_pixel_count(hull)
    convex_perimeter = polygon_perimeter(hull)
    cal = feret_and_breadth(hull)
    feret, breadth = cal.feret, cal.breadth
    if breadth <= 0:
        raise DegenerateRegion("zero breadth, ratio descriptors undefined")
    min_r, max_r, avg_r, var_r = radii_stats(region.contour, region.centroid)
    std_r = math.sqrt(var_r)
    if std_r > 0:
        haralick_ratio = avg_r / std_r
    else:
        haralick_ratio = HARALICK_RATIO_SENTINEL
        flags.add("haralick_ratio")
    bend, bend_degenerate = bending_energy(region.contour)
    if bend_degenerate:
        flags.add("bending_energy")
    x0, y0, x1, y1 = region.bbox
    ar_bbox = float((x1 - x0 + 1) * (y1 - y0 + 1))
    ar_equiv_d = math.sqrt(4.0 * area / math.pi)
    circularity = 4.0 * math.pi * area / (perimeter * perimeter)
    fb_point = _axes_intersection(cal)
    fb_to_cm = math.dist(fb_point, region.centroid)
    return MorphFeatures(
        area=area,
        perimeter=perimeter,
        feret=feret,
        breadth=breadth,
        asp_ratio=feret / breadth,
        convex_area=convex_area,
        convex_perimeter=convex_perimeter,
        r_factor=convex_area / (feret * math.pi),
        ar_equiv_d=ar_equiv_d,
        per_equiv_d=perimeter / math.pi,
        min_r=min_r,
        max_r=max_r,
        avg_radius=avg_r,
        variance_radius=var_r,
        equiv_ell_ar=math.pi * (feret / 2.0) * (breadth / 2.0),
        modification_ratio=2.0 * min_r / feret,
        haralick_ratio=haralick_ratio,
        thinness_r=perimeter * perimeter / area,
        roundness=4.0 * area / (math.pi * feret * feret),
        compactness=ar_equiv_d / feret,
        solidity=area / convex_area,
        convexity=convex_perimeter / perimeter,
        concavity=convex_area - area,
        ar_bbox=ar_bbox,
        rectangularity=area / ar_bbox,
        sphericity=min_r / max_r if max_r > 0 else 1.0,
        elongation=perimeter * perimeter / (4.0 * math.pi * area),
        bending_energy=bend,
        jaggedness=2.0 * math.sqrt(math.pi * area) / perimeter,
        circularity=circularity,
        endocarp=float(interior_pixel_count(mask_crop.bits)),
        fb_to_cm=fb_to_cm,
        flags=frozenset(flags),
    )


def _axes_intersection(cal: Calipers) -> tuple[float, float]:
    # the breadth axis is built perpendicular through a point on the feret
    # line, so its endpoints' midpoint projected back onto that line is it
    (a1, a2), (b1, b2) = cal.feret_axis, cal.breadth_axis
    a1, a2 = np.asarray(a1), np.asarray(a2)
    d = a2 - a1
    mid = (np.asarray(b1) + np.asarray(b2)) / 2.0
    t = float((mid - a1) @ d / (d @ d))
    p = a1 + t * d
    return float(p[0]), float(p[1])
