from collections import deque
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seedscope.errors import DegenerateHistogram
from seedscope.morphfeat import chain_length
from seedscope.raster import BinaryMask, RgbRaster
from seedscope.segmentation import (RegionFilter, blue_background_mask, connected_components,
                                    crop_region, filter_regions, otsu_threshold,
                                    region_circularity, segment)

from conftest import random_blob_mask

NAVY = (20, 20, 160)
BROWN = (140, 90, 60)


def otsu_oracle(hist):
    """Exhaustive search with exact rational between-class variance."""
    total = sum(hist)
    best, best_t = Fraction(-1), 0
    for t in range(255):
        n0 = sum(hist[: t + 1])
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            var = Fraction(0)
        else:
            m0 = Fraction(sum(i * hist[i] for i in range(t + 1)), n0)
            m1 = Fraction(sum(i * hist[i] for i in range(t + 1, 256)), n1)
            var = Fraction(n0 * n1, total * total) * (m0 - m1) ** 2
        if var > best:
            best, best_t = var, t
    return best_t


def bfs_components(bits):
    """Reference 8-connected labelling, labels in raster order of first pixel."""
    h, w = bits.shape
    seen = np.zeros_like(bits)
    comps = []
    for y in range(h):
        for x in range(w):
            if bits[y, x] and not seen[y, x]:
                comp, queue = set(), deque([(x, y)])
                seen[y, x] = True
                while queue:
                    cx, cy = queue.popleft()
                    comp.add((cx, cy))
                    for dy in (-1, 0, 1):
                        for dx in (-1, 0, 1):
                            nx, ny = cx + dx, cy + dy
                            if 0 <= nx < w and 0 <= ny < h and bits[ny, nx] and not seen[ny, nx]:
                                seen[ny, nx] = True
                                queue.append((nx, ny))
                comps.append(comp)
    return comps


def scene(h=40, w=50, background=NAVY):
    px = np.empty((h, w, 3), dtype=np.uint8)
    px[:] = background
    return px


# ---- otsu ----

def test_otsu_bimodal_matches_oracle():
    hist = [0] * 256
    hist[10], hist[200] = 500, 500
    t = otsu_threshold(hist)
    assert 10 <= t <= 199
    assert t == otsu_oracle(hist)


def test_otsu_extremes_tie_breaks_low():
    hist = [0] * 256
    hist[0], hist[255] = 7, 7
    assert otsu_threshold(hist) == otsu_oracle(hist) == 0


def test_otsu_single_bin_is_degenerate():
    hist = [0] * 256
    hist[77] = 10
    with pytest.raises(DegenerateHistogram):
        otsu_threshold(hist)


@given(st.lists(st.integers(0, 40), min_size=256, max_size=256))
def test_otsu_matches_exhaustive_search(hist):
    if sum(1 for c in hist if c) < 2:
        return
    assert otsu_threshold(hist) == otsu_oracle(hist)


# ---- background mask ----

def test_uniform_navy_is_all_background():
    mask = blue_background_mask(RgbRaster(scene()))
    assert mask.count == 0


def test_brown_rectangle_is_exact_foreground():
    px = scene()
    px[5:15, 10:30] = BROWN
    mask = blue_background_mask(RgbRaster(px))
    expected = np.zeros((40, 50), dtype=bool)
    expected[5:15, 10:30] = True
    assert np.array_equal(mask.bits, expected)


def test_enclosed_blue_speck_is_filled():
    px = scene()
    px[5:20, 5:20] = BROWN
    px[10:12, 10:12] = (10, 10, 90)
    mask = blue_background_mask(RgbRaster(px))
    assert mask.bits[5:20, 5:20].all()
    assert mask.count == 15 * 15


def test_background_brightening_keeps_seed_pixels(rng):
    px = scene(60, 60).astype(np.int64)
    px += rng.integers(-5, 6, size=px.shape)
    px[10:25, 10:30] = (150, 110, 70)
    px[35:50, 30:55] = (200, 170, 90)
    seeds = np.zeros((60, 60), dtype=bool)
    seeds[10:25, 10:30] = seeds[35:50, 30:55] = True
    base = np.clip(px, 0, 255).astype(np.uint8)
    bright = px.copy()
    bright[~seeds, 2] += 40
    bright = np.clip(bright, 0, 255).astype(np.uint8)
    a = blue_background_mask(RgbRaster(base)).bits
    b = blue_background_mask(RgbRaster(bright)).bits
    assert np.array_equal(a, seeds) and np.array_equal(b, seeds)


# ---- components ----

def test_components_trivial_cases():
    assert connected_components(BinaryMask(np.zeros((5, 5), bool))) == []
    full = connected_components(BinaryMask(np.ones((4, 7), bool)))
    assert len(full) == 1 and full[0].area == 28
    diag = np.zeros((3, 3), bool)
    diag[0, 0] = diag[1, 1] = True
    assert len(connected_components(BinaryMask(diag))) == 1


def check_contour(region, bits):
    h, w = bits.shape
    pix = region.pixel_set()
    for x, y in region.contour:
        x, y = int(x), int(y)
        assert (x, y) in pix
        on_border = x in (0, w - 1) or y in (0, h - 1)
        open_side = any(not bits[y + dy, x + dx] for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))
                        if 0 <= x + dx < w and 0 <= y + dy < h)
        assert on_border or open_side
    first = tuple(int(v) for v in region.contour[0])
    assert first == min(pix, key=lambda p: (p[1], p[0]))
    # consecutive contour points are 8-neighbours
    c = np.asarray(region.contour)
    if len(c) > 1:
        steps = np.abs(np.diff(np.vstack([c, c[:1]]), axis=0))
        assert (steps.max(axis=1) == 1).all()


@pytest.mark.parametrize("seed", range(40))
def test_components_match_bfs_oracle(seed):
    rng = np.random.default_rng(seed)
    bits = rng.random((20, 25)) < rng.uniform(0.2, 0.6)
    regions = connected_components(BinaryMask(bits))
    oracle = bfs_components(bits)
    assert [r.pixel_set() for r in regions] == oracle
    assert sum(r.area for r in regions) == bits.sum()
    for i, r in enumerate(regions, start=1):
        assert r.label == i
        xs, ys = r.pixels[:, 0], r.pixels[:, 1]
        assert r.bbox == (xs.min(), ys.min(), xs.max(), ys.max())
        check_contour(r, bits)
        length = chain_length(r.contour)
        assert length <= 4 * r.area
        if r.area > 1:
            assert length >= np.ceil(2 * np.sqrt(r.area)) - 2


@pytest.mark.parametrize("seed", range(10))
def test_relabelling_is_idempotent(seed):
    bits = random_blob_mask(np.random.default_rng(seed), 30, 30, 0.4)
    first = connected_components(BinaryMask(bits))
    rebuilt = np.zeros_like(bits)
    for r in first:
        rebuilt[r.pixels[:, 1], r.pixels[:, 0]] = True
    second = connected_components(BinaryMask(rebuilt))
    assert [r.label for r in first] == [r.label for r in second]
    for a, b in zip(first, second):
        assert np.array_equal(a.contour, b.contour)


# ---- filtering and cropping ----

def _squares(sides):
    h = sum(s + 2 for s in sides)
    bits = np.zeros((h, max(sides) + 2), bool)
    y = 1
    for s in sides:
        bits[y:y + s, 1:1 + s] = True
        y += s + 2
    return connected_components(BinaryMask(bits))


def test_filter_by_area():
    # areas 4, 484 and 12100
    regions = _squares([2, 22, 110])
    kept = filter_regions(regions, RegionFilter(100, 10000))
    assert [r.area for r in kept] == [484]


def test_permissive_filter_is_identity():
    regions = connected_components(BinaryMask(random_blob_mask(np.random.default_rng(3), 40, 40)))
    assert filter_regions(regions, RegionFilter(0, float("inf"), 0, 1)) == regions


def test_thin_bar_rejected_by_circularity():
    bits = np.zeros((10, 70), bool)
    bits[3:6, 5:65] = True
    regions = connected_components(BinaryMask(bits))
    assert region_circularity(regions[0]) < 0.8
    assert filter_regions(regions, RegionFilter(0, 1e9, 0.8, 1.0)) == []


def test_filter_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        RegionFilter(10, 5)
    with pytest.raises(ValueError):
        RegionFilter(circ_min=0.9, circ_max=0.1)


def test_crop_pad_zero_and_corner_clamp():
    px = scene(30, 30)
    px[0:6, 0:8] = BROWN
    px[15:25, 12:20] = BROWN
    img = RgbRaster(px)
    mask, regions = segment(img, RegionFilter(1, 1e9))
    corner, middle = regions
    crop, cm = crop_region(img, mask, middle, pad=0)
    assert crop.shape == (10, 8) and cm.count == 80
    crop, cm = crop_region(img, mask, corner, pad=10)
    assert crop.shape == (16, 18)
    assert cm.bits[0, 0]


def test_crop_excludes_neighbouring_seed():
    bits = np.zeros((20, 20), bool)
    bits[2:12, 2:6] = True      # vertical bar
    bits[10:14, 7:16] = True    # bar whose bbox overlaps the first one's
    bits[2:10, 8:16] = False
    px = scene(20, 20)
    px[bits] = BROWN
    img = RgbRaster(px)
    mask, regions = segment(img, RegionFilter(1, 1e9))
    assert len(regions) == 2
    sets = []
    for r in regions:
        _, cm = crop_region(img, mask, r, pad=3)
        x0, y0 = max(0, r.bbox[0] - 3), max(0, r.bbox[1] - 3)
        ys, xs = np.nonzero(cm.bits)
        sets.append({(x + x0, y + y0) for x, y in zip(xs, ys)})
        assert sets[-1] == r.pixel_set()
    assert not sets[0] & sets[1]
