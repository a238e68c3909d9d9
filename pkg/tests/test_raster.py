import colorsys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seedscope.raster import (BinaryMask, GrayRaster, HsvPixel, RgbRaster, hsv_to_rgb,
                              rgb_to_hsv, rgb_to_hsv_array, to_gray)

channel = st.integers(0, 255)
triple = st.tuples(channel, channel, channel)


def gray_of(rgb):
    return int(to_gray(RgbRaster(np.array([[rgb]], dtype=np.uint8))).pixels[0, 0])


@pytest.mark.parametrize("rgb,expected", [((0, 0, 0), 0), ((255, 255, 255), 255),
                                          ((100, 200, 50), 153)])
def test_to_gray_examples(rgb, expected):
    assert gray_of(rgb) == expected


@given(triple, triple)
def test_to_gray_monotone(a, b):
    hi = tuple(max(x, y) for x, y in zip(a, b))
    assert gray_of(hi) >= gray_of(a)
    assert gray_of(hi) >= gray_of(b)


def test_rgb_to_hsv_examples():
    assert rgb_to_hsv((255, 0, 0)) == HsvPixel(0.0, 1.0, 1.0)
    h, s, v = rgb_to_hsv((128, 128, 128))
    assert (h, s) == (0.0, 0.0) and v == pytest.approx(128 / 255)
    h, s, v = rgb_to_hsv((0, 0, 255))
    assert h == pytest.approx(2 / 3) and s == 1.0 and v == 1.0


def test_hsv_round_trip_subsampled_cube():
    levels = range(0, 256, 8)
    for r in levels:
        for g in levels:
            for b in levels:
                back = hsv_to_rgb(rgb_to_hsv((r, g, b)))
                assert max(abs(x - y) for x, y in zip(back, (r, g, b))) <= 1


def test_hsv_array_matches_scalar(rng):
    px = rng.integers(0, 256, size=(500, 3))
    arr = rgb_to_hsv_array(px.astype(np.float64))
    ref = np.array([colorsys.rgb_to_hsv(*(c / 255.0 for c in p)) for p in px])
    np.testing.assert_allclose(arr, ref, atol=1e-12)
    assert ((arr[:, 0] >= 0) & (arr[:, 0] < 1)).all()


def test_rasters_are_immutable_copies():
    src = np.zeros((3, 4, 3), dtype=np.uint8)
    img = RgbRaster(src)
    src[0, 0, 0] = 9
    assert img.pixels[0, 0, 0] == 0
    with pytest.raises(ValueError):
        img.pixels[0, 0, 0] = 1
    assert (img.width, img.height) == (4, 3)
    m = BinaryMask(np.eye(3, dtype=bool))
    assert m.count == 3
    with pytest.raises(ValueError):
        GrayRaster(np.zeros((2, 2, 3), dtype=np.uint8))
