"""Pixel-grid types and colour conversions.

Rasters wrap read-only numpy arrays indexed ``[y, x]`` (row-major). All
constructors copy their input, so instances can be shared freely between
workers.
"""
from __future__ import annotations

import colorsys
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def _frozen(arr: np.ndarray, dtype) -> np.ndarray:
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class RgbRaster:
    pixels: np.ndarray  # (height, width, 3) uint8

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"expected (h, w, 3) array, got shape {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("raster must be at least 1x1")
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise ValueError("channel values must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen(px, np.uint8))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape[:2]

    def channel(self, index: int) -> np.ndarray:
        return self.pixels[:, :, index]

    def __eq__(self, other):
        return isinstance(other, RgbRaster) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class GrayRaster:
    pixels: np.ndarray  # (height, width) uint8

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"expected non-empty (h, w) array, got shape {px.shape}")
        if px.dtype != np.uint8 and px.size and (px.min() < 0 or px.max() > 255):
            raise ValueError("gray values must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen(px, np.uint8))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __eq__(self, other):
        return isinstance(other, GrayRaster) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class BinaryMask:
    bits: np.ndarray  # (height, width) bool, True = foreground

    def __post_init__(self):
        b = np.asarray(self.bits)
        if b.ndim != 2:
            raise ValueError(f"expected (h, w) array, got shape {b.shape}")
        object.__setattr__(self, "bits", _frozen(b != 0, bool))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    @property
    def count(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other):
        return isinstance(other, BinaryMask) and np.array_equal(self.bits, other.bits)


class HsvPixel(NamedTuple):
    h: float
    s: float
    v: float


def to_gray(img: RgbRaster) -> GrayRaster:
    """Luma conversion, ``round(0.299 R + 0.587 G + 0.114 B)``."""
    px = img.pixels.astype(np.float64)
    wr, wg, wb = LUMA_WEIGHTS
    y = wr * px[:, :, 0] + wg * px[:, :, 1] + wb * px[:, :, 2]
    return GrayRaster(np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8))


def rgb_to_hsv(p) -> HsvPixel:
    r, g, b = (int(c) for c in p)
    return HsvPixel(*colorsys.rgb_to_hsv(r / 255.0, g / 255.0, b / 255.0))


def hsv_to_rgb(p: HsvPixel) -> tuple[int, int, int]:
    r, g, b = colorsys.hsv_to_rgb(*p)
    return (int(round(r * 255)), int(round(g * 255)), int(round(b * 255)))


def rgb_to_hsv_array(rgb: np.ndarray) -> np.ndarray:
    """Vectorised hexcone conversion of an ``(..., 3)`` 8-bit array.

    Mirrors :func:`rgb_to_hsv` exactly (hue 0 for achromatic pixels, hue in
    [0, 1)).
    """
    c = np.asarray(rgb, dtype=np.float64) / 255.0
    r, g, b = c[..., 0], c[..., 1], c[..., 2]
    maxc = c.max(axis=-1)
    minc = c.min(axis=-1)
    delta = maxc - minc
    v = maxc
    s = np.divide(delta, maxc, out=np.zeros_like(maxc), where=maxc > 0)
    safe = np.where(delta > 0, delta, 1.0)
    rc = (maxc - r) / safe
    gc = (maxc - g) / safe
    bc = (maxc - b) / safe
    h = np.where(r == maxc, bc - gc, np.where(g == maxc, 2.0 + rc - bc, 4.0 + gc - rc))
    h = (h / 6.0) % 1.0
    h = np.where(delta > 0, h, 0.0)
    return np.stack([h, s, v], axis=-1)
