"""RGB and HSV channel statistics over the seed pixels.

RGB statistics are on the 0-255 scale, HSV on 0-1. Standard deviations are
population values. Hue is averaged linearly on [0, 1), so seeds whose hues
straddle pure red (0/1 wrap) get a mean hue pulled toward 0.5.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import EmptyRegion
from .raster import BinaryMask, RgbRaster, rgb_to_hsv_array

COLOR_NAMES = (
    "MeanRed", "StDRed", "SqrtMeanRed",
    "MeanGreen", "StDGreen", "SqrtMeanGreen",
    "MeanBlue", "StDBlue", "SqrtMeanBlue",
    "MeanRGB", "MeanHue", "StDHue", "MeanSat", "StDSat", "MeanVal", "StDVal",
)


@dataclass(frozen=True)
class ColorFeatures:
    mean_r: float
    std_r: float
    sqrt_mean_r: float
    mean_g: float
    std_g: float
    sqrt_mean_g: float
    mean_b: float
    std_b: float
    sqrt_mean_b: float
    mean_rgb: float
    mean_hue: float
    std_hue: float
    mean_sat: float
    std_sat: float
    mean_val: float
    std_val: float

    def values(self) -> list[float]:
        return [getattr(self, f.name) for f in fields(self)]


def extract_color(img: RgbRaster, mask: BinaryMask) -> ColorFeatures:
    if img.shape != mask.shape:
        raise ValueError("image and mask dimensions differ")
    rgb = img.pixels[mask.bits].astype(np.float64)
    if rgb.shape[0] == 0:
        raise EmptyRegion("mask selects no pixels")
    means = rgb.mean(axis=0)
    stds = rgb.std(axis=0)
    hsv = rgb_to_hsv_array(rgb)
    hm, hs = hsv.mean(axis=0), hsv.std(axis=0)
    mr, mg, mb = (float(v) for v in means)
    return ColorFeatures(
        mean_r=mr, std_r=float(stds[0]), sqrt_mean_r=math.sqrt(mr),
        mean_g=mg, std_g=float(stds[1]), sqrt_mean_g=math.sqrt(mg),
        mean_b=mb, std_b=float(stds[2]), sqrt_mean_b=math.sqrt(mb),
        mean_rgb=math.fsum((mr, mg, mb)) / 3.0,
        mean_hue=float(hm[0]), std_hue=float(hs[0]),
        mean_sat=float(hm[1]), std_sat=float(hs[1]),
        mean_val=float(hm[2]), std_val=float(hs[2]),
    )
