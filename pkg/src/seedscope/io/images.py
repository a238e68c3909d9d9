"""PNG/JPEG decoding into :class:`RgbRaster` (no re-encoding of inputs)."""
from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import CorruptFile, UnsupportedFormat
from ..raster import BinaryMask, RgbRaster

SUPPORTED = {"PNG", "JPEG"}
IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}


def _to_rgb_array(im: Image.Image) -> np.ndarray:
    mode = im.mode
    if mode in ("I;16", "I;16B", "I;16L", "I"):
        arr = np.asarray(im, dtype=np.int64)
        if mode == "I" and arr.max(initial=0) <= 255:
            gray = arr.astype(np.uint8)
        else:
            gray = (np.clip(arr, 0, 65535) >> 8).astype(np.uint8)
        return np.repeat(gray[:, :, None], 3, axis=2)
    if mode in ("1", "L"):
        gray = np.asarray(im.convert("L"), dtype=np.uint8)
        return np.repeat(gray[:, :, None], 3, axis=2)
    if mode in ("LA",):
        gray = np.asarray(im.getchannel("L"), dtype=np.uint8)
        return np.repeat(gray[:, :, None], 3, axis=2)
    return np.asarray(im.convert("RGB"), dtype=np.uint8)


def load_image(path) -> RgbRaster:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(path)
    try:
        with Image.open(path) as im:
            fmt = im.format
            if fmt not in SUPPORTED:
                raise UnsupportedFormat(f"{path}: {fmt} images are not supported")
            im.load()
            return RgbRaster(_to_rgb_array(im))
    except UnidentifiedImageError as exc:
        if path.suffix.lower() in IMAGE_SUFFIXES:
            raise CorruptFile(f"{path}: cannot decode image") from exc
        raise UnsupportedFormat(f"{path}: unrecognised image format") from exc
    except (OSError, SyntaxError, ValueError) as exc:
        if isinstance(exc, (UnsupportedFormat, FileNotFoundError)):
            raise
        raise CorruptFile(f"{path}: {exc}") from exc


def save_png(path, raster) -> None:
    if isinstance(raster, RgbRaster):
        Image.fromarray(np.ascontiguousarray(raster.pixels), "RGB").save(path, format="PNG")
    elif isinstance(raster, BinaryMask):
        Image.fromarray(raster.bits.astype(np.uint8) * 255, "L").save(path, format="PNG")
    else:
        Image.fromarray(np.ascontiguousarray(raster.pixels), "L").save(path, format="PNG")
