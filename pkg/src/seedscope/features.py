"""Assembly of the 64-value descriptor vector for one seed."""
from __future__ import annotations

from .colorfeat import COLOR_NAMES, extract_color
from .morphfeat import MORPH_NAMES, extract_morph
from .raster import to_gray
from .texturefeat import TEXTURE_NAMES, extract_texture

CATEGORIES = ("morph", "texture", "color")
CATEGORY_NAMES = {"morph": MORPH_NAMES, "texture": TEXTURE_NAMES, "color": COLOR_NAMES}
ALL_NAMES = MORPH_NAMES + TEXTURE_NAMES + COLOR_NAMES


def parse_categories(spec) -> tuple[str, ...]:
    """Normalise a category selection (``"all"``, a comma list or an
    iterable) into canonical order."""
    if isinstance(spec, str):
        items = [s.strip().lower() for s in spec.split(",") if s.strip()]
    else:
        items = [str(s).lower() for s in spec]
    if "all" in items:
        return CATEGORIES
    aliases = {"colour": "color", "morphology": "morph", "morphological": "morph"}
    items = [aliases.get(s, s) for s in items]
    unknown = sorted(set(items) - set(CATEGORIES))
    if unknown:
        raise ValueError(f"unknown feature categories: {', '.join(unknown)}")
    if not items:
        raise ValueError("at least one feature category is required")
    return tuple(c for c in CATEGORIES if c in items)


def feature_names(categories=CATEGORIES) -> tuple[str, ...]:
    names: tuple = ()
    for c in parse_categories(categories):
        names += CATEGORY_NAMES[c]
    return names


def category_columns(names, category: str) -> list[int]:
    wanted = set(CATEGORY_NAMES[category])
    return [i for i, n in enumerate(names) if n in wanted]


def extract_features(crop, crop_mask, region, categories=CATEGORIES) -> list[float]:
    """Descriptor values of one seed, category blocks in canonical order.

    ``crop``/``crop_mask`` come from :func:`seedscope.segmentation.crop_region`;
    ``region`` carries the full-image contour used by the shape block.
    """
    values: list[float] = []
    for c in parse_categories(categories):
        if c == "morph":
            values += extract_morph(crop_mask, region).values()
        elif c == "texture":
            values += extract_texture(to_gray(crop), crop_mask).values()
        else:
            values += extract_color(crop, crop_mask).values()
    return values
