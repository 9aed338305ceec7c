"""Campaign target contours: authored vectors or silhouette-image extraction.

A silhouette (e.g. a city skyline, dark shape on light background) is reduced
to a 40-bin height profile: per column, the height from the topmost dark
pixel down to the bottom edge, averaged over 40 column groups.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    AllZero,
    EmptySilhouette,
    NegativeBin,
    TooNarrow,
    WrongLength,
)

CONTOUR_BINS = 40
DEFAULT_THRESHOLD = 128


@dataclass(frozen=True)
class ContourVector:
    bins: tuple
    label: str = ""

    def __post_init__(self):
        bins = tuple(float(b) for b in self.bins)
        object.__setattr__(self, "bins", bins)
        if len(bins) != CONTOUR_BINS:
            raise WrongLength(f"expected {CONTOUR_BINS} bins, got {len(bins)}")
        if any(b < 0 for b in bins):
            raise NegativeBin("contour bins must be non-negative")
        if all(b == 0 for b in bins):
            raise AllZero("contour must have at least one positive bin")

    def to_json(self) -> str:
        return json.dumps({"bins": list(self.bins), "label": self.label})


@dataclass(frozen=True)
class GrayscaleImage:
    width: int
    height: int
    pixels: np.ndarray  # uint8, row-major, shape (height, width)

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8).reshape(self.height, self.width)
        object.__setattr__(self, "pixels", px)
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")


def load_contour(data: bytes | str) -> ContourVector:
    """Parse and validate contour JSON: {"bins": [40 numbers], "label": str?}."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    obj = json.loads(data)
    if not isinstance(obj, dict) or "bins" not in obj:
        raise WrongLength("contour JSON must be an object with a 'bins' array")
    return ContourVector(bins=tuple(obj["bins"]), label=str(obj.get("label", "")))


def load_pgm(data: bytes) -> GrayscaleImage:
    """Parse a binary PGM (P5, maxval <= 255) into a GrayscaleImage."""
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError("truncated PGM header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    magic, w, h, maxval = tokens
    if magic != b"P5":
        raise ValueError("not a binary PGM (expected magic P5)")
    width, height, maxval = int(w), int(h), int(maxval)
    if maxval != 255:
        raise ValueError("only 8-bit PGM supported (maxval 255)")
    raster = data[pos:pos + width * height]
    if len(raster) < width * height:
        raise ValueError("PGM raster truncated")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return GrayscaleImage(width=width, height=height, pixels=pixels)


def contour_from_silhouette(
    image: GrayscaleImage,
    n_bins: int = CONTOUR_BINS,
    threshold: int = DEFAULT_THRESHOLD,
    label: str = "",
) -> ContourVector:
    """Column-height profile of a dark-on-light silhouette, averaged into bins.

    A pixel is foreground iff its value < threshold. Column height is measured
    from the topmost foreground pixel to the bottom edge (0 for empty columns).
    """
    if not (0 <= threshold <= 255):
        raise ValueError("threshold must be in [0, 255]")
    if image.width < n_bins:
        raise TooNarrow(f"image width {image.width} < {n_bins} bins")
    fg = image.pixels < threshold
    if not fg.any():
        raise EmptySilhouette("no foreground pixels below threshold")
    has_fg = fg.any(axis=0)
    top = fg.argmax(axis=0)  # first True per column; 0 for empty columns too
    heights = np.where(has_fg, image.height - top, 0).astype(np.float64)
    edges = [(k * image.width) // n_bins for k in range(n_bins + 1)]
    bins = [float(heights[edges[k]:edges[k + 1]].mean()) for k in range(n_bins)]
    return ContourVector(bins=tuple(bins), label=label)
