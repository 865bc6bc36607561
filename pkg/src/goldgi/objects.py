"""Bundled 64x64 test objects.

``horse`` is a binary silhouette and ``house`` a grayscale scene. Both have
their first pixel at 0, the object minimum: the correlation estimator for
Gold and Hadamard patterns cannot recover pixel (1, 1), so an object that is
zero there is recovered exactly at full sampling.

The PGM files under ``data/`` are the 8-bit renderings of :func:`draw_horse`
and :func:`draw_house`; the test suite checks that they agree.
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from .gi import ObjectImage

__all__ = ["draw_horse", "draw_house", "horse", "house", "object_path"]

SIZE = 64


def _grid(size):
    y, x = np.mgrid[0:size, 0:size].astype(np.float64) / size
    return x, y


def _ellipse(x, y, cx, cy, rx, ry):
    return ((x - cx) / rx) ** 2 + ((y - cy) / ry) ** 2 <= 1.0


def _box(x, y, x0, x1, y0, y1):
    return (x >= x0) & (x < x1) & (y >= y0) & (y < y1)


def _slanted(x, y, x0, y0, x1, y1, half_width):
    """Thick segment from (x0, y0) to (x1, y1)."""
    dx, dy = x1 - x0, y1 - y0
    t = np.clip(((x - x0) * dx + (y - y0) * dy) / (dx * dx + dy * dy), 0, 1)
    return np.hypot(x - (x0 + t * dx), y - (y0 + t * dy)) <= half_width


def draw_horse(size: int = SIZE) -> np.ndarray:
    x, y = _grid(size)
    mask = _ellipse(x, y, 0.48, 0.47, 0.24, 0.11)                  # body
    mask |= _slanted(x, y, 0.68, 0.42, 0.78, 0.22, 0.055)          # neck
    mask |= _ellipse(x, y, 0.83, 0.22, 0.09, 0.045)                # head
    mask |= _slanted(x, y, 0.74, 0.15, 0.76, 0.10, 0.02)           # ear
    for x0, x1 in ((0.31, 0.27), (0.37, 0.40), (0.58, 0.55), (0.64, 0.68)):
        mask |= _slanted(x, y, x0, 0.52, x1, 0.85, 0.025)          # legs
    mask |= _slanted(x, y, 0.25, 0.42, 0.13, 0.66, 0.03)           # tail
    return mask.astype(np.float64)


def draw_house(size: int = SIZE) -> np.ndarray:
    x, y = _grid(size)
    img = 0.75 * (x + y) / 2.0                                     # sky, 0 at the corner
    img = np.where(y >= 0.78, 0.45 + 0.1 * x, img)                  # ground
    img = np.where(_box(x, y, 0.22, 0.78, 0.45, 0.80), 0.62, img)   # walls
    roof = (y >= 0.22) & (y < 0.46) & (np.abs(x - 0.5) <= (y - 0.22) * 1.35)
    img = np.where(roof, 0.28, img)
    img = np.where(_box(x, y, 0.65, 0.72, 0.24, 0.36), 0.18, img)   # chimney
    img = np.where(_box(x, y, 0.44, 0.56, 0.60, 0.80), 0.12, img)   # door
    for x0 in (0.28, 0.63):
        img = np.where(_box(x, y, x0, x0 + 0.1, 0.53, 0.65), 1.0, img)    # lit windows
    img = np.round(img * 255) / 255
    img[0, 0] = 0.0
    return img


def object_path(name: str):
    return resources.files("goldgi") / "data" / f"{name}64.pgm"


def _load(name, binarize):
    from .imageio import load_object

    with resources.as_file(object_path(name)) as path:
        return load_object(path, binarize=binarize)


def horse() -> ObjectImage:
    """Binary 64x64 stand-in object."""
    return _load("horse", True)


def house() -> ObjectImage:
    """Grayscale 64x64 stand-in object."""
    return _load("house", False)
