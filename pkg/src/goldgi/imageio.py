"""PGM (P5), float CSV and JSON persistence.

All writers produce deterministic bytes: fixed header layout, ``.`` decimal
separator, LF line endings, shortest round-trip float repr.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .gi import BucketSeries, ObjectImage

__all__ = [
    "FORMATS",
    "read_pgm",
    "write_pgm",
    "quantize",
    "load_object",
    "save_image",
    "load_image",
    "read_float_csv",
    "write_float_csv",
    "write_bucket_csv",
    "read_bucket_csv",
    "write_json",
    "read_json",
    "resample_nearest",
]

FORMATS = ("pgm8", "pgm16", "csv-float")

_PGM_HEADER = re.compile(
    rb"P5(?:\s|#[^\n]*\n)+(\d+)(?:\s|#[^\n]*\n)+(\d+)(?:\s|#[^\n]*\n)+(\d+)\s"
)


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Return ``(samples, maxval)``; samples are ``height x width`` integers."""
    data = Path(path).read_bytes()
    match = _PGM_HEADER.match(data)
    if match is None:
        raise ValueError(f"not a binary PGM (P5) file: {path}")
    width, height, maxval = (int(g) for g in match.groups())
    if width == 0 or height == 0:
        raise ValueError(f"zero-sized image: {path}")
    if not 0 < maxval < 65536:
        raise ValueError(f"invalid PGM maxval {maxval}")
    dtype = np.dtype("u1") if maxval < 256 else np.dtype(">u2")
    count = width * height
    body = data[match.end():]
    if len(body) < count * dtype.itemsize:
        raise ValueError(f"truncated PGM payload: {path}")
    samples = np.frombuffer(body, dtype=dtype, count=count).reshape(height, width)
    return samples.astype(np.uint16 if dtype.itemsize == 2 else np.uint8), maxval


def write_pgm(path, samples: np.ndarray, maxval: int):
    samples = np.asarray(samples)
    if samples.ndim != 2:
        raise ValueError("PGM samples must be 2-D")
    if samples.min() < 0 or samples.max() > maxval:
        raise ValueError(f"samples outside 0..{maxval}")
    height, width = samples.shape
    dtype = "u1" if maxval < 256 else ">u2"
    header = f"P5\n{width} {height}\n{maxval}\n".encode("ascii")
    Path(path).write_bytes(header + samples.astype(dtype).tobytes())


def quantize(values, maxval: int) -> np.ndarray:
    """Map [0, 1] onto ``0..maxval`` rounding half up."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    return np.floor(v * maxval + 0.5).astype(np.int64)


def write_float_csv(path, values: np.ndarray):
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    lines = [",".join(repr(float(x)) for x in row) for row in values]
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def read_float_csv(path) -> np.ndarray:
    rows = [
        [float(x) for x in line.split(",")]
        for line in Path(path).read_text().splitlines()
        if line.strip()
    ]
    if not rows or not rows[0]:
        raise ValueError(f"zero-sized image: {path}")
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"ragged CSV rows in {path}")
    return np.array(rows, dtype=np.float64)


def resample_nearest(values: np.ndarray, geometry) -> np.ndarray:
    """Nearest-neighbour resample onto ``(m, n)`` using pixel centres."""
    h, w = values.shape
    m, n = geometry
    rows = np.minimum(((np.arange(m) + 0.5) * h / m).astype(int), h - 1)
    cols = np.minimum(((np.arange(n) + 0.5) * w / n).astype(int), w - 1)
    return values[np.ix_(rows, cols)]


def load_image(path) -> np.ndarray:
    """Load a PGM or float CSV as float64 (PGM scaled by its maxval)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_float_csv(path)
    samples, maxval = read_pgm(path)
    return samples.astype(np.float64) / maxval


def load_object(path, geometry=None, binarize: bool = False) -> ObjectImage:
    """Read an object image scaled to [0, 1].

    Args:
        path: PGM (8 or 16 bit) or float CSV file.
        geometry: optional ``(m, n)``; the image is nearest-neighbour resampled.
        binarize: threshold at 0.5 (values >= 0.5 become 1).
    """
    try:
        values = load_image(path)
    except OSError as exc:
        raise OSError(f"cannot read object {path}: {exc}") from exc
    values = np.clip(values, 0.0, 1.0)
    if geometry is not None and tuple(geometry) != values.shape:
        values = resample_nearest(values, geometry)
    if binarize:
        values = (values >= 0.5).astype(np.float64)
    return ObjectImage(values)


def save_image(img, path, fmt: str):
    """Write ``img`` (array or anything with ``.values``) in one of FORMATS."""
    values = np.asarray(getattr(img, "values", img), dtype=np.float64)
    if fmt == "pgm8":
        write_pgm(path, quantize(values, 255), 255)
    elif fmt == "pgm16":
        write_pgm(path, quantize(values, 65535), 65535)
    elif fmt == "csv-float":
        write_float_csv(path, values)
    else:
        raise ValueError(f"unknown image format {fmt!r}")


def write_bucket_csv(path, d: BucketSeries):
    lines = ["s,D"] + [f"{s},{float(v)!r}" for s, v in enumerate(d.values, start=1)]
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def read_bucket_csv(path, noise: dict | None = None) -> BucketSeries:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "s,D":
        raise ValueError(f"missing 's,D' header in {path}")
    values = []
    for expected, line in enumerate(lines[1:], start=1):
        s, v = line.split(",")
        if int(s) != expected:
            raise ValueError(f"measurement index {s} out of order in {path}")
        values.append(float(v))
    return BucketSeries(np.array(values), noise)


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                          newline="\n")


def read_json(path):
    return json.loads(Path(path).read_text())
