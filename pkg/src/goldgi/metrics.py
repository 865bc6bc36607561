"""MSE and PSNR on equally shaped images."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["QualityReport", "mse", "psnr", "quality", "format_psnr"]


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr: float  # math.inf when mse == 0
    max_val: float
    pixel_count: int


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"geometry mismatch: {a.shape} vs {b.shape}")
    return a, b


def mse(a, b) -> float:
    a, b = _pair(a, b)
    return float(np.mean((a - b) ** 2))


def _psnr_from_mse(err: float, max_val: float) -> float:
    if err == 0:
        return math.inf
    return 10.0 * math.log10(max_val**2 / err)


def psnr(a, b, max_val: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical images."""
    if not max_val > 0:
        raise ValueError("max_val must be positive")
    return _psnr_from_mse(mse(a, b), max_val)


def quality(a, b, max_val: float = 1.0) -> QualityReport:
    if not max_val > 0:
        raise ValueError("max_val must be positive")
    err = mse(a, b)
    return QualityReport(err, _psnr_from_mse(err, max_val), float(max_val),
                         int(np.asarray(a).size))


def format_psnr(value: float) -> str:
    return "inf" if math.isinf(value) else repr(float(value))
