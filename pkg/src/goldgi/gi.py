"""Bucket-detector simulation and correlation reconstruction.

The forward model is ``D = M @ vec(O)``; the estimator is the centred
correlation

    O_GI = (1/K) * (M - <M>)^T (D - <D>)

where ``<M>`` is the per-pixel mean over the K rows actually used. For a full
orthogonal {0, 1} matrix whose first column is constant (Gold, Sylvester
Hadamard) the characteristic matrix is ``(N/4) * (I - e1 e1^T)``, so the first
pixel is always reconstructed as zero. Objects whose first pixel is 0 are
therefore recovered exactly up to scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .patterns import PatternMatrix

__all__ = [
    "ObjectImage",
    "NoiseModel",
    "BucketSeries",
    "Reconstruction",
    "CharacteristicMatrix",
    "DEFAULT_NOISE",
    "bucket_acquire",
    "apply_noise",
    "reconstruct_naive",
    "reconstruct_matrix",
    "centered",
    "characteristic_matrix",
    "normalize_characteristic",
    "minmax",
    "minmax_normalize",
]


@dataclass(frozen=True)
class ObjectImage:
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 2 or v.size == 0:
            raise ValueError("object must be a non-empty 2-D array")
        if not np.all(np.isfinite(v)):
            raise ValueError("object values must be finite")
        if v.min() < 0.0 or v.max() > 1.0:
            raise ValueError("object values must lie in [0, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def geometry(self) -> tuple[int, int]:
        return self.values.shape

    def vec(self) -> np.ndarray:
        return self.values.reshape(-1)


@dataclass(frozen=True)
class NoiseModel:
    """Detector-side noise, every magnitude relative to the clean mean signal.

    Attributes:
        gaussian_rel: standard deviation of additive white Gaussian noise.
        offset_rel: constant additive offset.
        burst: optional ``(fraction, amplitude_rel, placement)`` where
            placement is ``"contiguous"`` (starting at the first measurement)
            or ``"random"`` (seeded choice of measurements).
    """

    gaussian_rel: float = 0.0
    offset_rel: float = 0.0
    burst: tuple[float, float, str] | None = None

    def __post_init__(self):
        for name in ("gaussian_rel", "offset_rel"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and non-negative")
        if self.burst is not None:
            p, alpha, placement = self.burst
            p, alpha = float(p), float(alpha)
            if not (0.0 < p <= 1.0):
                raise ValueError("burst fraction must lie in (0, 1]")
            if not math.isfinite(alpha) or alpha < 0:
                raise ValueError("burst amplitude must be finite and non-negative")
            if placement not in ("contiguous", "random"):
                raise ValueError(f"unknown burst placement {placement!r}")
            object.__setattr__(self, "burst", (p, alpha, placement))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["burst"] = list(self.burst) if self.burst else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseModel":
        burst = d.get("burst")
        return cls(float(d.get("gaussian_rel", 0.0)), float(d.get("offset_rel", 0.0)),
                   tuple(burst) if burst else None)


DEFAULT_NOISE = NoiseModel(gaussian_rel=0.1, offset_rel=0.0,
                           burst=(0.1, 0.5, "contiguous"))


@dataclass(frozen=True)
class BucketSeries:
    values: np.ndarray = field(repr=False)
    noise: dict | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ValueError("bucket values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class Reconstruction:
    values: np.ndarray = field(repr=False)
    normalization: str = "none"
    degenerate: bool = False
    provenance: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class CharacteristicMatrix:
    values: np.ndarray = field(repr=False)
    normalized: bool = False


def bucket_acquire(p: PatternMatrix, o: ObjectImage) -> BucketSeries:
    """Clean detector signal, one value per pattern."""
    if tuple(p.geometry) != tuple(o.geometry):
        raise ValueError(f"pattern geometry {p.geometry} != object {o.geometry}")
    return BucketSeries(p.dense @ o.vec())


def apply_noise(d: BucketSeries, nm: NoiseModel, seed: int) -> BucketSeries:
    """Corrupt a clean series. Deterministic for a given ``(nm, seed)``."""
    if d.noise is not None:
        raise ValueError("bucket series already carries noise")
    D = d.values
    K = len(D)
    mean = D.mean()
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    out = D + nm.offset_rel * mean
    if nm.gaussian_rel > 0:
        out = out + rng.normal(0.0, nm.gaussian_rel * mean, size=K)
    if nm.burst is not None:
        p, alpha, placement = nm.burst
        count = max(1, int(round(p * K)))
        if placement == "contiguous":
            index = np.arange(count)
        else:
            index = np.sort(rng.choice(K, size=count, replace=False))
        out[index] += alpha * mean
    return BucketSeries(out, {"model": nm.to_dict(), "seed": int(seed), "rng": "PCG64"})


def _check_lengths(p: PatternMatrix, d: BucketSeries):
    if p.K == 0:
        raise ValueError("no measurements")
    if len(d) != p.K:
        raise ValueError(f"{len(d)} bucket values for {p.K} patterns")


def _provenance(p, d):
    return {"patterns": p.provenance, "noise": d.noise, "K": p.K}


def reconstruct_naive(p: PatternMatrix, d: BucketSeries) -> Reconstruction:
    """Correlation estimate accumulated one measurement at a time."""
    _check_lengths(p, d)
    K = p.K
    M = p.entries
    D = d.values
    D_mean = 0.0
    I_mean = np.zeros(p.N)
    for s in range(K):
        D_mean += D[s]
        I_mean += M[s]
    D_mean /= K
    I_mean /= K
    acc = np.zeros(p.N)
    for s in range(K):
        acc += (D[s] - D_mean) * (M[s] - I_mean)
    return Reconstruction((acc / K).reshape(p.geometry), provenance=_provenance(p, d))


def reconstruct_matrix(p: PatternMatrix, d: BucketSeries) -> Reconstruction:
    """Same estimate as :func:`reconstruct_naive`, as one matrix product."""
    _check_lengths(p, d)
    M = p.dense
    Dc = d.values - d.values.mean()
    # (M - 1<M>)^T Dc expanded so the centred K x N copy is never formed
    out = (M.T @ Dc - M.mean(axis=0) * Dc.sum()) / p.K
    return Reconstruction(out.reshape(p.geometry), provenance=_provenance(p, d))


def centered(p: PatternMatrix) -> np.ndarray:
    """``M - 1<M>``: each column minus its mean over the K rows."""
    M = p.dense
    return M - M.mean(axis=0)


def characteristic_matrix(p: PatternMatrix) -> CharacteristicMatrix:
    Mc = centered(p)
    return CharacteristicMatrix(Mc.T @ Mc)


def normalize_characteristic(c: CharacteristicMatrix) -> CharacteristicMatrix:
    """Divide by the Euclidean norm of the row holding the global maximum.

    Ties go to the lowest row, then the lowest column.
    """
    if c.normalized:
        raise ValueError("matrix is already normalized")
    v = c.values
    row = np.unravel_index(np.argmax(v), v.shape)[0]
    norm = np.linalg.norm(v[row])
    if norm == 0:
        raise ValueError("cannot normalize a zero matrix")
    return CharacteristicMatrix(v / norm, normalized=True)


def minmax(values) -> tuple[np.ndarray, bool]:
    """Affine map onto [0, 1]. Constant input gives zeros and ``True``."""
    v = np.asarray(values, dtype=np.float64)
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.zeros_like(v), True
    return (v - lo) / (hi - lo), False


def minmax_normalize(r: Reconstruction) -> Reconstruction:
    values, degenerate = minmax(r.values)
    return Reconstruction(values, "minmax", degenerate, r.provenance)
