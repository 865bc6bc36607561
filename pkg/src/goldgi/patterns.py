"""Measurement matrices for single-pixel acquisition.

Three families are provided: Gold matrices assembled from two m-sequences,
Sylvester-ordered Hadamard matrices, and seeded random patterns. Each matrix
row is one illumination pattern, folded row-major into an ``m x n`` frame.

Every :class:`PatternMatrix` carries a JSON-serialisable ``provenance`` dict
from which :func:`regenerate` rebuilds it bit for bit.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.linalg import hadamard

from .seqgen import (
    MAX_DEGREE,
    MSequence,
    PrimitivePolynomial,
    default_seed,
    generate_m_sequence,
    table_polynomials,
)

__all__ = [
    "FAMILIES",
    "PatternMatrix",
    "DegenerateGoldPair",
    "square_geometry",
    "build_gold_matrix",
    "gold_patterns",
    "build_hadamard_matrix",
    "build_random_patterns",
    "reshape_row",
    "select_rows",
    "selection_index",
    "regenerate",
    "save_patterns",
    "load_patterns",
]

FAMILIES = ("gold", "hadamard", "random")


class DegenerateGoldPair(UserWarning):
    """Both m-sequences come from the same polynomial."""


@dataclass(frozen=True)
class PatternMatrix:
    entries: np.ndarray = field(repr=False)
    geometry: tuple[int, int]
    family: str
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.ndim != 2:
            raise ValueError("pattern matrix must be 2-D")
        m, n = (int(v) for v in self.geometry)
        if m < 1 or n < 1 or m * n != entries.shape[1]:
            raise ValueError(
                f"geometry {m}x{n} does not match {entries.shape[1]} columns"
            )
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "geometry", (m, n))

    @property
    def K(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.entries.shape[1]

    @property
    def is_binary(self) -> bool:
        return self.entries.dtype == np.uint8

    @cached_property
    def dense(self) -> np.ndarray:
        """Entries as float64, computed once per matrix."""
        out = self.entries.astype(np.float64)
        out.setflags(write=False)
        return out

    def bipolar(self) -> np.ndarray:
        """Map 1 -> +1, 0 -> -1 (binary families only)."""
        if not self.is_binary:
            raise ValueError("bipolar form is only defined for binary patterns")
        return 2 * self.entries.astype(np.int64) - 1


def square_geometry(k: int) -> tuple[int, int]:
    if k % 2:
        raise ValueError(
            f"k={k} is odd, so 2^k pixels cannot form a square frame; "
            "pass an explicit geometry (m, n) with m*n = 2^k"
        )
    side = 1 << (k // 2)
    return side, side


def _check_geometry(geometry, k):
    if geometry is None:
        return square_geometry(k)
    m, n = (int(v) for v in geometry)
    if m * n != 1 << k:
        raise ValueError(f"geometry {m}x{n} does not hold 2^{k} pixels")
    return m, n


def build_gold_matrix(X: MSequence, Y: MSequence, geometry=None) -> PatternMatrix:
    """Assemble the ``2^k x 2^k`` Gold matrix from two m-sequences.

    Row ``i < 2^k - 1`` is ``[1 | X xor (Y cyclically right-shifted by i)]``
    and the final row is ``[1 | X]``.
    """
    if X.order != Y.order:
        raise ValueError(f"m-sequence orders differ: {X.order} vs {Y.order}")
    k = X.order
    geometry = _check_geometry(geometry, k)
    if X.polynomial == Y.polynomial:
        warnings.warn(
            f"X and Y share polynomial {X.polynomial}; the matrix stays "
            "orthogonal but loses pseudo-randomness",
            DegenerateGoldPair,
            stacklevel=2,
        )
    L = len(X)
    j = np.arange(L)
    shifts = (j[None, :] - j[:, None]) % L
    C = X.bits[None, :] ^ Y.bits[shifts]
    G = np.ones((L + 1, L + 1), dtype=np.uint8)
    G[:L, 1:] = C
    G[L, 1:] = X.bits
    provenance = {
        "family": "gold",
        "k": k,
        "poly_x": X.polynomial.bits,
        "poly_y": Y.polynomial.bits,
        "seed_x": "".join(map(str, X.seed)),
        "seed_y": "".join(map(str, Y.seed)),
        "geometry": list(geometry),
    }
    return PatternMatrix(G, geometry, "gold", provenance)


def gold_patterns(k, poly_x=None, poly_y=None, seed_x=None, seed_y=None,
                  geometry=None) -> PatternMatrix:
    """Gold matrix of order ``k``; defaults to the first two table polynomials."""
    default_x, default_y = table_polynomials(k)
    poly_x = _as_poly(poly_x) or default_x
    poly_y = _as_poly(poly_y) or default_y
    if poly_x.degree != k or poly_y.degree != k:
        raise ValueError(f"polynomials must have degree {k}")
    X = generate_m_sequence(poly_x, _as_seed(seed_x, k))
    Y = generate_m_sequence(poly_y, _as_seed(seed_y, k))
    with warnings.catch_warnings():
        if poly_x == poly_y and k == 2:
            # degree 2 has a single primitive polynomial; nothing to warn about
            warnings.simplefilter("ignore", DegenerateGoldPair)
        return build_gold_matrix(X, Y, geometry)


def _as_poly(p):
    if p is None or isinstance(p, PrimitivePolynomial):
        return p
    return PrimitivePolynomial.parse(str(p))


def _as_seed(seed, k):
    if seed is None:
        return default_seed(k)
    if isinstance(seed, str):
        return tuple(int(c) for c in seed)
    return tuple(seed)


def build_hadamard_matrix(k: int, geometry=None) -> PatternMatrix:
    """Sylvester-ordered Hadamard matrix of size ``2^k``, mapped to {0, 1}."""
    if not 1 <= k <= MAX_DEGREE:
        raise ValueError(f"k must lie in [1, {MAX_DEGREE}], got {k}")
    geometry = _check_geometry(geometry, k)
    H = hadamard(1 << k, dtype=np.int8)
    entries = ((H + 1) // 2).astype(np.uint8)
    provenance = {"family": "hadamard", "k": k, "geometry": list(geometry)}
    return PatternMatrix(entries, geometry, "hadamard", provenance)


def build_random_patterns(K: int, m: int, n: int, seed: int,
                          mode: str = "binary") -> PatternMatrix:
    """Seeded i.i.d. patterns from a PCG64 generator.

    ``binary`` draws fair Bernoulli entries (DMD compatible). ``negexp`` draws
    unit-mean exponential intensities, like thermal speckle; that matrix is
    continuous rather than {0, 1}.
    """
    if K < 1 or m < 1 or n < 1:
        raise ValueError("K, m and n must be positive")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    rng = np.random.Generator(np.random.PCG64(seed))
    if mode == "binary":
        entries = rng.integers(0, 2, size=(K, m * n), dtype=np.uint8)
    elif mode == "negexp":
        entries = rng.standard_exponential(size=(K, m * n))
    else:
        raise ValueError(f"unknown random mode {mode!r}")
    provenance = {
        "family": "random",
        "K": K,
        "geometry": [m, n],
        "rng": "PCG64",
        "seed": seed,
        "mode": mode,
    }
    return PatternMatrix(entries, (m, n), "random", provenance)


def reshape_row(p: PatternMatrix, s: int) -> np.ndarray:
    """Pattern ``s`` (1-based) folded row-major into its ``m x n`` frame."""
    if not 1 <= s <= p.K:
        raise IndexError(f"pattern index {s} outside 1..{p.K}")
    return p.entries[s - 1].reshape(p.geometry)


def selection_index(K: int, count: int, order: str = "natural",
                    seed: int | None = None) -> np.ndarray:
    """Row indices picked by :func:`select_rows`."""
    if not 1 <= count <= K:
        raise ValueError(f"count {count} outside 1..{K}")
    if order == "natural":
        return np.arange(count)
    if order == "perm":
        if seed is None:
            raise ValueError("seeded permutation needs a seed")
        rng = np.random.Generator(np.random.PCG64(int(seed)))
        return rng.permutation(K)[:count]
    raise ValueError(f"unknown ordering {order!r}")


def select_rows(p: PatternMatrix, count: int, order: str = "natural",
                seed: int | None = None) -> PatternMatrix:
    """First ``count`` rows under natural order or a seeded permutation."""
    index = selection_index(p.K, count, order, seed)
    provenance = dict(p.provenance)
    provenance["selection"] = {"order": order, "seed": seed, "count": count}
    return PatternMatrix(p.entries[index], p.geometry, p.family, provenance)


def regenerate(provenance: dict) -> PatternMatrix:
    """Rebuild a pattern matrix from its provenance record."""
    prov = dict(provenance)
    family = prov.get("family")
    geometry = tuple(prov["geometry"]) if "geometry" in prov else None
    if family == "gold":
        p = gold_patterns(prov["k"], prov["poly_x"], prov["poly_y"],
                          prov["seed_x"], prov["seed_y"], geometry)
    elif family == "hadamard":
        p = build_hadamard_matrix(prov["k"], geometry)
    elif family == "random":
        m, n = geometry
        p = build_random_patterns(prov["K"], m, n, prov["seed"], prov["mode"])
    else:
        raise ValueError(f"unknown family {family!r}")
    sel = prov.get("selection")
    if sel:
        p = select_rows(p, sel["count"], sel["order"], sel["seed"])
    return p


def save_patterns(p: PatternMatrix, stem) -> tuple[Path, Path]:
    """Write ``<stem>.bin`` and ``<stem>.json``.

    Binary rows are packed MSB first, each row padded to a byte boundary.
    Continuous (negexp) rows are stored as little-endian float64.
    """
    stem = Path(stem)
    payload_path = stem.with_suffix(".bin")
    sidecar_path = stem.with_suffix(".json")
    if p.is_binary:
        payload = np.packbits(p.entries, axis=1, bitorder="big").tobytes()
        encoding = "bitpacked-rows"
    else:
        payload = np.ascontiguousarray(p.entries, dtype="<f8").tobytes()
        encoding = "float64-le"
    sidecar = {
        "family": p.family,
        "K": p.K,
        "N": p.N,
        "m": p.geometry[0],
        "n": p.geometry[1],
        "k": p.provenance.get("k"),
        "encoding": encoding,
        "payload": payload_path.name,
        "sha256": hashlib.sha256(payload).hexdigest(),
        "provenance": p.provenance,
    }
    payload_path.write_bytes(payload)
    sidecar_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return payload_path, sidecar_path


def load_patterns(stem) -> PatternMatrix:
    stem = Path(stem)
    sidecar = json.loads(stem.with_suffix(".json").read_text())
    payload = (stem.parent / sidecar["payload"]).read_bytes()
    if hashlib.sha256(payload).hexdigest() != sidecar["sha256"]:
        raise ValueError(f"payload checksum mismatch for {stem}")
    K, N = sidecar["K"], sidecar["N"]
    if sidecar["encoding"] == "bitpacked-rows":
        packed = np.frombuffer(payload, dtype=np.uint8).reshape(K, -1)
        entries = np.unpackbits(packed, axis=1, count=N, bitorder="big")
    else:
        entries = np.frombuffer(payload, dtype="<f8").reshape(K, N).astype(float)
    return PatternMatrix(entries, (sidecar["m"], sidecar["n"]), sidecar["family"],
                         sidecar["provenance"])
