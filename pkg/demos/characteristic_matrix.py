"""
Characteristic matrices of three pattern families
=================================================

The centered Gram matrix of a measurement matrix shows how much each pixel
leaks into the others during correlation reconstruction. Gold and Hadamard
patterns give a perfectly diagonal matrix (apart from the first pixel, which
every pattern lights). Random speckle leaves off-diagonal clutter.
"""

from pathlib import Path

import numpy as np

from goldgi import (
    build_hadamard_matrix,
    build_random_patterns,
    characteristic_matrix,
    gold_patterns,
    normalize_characteristic,
)
from goldgi.imageio import save_image

out = Path("demo_output")
out.mkdir(exist_ok=True)

k = 8
families = {
    "gold": gold_patterns(k),
    "hadamard": build_hadamard_matrix(k),
    "random": build_random_patterns(1 << k, 16, 16, seed=1),
}

for name, p in families.items():
    mcn = normalize_characteristic(characteristic_matrix(p)).values
    off = mcn[~np.eye(p.N, dtype=bool)]
    print(f"{name:9s} diag mean {np.diag(mcn)[1:].mean():.3f}  max |off-diag| {np.abs(off).max():.3f}")
    # clip to [0, 1] just for viewing; negative leakage shows as black
    save_image(np.clip(mcn, 0, 1), out / f"{name}_mcn.pgm", "pgm8")

# For the two orthogonal families the matrix is exactly (N/4)(I - e1 e1^T).
mc = characteristic_matrix(families["gold"]).values
expected = (256 / 4) * np.eye(256)
expected[0, 0] = 0
print("gold matches closed form:", np.allclose(mc, expected, atol=1e-9))
