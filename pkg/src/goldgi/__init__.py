"""Gold-matrix ghost imaging: pattern generation, simulation, reconstruction."""

from .gi import (
    DEFAULT_NOISE,
    BucketSeries,
    CharacteristicMatrix,
    NoiseModel,
    ObjectImage,
    Reconstruction,
    apply_noise,
    bucket_acquire,
    characteristic_matrix,
    minmax,
    minmax_normalize,
    normalize_characteristic,
    reconstruct_matrix,
    reconstruct_naive,
)
from .metrics import QualityReport, mse, psnr, quality
from .patterns import (
    PatternMatrix,
    build_gold_matrix,
    build_hadamard_matrix,
    build_random_patterns,
    gold_patterns,
    reshape_row,
    select_rows,
)
from .seqgen import (
    LfsrState,
    MSequence,
    NotPrimitive,
    PrimitivePolynomial,
    find_primitive_polynomials,
    generate_m_sequence,
    is_primitive,
    lfsr_step,
)

__version__ = "0.1.0"
