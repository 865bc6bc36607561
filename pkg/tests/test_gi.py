import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from goldgi.gi import (
    DEFAULT_NOISE,
    BucketSeries,
    CharacteristicMatrix,
    NoiseModel,
    ObjectImage,
    Reconstruction,
    apply_noise,
    bucket_acquire,
    centered,
    characteristic_matrix,
    minmax,
    minmax_normalize,
    normalize_characteristic,
    reconstruct_matrix,
    reconstruct_naive,
)
from goldgi.metrics import mse
from goldgi.patterns import (
    build_hadamard_matrix,
    build_random_patterns,
    gold_patterns,
    select_rows,
)


def closed_form(k):
    N = 1 << k
    out = (N / 4) * np.eye(N)
    out[0, 0] = 0.0
    return out


def object_with_zero_corner(shape, seed):
    rng = np.random.default_rng(seed)
    v = rng.random(shape)
    v[0, 0] = 0.0
    return ObjectImage(v)


# -- bucket_acquire -----------------------------------------------------------

def test_bucket_zero_and_one_objects():
    p = gold_patterns(4)
    assert np.all(bucket_acquire(p, ObjectImage(np.zeros((4, 4)))).values == 0)
    ones = bucket_acquire(p, ObjectImage(np.ones((4, 4)))).values
    assert np.array_equal(ones, p.entries.sum(axis=1))


def test_bucket_matches_pixel_loop():
    p = gold_patterns(4)
    o = object_with_zero_corner((4, 4), 1)
    expected = []
    for s in range(p.K):
        frame = p.entries[s].reshape(4, 4)
        total = 0.0
        for x in range(4):
            for y in range(4):
                total += frame[x, y] * o.values[x, y]
        expected.append(total)
    np.testing.assert_allclose(bucket_acquire(p, o).values, expected, rtol=1e-14)


def test_bucket_geometry_mismatch():
    with pytest.raises(ValueError):
        bucket_acquire(gold_patterns(4), ObjectImage(np.zeros((2, 8))))


@settings(max_examples=30, deadline=None)
@given(
    o1=arrays(np.float64, (4, 4), elements=st.floats(0, 1)),
    o2=arrays(np.float64, (4, 4), elements=st.floats(0, 1)),
    a=st.floats(0, 1),
)
def test_bucket_linearity(o1, o2, a):
    p = gold_patterns(4)
    b = 1 - a
    mixed = bucket_acquire(p, ObjectImage(np.clip(a * o1 + b * o2, 0, 1))).values
    parts = a * bucket_acquire(p, ObjectImage(o1)).values + b * bucket_acquire(p, ObjectImage(o2)).values
    np.testing.assert_allclose(mixed, parts, rtol=1e-12, atol=1e-12)


def test_object_validation():
    for bad in (np.array([[1.5]]), np.array([[-0.1]]), np.array([[np.nan]]), np.zeros((0, 3)), np.zeros(4)):
        with pytest.raises(ValueError):
            ObjectImage(bad)


# -- apply_noise ----------------------------------------------------------------

def clean_series(seed=0):
    p = gold_patterns(6)
    return bucket_acquire(p, object_with_zero_corner((8, 8), seed))


def test_noise_identity():
    d = clean_series()
    n = apply_noise(d, NoiseModel(), seed=1)
    assert np.array_equal(n.values, d.values)
    assert n.noise["seed"] == 1


def test_noise_offset_exact():
    d = clean_series()
    n = apply_noise(d, NoiseModel(offset_rel=0.5), seed=1)
    np.testing.assert_allclose(n.values - d.values, 0.5 * d.values.mean(), rtol=1e-12)


def test_noise_deterministic():
    d = clean_series()
    a = apply_noise(d, NoiseModel(gaussian_rel=0.1), seed=42)
    b = apply_noise(d, NoiseModel(gaussian_rel=0.1), seed=42)
    c = apply_noise(d, NoiseModel(gaussian_rel=0.1), seed=43)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_noise_gaussian_scale():
    d = BucketSeries(np.full(200_000, 10.0))
    n = apply_noise(d, NoiseModel(gaussian_rel=0.1), seed=0)
    assert abs((n.values - 10).std() - 1.0) < 0.01


def test_burst_contiguous():
    d = BucketSeries(np.full(100, 4.0))
    n = apply_noise(d, NoiseModel(burst=(0.1, 0.5, "contiguous")), seed=0)
    diff = n.values - d.values
    assert np.all(diff[:10] == 2.0) and np.all(diff[10:] == 0.0)


def test_burst_random_placement():
    d = BucketSeries(np.full(100, 4.0))
    a = apply_noise(d, NoiseModel(burst=(0.25, 1.0, "random")), seed=5)
    b = apply_noise(d, NoiseModel(burst=(0.25, 1.0, "random")), seed=5)
    assert np.array_equal(a.values, b.values)
    assert np.count_nonzero(a.values - d.values) == 25


def test_noise_twice_rejected():
    n = apply_noise(clean_series(), DEFAULT_NOISE, seed=0)
    with pytest.raises(ValueError):
        apply_noise(n, DEFAULT_NOISE, seed=0)


@pytest.mark.parametrize("kwargs", [
    {"gaussian_rel": -0.1},
    {"offset_rel": float("nan")},
    {"burst": (0.0, 0.5, "contiguous")},
    {"burst": (1.5, 0.5, "contiguous")},
    {"burst": (0.1, -1.0, "contiguous")},
    {"burst": (0.1, 0.5, "sideways")},
])
def test_noise_model_validation(kwargs):
    with pytest.raises(ValueError):
        NoiseModel(**kwargs)


def test_noise_model_dict_round_trip():
    assert NoiseModel.from_dict(DEFAULT_NOISE.to_dict()) == DEFAULT_NOISE


# -- reconstruction -----------------------------------------------------------

def test_constant_buckets_give_zero_image():
    p = gold_patterns(4)
    d = BucketSeries(np.full(p.K, 3.7))
    assert np.all(reconstruct_naive(p, d).values == 0)
    assert np.allclose(reconstruct_matrix(p, d).values, 0, atol=1e-15)


def test_single_measurement_gives_zero_image():
    p = select_rows(gold_patterns(4), 1)
    d = BucketSeries([5.0])
    assert np.all(reconstruct_naive(p, d).values == 0)
    assert np.all(reconstruct_matrix(p, d).values == 0)


def test_length_mismatch():
    with pytest.raises(ValueError):
        reconstruct_matrix(gold_patterns(4), BucketSeries(np.zeros(3)))
    with pytest.raises(ValueError):
        reconstruct_naive(gold_patterns(4), BucketSeries(np.zeros(3)))


@pytest.mark.parametrize("seed", range(6))
def test_naive_matches_matrix(seed):
    rng = np.random.default_rng(seed)
    p = [gold_patterns(6), build_hadamard_matrix(6), build_random_patterns(50, 8, 8, seed),
         build_random_patterns(70, 8, 8, seed, "negexp")][seed % 4]
    o = ObjectImage(rng.random((8, 8)))
    d = apply_noise(bucket_acquire(p, o), DEFAULT_NOISE, seed)
    a = reconstruct_naive(p, d).values
    b = reconstruct_matrix(p, d).values
    assert np.linalg.norm(a - b) <= 1e-12 * np.linalg.norm(b)


@pytest.mark.parametrize("make", [lambda: gold_patterns(6), lambda: build_hadamard_matrix(6)])
def test_full_sampling_closed_form(make):
    p = make()
    o = object_with_zero_corner((8, 8), 3)
    r = reconstruct_matrix(p, bucket_acquire(p, o)).values.reshape(-1)
    expected = (p.N / (4 * p.K)) * o.vec()
    np.testing.assert_allclose(r, expected, atol=1e-12)
    norm = minmax_normalize(Reconstruction(r.reshape(8, 8))).values
    assert np.max(np.abs(norm - minmax(o.values)[0])) <= 1e-10


def test_first_pixel_is_lost():
    p = gold_patterns(4)
    o = ObjectImage(np.full((4, 4), 0.5))
    r = reconstruct_matrix(p, bucket_acquire(p, o)).values.reshape(-1)
    np.testing.assert_allclose(r, (1 / 4) * 0.5 * np.r_[0.0, np.ones(15)], atol=1e-14)


def test_random_worse_than_gold_at_full_sampling():
    o = object_with_zero_corner((16, 16), 9)
    ref = minmax(o.values)[0]
    scores = {}
    for name, p in (("gold", gold_patterns(8)), ("random", build_random_patterns(256, 16, 16, 1))):
        r = minmax_normalize(reconstruct_matrix(p, bucket_acquire(p, o)))
        scores[name] = mse(r.values, ref)
    assert scores["random"] > scores["gold"]


# -- characteristic matrix ----------------------------------------------------

@pytest.mark.parametrize("k", [2, 4, 6, 8])
@pytest.mark.parametrize("family", ["gold", "hadamard"])
def test_characteristic_closed_form(k, family):
    p = gold_patterns(k) if family == "gold" else build_hadamard_matrix(k)
    mc = characteristic_matrix(p).values
    # exact integer route: K * M^T M - (sum M)^T (sum M) equals K * M_C
    M = p.entries.astype(np.int64)
    col = M.sum(axis=0)
    exact = p.K * (M.T @ M) - np.outer(col, col)
    assert np.array_equal(exact, p.K * (p.N // 4) * np.where(closed_form(k) > 0, 1, 0))
    np.testing.assert_allclose(mc, closed_form(k), rtol=1e-9, atol=1e-9 * p.N)


def test_characteristic_symmetric_random():
    mc = characteristic_matrix(build_random_patterns(300, 10, 10, 2)).values
    np.testing.assert_allclose(mc, mc.T, rtol=1e-9, atol=1e-9)
    off = mc[~np.eye(100, dtype=bool)]
    assert np.count_nonzero(off) > 0.99 * off.size


@pytest.mark.parametrize("make", [
    lambda: gold_patterns(4), lambda: build_hadamard_matrix(4),
    lambda: build_random_patterns(30, 4, 4, 3), lambda: select_rows(gold_patterns(6), 20),
])
def test_centered_columns_sum_to_zero(make):
    np.testing.assert_allclose(centered(make()).sum(axis=0), 0, atol=1e-12)


def test_normalize_scaled_identity():
    out = normalize_characteristic(CharacteristicMatrix(4 * np.eye(4)))
    assert np.array_equal(out.values, np.eye(4)) and out.normalized


def test_normalize_gold_closed_form():
    out = normalize_characteristic(characteristic_matrix(gold_patterns(6))).values
    expected = np.eye(64)
    expected[0, 0] = 0
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_normalize_uses_row_of_first_global_max():
    v = np.array([[1.0, 5.0], [5.0, 0.0]])
    # max 5 first seen at row 0, whose norm is sqrt(26)
    np.testing.assert_allclose(normalize_characteristic(CharacteristicMatrix(v)).values,
                               v / np.sqrt(26))
    w = np.array([[0.0, 1.0], [3.0, 4.0]])
    np.testing.assert_allclose(normalize_characteristic(CharacteristicMatrix(w)).values, w / 5)


def test_normalize_rejects_zero_and_renormalizing():
    with pytest.raises(ValueError):
        normalize_characteristic(CharacteristicMatrix(np.zeros((3, 3))))
    with pytest.raises(ValueError):
        normalize_characteristic(CharacteristicMatrix(np.eye(3), normalized=True))


# -- minmax -------------------------------------------------------------------

def test_minmax_examples():
    r = minmax_normalize(Reconstruction(np.array([[2.0, 6.0]])))
    assert r.values.tolist() == [[0.0, 1.0]] and r.normalization == "minmax"
    unit = np.array([[0.0, 0.3], [1.0, 0.5]])
    assert np.array_equal(minmax_normalize(Reconstruction(unit)).values, unit)
    c = minmax_normalize(Reconstruction(np.full((2, 2), 7.0)))
    assert np.all(c.values == 0) and c.degenerate


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (3, 4), elements=st.floats(-1e6, 1e6)))
def test_minmax_range(v):
    out, degenerate = minmax(v)
    if degenerate:
        assert np.all(out == 0)
    else:
        assert out.min() == 0.0 and out.max() == 1.0


@pytest.mark.parametrize("name", ["horse", "house"])
def test_gold_absorbs_a_weak_burst_better_than_hadamard(name):
    # A burst of 5% of the mean bucket on the first tenth of the measurements,
    # no Gaussian term. Gold spreads the error evenly over the image; Hadamard
    # piles it onto a handful of pixels.
    from goldgi.objects import horse, house

    obj = {"horse": horse, "house": house}[name]()
    nm = NoiseModel(gaussian_rel=0.0, burst=(0.1, 0.05, "contiguous"))
    medians = {}
    for family, p in (("gold", gold_patterns(12)), ("hadamard", build_hadamard_matrix(12))):
        runs = []
        for seed in range(5):
            r = reconstruct_matrix(p, apply_noise(bucket_acquire(p, obj), nm, seed))
            err = minmax(r.values)[0] - obj.values
            e = float(np.mean(err * err))
            runs.append((e, np.abs(err).max() / np.sqrt(e)))
        medians[family] = np.median(runs, axis=0)
    assert medians["gold"][0] < medians["hadamard"][0]
    assert medians["gold"][1] < medians["hadamard"][1]
