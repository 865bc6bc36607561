import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from goldgi.seqgen import (
    POLYNOMIAL_TABLE,
    LfsrState,
    NotPrimitive,
    PrimitivePolynomial,
    find_primitive_polynomials,
    generate_m_sequence,
    is_primitive,
    lfsr_step,
    table_polynomials,
)

P = PrimitivePolynomial.parse


# -- independent oracles ------------------------------------------------------

def step_by_hand(register, coeffs):
    """One clock written out term by term from the recurrence."""
    k = len(coeffs) - 1
    c = {k - i: coeffs[i] for i in range(k + 1)}  # c[j] is the x^j coefficient
    out = register[0]
    top = 0
    for j in range(1, k + 1):
        top ^= c[j] & register[k - j]
    return list(register[1:]) + [top], out


def orbit_length(coeffs, seed):
    state = list(seed)
    n = 0
    while True:
        state, _ = step_by_hand(state, coeffs)
        n += 1
        if state == list(seed):
            return n


def order_of_x(coeffs):
    """Multiplicative order of x modulo the register's characteristic polynomial.

    The recurrence a_{l+k} = sum_j c_j a_{l+k-j} has characteristic polynomial
    x^k + c_1 x^{k-1} + ... + c_k, i.e. the bit-reversal of (c_k..c_0).
    Polynomials are ints with bit i holding the x^i coefficient.
    """
    k = len(coeffs) - 1
    g = 0
    for i, c in enumerate(coeffs):  # coeffs[i] = c_{k-i} multiplies x^i in g
        g |= c << i
    acc = 0b10
    for n in range(1, 1 << k):
        if acc == 1:
            return n
        acc <<= 1
        if acc >> k & 1:
            acc ^= g
    return None


def periodic_autocorrelation(bits):
    s = 1 - 2 * np.asarray(bits, dtype=np.int64)
    return np.array([int(np.dot(s, np.roll(s, t))) for t in range(len(s))])


# -- PrimitivePolynomial ------------------------------------------------------

def test_parse_binary_and_hex_agree():
    assert P("1011") == P("0xB") == P("0xb")
    assert P("1011").coeffs == (1, 0, 1, 1)


def test_listing_forms():
    p = P("1011")
    assert p.listing() == {"bits": "1011", "hex": "0xb", "algebraic": "x^3+x+1"}
    assert P("10011").algebraic() == "x^4+x+1"
    assert P("111").algebraic() == "x^2+x+1"


@pytest.mark.parametrize("text", ["", "10", "1012", "0x", "1010", "0011", "1" * 18, "zz"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        P(text)


# -- lfsr_step ----------------------------------------------------------------

def test_step_hand_example():
    # x^3+x+1 from (1,0,0): emits a_0 = 1, new a_2 = c1*a2 ^ c2*a1 ^ c3*a0 = 1
    state, out = lfsr_step(LfsrState((1, 0, 0)), P("1011"))
    assert out == 1
    assert state.register == (0, 0, 1)
    assert state.clock == 1


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_step_matches_hand_recurrence(k):
    for poly in POLYNOMIAL_TABLE[k]:
        reg = [1] + [0] * (k - 1)
        state = LfsrState(tuple(reg))
        for _ in range(3 * k):
            state, out = lfsr_step(state, poly)
            reg, expected = step_by_hand(reg, poly.coeffs)
            assert out == expected
            assert list(state.register) == reg


@pytest.mark.parametrize("k", range(2, 9))
def test_all_ones_returns_after_full_period(k):
    poly = POLYNOMIAL_TABLE[k][0]
    start = LfsrState((1,) * k)
    state = start
    for _ in range((1 << k) - 1):
        state, _ = lfsr_step(state, poly)
    assert state.register == start.register
    assert state.clock == (1 << k) - 1


def test_step_rejects_zero_register():
    with pytest.raises(ValueError):
        lfsr_step(LfsrState((0, 0, 0)), P("1011"))


def test_step_rejects_wrong_length():
    with pytest.raises(ValueError):
        lfsr_step(LfsrState((1, 0)), P("1011"))


# -- generate_m_sequence ------------------------------------------------------

def test_k3_sequence():
    seq = generate_m_sequence(P("1011"), (1, 0, 0))
    reg, expected = [1, 0, 0], []
    for _ in range(7):
        reg, out = step_by_hand(reg, (1, 0, 1, 1))
        expected.append(out)
    assert seq.bits.tolist() == expected
    assert seq.bits.sum() == 4 and len(seq) == 7


@pytest.mark.parametrize("seed", [(1, 0), (0, 1), (1, 1)])
def test_k2_sequence(seed):
    seq = generate_m_sequence(P("111"), seed)
    assert len(seq) == 3 and seq.bits.sum() == 2


def test_zero_seed_rejected():
    with pytest.raises(ValueError):
        generate_m_sequence(P("1011"), (0, 0, 0))


def test_wrong_seed_length_rejected():
    with pytest.raises(ValueError):
        generate_m_sequence(P("1011"), (1, 0))


def test_non_primitive_detected():
    with pytest.raises(NotPrimitive):
        generate_m_sequence(P("10101"))  # x^4+x^2+1 = (x^2+x+1)^2


def test_default_seed_is_unit_vector():
    assert generate_m_sequence(P("1011")).seed == (1, 0, 0)


@pytest.mark.parametrize("k", range(2, 11))
def test_two_valued_autocorrelation(k):
    for poly in POLYNOMIAL_TABLE[k]:
        acf = periodic_autocorrelation(generate_m_sequence(poly).bits)
        assert acf[0] == (1 << k) - 1
        assert np.all(acf[1:] == -1)


table_entries = st.sampled_from(
    [p for k in range(2, 11) for p in POLYNOMIAL_TABLE[k]]
)


@settings(max_examples=60, deadline=None)
@given(poly=table_entries, data=st.data())
def test_seeds_give_cyclic_shifts(poly, data):
    k = poly.degree
    seed_int = data.draw(st.integers(1, (1 << k) - 1))
    seed = tuple((seed_int >> i) & 1 for i in range(k))
    ref = generate_m_sequence(poly).bits
    seq = generate_m_sequence(poly, seed).bits
    assert seq.sum() == 1 << (k - 1)
    doubled = np.concatenate([ref, ref])
    assert any(np.array_equal(doubled[t:t + len(ref)], seq) for t in range(len(ref)))
    assert np.array_equal(seq, generate_m_sequence(poly, seed).bits)


# -- is_primitive / find_primitive_polynomials ---------------------------------

@pytest.mark.parametrize("bits, expected", [("1011", True), ("10101", False), ("111", True)])
def test_is_primitive_examples(bits, expected):
    coeffs = tuple(int(b) for b in bits)
    assert is_primitive(P(bits)) is expected
    assert (orbit_length(coeffs, [1] + [0] * (len(bits) - 2)) == (1 << (len(bits) - 1)) - 1) is expected


@pytest.mark.parametrize("k", range(2, 9))
def test_is_primitive_agrees_with_order_of_x(k):
    for value in range((1 << k) + 1, 1 << (k + 1), 2):
        poly = PrimitivePolynomial.from_value(value)
        assert is_primitive(poly) == (order_of_x(poly.coeffs) == (1 << k) - 1), poly


@pytest.mark.parametrize("bad", [(1, 0, 1, 0), (0, 1, 1), (1,), (1, 2, 1), "x"])
def test_is_primitive_false_for_malformed(bad):
    assert is_primitive(bad) is False


def test_find_k2():
    assert find_primitive_polynomials(2, 10) == [P("111")]


def test_find_k4():
    assert find_primitive_polynomials(4, 10) == [P("10011"), P("11001")]


def test_find_limit():
    assert find_primitive_polynomials(3, 1) == [P("1011")]


@pytest.mark.parametrize("k, count", [(5, 6), (6, 6), (7, 18), (8, 16)])
def test_find_counts_match_totient(k, count):
    # number of primitive polynomials of degree k is phi(2^k - 1) / k
    found = find_primitive_polynomials(k, 1000)
    assert len(found) == count
    assert [p.value for p in found] == sorted(p.value for p in found)


@pytest.mark.parametrize("k, limit", [(1, 1), (17, 1), (4, 0)])
def test_find_range_checks(k, limit):
    with pytest.raises(ValueError):
        find_primitive_polynomials(k, limit)


def test_table_is_first_two_of_each_degree():
    for k, entries in POLYNOMIAL_TABLE.items():
        if k <= 12:
            assert list(entries) == find_primitive_polynomials(k, 2)
        assert all(is_primitive(p) for p in entries)


def test_table_pair_k2_repeats():
    x, y = table_polynomials(2)
    assert x == y == P("111")
    with pytest.raises(ValueError):
        table_polynomials(17)
