"""Fibonacci LFSRs over GF(2) and the m-sequences they emit.

Register cells are held as ``(a_0, ..., a_{k-1})``. Each clock outputs ``a_0``,
shifts the remaining cells down by one and fills ``a_{k-1}`` with

    c_1*a_{k-1} ^ c_2*a_{k-2} ^ ... ^ c_k*a_0

Polynomial coefficients are stored high to low, ``(c_k, ..., c_0)``, so
``x^3 + x + 1`` is ``"1011"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MIN_DEGREE",
    "MAX_DEGREE",
    "NotPrimitive",
    "PrimitivePolynomial",
    "LfsrState",
    "MSequence",
    "lfsr_step",
    "generate_m_sequence",
    "is_primitive",
    "find_primitive_polynomials",
    "default_seed",
    "table_polynomials",
    "POLYNOMIAL_TABLE",
]

MIN_DEGREE = 2
MAX_DEGREE = 16


class NotPrimitive(ValueError):
    """The feedback polynomial does not give a maximal-length register."""


@dataclass(frozen=True)
class PrimitivePolynomial:
    """Feedback polynomial, coefficients ordered ``(c_k, ..., c_0)``.

    The name reflects intended use; primitivity itself is only checked by
    :func:`is_primitive`. Construction enforces ``c_k = c_0 = 1`` and the
    supported degree range.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if any(c not in (0, 1) for c in coeffs):
            raise ValueError(f"coefficients must be 0 or 1, got {self.coeffs!r}")
        degree = len(coeffs) - 1
        if not MIN_DEGREE <= degree <= MAX_DEGREE:
            raise ValueError(
                f"degree must lie in [{MIN_DEGREE}, {MAX_DEGREE}], got {degree}"
            )
        if coeffs[0] != 1 or coeffs[-1] != 1:
            raise ValueError("leading and constant coefficients must both be 1")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self) -> int:
        """Coefficient string read as a binary integer (``x^3+x+1`` -> 11)."""
        return int(self.bits, 2)

    @property
    def bits(self) -> str:
        return "".join(str(c) for c in self.coeffs)

    @property
    def hex(self) -> str:
        return hex(self.value)

    @property
    def tap_mask(self) -> int:
        # bit i of the register integer is a_i; c_j multiplies a_{k-j}
        k = self.degree
        mask = 0
        for j in range(1, k + 1):
            if self.coeffs[k - j]:
                mask |= 1 << (k - j)
        return mask

    def algebraic(self) -> str:
        terms = []
        k = self.degree
        for power, c in zip(range(k, -1, -1), self.coeffs):
            if not c:
                continue
            if power == 0:
                terms.append("1")
            elif power == 1:
                terms.append("x")
            else:
                terms.append(f"x^{power}")
        return "+".join(terms)

    @classmethod
    def from_value(cls, value: int) -> "PrimitivePolynomial":
        if value <= 0:
            raise ValueError(f"polynomial value must be positive, got {value}")
        return cls(tuple(int(b) for b in format(value, "b")))

    @classmethod
    def parse(cls, text: str) -> "PrimitivePolynomial":
        """Accept a binary coefficient string (``"1011"``) or hex (``"0xB"``)."""
        s = text.strip().lower().replace("_", "")
        if s.startswith("0x"):
            try:
                return cls.from_value(int(s, 16))
            except ValueError as exc:
                raise ValueError(f"bad hex polynomial {text!r}: {exc}") from None
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"bad polynomial {text!r}; expected e.g. '1011' or '0xB'")
        return cls(tuple(int(b) for b in s))

    def listing(self) -> dict:
        return {"bits": self.bits, "hex": self.hex, "algebraic": self.algebraic()}

    def __str__(self):
        return self.algebraic()


@dataclass(frozen=True)
class LfsrState:
    register: tuple[int, ...]
    clock: int = 0

    def __post_init__(self):
        object.__setattr__(self, "register", tuple(int(b) for b in self.register))
        if any(b not in (0, 1) for b in self.register):
            raise ValueError("register cells must be 0 or 1")
        if self.clock < 0:
            raise ValueError("clock must be non-negative")


@dataclass(frozen=True)
class MSequence:
    bits: np.ndarray = field(repr=False)
    order: int
    polynomial: PrimitivePolynomial
    seed: tuple[int, ...]

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    def __len__(self):
        return len(self.bits)

    def bipolar(self) -> np.ndarray:
        """Map 0 -> +1, 1 -> -1."""
        return 1 - 2 * self.bits.astype(np.int64)


def _pack(register) -> int:
    state = 0
    for i, b in enumerate(register):
        state |= int(b) << i
    return state


def _unpack(state: int, k: int) -> tuple[int, ...]:
    return tuple((state >> i) & 1 for i in range(k))


def lfsr_step(state: LfsrState, poly: PrimitivePolynomial) -> tuple[LfsrState, int]:
    """Clock the register once; returns the new state and the output bit."""
    k = poly.degree
    if len(state.register) != k:
        raise ValueError(
            f"register has {len(state.register)} cells, polynomial degree is {k}"
        )
    if not any(state.register):
        raise ValueError("all-zero register is a fixed point of the recurrence")
    s = _pack(state.register)
    out = s & 1
    fb = (s & poly.tap_mask).bit_count() & 1
    s = (s >> 1) | (fb << (k - 1))
    return LfsrState(_unpack(s, k), state.clock + 1), out


def default_seed(k: int) -> tuple[int, ...]:
    return (1,) + (0,) * (k - 1)


def _orbit(poly: PrimitivePolynomial, seed: int, length: int):
    """Run ``length`` clocks from ``seed``. Returns (bits, first return clock)."""
    k = poly.degree
    taps = poly.tap_mask
    top = k - 1
    out = bytearray(length)
    s = seed
    period = 0
    for i in range(length):
        out[i] = s & 1
        s = (s >> 1) | (((s & taps).bit_count() & 1) << top)
        if not period and s == seed:
            period = i + 1
    return out, period


def generate_m_sequence(poly: PrimitivePolynomial, seed=None) -> MSequence:
    """Emit one full period (``2^k - 1`` bits) of the register output.

    Raises:
        ValueError: zero or wrongly sized seed.
        NotPrimitive: the orbit is shorter than ``2^k - 1`` or the output is
            not balanced.
    """
    k = poly.degree
    seed = default_seed(k) if seed is None else tuple(int(b) for b in seed)
    if len(seed) != k:
        raise ValueError(f"seed must have {k} cells, got {len(seed)}")
    if any(b not in (0, 1) for b in seed):
        raise ValueError("seed cells must be 0 or 1")
    if not any(seed):
        raise ValueError("seed must be nonzero")
    n = (1 << k) - 1
    raw, period = _orbit(poly, _pack(seed), n)
    bits = np.frombuffer(bytes(raw), dtype=np.uint8)
    ones = int(bits.sum())
    if period != n or ones != 1 << (k - 1):
        raise NotPrimitive(
            f"{poly.algebraic()} is not primitive "
            f"(period {period or '>' + str(n)}, {ones} ones in {n} bits)"
        )
    return MSequence(bits, k, poly, seed)


def is_primitive(poly) -> bool:
    """True iff the orbit of ``(1, 0, ..., 0)`` has period exactly ``2^k - 1``."""
    try:
        if not isinstance(poly, PrimitivePolynomial):
            poly = PrimitivePolynomial(tuple(poly))
    except (TypeError, ValueError):
        return False
    n = (1 << poly.degree) - 1
    _, period = _orbit(poly, 1, n)
    return period == n


def find_primitive_polynomials(k: int, limit: int) -> list[PrimitivePolynomial]:
    """Scan degree-``k`` candidates in ascending coefficient value.

    Returns at most ``limit`` primitive polynomials; fewer if the degree has
    fewer.
    """
    if not MIN_DEGREE <= k <= MAX_DEGREE:
        raise ValueError(f"k must lie in [{MIN_DEGREE}, {MAX_DEGREE}], got {k}")
    if limit < 1:
        raise ValueError("limit must be at least 1")
    found = []
    for value in range((1 << k) + 1, 1 << (k + 1), 2):
        poly = PrimitivePolynomial.from_value(value)
        if is_primitive(poly):
            found.append(poly)
            if len(found) == limit:
                break
    return found


# First two primitive polynomials of each degree in ascending coefficient
# value (degree 2 has only one). Validated by the test suite, not trusted.
_TABLE_BITS = {
    2: ("111",),
    3: ("1011", "1101"),
    4: ("10011", "11001"),
    5: ("100101", "101001"),
    6: ("1000011", "1011011"),
    7: ("10000011", "10001001"),
    8: ("100011101", "100101011"),
    9: ("1000010001", "1000011011"),
    10: ("10000001001", "10000011011"),
    11: ("100000000101", "100000010111"),
    12: ("1000001010011", "1000001101001"),
    13: ("10000000011011", "10000000100111"),
    14: ("100000000101011", "100000000111001"),
    15: ("1000000000000011", "1000000000010001"),
    16: ("10000000000101101", "10000000000111001"),
}

POLYNOMIAL_TABLE: dict[int, tuple[PrimitivePolynomial, ...]] = {
    k: tuple(PrimitivePolynomial.parse(b) for b in entries)
    for k, entries in _TABLE_BITS.items()
}


def table_polynomials(k: int) -> tuple[PrimitivePolynomial, PrimitivePolynomial]:
    """Default (X, Y) polynomial pair for order ``k``.

    Degree 2 has a single primitive polynomial, so both entries coincide.
    """
    try:
        entries = POLYNOMIAL_TABLE[k]
    except KeyError:
        raise ValueError(f"no table entry for k={k}") from None
    return entries[0], entries[-1] if len(entries) > 1 else entries[0]
