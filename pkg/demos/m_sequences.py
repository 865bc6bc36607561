"""
Maximal-length sequences from a shift register
==============================================

A k-stage register with a primitive feedback polynomial walks through every
nonzero state before it repeats. The bits it emits have a clean, two-valued
autocorrelation, which is what makes them useful as illumination codes.
"""

import numpy as np

from goldgi import PrimitivePolynomial, generate_m_sequence, is_primitive
from goldgi.seqgen import POLYNOMIAL_TABLE

# x^4 + x + 1, written from the highest coefficient down
poly = PrimitivePolynomial.parse("10011")
print(poly.algebraic(), "primitive:", is_primitive(poly))

seq = generate_m_sequence(poly)
print("bits:", "".join(map(str, seq.bits)))
print("period", len(seq.bits), "ones", int(seq.bits.sum()))

# Circular autocorrelation of the +-1 version: 15 at lag 0, -1 elsewhere.
s = seq.bipolar()
acf = [int(np.dot(s, np.roll(s, lag))) for lag in range(len(s))]
print("autocorrelation:", acf)

# x^4 + x^2 + 1 factors as (x^2 + x + 1)^2, so its register cycles early.
print("10101 primitive:", is_primitive(PrimitivePolynomial.parse("10101")))

# The bundled table holds two primitive polynomials per degree.
for k in (6, 10, 16):
    for p in POLYNOMIAL_TABLE[k]:
        print(f"k={k:2d}  {p.hex:>7s}  {p.algebraic()}")
