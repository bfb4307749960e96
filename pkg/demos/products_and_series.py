"""Tour of the scalar building blocks: q-shifted factorials, the basic
hypergeometric series, and the q-binomial theorem they satisfy."""

import cmath

from qseries import phi_series, qbinomial, qpoch_finite, qpoch_infinite

q = 0.5

print("q-shifted factorials at q =", q)
for n in (0, 1, 2, 5):
    print(f"  (0.3; q)_{n} = {qpoch_finite(0.3, q, n):.12f}")
print(f"  (0.3; q)_oo = {qpoch_infinite(0.3, q):.12f}")

# Gaussian binomial coefficients interpolate the ordinary ones
print("\nq-binomial triangle, rows 0..4:")
for n in range(5):
    print("  ", [float(qbinomial(n, k, q)) for k in range(n + 1)])

# the q-binomial theorem: 1phi0(a; -; q, z) = (az; q)_oo / (z; q)_oo
a = complex(0.4, 0.3)
z = complex(0.2, -0.5)
lhs = phi_series([a], [], q, z)
rhs = qpoch_infinite(a * z, q) / qpoch_infinite(z, q)
print("\nq-binomial theorem at a complex point:")
print("  series side ", lhs)
print("  product side", rhs)
print("  |difference|", abs(lhs - rhs))
