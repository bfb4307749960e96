"""Adaptive quadrature on [0, pi]: the Askey-Wilson integral, its
beta-integral extension, and continuous q-Hermite orthogonality."""

import math

from qseries import (
    askey_wilson_integral,
    liu_beta_integral,
    qhermite_gf_check,
    qhermite_orthogonality,
    qpoch_finite,
    qpoch_infinite,
)

q, a, b, c, d = 0.5, 0.3, -0.2, 0.4, 0.25

aw = askey_wilson_integral(a, b, c, d, q).real
num = qpoch_infinite(a * b * c * d, q)
den = 1.0
for w in (q, a * b, a * c, a * d, b * c, b * d, c * d):
    den *= qpoch_infinite(w, q)
print(f"Askey-Wilson integral   {aw:.14f}")
print(f"closed form             {2 * math.pi * num / den:.14f}")

# r = c collapses the extra series factor back to the plain integral
beta = liu_beta_integral(a, b, c, d, c, q).real
print(f"beta integral at r=c    {beta:.14f}  (should match above)")

print("\nq-Hermite Gram matrix entries, q = 0.5:")
pq = qpoch_infinite(q, q)
for m in range(4):
    row = [qhermite_orthogonality(m, n, q) for n in range(4)]
    print("  ", " ".join(f"{x:10.6f}" for x in row))
print("diagonal should be 2 pi (q;q)_n / (q;q)_oo:")
print("  ", " ".join(f"{2*math.pi*qpoch_finite(q,q,n)/pq:10.6f}" for n in range(4)))

rep = qhermite_gf_check(0.6, 1.2, q)
print(f"\ngenerating function check: rel_err {rep.rel_err:.2e}, passed {rep.passed}")
