"""Coefficient-exact verification in the truncated formal power series ring.

Floating point never enters: coefficients are rational numbers and both
sides of an identity must agree coefficient by coefficient.
"""

from fractions import Fraction

from qseries import check_identity, fs_qpoch_infinite, fs_var
from qseries.identities import evaluate_lhs, exact_point

# pentagonal numbers: the expansion of (q; q)_oo is sparse with +-1 entries
order = 30
q = fs_var(order)
print("(q; q)_oo coefficients mod q^30:")
print(" ", [int(c) for c in fs_qpoch_infinite(q, order).coeffs])

# the triple product, certified exactly at a rational specialization
rep = check_identity("JTP", exact_point("JTP", {"x": Fraction(2, 3)}, order=24))
print("\ntriple product at x = 2/3 mod q^24: passed =", rep.passed)

# number of ways to write n as a sum of four squares, read off the engine
pt = exact_point("FOUR_SQUARE", {}, order=13)
coeffs = evaluate_lhs("FOUR_SQUARE", pt).coeffs
print("\nfour-square representation counts r4(0..12):")
print(" ", [int(c) for c in coeffs])
