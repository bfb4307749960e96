"""The Thomae-Jackson q-integral and the reciprocity identities built on it.

Each identity equates a two-endpoint q-sum with a closed product form;
the registry evaluates both sides independently.
"""

from qseries import check_identity, jackson_qintegral, sample_domain

# classical warm-up: int_0^1 x^2 d_q x = 1/(1+q+q^2)
q = 0.3
v = jackson_qintegral(lambda x: x * x, 0.0, 1.0, q)
print(f"q-integral of x^2 on [0,1] at q={q}: {v:.12f}  (exact {1/(1+q+q*q):.12f})")

for name in ("ANDREWS_ASKEY", "LIU_QINT7", "RAM_RECIP", "RECIP6"):
    print(f"\n{name} at three admissible sample points:")
    for pt in sample_domain(name, seed=42, count=3):
        rep = check_identity(name, pt)
        print(f"  q={pt.q:.3f}  rel_err={rep.rel_err:.2e}  passed={rep.passed}")
