"""
The S_k partition and reciprocal sums E_k
=========================================

Odd primes are split by gcd(p - 1, D) = 2k. With the full survey report the
sums E_k are compared with P_k * y / log y, y = log log x.
"""

# %%
from avgorder import survey

report = survey(2, 10**6, D=24, composite=False)
for k, count in report.sk_counts.items():
    print(f"k={k:2d}  |S_k|={count:6d}  E_k={report.ek_sums[k][:12]}"
          f"  E_k/(P_k y/log y)={report.derived['ek_over_pk_scale'][str(k)]:.3f}")
print("checksum", report.checksum)
