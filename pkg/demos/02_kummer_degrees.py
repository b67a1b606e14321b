"""
Kummer degrees and the density of k | i_g(p)
=============================================

The degree of the splitting field of x^k - g predicts how often k divides
the index (p-1)/ord_g(p). We compare the formula with counts over primes.
"""

# %%
from avgorder import decompose, kummer_degree
from avgorder.survey import index_density

for g in (2, -4, "9/4", 8):
    d = decompose(g)
    print(f"g={g}: h={d.h} e={d.e} g1={d.g1} Delta={d.delta} n={d.n_g}")
    print("   D_g(k), k=1..12:", [kummer_degree(d, k).degree for k in range(1, 13)])

# %%
x = 10**6
for g in (2, -4):
    dec = decompose(g)
    counts = index_density(g, x, 12)
    pi = counts[1]
    print(f"\ng = {g}, pi(x) = {pi}")
    for k, c in counts.items():
        print(f"  k={k:2d}  observed {c / pi:.5f}   predicted {1 / kummer_degree(dec, k).degree:.5f}")
