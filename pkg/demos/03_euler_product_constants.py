"""
The constants B, c and c_g
==========================

Each Euler product is evaluated twice: directly, and after dividing out a
zeta factor so that the remaining product converges much faster. The
certified digits are those shared by every value inside the error bound.
"""

# %%
from avgorder import cg_closed_form, cg_series, euler_product_B, euler_product_c

for cutoff in (10**3, 10**4, 10**5, 10**6):
    direct = euler_product_c(cutoff)
    fast = euler_product_c(cutoff, method="accelerated")
    print(f"c, primes <= {cutoff:>8}: direct {direct.certified_digits():<14} "
          f"accelerated {fast.certified_digits()}")

B = euler_product_B(10**6)
print("\nB =", B.certified_digits(), "+-", float(B.tail_bound))

# %%
# c_g is a rational multiple of c; the series over Kummer degrees agrees.
for g in (2, 3, -4, "3/2", "9/4"):
    closed = cg_closed_form(g, prime_cutoff=10**5)
    series = cg_series(g, 10**5)
    print(f"g={g:>4}: c_g = {closed.rational_multiplier} * c = {float(closed.value):.12f};"
          f" series(1e5) = {float(series.value):.12f} (bound {float(series.tail_bound):.1e})")
