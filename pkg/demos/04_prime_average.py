"""
Average order over primes
=========================

The mean of ord_g(p) over p <= x grows like c_g * x / 2. The approach to the
constant is slow, so the scaled ratio creeps towards 1.
"""

# %%
from avgorder import cg_closed_form
from avgorder.survey import prime_average

c2 = float(cg_closed_form(2, prime_cutoff=10**5).value)
for exponent in range(3, 7):
    x = 10**exponent
    total, count, avg = prime_average(2, x)
    ratio = 2 * float(avg) / x / c2
    print(f"x=1e{exponent}: pi(x)={count:7d}  average={float(avg):12.1f}  (2/x)avg/c_2={ratio:.4f}")
