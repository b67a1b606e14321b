"""
Multiplicative orders and Carmichael's function
===============================================

The order of g modulo n always divides lambda(n), the exponent of the unit
group. Here we look at how far below lambda(n) the order of 2 typically sits.
"""

# %%
from fractions import Fraction

from avgorder import carmichael_lambda, factorize, multiplicative_basics, order_mod

for n in (7, 9, 15, 91, 561, 2**31 - 1):
    b = multiplicative_basics(n)
    print(f"n={n:>10}  factors={factorize(n).factors}  phi={b.phi}  lambda={b.carmichael}"
          f"  ord_2={order_mod(2, n)}")

# %%
# Rational bases work the same way: 3/2 is 3 * 2^-1 mod n.
print("ord_{3/2}(5) =", order_mod(Fraction(3, 2), 5))

# %%
# The ratio lambda(n) / ord_2(n) over odd n: usually small, occasionally large.
ratios = [carmichael_lambda(n) // order_mod(2, n) for n in range(3, 20001, 2)]
for r in (1, 2, 3, 4, 6, 8, 12):
    print(f"lambda/ord = {r:>2}: {ratios.count(r):5d} moduli")
print("largest ratio:", max(ratios))
