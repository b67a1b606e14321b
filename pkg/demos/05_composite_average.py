"""
T_g(x) against the average of lambda(n)
=======================================

Termwise ord_g(n) <= lambda(n), so T_g(x) never exceeds the lambda average.
Both are shown on the x / log x scale; the asymptotic growth factor is far
too slow to see at these sizes.
"""

# %%
import math

from avgorder.survey import composite_pass

for exponent in range(2, 7):
    x = 10**exponent
    c = composite_pass(2, x)
    scale = x / math.log(x)
    print(f"x=1e{exponent}: T_2/(x/log x)={float(c.t_average) / scale:.3f}"
          f"  lambda-avg/(x/log x)={float(c.lambda_average) / scale:.3f}")
