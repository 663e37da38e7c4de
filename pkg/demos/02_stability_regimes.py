# coding: utf-8

# # Which fixed point attracts?
#
# For d = 2 the map has two fixed points, c- = b/2 - sqrt(x) and
# c+ = b/2 + sqrt(x). Their derivative magnitudes decide which one the
# iteration settles on, and that depends only on where b sits relative to
# +-2 sqrt(x).

# In[1]:

import math

from offsetroot import fixed_points, map_derivative, regime_table


# With x = 7 and b = 4 the derivative at c- is small, so convergence is fast.

# In[2]:

print(map_derivative(2 - math.sqrt(7), 7.0, 4.0))


# The full table. b = 0 makes both points neutral: the iteration just bounces
# between r and x/r.

# In[3]:

for row in regime_table(7.0):
    print(f"{row.regime:>15}  {row.minus.value:>11}  {row.plus.value:>11}")


# Picking b = 2 sqrt(x) exactly makes c- superstable (zero derivative).

# In[4]:

for fp in fixed_points(9.0, 6.0):
    print(fp.which, fp.location, fp.derivative_magnitude, fp.stability.value)
