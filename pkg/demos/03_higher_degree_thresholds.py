# coding: utf-8

# # Higher roots and where the offset stops working
#
# For d >= 3 the same trick uses the binomial expansion of (b/2 + c)**d.
# A cube root of 1250 works with b = 70 but not with b = 7.

# In[1]:

import time

from offsetroot import IterationConfig, RootQuery, cubic_validity_bounds, run_iteration, scan_b, threshold_ratio

q = RootQuery(1250.0, 3)
for b in (70.0, 7.0):
    tr = run_iteration(q, IterationConfig(b=b, c1=10.0))
    print(b, tr.verdict.value, tr.root_estimate)


# For cubes the failure interval has a closed form: the fixed point loses
# stability when b/2r solves 3(1 - s)/(1 - s**3) = 2.

# In[2]:

print(cubic_validity_bounds(1250.0))


# A scan agrees. The scan uses a large iteration budget because convergence
# is very slow right at the edge.

# In[3]:

t0 = time.perf_counter()
res = scan_b(q, 6.0, 9.0, 3000)
print(res.least_positive_b, f"{time.perf_counter() - t0:.2f}s")


# ## Seventh roots
#
# The least working b grows like x**(1/7), and b**7/x hovers near 17.70.

# In[4]:

for x, lo, hi in [(1250.0, 3.0, 7.0), (12500.0, 4.0, 8.0), (125000.0, 6.0, 10.0)]:
    q7 = RootQuery(x, 7)
    res = scan_b(q7, lo, hi, 4000)
    print(f"{x:>9g}  {res.least_positive_b:.5f}  {threshold_ratio(res.least_positive_b, q7):.4f}")
