# coding: utf-8

# # Square roots by an offset fixed-point iteration
#
# Write the root as r = b/2 - c. Squaring and rearranging gives
# c = (x - b**2/4) / (c - b), a map whose fixed point recovers the root.
# Here we take x = 5, b = 4 and start from c1 = 10.

# In[1]:

import math

from offsetroot import IterationConfig, RootQuery, run_iteration, sqrt_step


# One step by hand. With x - b**2/4 = 1 the numerator is just 1.

# In[2]:

print(sqrt_step(10.0, 5.0, 4.0))   # 1/6
print(sqrt_step(1 / 6, 5.0, 4.0))  # -6/23


# Now the full run. `convention="minus"` reads the root as b/2 - c.

# In[3]:

trace = run_iteration(RootQuery(5.0), IterationConfig(b=4.0, c1=10.0, tol=1e-9), convention="minus")
for n, c in enumerate(trace.iterates, start=1):
    print(f"{n:3d}  {c: .11f}")

print(trace.verdict, trace.root_estimate, abs(trace.root_estimate - math.sqrt(5)))


# The error shrinks by a constant factor, roughly 0.0557 per step.

# In[4]:

errs = [abs(c - (2 - math.sqrt(5))) for c in trace.iterates]
for e0, e1 in zip(errs[1:7], errs[2:8]):
    print(f"{e1 / e0:.4f}")


# ## The same recurrence as a continued fraction
#
# Unrolling the map from c1 = 0 gives 1/(-4 + 1/(-4 + ...)). Each truncation
# equals an iterate.

# In[5]:

from offsetroot import build_gcf, evaluate_gcf, format_gcf, gcf_iteration_equivalence

g = build_gcf(5.0, 4.0, 30)
print(format_gcf(g))
print(evaluate_gcf(g), 2 - math.sqrt(5))
print(gcf_iteration_equivalence(5.0, 4.0, 50))
