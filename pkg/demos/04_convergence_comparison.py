# coding: utf-8

# # Linear against quadratic convergence
#
# The offset iteration converges linearly. Newton's method for r**d - x
# converges quadratically, and Halley's cubically.

# In[1]:

import math

from offsetroot import IterationConfig, RootQuery, estimate_convergence, run_baseline, run_iteration

q = RootQuery(7.0)
root = math.sqrt(7)


# Errors per step, all starting from the root estimate 2.

# In[2]:

offset = run_iteration(q, IterationConfig(b=4.0, c1=0.0, tol=1e-15), "minus")
newton = run_baseline("NewtonRaphson", q, 2.0, tol=1e-15)
halley = run_baseline("Halley", q, 2.0, tol=1e-15)

for name, tr in [("offset", offset), ("newton", newton), ("halley", halley)]:
    errs = [f"{e:.1e}" for e in abs(tr.estimates() - root)]
    print(f"{name:>7}", " ".join(errs[:8]))


# Estimated orders. Newton has only a handful of usable errors before it hits
# machine precision; the estimator takes the median over whatever is there.

# In[3]:

for name, tr in [("offset", offset), ("newton", newton)]:
    est = estimate_convergence(tr, root)
    print(name, round(est.order, 3), round(est.rate, 4), est.samples_used)


# For square roots Newton is the Babylonian method: (v + x/v)/2.

# In[4]:

from offsetroot import babylonian_step, newton_step

print(newton_step(3.0, 7.0, 2), babylonian_step(3.0, 7.0))
