# %% [markdown]
# # Steering T(0, μx)/μ
#
# Random weights keep the normalized passage time inside the a-priori
# window [(|x| − d/μ) inf A, (|x| + d/μ) sup A].  A planted path with a
# tuned mix of cheap and expensive edges pins it near any λ in between.

# %%
import random
from fractions import Fraction as F

import numpy as np

from fpplab.constructions import target_ratio, verify_lambda
from fpplab.engine import t_distance
from fpplab.lattice import Window, random_configuration
from fpplab.values import ValueSet

A = ValueSet.interval(1, 2)
rng = random.Random(0)
ratios = []
for mu in range(5, 41, 5):
    cfg = random_configuration(Window.box(2 * mu + 4, 2), A, [1, F(3, 2), 2], seed=rng.randrange(1 << 20))
    T, cert = t_distance(cfg, (0, 0), (mu, 0))
    ratios.append(float(T / mu))
    print(f"mu={mu:3d}  T/mu={float(T / mu):.3f}  certified={cert.certified}")
print("spread of T/mu over mu:", np.ptp(ratios).round(3))

# %% planted configurations
for lam in (F(11, 10), F(3, 2), F(19, 10)):
    cfg, spec = target_ratio(A, lam, 10, (1, 0), 20)
    res = verify_lambda(cfg, spec)
    print(f"lambda={lam}: mu={spec.mu} N1={spec.N1} N2={spec.N2} T/mu={res['ratio']} certified={res['certified']}")
