"""
Recovering lambda from t-entropy
================================

The spectral potential is the maximum of ``tau(mu) + mu[phi]`` over
invariant measures, attained at the Gibbs gradient.
"""

import numpy as np

from transop import duality_check, fixtures, lam, lambda_from_tau
from transop.core import invariant_measures

rng = np.random.default_rng(0)
for seed in range(5):
    A = fixtures.random_operator(4, seed, irreducible=True)
    phi = rng.uniform(-2, 2, 4)
    rep = duality_check(A, phi)
    print(f"lambda={rep.lam:+.10f}  tau={rep.tau_at_maximizer:+.10f}  gap={rep.gap:+.2e}")

###############################################################################
# Reducible operators have several invariant measures.  On the identity map
# with weights (1, 2, 3) the point masses give ``ln w_x`` and the best one
# wins.
B = fixtures.sysi3()
value, best = lambda_from_tau(B, np.zeros(3), invariant_measures(B.sys), return_argmax=True)
print(value, np.log(3), best)
print(lam(B, np.zeros(3)))
