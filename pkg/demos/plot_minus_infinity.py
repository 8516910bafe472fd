"""
When everything dies
====================

A nilpotent operator kills every function after finitely many steps.  Its
spectral potential is minus infinity and so is every t-entropy.
"""

from transop import fixtures, lam, tau_direct, tau_legendre
from transop.est import build_neighborhood, est_rate_table

A = fixtures.nilp2()
print("lambda", lam(A, [0.0, 0.0]), lam(A, [50.0, 50.0]))
print("tau", tau_direct(A, [1.0, 0.0]).tau, tau_legendre(A, [1.0, 0.0]).tau)

###############################################################################
# With ``tau = -inf`` the rate target becomes ``-1/eps``.
cfg = build_neighborhood(A, [1.0, 0.0], eps=0.1, n_range=range(1, 6))
print("target", cfg.target)
print(est_rate_table(A, cfg).to_csv())
