"""
t-entropy two ways
==================

The t-entropy of an invariant measure can be reached from above, through
partitions of unity and iterates of ``A``, or as a Legendre transform of
the spectral potential.  On a finite system both routes meet.
"""

import numpy as np

from transop import fixtures, tau_direct, tau_legendre
from transop.core import invariant_measures

###############################################################################
# Swap with weights (4, 1).  The only invariant measure is uniform and the
# t-entropy is ``ln 2``.
A = fixtures.sys2(4.0, 1.0)
mu = invariant_measures(A.sys)[0]
d = tau_direct(A, mu, n_max=4)
g = tau_legendre(A, mu)
print("direct", d.tau, "legendre", g.tau, "ln 2", np.log(2))

###############################################################################
# The direct route keeps a table of ``tau_n / n``.
for n, _, value, rate in d.diagnostics["table"]:
    print(f"n={n}  tau_n={value:.12f}  rate={rate:.12f}")

###############################################################################
# On the identity map every measure is invariant and the t-entropy is the
# average log weight.
B = fixtures.sysi3((1.0, 2.0, 3.0))
p = np.array([0.2, 0.3, 0.5])
print("sysi3", tau_legendre(B, p).tau, tau_direct(B, p).tau, p @ np.log([1, 2, 3]))

###############################################################################
# A measure that is not invariant has t-entropy minus infinity.  The
# Legendre objective falls without bound along a coboundary.
res = tau_legendre(A, [1.0, 0.0])
print(res.tau, res.diagnostics["direction"], res.diagnostics["objective"])
