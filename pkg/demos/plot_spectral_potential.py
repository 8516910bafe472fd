"""
The spectral potential of a twisted operator
============================================

A transfer operator on a finite set only moves mass along the map
``alpha``.  Twisting it by ``exp(phi)`` and taking the log of the spectral
radius gives the spectral potential ``lambda(phi)``.
"""

import numpy as np

from transop import fixtures, gibbs_gradient, lam
from transop.spectral import gelfand_potential

###############################################################################
# The swap on two points with weights 2 and 3.  Here the answer is known:
# ``lambda(phi) = (ln 6 + phi_0 + phi_1) / 2``.
A = fixtures.sys2(2.0, 3.0)
for phi in ([0.0, 0.0], [1.0, -0.5], [3.0, 3.0]):
    print(phi, lam(A, phi), 0.5 * (np.log(6) + sum(phi)))

###############################################################################
# The growth of the iterates gives a second, slower estimate of the same
# number.
print("gelfand", gelfand_potential(A.entries, np.array([1.0, -0.5])))

###############################################################################
# The computation runs in the log domain, so huge potentials are fine.
print("huge", lam(A, [1e7, -1e7]))

###############################################################################
# The gradient of lambda is an invariant probability measure built from the
# left and right Perron vectors.  A strongly connected transfer operator
# lives on a single cycle, whose only invariant measure is uniform, so the
# gradient cannot depend on phi.
B = fixtures.random_operator(5, seed=3, irreducible=True)
phi = np.linspace(-1, 1, 5)
mu = gibbs_gradient(B, phi)
print("gradient", np.round(mu.weights, 6))

h = 1e-5
fd = [(lam(B, phi + h * e) - lam(B, phi - h * e)) / (2 * h) for e in np.eye(5)]
print("finite differences", np.round(fd, 6))
