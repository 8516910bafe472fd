"""
Counting orbits near a measure
==============================

Points whose empirical measures stay near ``mu`` carry operator mass that
grows no faster than ``exp(n (tau(mu) + eps))``.  On the identity with
weights (1, 2, 3) the full mass grows like ``3**n``, but the orbits near
the point mass at 0 grow not at all.
"""

import numpy as np

from transop import fixtures
from transop.est import build_neighborhood, est_rate_table, unfiltered_rates

A = fixtures.sysi3()
cfg = build_neighborhood(A, [1.0, 0.0, 0.0], eps=0.1, n_range=range(1, 41))
print("phi*", np.round(cfg.phi_star, 6) + 0.0, "threshold", cfg.threshold)

rep = est_rate_table(A, cfg)
full = unfiltered_rates(A, cfg.n_range)
for row, u in zip(rep.rows[::8], full[::8]):
    print(f"n={row.n:2d}  points={row.set_size}  rate={row.rate:.6f}  bound={row.bound:.6f}  unfiltered={u:.6f}")
print("all rows pass:", rep.passed)

###############################################################################
# The same table as CSV, as the command line writes it.
print(rep.to_csv().splitlines()[:3])
