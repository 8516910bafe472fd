"""Round trip between the spectral potential and t-entropy.

``lambda(phi) = max over invariant mu of (tau(mu) + mu[phi])``, with the
maximum attained at the Gibbs gradient of ``lambda`` at ``phi``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Measure, as_measure, as_potential, is_invariant
from .errors import ArgumentError, DomainError
from .spectral import gibbs_gradient, lam
from .tentropy import tau_legendre
from .transfer import TransferOperator


@dataclass(frozen=True)
class DualityReport:
    lam: float
    maximizer: Measure
    tau_at_maximizer: float
    gap: float
    phi: np.ndarray
    tol: float = 1e-5

    @property
    def ok(self) -> bool:
        return abs(self.gap) <= self.tol


def duality_check(A: TransferOperator, phi, tol: float = 1e-5) -> DualityReport:
    """Evaluate ``lambda(phi) - tau(mu*) - mu*[phi]`` at the Gibbs measure ``mu*``.

    Positive gap is a duality shortfall.  Raises
    :class:`~transop.errors.ReducibleOperatorError` when the Gibbs
    gradient is not unique.
    """
    phi = as_potential(A.sys, phi)
    mu = gibbs_gradient(A, phi)
    value = lam(A, phi)
    tau = tau_legendre(A, mu, invariance_tol=1e-8).tau
    gap = value - (tau + mu(phi))
    return DualityReport(value, mu, tau, gap, phi, tol)


def lambda_from_tau(A: TransferOperator, phi, candidates, return_argmax: bool = False):
    """``max over candidates of tau(mu) + mu[phi]``.

    Never exceeds ``lambda(phi)``; equals it when a maximizing invariant
    measure is among the candidates.
    """
    phi = as_potential(A.sys, phi)
    cands = [as_measure(A.sys, c) for c in candidates]
    if not cands:
        raise ArgumentError("candidate list is empty")
    for i, mu in enumerate(cands):
        if not is_invariant(A.sys, mu, 1e-8):
            raise DomainError(f"candidate {i} is not invariant")
    values = [tau_legendre(A, mu, invariance_tol=1e-8).tau + mu(phi) for mu in cands]
    k = int(np.argmax(values))
    if return_argmax:
        return values[k], cands[k]
    return values[k]
