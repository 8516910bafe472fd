"""Entropy statistic theorem as an experiment.

Given an invariant measure ``mu`` and ``eps > 0``, pick a potential
``phi*`` with ``lambda(phi*) - mu[phi*] < tau(mu) + eps/3`` and the
half-space neighbourhood

    O(mu) = {nu : lambda(phi*) - nu[phi*] < tau(mu) + eps/3}.

A point belongs to ``X_n(O(mu))`` when its empirical measure along ``n``
steps lies in ``O(mu)``, i.e. when ``S_n phi*(x) > n * threshold``.  On a
finite set the indicator of that set is itself continuous, so it is used
as the majorant ``chi_n``.  The table checks

    ln ||A^n chi_n|| <= n (tau(mu) + eps) + ln C

for the constant ``C = max_n ||A_{phi*}^n|| exp(-n (lambda(phi*) + eps/2))``.
When ``tau(mu) = -inf`` the rate target ``tau(mu) + eps`` becomes ``-1/eps``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .core import Measure, as_measure, as_potential, birkhoff_sum, is_invariant
from .errors import ArgumentError, DomainError
from .spectral import NEG_INF, lam
from .tentropy import INVARIANCE_TOL, tau_legendre
from .transfer import TransferOperator


@dataclass(frozen=True)
class EstConfig:
    """Inputs of the rate table.

    ``tau`` is the t-entropy used for the neighbourhood (``-inf`` allowed),
    ``lam_star`` the spectral potential at ``phi_star``, made finite when the
    operator is nilpotent (see :func:`build_neighborhood`).
    """

    mu: Measure
    eps: float
    n_range: tuple[int, ...]
    phi_star: np.ndarray
    threshold: float
    tau: float
    lam_star: float

    @property
    def target(self) -> float:
        """Exponential rate ``tau + eps``, or ``-1/eps`` when ``tau = -inf``."""
        return -1.0 / self.eps if self.tau == NEG_INF else self.tau + self.eps

    @property
    def tau_eff(self) -> float:
        return self.target - self.eps


@dataclass(frozen=True)
class EstRow:
    n: int
    set_size: int
    log_norm: float
    rate: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.rate <= self.bound + 1e-12


@dataclass(frozen=True)
class EstReport:
    rows: tuple[EstRow, ...]
    c_estimate: float
    log_c: float
    target: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "set_size", "log_norm", "rate", "bound"])
        for r in self.rows:
            w.writerow([r.n, r.set_size, _fmt(r.log_norm), _fmt(r.rate), _fmt(r.bound)])
        return buf.getvalue()


def _fmt(x: float) -> str:
    if x == NEG_INF:
        return "-inf"
    return format(x, ".17g")


def make_config(A: TransferOperator, mu, eps: float, phi_star, tau: float, n_range=range(1, 41)) -> EstConfig:
    """Assemble a configuration from an explicit potential and t-entropy value."""
    if eps <= 0:
        raise ArgumentError("eps must be positive")
    mu = as_measure(A.sys, mu)
    phi_star = as_potential(A.sys, phi_star)
    tau_eff = -1.0 / eps - eps if tau == NEG_INF else tau
    lam_star = lam(A, phi_star)
    if lam_star == NEG_INF:
        # A is nilpotent: ||A_phi^n|| vanishes for large n, so any finite
        # rate works in place of lambda; take one that keeps mu inside O(mu).
        lam_star = mu(phi_star) + tau_eff
    threshold = lam_star - tau_eff - eps / 3.0
    n_range = tuple(int(n) for n in n_range)
    if not n_range or min(n_range) < 1:
        raise ArgumentError("n_range must contain positive integers")
    return EstConfig(mu, float(eps), n_range, phi_star, float(threshold), float(tau), float(lam_star))


def build_neighborhood(A: TransferOperator, mu, eps: float, n_range=range(1, 41), **tau_opts) -> EstConfig:
    """Choose ``phi*`` from the Legendre route and build the neighbourhood."""
    mu = as_measure(A.sys, mu)
    if not is_invariant(A.sys, mu, INVARIANCE_TOL):
        raise DomainError("the neighbourhood construction needs an invariant measure")
    res = tau_legendre(A, mu, **tau_opts)
    phi = res.witness_phi if res.tau > NEG_INF else np.zeros(A.n_points)
    cfg = make_config(A, mu, eps, phi, res.tau, n_range)
    gap = cfg.lam_star - mu(cfg.phi_star)
    if not gap < cfg.tau_eff + eps / 3.0:
        raise DomainError(f"witness objective {gap!r} is not below tau + eps/3")
    return cfg


def indicator_set(sys, phi_star, threshold: float, n: int) -> np.ndarray:
    """0/1 vector of points with ``S_n phi*(x) > n * threshold``."""
    if n < 1:
        raise ArgumentError("n must be >= 1")
    s = birkhoff_sum(sys, phi_star, n)
    return (s > n * threshold).astype(float)


def _log_power_norms(M: np.ndarray, f: np.ndarray, n_max: int) -> np.ndarray:
    """``ln ||M^n f||`` for ``n = 0..n_max`` with rescaling against overflow."""
    out = np.full(n_max + 1, NEG_INF)
    scale = 0.0
    v = f.copy()
    for n in range(n_max + 1):
        if n:
            v = M @ v
        top = float(np.max(np.abs(v))) if v.size else 0.0
        if top == 0.0:
            break
        out[n] = scale + math.log(top)
        v = v / top
        scale = out[n]
    return out


def est_rate_table(A: TransferOperator, cfg: EstConfig) -> EstReport:
    n_max = max(cfg.n_range)
    # proof constant, in log form
    twisted = A.entries * np.exp(cfg.phi_star)[None, :]
    logs = _log_power_norms(twisted, np.ones(A.n_points), n_max)
    log_c = max(logs[n] - n * (cfg.lam_star + cfg.eps / 2.0) for n in cfg.n_range)
    if log_c == NEG_INF:
        log_c = 0.0
    target = cfg.target
    rows = []
    for n in cfg.n_range:
        chi = indicator_set(A.sys, cfg.phi_star, cfg.threshold, n)
        log_norm = _log_power_norms(A.entries, chi, n)[n]
        rate = log_norm / n if log_norm > NEG_INF else NEG_INF
        rows.append(EstRow(n, int(chi.sum()), float(log_norm), float(rate), target + log_c / n))
    return EstReport(tuple(rows), math.exp(log_c), float(log_c), target)


def unfiltered_rates(A: TransferOperator, n_range) -> list[float]:
    """``ln ||A^n 1|| / n``: the rates without restricting to ``X_n(O(mu))``."""
    n_range = list(n_range)
    logs = _log_power_norms(A.entries, np.ones(A.n_points), max(n_range))
    return [logs[n] / n if logs[n] > NEG_INF else NEG_INF for n in n_range]
