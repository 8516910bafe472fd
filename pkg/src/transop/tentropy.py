"""t-entropy of a measure, computed two independent ways.

*Direct route*: for a partition of unity ``D`` and ``n >= 1`` maximize the
concave function

    m -> sum_{g in D} mu[g] ln(m[A^n g] / mu[g])

over probability vectors ``m`` (:func:`inner_sup`), divide by ``n`` and take
the minimum over the partitions and ``n`` tried (:func:`tau_direct`).

*Legendre route*: ``inf_phi (lambda(phi) - mu[phi])`` (:func:`tau_legendre`),
which is ``-inf`` for every measure that is not invariant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.optimize import linprog

from .core import (
    FiniteSystem,
    Measure,
    PartitionOfUnity,
    _check_partition,
    as_measure,
    is_invariant,
    point_partition,
    sup_norm,
)
from .errors import (
    ArgumentError,
    ConvergenceError,
    DegenerateSupportError,
    DomainError,
    NoDirectionError,
)
from .spectral import NEG_INF, gibbs_gradient, is_irreducible, lam, subgradient
from .transfer import TransferOperator, power_norm

INVARIANCE_TOL = 1e-10


@dataclass(frozen=True)
class InnerSupResult:
    """Value and maximizer of the inner concave problem.

    ``c_table[i]`` is ``m*[A^n g_i]`` for member ``i``; ``certificate`` is
    ``max_x sum_{mu[g] > 0} mu[g] (A^n g)(x) / c_table[g]``, the supremum
    over all probe measures, which equals one at the optimum.
    """

    value: float
    optimizer: Measure | None
    c_table: dict[int, float]
    certificate: float
    iterations: int = 0


@dataclass
class TauResult:
    tau: float
    route: str
    witness_phi: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)


def _member_images(A: TransferOperator, D: PartitionOfUnity, n: int) -> np.ndarray:
    """Row ``i`` holds ``A^n g_i``."""
    An = np.linalg.matrix_power(A.entries, n)
    return D.members @ An.T


def inner_sup(
    A: TransferOperator,
    mu,
    D: PartitionOfUnity,
    n: int,
    tol: float = 1e-10,
    max_iter: int = 200_000,
) -> InnerSupResult:
    """Maximize ``sum_g mu[g] ln(m[A^n g] / mu[g])`` over probability vectors ``m``.

    Multiplicative fixed-point updates ``m <- m * r`` with
    ``r = sum_g mu[g] A^n g / m[A^n g]`` keep ``m`` normalized and increase
    the objective; they stop once ``max r - 1 <= tol``, which bounds the
    distance to the optimum by ``ln(1 + tol)``.  Terms with ``mu[g] = 0``
    are dropped.  If some ``g`` with ``mu[g] > 0`` has ``A^n g = 0`` the value
    is ``-inf``.
    """
    if n < 1:
        raise ArgumentError("inner_sup needs n >= 1")
    mu = as_measure(A.sys, mu)
    _check_partition(A.sys, D)
    images = _member_images(A, D, n)
    mass = D.members @ mu.weights
    active = np.flatnonzero(mass > 0)
    b = images[active]
    p = mass[active]
    if np.any(~np.any(b > 0, axis=1)):
        return InnerSupResult(NEG_INF, None, {}, float("nan"))

    m = np.full(A.n_points, 1.0 / A.n_points)
    it = 0
    for it in range(1, max_iter + 1):
        mb = b @ m
        r = (p / mb) @ b
        cert = float(r.max())
        if cert - 1.0 <= tol:
            break
        m = m * r
        m = m / m.sum()
    else:
        value = float(np.sum(p * np.log((b @ m) / p)))
        raise ConvergenceError(f"inner_sup certificate {cert!r} after {max_iter} iterations", best=value)

    mb = b @ m
    value = float(np.sum(p * np.log(mb / p)))
    all_mb = images @ m
    c_table = {int(i): float(all_mb[i]) for i in range(len(D))}
    return InnerSupResult(value, Measure(m / m.sum()), c_table, cert, it)


def certificate_sum(A: TransferOperator, mu, D: PartitionOfUnity, n: int, c_table: Mapping[int, float], m) -> float:
    """``sum_{mu[g] > 0} mu[g] m[A^n g] / C_n(g)`` for a probe measure ``m``."""
    mu = as_measure(A.sys, mu)
    m = as_measure(A.sys, m)
    images = _member_images(A, D, n)
    mass = D.members @ mu.weights
    return float(sum(mass[i] * m(images[i]) / c_table[i] for i in np.flatnonzero(mass > 0)))


def tau_direct(
    A: TransferOperator,
    mu,
    n_max: int = 8,
    extra_partitions=(),
    tol: float = 1e-10,
) -> TauResult:
    """Minimum of ``inner_sup(A, mu, D, n).value / n`` over ``n <= n_max`` and
    over the point partition plus ``extra_partitions``.

    Only defined for invariant ``mu``.  The result is an upper bound for
    the t-entropy; the full ``(n, partition, value, value / n)`` table is in
    ``diagnostics["table"]`` in evaluation order.
    """
    if n_max < 1:
        raise ArgumentError("n_max must be >= 1")
    mu = as_measure(A.sys, mu)
    if not is_invariant(A.sys, mu, INVARIANCE_TOL):
        raise DomainError("tau_direct needs an invariant measure; use tau_legendre for the general case")
    partitions = [point_partition(A.sys), *extra_partitions]
    table = []
    best = float("inf")
    for n in range(1, n_max + 1):
        for i, D in enumerate(partitions):
            r = inner_sup(A, mu, D, n, tol)
            rate = r.value / n
            table.append((n, i, r.value, rate))
            best = min(best, rate)
    return TauResult(best, "direct", None, {"table": table})


def divergence_direction(sys: FiniteSystem, mu, tol: float = INVARIANCE_TOL) -> np.ndarray:
    """A coboundary ``d = s (delta psi - psi)`` with ``mu[d] > 0``.

    ``psi`` is the indicator of the point where the pushforward of ``mu``
    differs most from ``mu`` (first such point on ties).
    """
    mu = as_measure(sys, mu)
    if is_invariant(sys, mu, tol):
        raise NoDirectionError("measure is invariant; no divergence direction exists")
    pushed = np.bincount(sys.alpha, weights=mu.weights, minlength=sys.n_points)
    diff = pushed - mu.weights
    y = int(np.argmax(np.abs(diff)))
    psi = np.zeros(sys.n_points)
    psi[y] = 1.0
    d = psi[sys.alpha] - psi
    return (d if mu(d) > 0 else -d) + 0.0


def _objective(A, mu, phi, tol=1e-12):
    return lam(A, phi, tol) - mu(phi)


def _diverge_along(A, mu, d, bound, lam0):
    """Scale ``d`` until ``lambda(t d) - t mu[d]`` drops below ``-bound``."""
    slope = mu(d)
    t = 2.0 * (bound + abs(lam0) + 1.0) / slope
    for _ in range(60):
        val = _objective(A, mu, t * d)
        if val < -bound:
            return t, val
        t *= 2.0
    raise ConvergenceError("objective did not fall below the divergence bound", best=val)


def tau_legendre(
    A: TransferOperator,
    mu,
    tol: float = 1e-8,
    max_iters: int = 10_000,
    divergence_bound: float = 1e6,
    box: float = 100.0,
    invariance_tol: float = INVARIANCE_TOL,
) -> TauResult:
    """``inf_phi (lambda(phi) - mu[phi])``.

    Non-invariant measures give ``-inf``, certified by pushing the objective
    below ``-divergence_bound`` along :func:`divergence_direction`.  For
    invariant measures:

    * a point ``y`` with ``mu[y] > 0`` along whose indicator the objective
      falls below ``-divergence_bound`` also gives ``-inf``;
    * irreducible operators: gradient descent on the mean-zero slice with
      backtracking (halving from 1), stopped when the projected gradient
      ``gibbs_gradient(phi) - mu`` has sup-norm below ``tol``;
    * reducible operators: Kelley cutting planes over ``|phi| <= box``, with
      subgradients from the dominant recurrent block, stopped when the gap
      between the best value and the cutting-plane lower bound is below
      ``tol``.

    Every iterate's objective is a valid upper bound, so on hitting
    ``max_iters`` the :class:`ConvergenceError` carries the best one.
    """
    mu = as_measure(A.sys, mu)
    n = A.n_points
    lam0 = lam(A, np.zeros(n))
    if not is_invariant(A.sys, mu, invariance_tol):
        d = divergence_direction(A.sys, mu, invariance_tol)
        if lam0 == NEG_INF:
            return TauResult(NEG_INF, "legendre", d, {"reason": "nilpotent", "direction": d})
        t, val = _diverge_along(A, mu, d, divergence_bound, lam0)
        return TauResult(NEG_INF, "legendre", t * d, {"reason": "not invariant", "direction": d, "t": t, "objective": val})

    if lam0 == NEG_INF:
        return TauResult(NEG_INF, "legendre", np.zeros(n), {"reason": "nilpotent"})

    for y in np.flatnonzero(mu.weights > 0):
        e = np.zeros(n)
        e[y] = 1.0
        t = 2.0 * (divergence_bound + abs(lam0) + 1.0) / mu.weights[y]
        val = _objective(A, mu, t * e)
        if val < -divergence_bound:
            return TauResult(NEG_INF, "legendre", t * e, {"reason": "vanishing image", "point": int(y), "t": t, "objective": val})

    if is_irreducible(A):
        return _gradient_descent(A, mu, tol, max_iters)
    return _cutting_planes(A, mu, tol, max_iters, box)


def _gradient_descent(A, mu, tol, max_iters):
    n = A.n_points
    phi = np.zeros(n)
    val = _objective(A, mu, phi)
    gnorm = np.inf
    for it in range(max_iters + 1):
        g = gibbs_gradient(A, phi).weights - mu.weights
        g -= g.mean()
        gnorm = sup_norm(g)
        if gnorm < tol:
            return TauResult(val, "legendre", phi, {"iterations": it, "grad_norm": gnorm})
        step = 1.0
        gg = float(g @ g)
        while step > 1e-14:
            trial = phi - step * g
            trial -= trial.mean()
            tv = _objective(A, mu, trial)
            if tv <= val - 1e-4 * step * gg:
                break
            step /= 2.0
        else:
            # no descent possible at machine precision
            return TauResult(val, "legendre", phi, {"iterations": it, "grad_norm": gnorm, "stalled": True})
        phi, val = trial, tv
    raise ConvergenceError("gradient descent hit max_iters", best=TauResult(val, "legendre", phi, {"grad_norm": gnorm}))


def _cutting_planes(A, mu, tol, max_iters, box):
    n = A.n_points
    phi = np.zeros(n)
    cuts_g, cuts_h = [], []
    best_val, best_phi = np.inf, phi
    lower = -np.inf
    # variables (phi_0, ..., phi_{n-1}, s); minimize s - mu . phi
    c = np.concatenate([-mu.weights, [1.0]])
    bounds = [(-box, box)] * n + [(None, None)]
    A_eq = np.concatenate([np.ones(n), [0.0]])[None, :]
    for it in range(1, max_iters + 1):
        lv, g = subgradient(A, phi)
        val = lv - mu(phi)
        # rounding-level gains do not justify moving the witness
        if val < best_val - 1e-12:
            best_val, best_phi = val, phi
        cuts_g.append(np.concatenate([g.weights, [-1.0]]))
        cuts_h.append(float(g.weights @ phi) - lv)
        if best_val - lower <= tol:
            break
        res = linprog(
            c,
            A_ub=np.array(cuts_g),
            b_ub=np.array(cuts_h),
            A_eq=A_eq,
            b_eq=[0.0],
            bounds=bounds,
            method="highs",
        )
        if res.status != 0:
            raise ConvergenceError(f"cutting-plane LP failed: {res.message}", best=TauResult(best_val, "legendre", best_phi))
        lower = max(lower, float(res.fun))
        phi = res.x[:n]
        if best_val - lower <= tol:
            # evaluate the final LP point too; it may improve the upper bound
            lv, _ = subgradient(A, phi)
            if lv - mu(phi) < best_val - 1e-12:
                best_val, best_phi = lv - mu(phi), phi
            break
    else:
        raise ConvergenceError("cutting planes hit max_iters", best=TauResult(best_val, "legendre", best_phi, {"gap": best_val - lower}))
    return TauResult(best_val, "legendre", best_phi, {"iterations": it, "gap": max(best_val - lower, 0.0), "cuts": len(cuts_g)})


def phi_eps_witness(A: TransferOperator, mu, D: PartitionOfUnity, n: int, c_table: Mapping[int, float], eps: float) -> np.ndarray:
    """``(1/n) ln( sum_{mu[g]>0} mu[g]/C_n(g) g + sum_{mu[g]=0} eps g )``.

    Satisfies ``n lambda(phi) <= eps ||A^n||`` and ``mu[n phi] >= -tau_n(mu, D)``.
    """
    if eps <= 0:
        raise ArgumentError("eps must be positive")
    if n < 1:
        raise ArgumentError("n must be >= 1")
    mu = as_measure(A.sys, mu)
    _check_partition(A.sys, D)
    mass = D.members @ mu.weights
    coef = np.empty(len(D))
    for i in range(len(D)):
        if mass[i] > 0:
            c = c_table[i]
            if not c > 0:
                raise DegenerateSupportError(f"C_n of member {i} is {c!r} although mu[g] > 0")
            coef[i] = mass[i] / c
        else:
            coef[i] = eps
    arg = coef @ D.members
    if np.any(arg <= 0):
        raise DegenerateSupportError(f"logarithm argument vanishes at point {int(np.argmin(arg))}")
    return np.log(arg) / n


def witness_bounds(A: TransferOperator, mu, D: PartitionOfUnity, n: int, inner: InnerSupResult, eps: float, tol: float = 1e-9):
    """Check both witness bounds; returns ``(spectral_ok, integral_ok, phi)``."""
    mu = as_measure(A.sys, mu)
    phi = phi_eps_witness(A, mu, D, n, inner.c_table, eps)
    spectral_ok = n * lam(A, phi, tol / 10) <= eps * power_norm(A, n) + tol
    integral_ok = mu(n * phi) >= -inner.value - tol
    return bool(spectral_ok), bool(integral_ok), phi
