"""Spectral potential ``lambda(phi) = ln rho(A_phi)`` and its gradient.

The Perron root is computed block by block on the strongly connected
components of the support graph, in the log domain, so that potentials with
entries of size ``1e7`` are as easy as small ones:

1. each block is diagonally rescaled with a max-plus eigenvector (maximum
   cycle mean by Karp's algorithm, potentials by Bellman-Ford), after which
   every entry is at most one and the critical cycle entries equal one;
2. the Perron root of the rescaled block is found by power iteration on the
   shifted matrix ``B + I`` (primitive even when ``B`` is periodic),
   accelerated by repeated squaring, and certified by the Collatz-Wielandt
   bracket ``min (Bx)/x <= rho <= max (Bx)/x``.

``gelfand_potential`` is an independent second route through the growth rate
of ``||M^k 1||`` and is used to cross-check the first.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .core import Measure, as_potential, delta_map, sup_norm
from .errors import ArgumentError, ConvergenceError, ReducibleOperatorError
from .transfer import TransferOperator

NEG_INF = float("-inf")
LAMBDA_TOL = 1e-10
VECTOR_TOL = 1e-12
_TINY = 1e-300


@dataclass(frozen=True)
class SpectralResult:
    lam: float
    iterations: int
    residual: float


@dataclass
class _Block:
    index: np.ndarray
    lam: float
    residual: float
    iterations: int
    u: np.ndarray | None = None
    v: np.ndarray | None = None


def _components(support: np.ndarray) -> list[np.ndarray]:
    """Nontrivial strongly connected components (size > 1 or a self-loop)."""
    n = support.shape[0]
    _, labels = connected_components(csr_matrix(support), directed=True, connection="strong")
    blocks = []
    for lab in np.unique(labels):
        idx = np.flatnonzero(labels == lab)
        if idx.size > 1 or support[idx[0], idx[0]]:
            blocks.append(idx)
    blocks.sort(key=lambda b: b[0])
    return blocks if n else []


def _max_cycle_mean(W: np.ndarray) -> float:
    """Karp's maximum cycle mean; ``W[x, y]`` is the weight of edge ``x -> y``."""
    n = W.shape[0]
    D = np.full((n + 1, n), NEG_INF)
    D[0, 0] = 0.0
    for k in range(n):
        D[k + 1] = np.max(D[k][:, None] + W, axis=0)
    best = NEG_INF
    for v in range(n):
        if D[n, v] == NEG_INF:
            continue
        ks = np.flatnonzero(D[:n, v] > NEG_INF)
        best = max(best, float(np.min((D[n, v] - D[ks, v]) / (n - ks))))
    return best


def _maxplus_scaling(W: np.ndarray, mean: float) -> np.ndarray:
    """Potentials ``d`` with ``W[x, y] - mean + d[x] - d[y] <= 0`` (longest paths)."""
    n = W.shape[0]
    Wc = W - mean
    d = np.full(n, NEG_INF)
    d[0] = 0.0
    for _ in range(n):
        d_new = np.maximum(d, np.max(d[:, None] + Wc, axis=0))
        if np.array_equal(d_new, d):
            break
        d = d_new
    return d


def _perron(B: np.ndarray, tol: float, max_squarings: int = 64, polish: int = 8):
    """Perron root and right vector of an irreducible nonnegative matrix.

    Returns ``(rho, residual, x, iterations)`` where ``residual`` is the
    width of the Collatz-Wielandt bracket in log scale.
    """
    n = B.shape[0]
    S = B + np.eye(n)
    Q = S / S.max()
    best = (NEG_INF, np.inf, np.ones(n), 0)

    def bracket(x):
        if np.any(x <= 0) or not np.all(np.isfinite(x)):
            return None
        r = (B @ x) / x
        lo, hi = r.min(), r.max()
        if lo <= 0:
            return None
        return float(np.sqrt(lo) * np.sqrt(hi)), float(np.log(hi) - np.log(lo))

    it = 0
    for it in range(1, max_squarings + 1):
        x = Q.sum(axis=1)
        x = x / x.max()
        # a few plain power steps clean up rounding from the squarings
        for _ in range(polish):
            x = S @ x
            x = x / x.max()
        got = bracket(x)
        if got is not None:
            rho, res = got
            if res < best[1]:
                best = (rho, res, x, it)
            if res <= tol:
                return rho, res, x, it
        Q = Q @ Q
        Q = Q / Q.max()
    return best[0], best[1], best[2], it


def _analyze(M: np.ndarray, phi: np.ndarray, tol: float, vectors: bool = False) -> list[_Block]:
    """Per-block log Perron roots of ``M diag(exp(phi))``."""
    support = M > 0
    with np.errstate(divide="ignore"):
        L = np.where(support, np.log(np.where(support, M, 1.0)), NEG_INF) + phi[None, :]
    out = []
    for idx in _components(support):
        W = L[np.ix_(idx, idx)]
        mean = _max_cycle_mean(W)
        d = _maxplus_scaling(W, mean)
        Ws = W - mean + d[:, None] - d[None, :]
        inblock = support[np.ix_(idx, idx)]
        B = np.where(inblock, np.maximum(np.exp(np.minimum(Ws, 0.0)), _TINY), 0.0)
        rho, res, v, iters = _perron(B, tol)
        blk = _Block(idx, mean + float(np.log(rho)), res, iters)
        if vectors:
            _, res_u, u, iters_u = _perron(B.T, tol)
            blk.residual = max(res, res_u)
            blk.iterations = iters + iters_u
            blk.u, blk.v = u, v
        out.append(blk)
    return out


def _reduce(blocks: list[_Block]) -> SpectralResult:
    if not blocks:
        return SpectralResult(NEG_INF, 0, 0.0)
    top = max(blocks, key=lambda b: b.lam)
    return SpectralResult(top.lam, sum(b.iterations for b in blocks), max(b.residual for b in blocks))


def log_spectral_radius(M, phi=None, tol: float = LAMBDA_TOL) -> SpectralResult:
    """``ln rho(M diag(exp(phi)))`` for any square nonnegative matrix ``M``.

    Returns ``-inf`` exactly when the support graph has no cycle.
    """
    if tol <= 0:
        raise ArgumentError("tol must be positive")
    M = np.asarray(M, dtype=float)
    phi = np.zeros(M.shape[0]) if phi is None else np.asarray(phi, dtype=float)
    res = _reduce(_analyze(M, phi, tol))
    if res.residual > tol:
        raise ConvergenceError(f"Perron root bracket {res.residual:.3g} above tol {tol:.3g}", best=res)
    return res


def spectral_potential(A: TransferOperator, phi, tol: float = LAMBDA_TOL) -> SpectralResult:
    """Logarithm of the spectral radius of the twisted operator ``A(exp(phi) .)``."""
    phi = as_potential(A.sys, phi)
    return log_spectral_radius(A.entries, phi, tol)


def lam(A: TransferOperator, phi, tol: float = LAMBDA_TOL) -> float:
    """Shorthand for ``spectral_potential(A, phi, tol).lam``."""
    return spectral_potential(A, phi, tol).lam


def is_nilpotent(A: TransferOperator) -> bool:
    return not _components(A.entries > 0)


def is_irreducible(A: TransferOperator) -> bool:
    blocks = _components(A.entries > 0)
    return len(blocks) == 1 and blocks[0].size == A.n_points


def _block_measure(n: int, blk: _Block) -> Measure:
    w = np.zeros(n)
    p = blk.u * blk.v
    w[blk.index] = p / p.sum()
    return Measure(w / w.sum())


def gibbs_gradient(A: TransferOperator, phi, tol: float = 1e-8) -> Measure:
    """Gradient of ``lambda`` at ``phi``: ``mu[y] = u[y] v[y] / (u . v)``.

    ``u`` and ``v`` are the left and right Perron vectors of the twisted
    matrix.  Needs an irreducible support graph; otherwise the subgradient
    is not unique and :class:`ReducibleOperatorError` is raised.
    """
    phi = as_potential(A.sys, phi)
    blocks = _components(A.entries > 0)
    if not blocks:
        raise ReducibleOperatorError("operator is nilpotent")
    if len(blocks) != 1 or blocks[0].size != A.n_points:
        raise ReducibleOperatorError(f"support graph has {len(blocks)} recurrent block(s) not covering all points")
    (blk,) = _analyze(A.entries, phi, min(tol, VECTOR_TOL), vectors=True)
    if blk.residual > tol:
        raise ConvergenceError("Perron vectors did not converge", best=_block_measure(A.n_points, blk))
    return _block_measure(A.n_points, blk)


def subgradient(A: TransferOperator, phi, tol: float = 1e-8) -> tuple[float, Measure]:
    """``(lambda(phi), mu)`` with ``mu`` a subgradient of ``lambda`` at ``phi``.

    For reducible operators ``mu`` is the Gibbs measure of the first block
    attaining the maximum; ``lambda`` dominates that block's potential
    everywhere and touches it at ``phi``.
    """
    phi = as_potential(A.sys, phi)
    blocks = _analyze(A.entries, phi, min(tol, VECTOR_TOL), vectors=True)
    if not blocks:
        raise ReducibleOperatorError("operator is nilpotent; lambda is identically -inf")
    top = max(blocks, key=lambda b: b.lam)
    return top.lam, _block_measure(A.n_points, top)


def gelfand_potential(M, phi=None, tol: float = 1e-12, max_doublings: int = 20) -> float:
    """Growth rate of ``||N^k 1||`` for the shifted matrix ``N = M_phi / r + I``.

    ``r`` is the max row sum.  Shifting by the identity keeps the Perron
    root (``rho(N) = rho(M_phi) / r + 1``) and removes periodicity; ``k`` runs
    through powers of two.  Only meant for moderate ``phi``.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    phi = np.zeros(n) if phi is None else np.asarray(phi, dtype=float)
    if not _components(M > 0):
        return NEG_INF
    Mp = M * np.exp(phi)[None, :]
    r = Mp.sum(axis=1).max()
    P = Mp / r + np.eye(n)
    scale = 0.0
    c = P.max()
    P, scale = P / c, np.log(c)
    prev_log = scale + np.log(P.sum(axis=1).max())
    est = prev = None
    for j in range(max_doublings):
        P = P @ P
        scale *= 2.0
        c = P.max()
        P, scale = P / c, scale + np.log(c)
        cur_log = scale + np.log(P.sum(axis=1).max())
        est = (cur_log - prev_log) / 2.0 ** j
        prev_log = cur_log
        if prev is not None and abs(est - prev) < tol:
            break
        prev = est
    return float(np.log(r) + np.log(np.expm1(est)))


@dataclass(frozen=True)
class LambdaProperties:
    monotonicity: bool
    homogeneity: bool
    lipschitz: bool
    convexity: bool
    strong_invariance: bool

    @property
    def all(self) -> bool:
        return all((self.monotonicity, self.homogeneity, self.lipschitz, self.convexity, self.strong_invariance))


def check_lambda_properties(A: TransferOperator, phi, psi, t: float, tol: float = 1e-7) -> LambdaProperties:
    """Evaluate monotonicity, additive homogeneity, Lipschitz, convexity and
    strong invariance of ``lambda`` at the given data.

    Monotonicity is tested on the pair ``(max(phi, psi), psi)`` so that the
    hypothesis ``phi >= psi`` always holds.
    """
    if tol <= 0:
        raise ArgumentError("tol must be positive")
    if not 0.0 <= t <= 1.0:
        raise ArgumentError("t must lie in [0, 1]")
    phi = as_potential(A.sys, phi)
    psi = as_potential(A.sys, psi)
    if is_nilpotent(A):
        # lambda is identically -inf; every property holds in the extended sense
        return LambdaProperties(True, True, True, True, True)
    inner = tol / 10

    def L(f):
        return spectral_potential(A, f, inner).lam

    lp, ls = L(phi), L(psi)
    mono = L(np.maximum(phi, psi)) >= ls - tol
    homo = all(abs(L(phi + c) - lp - c) <= tol for c in (1.0, -2.5))
    lips = abs(lp - ls) <= sup_norm(phi - psi) + tol
    conv = L((1 - t) * phi + t * psi) <= (1 - t) * lp + t * ls + tol
    strong = abs(L(phi + delta_map(A.sys, psi)) - L(phi + psi)) <= tol
    return LambdaProperties(bool(mono), bool(homo), bool(lips), bool(conv), bool(strong))


def check_power_inequality(A: TransferOperator, phi, n: int, tol: float = 1e-9) -> bool:
    """``n lambda(phi, A) <= lambda(n phi, A^n)``, the right side on the matrix power."""
    if n < 1:
        raise ArgumentError("n must be >= 1")
    phi = as_potential(A.sys, phi)
    left = spectral_potential(A, phi, tol / 10).lam
    right = log_spectral_radius(np.linalg.matrix_power(A.entries, n), n * phi, tol / 10).lam
    if left == NEG_INF:
        return True
    return n * left <= right + tol
