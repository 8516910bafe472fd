"""Transfer operators of a finite dynamical system.

A transfer operator is stored as a dense nonnegative matrix ``entries`` with
``(A f)(x) = sum_y entries[x, y] f(y)``.  Positivity together with the support
rule ``entries[x, y] > 0 => alpha[y] == x`` is equivalent, on a finite set, to
the homological identity ``A((f o alpha) g) = f A(g)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FiniteSystem, as_potential, birkhoff_sum, sup_norm
from .errors import ArgumentError, DimensionError, PositivityError, SupportError


@dataclass(frozen=True, eq=False)
class TransferOperator:
    sys: FiniteSystem
    entries: np.ndarray

    def __init__(self, sys: FiniteSystem, entries, *, validate: bool = True):
        m = np.array(entries, dtype=float)
        n = sys.n_points
        if m.shape != (n, n):
            raise DimensionError(f"operator matrix must be {n}x{n}, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ArgumentError("operator entries must be finite")
        if np.any(m < 0):
            x, y = np.argwhere(m < 0)[0]
            raise PositivityError(f"negative entry at ({x}, {y})")
        if validate:
            bad = np.argwhere((m > 0) & (np.arange(n)[:, None] != sys.alpha[None, :]))
            if bad.size:
                x, y = (int(v) for v in bad[0])
                raise SupportError(
                    f"entry ({x}, {y}) is positive but alpha[{y}] = {sys.alpha[y]} != {x}", x, y
                )
        m.setflags(write=False)
        object.__setattr__(self, "sys", sys)
        object.__setattr__(self, "entries", m)

    @classmethod
    def unchecked(cls, sys: FiniteSystem, entries) -> "TransferOperator":
        """Build without the support check; for counterexamples and diagnostics."""
        return cls(sys, entries, validate=False)

    @property
    def n_points(self) -> int:
        return self.sys.n_points

    def triplets(self) -> list[tuple[int, int, float]]:
        """Nonzero entries as ``(x, y, value)``, row-major order."""
        return [(int(x), int(y), float(self.entries[x, y])) for x, y in np.argwhere(self.entries > 0)]

    def norm(self) -> float:
        """Sup-norm operator norm, which for a positive operator is ``||A 1||``."""
        return float(self.entries.sum(axis=1).max())

    def __repr__(self):
        return f"TransferOperator(alpha={self.sys.alpha.tolist()}, triplets={self.triplets()})"


def make_operator(sys: FiniteSystem, triplets) -> TransferOperator:
    """Assemble an operator from ``(x, y, value)`` triplets; absent entries are zero.

    Repeated ``(x, y)`` pairs are summed.
    """
    n = sys.n_points
    m = np.zeros((n, n))
    for x, y, v in triplets:
        x, y, v = int(x), int(y), float(v)
        if not (0 <= x < n and 0 <= y < n):
            raise DimensionError(f"triplet index ({x}, {y}) out of range for {n} points")
        if v < 0:
            raise PositivityError(f"negative value {v} at ({x}, {y})")
        if v > 0 and sys.alpha[y] != x:
            raise SupportError(f"entry ({x}, {y}) violates alpha[{y}] = {sys.alpha[y]}", x, y)
        m[x, y] += v
    return TransferOperator(sys, m)


def apply(A: TransferOperator, f) -> np.ndarray:
    f = as_potential(A.sys, f)
    return A.entries @ f


def twist(A: TransferOperator, phi) -> TransferOperator:
    """The operator ``f -> A(exp(phi) f)``: column ``y`` scaled by ``exp(phi[y])``."""
    phi = as_potential(A.sys, phi)
    return TransferOperator(A.sys, A.entries * np.exp(phi)[None, :], validate=False)


def iterate_apply(A: TransferOperator, f, n: int) -> np.ndarray:
    if n < 0:
        raise ArgumentError("iterate_apply needs n >= 0")
    f = as_potential(A.sys, f).copy()
    for _ in range(n):
        f = A.entries @ f
    return f


def matrix_power(A: TransferOperator, n: int) -> np.ndarray:
    return np.linalg.matrix_power(A.entries, n)


def power_norm(A: TransferOperator, n: int) -> float:
    """``||A^n||`` as the max row sum of the ``n``-th matrix power."""
    return float(np.max(iterate_apply(A, np.ones(A.n_points), n)))


def check_homological(A: TransferOperator, trials: int = 20, seed: int = 0, tol: float = 1e-12) -> bool:
    """Test ``A((delta f) g) == f A(g)`` on seeded random pairs with ``||f||, ||g|| <= 1``."""
    if trials < 1:
        raise ArgumentError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    alpha = A.sys.alpha
    for _ in range(trials):
        f = rng.uniform(-1.0, 1.0, A.n_points)
        g = rng.uniform(-1.0, 1.0, A.n_points)
        lhs = A.entries @ (f[alpha] * g)
        rhs = f * (A.entries @ g)
        if sup_norm(lhs - rhs) > tol:
            return False
    return True


def check_twist_iterate(A: TransferOperator, phi, f, n: int, tol: float = 1e-12) -> bool:
    """Compare ``A_phi^n f`` with ``A^n(exp(S_n phi) f)``."""
    if n < 1:
        raise ArgumentError("check_twist_iterate needs n >= 1")
    f = as_potential(A.sys, f)
    lhs = iterate_apply(twist(A, phi), f, n)
    rhs = iterate_apply(A, np.exp(birkhoff_sum(A.sys, phi, n)) * f, n)
    return sup_norm(lhs - rhs) <= tol * (1.0 + sup_norm(f))
