"""Finite dynamical systems and the objects living on them.

The phase space is the index set ``{0, ..., n_points - 1}`` and the map is an
integer array ``alpha``.  Real functions on the phase space (potentials) are
plain 1-D float arrays; probability measures and partitions of unity are thin
validated wrappers so that bad data fails loudly at construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DimensionError, NormalizationError

MEASURE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteSystem:
    """A self-map ``alpha`` of the finite set ``{0, ..., n_points - 1}``."""

    alpha: np.ndarray

    def __init__(self, alpha):
        a = np.asarray(alpha)
        if a.ndim != 1 or a.size == 0:
            raise ArgumentError("alpha must be a non-empty 1-D array")
        if not np.issubdtype(a.dtype, np.integer):
            if not np.all(np.equal(np.mod(a, 1), 0)):
                raise ArgumentError("alpha entries must be integers")
        a = a.astype(np.intp)
        if np.any(a < 0) or np.any(a >= a.size):
            bad = int(np.flatnonzero((a < 0) | (a >= a.size))[0])
            raise ArgumentError(f"alpha[{bad}] = {a[bad]} is not a point index")
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    @property
    def n_points(self) -> int:
        return int(self.alpha.size)

    def __eq__(self, other):
        return isinstance(other, FiniteSystem) and np.array_equal(self.alpha, other.alpha)

    def __hash__(self):
        return hash(self.alpha.tobytes())

    def __repr__(self):
        return f"FiniteSystem(alpha={self.alpha.tolist()})"


def as_potential(sys: FiniteSystem, f) -> np.ndarray:
    """Validate ``f`` as a real function on the points of ``sys``."""
    f = np.asarray(f, dtype=float)
    if f.shape != (sys.n_points,):
        raise DimensionError(f"expected a vector of length {sys.n_points}, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise ArgumentError("potential entries must be finite")
    return f


def sup_norm(f) -> float:
    f = np.asarray(f, dtype=float)
    return float(np.max(np.abs(f))) if f.size else 0.0


class Measure:
    """Probability vector on the points of a finite system.

    Weights must be nonnegative and sum to one within ``1e-12``; nothing is
    renormalized on the caller's behalf.
    """

    __slots__ = ("weights",)

    def __init__(self, weights):
        w = np.array(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise DimensionError("measure weights must be a non-empty 1-D array")
        if not np.all(np.isfinite(w)):
            raise NormalizationError("measure weights must be finite")
        if np.any(w < 0):
            raise NormalizationError(f"measure has a negative weight at {int(np.argmin(w))}")
        total = w.sum()
        if abs(total - 1.0) > MEASURE_TOL:
            raise NormalizationError(f"measure weights sum to {float(total)!r}, not 1")
        w.setflags(write=False)
        self.weights = w

    @classmethod
    def point_mass(cls, n_points: int, x: int) -> "Measure":
        w = np.zeros(n_points)
        w[x] = 1.0
        return cls(w)

    @classmethod
    def uniform(cls, n_points: int) -> "Measure":
        return cls(np.full(n_points, 1.0 / n_points))

    def __len__(self):
        return self.weights.size

    def __call__(self, f) -> float:
        """Integrate the function ``f``."""
        return float(np.dot(self.weights, np.asarray(f, dtype=float)))

    def __eq__(self, other):
        return isinstance(other, Measure) and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash(self.weights.tobytes())

    def __repr__(self):
        return f"Measure({self.weights.tolist()})"


def as_measure(sys: FiniteSystem, mu) -> Measure:
    if not isinstance(mu, Measure):
        mu = Measure(mu)
    if len(mu) != sys.n_points:
        raise DimensionError(f"measure has {len(mu)} weights, system has {sys.n_points} points")
    return mu


class PartitionOfUnity:
    """Finite family of nonnegative functions summing to one at every point.

    ``members`` is a ``(k, n_points)`` array, one member per row.
    """

    __slots__ = ("members",)

    def __init__(self, members):
        m = np.array(members, dtype=float)
        if m.ndim != 2 or m.shape[0] == 0:
            raise DimensionError("partition members must form a non-empty (k, n) array")
        if not np.all(np.isfinite(m)) or np.any(m < 0):
            raise NormalizationError("partition members must be finite and nonnegative")
        dev = np.max(np.abs(m.sum(axis=0) - 1.0))
        if dev > MEASURE_TOL:
            raise NormalizationError(f"partition members sum to 1 only within {dev!r}")
        m.setflags(write=False)
        self.members = m

    def __len__(self):
        return self.members.shape[0]

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return f"PartitionOfUnity(k={len(self)}, n_points={self.members.shape[1]})"


def _check_partition(sys, D):
    if D.members.shape[1] != sys.n_points:
        raise DimensionError("partition members do not match the number of points")


def delta_map(sys: FiniteSystem, f) -> np.ndarray:
    """Composition operator: ``(delta f)(x) = f(alpha(x))``."""
    f = as_potential(sys, f)
    return f[sys.alpha]


def delta_power(sys: FiniteSystem, f, m: int) -> np.ndarray:
    """``m``-fold composition ``f o alpha^m``."""
    f = as_potential(sys, f)
    idx = np.arange(sys.n_points)
    for _ in range(m):
        idx = sys.alpha[idx]
    return f[idx]


def birkhoff_sum(sys: FiniteSystem, phi, n: int) -> np.ndarray:
    """Trajectory sum ``phi + delta phi + ... + delta^{n-1} phi``."""
    if n < 1:
        raise ArgumentError("birkhoff_sum needs n >= 1")
    phi = as_potential(sys, phi)
    out = np.zeros_like(phi)
    idx = np.arange(sys.n_points)
    for _ in range(n):
        out += phi[idx]
        idx = sys.alpha[idx]
    return out


def pushforward(sys: FiniteSystem, mu) -> Measure:
    """Image measure under ``alpha``; the adjoint of :func:`delta_map`."""
    mu = as_measure(sys, mu)
    w = np.bincount(sys.alpha, weights=mu.weights, minlength=sys.n_points)
    # bincount may round the total by an ulp or two
    return Measure(w / w.sum())


def is_invariant(sys: FiniteSystem, mu, tol: float = 1e-10) -> bool:
    if tol <= 0:
        raise ArgumentError("tol must be positive")
    mu = as_measure(sys, mu)
    w = np.bincount(sys.alpha, weights=mu.weights, minlength=sys.n_points)
    return bool(np.max(np.abs(w - mu.weights)) <= tol)


def empirical_measure(sys: FiniteSystem, x: int, n: int) -> Measure:
    """Uniform measure on the first ``n`` points of the orbit of ``x``."""
    if not 0 <= x < sys.n_points:
        raise ArgumentError(f"point {x} is not in the system")
    if n < 1:
        raise ArgumentError("empirical_measure needs n >= 1")
    counts = np.zeros(sys.n_points)
    for _ in range(n):
        counts[x] += 1
        x = sys.alpha[x]
    return Measure(counts / n)


def periodic_cycles(sys: FiniteSystem) -> list[list[int]]:
    """Cycles of ``alpha``, each rotated to start at its smallest point.

    Sorted by their smallest point.
    """
    state = np.zeros(sys.n_points, dtype=np.int8)  # 0 new, 1 on current path, 2 done
    cycles = []
    for start in range(sys.n_points):
        path = []
        x = start
        while state[x] == 0:
            state[x] = 1
            path.append(x)
            x = int(sys.alpha[x])
        if state[x] == 1:
            cyc = path[path.index(x):]
            k = cyc.index(min(cyc))
            cycles.append(cyc[k:] + cyc[:k])
        for p in path:
            state[p] = 2
    cycles.sort(key=lambda c: c[0])
    return cycles


def invariant_measures(sys: FiniteSystem) -> list[Measure]:
    """Extreme points of the polytope of ``alpha``-invariant probability measures.

    On a finite set the invariant measures are exactly the convex
    combinations of the uniform measures on the periodic cycles, and these
    uniform measures have disjoint supports, so they are the vertices.
    Ordered by smallest support point.
    """
    out = []
    for cyc in periodic_cycles(sys):
        w = np.zeros(sys.n_points)
        w[cyc] = 1.0 / len(cyc)
        out.append(Measure(w))
    return out


def point_partition(sys: FiniteSystem) -> PartitionOfUnity:
    return PartitionOfUnity(np.eye(sys.n_points))


def random_partition(sys: FiniteSystem, k: int, seed: int) -> PartitionOfUnity:
    """``k`` random nonnegative rows, columns normalized to sum to one."""
    if k < 1:
        raise ArgumentError("random_partition needs k >= 1")
    if k == 1:
        return PartitionOfUnity(np.ones((1, sys.n_points)))
    rng = np.random.default_rng(seed)
    raw = rng.random((k, sys.n_points)) + 1e-3
    return PartitionOfUnity(raw / raw.sum(axis=0))
