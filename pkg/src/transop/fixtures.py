"""Named fixture systems and seeded random generators.

``sys2(a, b)``
    the swap ``0 <-> 1`` with weights ``a`` on ``(0, 1)`` and ``b`` on ``(1, 0)``.
``sysi3(w)``
    the identity on three points with diagonal weights ``w``.
``sysd4()``
    ``alpha = [0, 2, 0, 2]`` with unit weights on the support.
``nilp2()``
    ``alpha = [0, 0]`` with the single entry ``(0, 1) = 1``; nilpotent.
"""
from __future__ import annotations

import numpy as np

from .core import FiniteSystem, Measure, invariant_measures
from .transfer import TransferOperator, make_operator


def sys2(a: float = 1.0, b: float = 1.0) -> TransferOperator:
    return make_operator(FiniteSystem([1, 0]), [(0, 1, a), (1, 0, b)])


def sysi3(w=(1.0, 2.0, 3.0)) -> TransferOperator:
    return make_operator(FiniteSystem([0, 1, 2]), [(x, x, float(v)) for x, v in enumerate(w)])


def sysd4() -> TransferOperator:
    sys = FiniteSystem([0, 2, 0, 2])
    return make_operator(sys, [(int(sys.alpha[y]), y, 1.0) for y in range(4)])


def nilp2() -> TransferOperator:
    return make_operator(FiniteSystem([0, 0]), [(0, 1, 1.0)])


def off_support_sys2() -> TransferOperator:
    """SYS2 with an extra positive entry at ``(0, 0)``, where ``alpha[0] = 1``."""
    sys = FiniteSystem([1, 0])
    return TransferOperator.unchecked(sys, [[1.0, 1.0], [1.0, 0.0]])


def random_operator(
    n: int,
    seed: int,
    irreducible: bool = False,
    low: float = 0.5,
    high: float = 1.5,
    p_zero: float = 0.0,
) -> TransferOperator:
    """Random transfer operator on ``n`` points.

    With ``irreducible=True`` the map is a random ``n``-cycle: a transfer
    operator can only have a strongly connected support graph when every
    point has exactly one preimage on a single cycle.  Otherwise ``alpha`` is
    uniform and each support entry is dropped with probability ``p_zero``.
    """
    rng = np.random.default_rng(seed)
    if irreducible:
        order = rng.permutation(n)
        alpha = np.empty(n, dtype=int)
        alpha[order] = np.roll(order, -1)
    else:
        alpha = rng.integers(0, n, n)
    sys = FiniteSystem(alpha)
    weights = rng.uniform(low, high, n)
    if p_zero and not irreducible:
        weights[rng.random(n) < p_zero] = 0.0
    m = np.zeros((n, n))
    m[alpha, np.arange(n)] = weights
    return TransferOperator(sys, m)


def random_invariant_measure(sys: FiniteSystem, seed: int) -> Measure:
    """Random convex combination of the extreme invariant measures."""
    verts = invariant_measures(sys)
    rng = np.random.default_rng(seed)
    c = rng.dirichlet(np.ones(len(verts)))
    w = sum(ci * v.weights for ci, v in zip(c, verts))
    return Measure(w / w.sum())


def random_measure(n: int, seed: int) -> Measure:
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(n))
    return Measure(w / w.sum())
