"""Seeded families of test step functions.

Random banks draw up to 64 pieces with values log-uniform in [1e-3, 1e3] and
supports inside (0, 32), so any failing witness can be replayed from its
seed and index.
"""
from __future__ import annotations

import numpy as np

from .stepfn import INF, StepFunction, indicator


def random_step(
    rng: np.random.Generator,
    max_pieces: int = 64,
    support: float = 32.0,
    vmin: float = 1e-3,
    vmax: float = 1e3,
    L: float = INF,
    signed: bool = False,
    gaps: bool = True,
) -> StepFunction:
    n = int(rng.integers(1, max_pieces + 1))
    top = min(support, L)
    b = np.sort(rng.uniform(0.0, top, size=n))
    b = np.unique(b[b > 0])
    if b.size == 0:
        b = np.array([top / 2])
    v = np.exp(rng.uniform(np.log(vmin), np.log(vmax), size=b.size))
    if gaps:
        v[rng.random(b.size) < 0.15] = 0.0
    if signed:
        v *= rng.choice([-1.0, 1.0], size=b.size)
    if not np.any(v):
        v[0] = 1.0
    return StepFunction(b, v, L)


def random_bank(seed: int, size: int = 50, **kw) -> list[StepFunction]:
    rng = np.random.default_rng(seed)
    return [random_step(rng, **kw) for _ in range(size)]


def indicator_bank(L: float = INF, n: int = 12) -> list[StepFunction]:
    """chi_(0, 2^k) for a spread of scales inside the domain."""
    top = 32.0 if L == INF else L
    return [indicator(top * 2.0 ** -k, L=L) for k in range(n)]


def decreasing_bank(seed: int, size: int = 50, **kw) -> list[StepFunction]:
    from .stepfn import rearrange

    return [rearrange(f) for f in random_bank(seed, size, **kw)]
