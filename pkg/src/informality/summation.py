"""Deterministic compensated reductions over float64 arrays.

Every aggregate in this package is produced by one of two primitives:

* fixed-size block partial sums combined with ``math.fsum`` -- the block
  boundaries depend only on array length, and ``fsum`` is exactly rounded,
  so the result is bit-identical no matter how many worker threads computed
  the blocks or in which order they finished;
* a Neumaier running accumulator for streaming, one-record-at-a-time use.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

# Block size is part of the numeric contract: changing it changes results
# in the last ulp, so it is fixed rather than tuned per machine.
BLOCK = 1 << 16


def block_slices(n: int) -> list[tuple[int, int]]:
    """Half-open (lo, hi) block bounds covering range(n)."""
    return [(lo, min(lo + BLOCK, n)) for lo in range(0, max(n, 0), BLOCK)]


def det_reduce(n: int, block_fn: Callable[[int, int], float], threads: int = 1) -> float:
    """Combine per-block partial results with an exactly rounded sum.

    ``block_fn(lo, hi)`` must return the float64 partial for that block and
    must not depend on any other block. With ``threads > 1`` the blocks are
    evaluated on a thread pool; the combination is unchanged because fsum
    of the same partials is order-independent.
    """
    slices = block_slices(n)
    if not slices:
        return 0.0
    if threads <= 1 or len(slices) == 1:
        partials = [block_fn(lo, hi) for lo, hi in slices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(lambda s: block_fn(*s), slices))
    return math.fsum(partials)


def det_sum(x: np.ndarray, threads: int = 1) -> float:
    """Deterministic sum of a 1-d float array."""
    return det_reduce(len(x), lambda lo, hi: float(np.sum(x[lo:hi])), threads)


def det_dot(x: np.ndarray, y: np.ndarray, threads: int = 1) -> float:
    """Deterministic sum of elementwise products (no BLAS reduction)."""
    return det_reduce(len(x), lambda lo, hi: float(np.sum(x[lo:hi] * y[lo:hi])), threads)


def exact_residual(total: float, part: float) -> float:
    """Residual r with ``part + r == total`` exactly in float64.

    Starts from the rounded difference and nudges by ulps if the naive
    round trip misses; the nudge never exceeds a few ulps of the residual.
    No representable residual exists when ``part`` dwarfs ``total`` (the
    addition is then exact while the true difference needs more than 53
    bits); that case raises and callers fall back to the rounded residual.
    """
    residual = total - part
    for _ in range(8):
        roundtrip = part + residual
        if roundtrip == total:
            return residual
        residual = math.nextafter(residual, math.inf if roundtrip < total else -math.inf)
    raise ArithmeticError(
        f"cannot represent residual of {total!r} - {part!r} exactly"
    )


class NeumaierAccumulator:
    """Streaming compensated sum (Kahan-Babuska/Neumaier variant).

    Tracks a separate low-order compensation term so that long streams of
    small weights do not drown in a large running total.
    """

    __slots__ = ("_sum", "_comp")

    def __init__(self) -> None:
        self._sum = 0.0
        self._comp = 0.0

    def add(self, value: float) -> None:
        t = self._sum + value
        if abs(self._sum) >= abs(value):
            self._comp += (self._sum - t) + value
        else:
            self._comp += (value - t) + self._sum
        self._sum = t

    def merge(self, other: "NeumaierAccumulator") -> None:
        self.add(other._sum)
        self._comp += other._comp

    @property
    def total(self) -> float:
        return self._sum + self._comp
