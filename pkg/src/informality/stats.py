"""Weighted Generalized Entropy inequality indices.

The GE family over a weighted sample of strictly positive values y with
weights w and weighted mean mu is

    I(alpha) = (1 / (alpha^2 - alpha)) * (sum_i w_i (y_i/mu)^alpha / sum_i w_i - 1)

with the two limiting members

    alpha -> 0 : mean log deviation,  sum_i w_i ln(mu/y_i) / sum_i w_i
    alpha -> 1 : Theil index,         sum_i w_i (y_i/mu) ln(y_i/mu) / sum_i w_i

The generic formula loses precision as alpha^2 - alpha -> 0, so alphas
within ``LIMIT_EPS`` of 0 or 1 are evaluated with the limit forms.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .summation import det_dot, det_reduce, det_sum

log = logging.getLogger(__name__)

# Switchover to the limit forms.
LIMIT_EPS = 1e-9
# |raw| below this is rounding noise from the cancellation (s/sw - 1):
# equal-value samples land here, so such values are reported as exact 0.
CLAMP_EPS = 1e-12


class EmptySampleError(ValueError):
    """Raised when a computation requires positive total weight."""


class NonPositiveValueError(ValueError):
    """Raised when a value <= 0 (or non-finite input) reaches the index math."""


@dataclass(frozen=True)
class WeightedSample:
    """Strictly positive values with non-negative weights.

    Zero-weight items are dropped at construction; they carry no mass and
    would otherwise poison power transforms with 0 * inf. Arrays are
    float64 and must not be mutated after construction.
    """

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if values.ndim != 1 or weights.ndim != 1 or len(values) != len(weights):
            raise ValueError("values and weights must be 1-d arrays of equal length")
        if len(values) and not np.all(np.isfinite(values)):
            raise NonPositiveValueError("values must be finite")
        if len(weights) and (not np.all(np.isfinite(weights)) or np.any(weights < 0.0)):
            raise ValueError("weights must be finite and non-negative")
        keep = weights > 0.0
        if not keep.all():
            values = values[keep]
            weights = weights[keep]
        if len(values) == 0:
            raise EmptySampleError("sample has no positive-weight items")
        if np.any(values <= 0.0):
            raise NonPositiveValueError("values must be strictly positive")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "WeightedSample":
        """Build from (value, weight) pairs."""
        vals, wts = [], []
        for v, w in pairs:
            vals.append(v)
            wts.append(w)
        return cls(np.asarray(vals, dtype=np.float64), np.asarray(wts, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class GEIndex:
    """A Generalized Entropy index value at a given alpha.

    ``clamped`` records that a tiny negative rounding residue was clamped
    to zero.
    """

    alpha: float
    value: float
    clamped: bool = False


def total_weight(sample: WeightedSample, threads: int = 1) -> float:
    return det_sum(sample.weights, threads)


def weighted_mean(sample: WeightedSample, threads: int = 1) -> float:
    """Weighted mean sum(w*y)/sum(w), deterministic reduction order."""
    sw = det_sum(sample.weights, threads)
    if sw <= 0.0:
        raise EmptySampleError("total weight is zero")
    return det_dot(sample.weights, sample.values, threads) / sw


def _clamp(alpha: float, raw: float) -> GEIndex:
    if raw <= -CLAMP_EPS:
        raise NonPositiveValueError(
            f"GE index {raw!r} at alpha={alpha} is negative beyond rounding tolerance"
        )
    if abs(raw) < CLAMP_EPS:
        if raw != 0.0:
            log.debug("GE index %.3e at alpha=%g clamped to 0", raw, alpha)
        return GEIndex(alpha, 0.0, clamped=raw != 0.0)
    return GEIndex(alpha, raw)


def ge_index(sample: WeightedSample, alpha: float, threads: int = 1) -> GEIndex:
    """Weighted GE index of the sample at ``alpha``."""
    alpha = float(alpha)
    if not np.isfinite(alpha):
        raise ValueError("alpha must be finite")
    v, w = sample.values, sample.weights
    sw = det_sum(w, threads)
    if sw <= 0.0:
        raise EmptySampleError("total weight is zero")
    mu = det_dot(w, v, threads) / sw
    n = len(v)

    if abs(alpha) <= LIMIT_EPS:
        # mean log deviation
        s = det_reduce(n, lambda lo, hi: float(np.sum(w[lo:hi] * np.log(mu / v[lo:hi]))), threads)
        return _clamp(alpha, s / sw)
    if abs(alpha - 1.0) <= LIMIT_EPS:
        # Theil
        def theil_block(lo: int, hi: int) -> float:
            r = v[lo:hi] / mu
            return float(np.sum(w[lo:hi] * r * np.log(r)))

        return _clamp(alpha, det_reduce(n, theil_block, threads) / sw)

    def power_block(lo: int, hi: int) -> float:
        return float(np.sum(w[lo:hi] * (v[lo:hi] / mu) ** alpha))

    s = det_reduce(n, power_block, threads)
    return _clamp(alpha, (s / sw - 1.0) / (alpha * alpha - alpha))


def ge_curve(sample: WeightedSample, alphas: Sequence[float], threads: int = 1) -> list[GEIndex]:
    """Elementwise ``ge_index`` over a sweep of alphas.

    Alphas within ``LIMIT_EPS`` of 0 or 1 switch to the limit forms, which
    keeps the curve continuous across those points.
    """
    return [ge_index(sample, a, threads) for a in alphas]
