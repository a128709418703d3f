"""Limit-variance diagnostics for the benchmark estimator.

Under heavy censoring the benchmark p_n fluctuates with a variance driven
by the censoring tail index gamma_c < 0 and the number of top order
statistics k.  The double sum below evaluates that variance constant; a
prefix-sum regrouping over the pair maximum brings the cost down to O(k)
without changing the summands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["CensoringTail", "h_gamma", "sigma2_k"]

# below this distance from the removable singularity at exponent 0 the
# integral is evaluated as its log limit
_SINGULARITY_EPS = 1e-12


@dataclass(frozen=True)
class CensoringTail:
    """Censoring tail index gamma_c < 0 with tail size k out of n."""

    gamma_c: float
    k: int
    n: int

    def __post_init__(self):
        if not (isinstance(self.gamma_c, (int, float)) and math.isfinite(self.gamma_c)):
            raise ValidationError(f"gamma_c must be a finite real, got {self.gamma_c!r}")
        if self.gamma_c >= 0:
            raise ValidationError(f"gamma_c must be negative, got {self.gamma_c}")
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ValidationError(f"k must be a positive integer, got {self.k!r}")
        if not isinstance(self.n, (int, np.integer)) or self.n <= self.k:
            raise ValidationError(f"n must exceed k, got n={self.n!r}, k={self.k!r}")


def _h_values(gamma_c: float, t: np.ndarray) -> np.ndarray:
    """Integral of u^gamma_c over [1, t], elementwise; t >= 1 assumed."""
    ex = 1.0 + gamma_c
    if abs(ex) < _SINGULARITY_EPS:
        return np.log(t)
    return (np.power(t, ex) - 1.0) / ex


def h_gamma(gamma_c: float, t: float) -> float:
    """Integral of u^gamma_c from 1 to t, with the log limit at gamma_c = -1.

    Non-negative and non-decreasing in t on [1, inf).
    """
    if not (isinstance(gamma_c, (int, float)) and math.isfinite(gamma_c)):
        raise ValidationError(f"gamma_c must be a finite real, got {gamma_c!r}")
    if not (isinstance(t, (int, float)) and math.isfinite(t)) or t < 1.0:
        raise ValidationError(f"t must be a real >= 1, got {t!r}")
    return float(_h_values(gamma_c, np.asarray([float(t)]))[0])


def sigma2_k(tail: CensoringTail) -> float:
    """Variance constant of the benchmark over the top k order statistics.

    Mathematically a double sum over index pairs (j1, j2) of
    a(j1) * a(j2) * h((k+1)/max(j1, j2)) with a(j) = 1 - (j/(k+1))^(-gamma_c).
    Grouping pairs by their maximum m collapses it to a single pass:
    sum_m a(m) * (2*S(m-1) + a(m)) * h((k+1)/m) with S the prefix sums,
    which reproduces the direct sum to within float round-off.
    """
    k = tail.k
    g = tail.gamma_c
    j = np.arange(1, k + 1, dtype=float)
    a = 1.0 - np.power(j / (k + 1), -g)
    prefix = np.cumsum(a)
    h = _h_values(g, (k + 1) / j)
    total = float(np.sum(a * (2.0 * (prefix - a) + a) * h))
    return total / k**2
