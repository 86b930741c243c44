"""Online learning of allocation predictions from past optimal solutions.

Projected subgradient descent under the L1 loss, constrained to the
scaled simplex {x >= 0, sum x = R} (the upper bound x_k <= R is implied).
The emitted prediction is the running average of the post-update
iterates, i.e. online-to-batch conversion.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "l1_subgradient",
    "project_onto_sum_simplex",
    "cold_prediction",
    "OnlineL1Learner",
]


def l1_subgradient(xhat: Sequence[float], xstar: Sequence[int]) -> np.ndarray:
    """Subgradient of ||xstar - .||_1 at xhat: the sign pattern, 0 on ties."""
    a = np.asarray(xhat, dtype=float)
    b = np.asarray(xstar, dtype=float)
    if a.shape != b.shape:
        raise InputError(f"shape mismatch: {a.shape} vs {b.shape}")
    return np.sign(a - b)


def project_onto_sum_simplex(y: Sequence[float], total: float) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = total}, sort-based, O(n log n)."""
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise InputError("cannot project non-finite values")
    if not total > 0:
        raise InputError(f"simplex projection needs a positive total, got {total}")
    u = np.sort(y)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, len(y) + 1)
    cond = u + (total - css) / ks > 0
    rho = int(np.nonzero(cond)[0][-1]) + 1
    theta = (css[rho - 1] - total) / rho
    return np.maximum(y - theta, 0.0)


def cold_prediction(n: int, R: int) -> np.ndarray:
    """The uninformed prediction: R/n everywhere."""
    return np.full(n, R / n, dtype=float)


class OnlineL1Learner:
    """Online subgradient descent with running-average outputs.

    One learner per instance stream; observe() consumes the stream's next
    optimal solution and returns the prediction to use for the following
    instance.  Before any observation the prediction is the cold start.
    The default step size is 0.01 * sqrt(R/n).
    """

    def __init__(self, n: int, R: int, step: float | None = None):
        if n < 1:
            raise InputError(f"need n >= 1, got {n}")
        self.n = n
        self.R = R
        self.step = 0.01 * math.sqrt(R / n) if step is None else float(step)
        self.current = cold_prediction(n, R)
        self._sum = np.zeros(n, dtype=float)
        self.count = 0

    def prediction(self) -> np.ndarray:
        if self.count == 0:
            return self.current.copy()
        return self._sum / self.count

    def observe(self, xstar: Sequence[int]) -> np.ndarray:
        """Take one subgradient step against xstar; returns the new prediction."""
        g = l1_subgradient(self.current, xstar)
        self.current = project_onto_sum_simplex(self.current - self.step * g, self.R)
        self._sum += self.current
        self.count += 1
        return self.prediction()
