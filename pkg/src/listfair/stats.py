"""Kernel regression and bootstrap confidence intervals.

Where the measurement protocol leaves estimator details open, the
defaults follow common practice: Gaussian kernel, Silverman's
rule-of-thumb bandwidth, percentile bootstrap of the mean with 2000
resamples. Everything is deterministic given a RandomSource.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from listfair.sampling import RandomSource

DEFAULT_RESAMPLES = 2000


@dataclass(frozen=True)
class XYSeries:
    """A finite set of (x, y) points."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ValueError("series values must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist()))


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    resamples: int


def nadaraya_watson(data: XYSeries, grid, bandwidth: float) -> XYSeries:
    """Locally weighted mean of ``data`` at each grid point.

    Weights are Gaussian, exp(-((g - x_i) / bandwidth)^2 / 2). Every
    estimate is a convex combination of the observed y values, so it
    always lies within [min y, max y].
    """
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    if len(data.x) == 0:
        raise ValueError("regression needs at least one data point")
    grid = np.asarray(grid, dtype=float)
    scaled = (grid[:, None] - data.x[None, :]) / bandwidth
    squared = 0.5 * scaled * scaled
    # shift per grid point so the nearest weight is exp(0); the estimate is
    # scale-free in the weights and this avoids all-zero underflow far from
    # the data
    squared -= squared.min(axis=1, keepdims=True)
    weights = np.exp(-squared)
    estimates = (weights * data.y[None, :]).sum(axis=1) / weights.sum(axis=1)
    return XYSeries(grid, estimates)


def silverman_bandwidth(xs) -> float:
    """Rule-of-thumb bandwidth 1.06 * sd * n^(-1/5) (sd with ddof=1)."""
    xs = np.asarray(xs, dtype=float)
    if np.unique(xs).size < 2:
        raise ValueError("bandwidth rule needs at least two distinct values")
    return float(1.06 * xs.std(ddof=1) * len(xs) ** -0.2)


def bootstrap_ci(
    values,
    level: float = 0.95,
    resamples: int = DEFAULT_RESAMPLES,
    *,
    rng: RandomSource,
) -> ConfidenceInterval:
    """Percentile bootstrap interval for the mean of ``values``.

    Draws ``resamples`` resamples with replacement, takes each mean, and
    returns the (1 - level)/2 and (1 + level)/2 empirical quantiles. With
    a fixed rng the result is deterministic, and intervals at lower levels
    nest inside intervals at higher levels.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("bootstrap needs at least one value")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    if resamples < 1:
        raise ValueError("resamples must be >= 1")
    indices = rng.generator.integers(0, values.size, size=(resamples, values.size))
    means = values[indices].mean(axis=1)
    lower = float(np.quantile(means, (1.0 - level) / 2.0))
    upper = float(np.quantile(means, (1.0 + level) / 2.0))
    return ConfidenceInterval(lower, upper, level, resamples)
