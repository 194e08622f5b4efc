"""Empirical distributions, KS distances and reference CDFs."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special

__all__ = [
    "EmpiricalDistribution",
    "ecdf",
    "ks_distance",
    "ks_to_cdf",
    "gamma_cdf",
    "point_mass_cdf",
    "ks_critical_value",
]


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Sorted Monte Carlo samples plus a record of where they came from."""

    samples: np.ndarray = field(repr=False)
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        s = np.sort(np.asarray(self.samples, dtype=float).ravel())
        if s.size == 0:
            raise ValueError("empirical distribution needs at least one sample")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return int(self.samples.size)

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def var(self) -> float:
        return float(np.var(self.samples))

    def std_error(self) -> float:
        return float(np.std(self.samples, ddof=1) / np.sqrt(self.n)) if self.n > 1 else 0.0

    def raw_moment(self, order: int) -> float:
        return float(np.mean(self.samples**order))

    def transform(self, scale: float = 1.0, shift: float = 0.0, **provenance) -> "EmpiricalDistribution":
        return EmpiricalDistribution(scale * self.samples + shift, {**self.provenance, **provenance})

    def summary(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean(),
            "var": self.var(),
            "m3": self.raw_moment(3),
            "min": float(self.samples[0]),
            "max": float(self.samples[-1]),
        }


def ecdf(dist: EmpiricalDistribution, t) -> np.ndarray | float:
    """Fraction of samples ``<= t`` (right-continuous)."""
    out = np.searchsorted(dist.samples, t, side="right") / dist.n
    return float(out) if np.ndim(out) == 0 else out


def ks_distance(d1: EmpiricalDistribution, d2: EmpiricalDistribution) -> float:
    """Two-sample Kolmogorov-Smirnov statistic ``sup_t |F1(t) - F2(t)|``."""
    grid = np.concatenate([d1.samples, d2.samples])
    return float(np.max(np.abs(ecdf(d1, grid) - ecdf(d2, grid))))


def ks_to_cdf(dist: EmpiricalDistribution, cdf) -> float:
    """One-sample KS statistic against a reference CDF (may have jumps).

    Both one-sided gaps are taken at every distinct sample value; the left
    limit of the reference is approximated by evaluating just below it.
    """
    x = np.unique(dist.samples)
    n = dist.n
    upper = np.searchsorted(dist.samples, x, side="right") / n
    lower = np.searchsorted(dist.samples, x, side="left") / n
    f_at = np.asarray(cdf(x), dtype=float)
    f_left = np.asarray(cdf(np.nextafter(x, -np.inf)), dtype=float)
    return float(max(np.max(np.abs(upper - f_at)), np.max(np.abs(f_left - lower))))


def gamma_cdf(shape: float, scale: float, t) -> np.ndarray | float:
    """CDF of the Gamma(shape, scale) law: ``P(shape, t / scale)``."""
    if shape <= 0 or scale <= 0:
        raise ValueError("shape and scale must be positive")
    t = np.asarray(t, dtype=float)
    out = np.where(t > 0, special.gammainc(shape, np.maximum(t, 0) / scale), 0.0)
    return float(out) if out.ndim == 0 else out


def point_mass_cdf(at: float):
    """CDF of the law concentrated at ``at``."""
    return lambda t: (np.asarray(t, dtype=float) >= at).astype(float)


def ks_critical_value(n1: int, n2: int, alpha: float = 0.01) -> float:
    """Asymptotic two-sample KS critical value ``c(alpha) sqrt((n1+n2)/(n1 n2))``.

    ``c(alpha)`` solves ``Q_KS(c) = alpha`` for the Kolmogorov limit law.
    """
    from scipy.optimize import brentq

    c = brentq(lambda z: special.kolmogorov(z) - alpha, 0.3, 5.0)
    return float(c * np.sqrt((n1 + n2) / (n1 * n2)))
