"""Arc-aggregated surrogate of an eigenfunction in a Planck-scale window.

Around a torus point x the eigenfunction is viewed through the window
``F_x(y) = f(x + (R / sqrt(E)) y)`` for ``y in [-1/2, 1/2]^2``. Frequencies
are grouped into arcs of the circle; each kept arc k contributes a single
plane wave in the direction of its midpoint, with coefficient ``b_k(x)``.
Averaged over x, the ``b_k`` behave like independent complex Gaussians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sstats

from . import _rng
from .eigenfunction import CoefficientVector, evaluate
from .lattice import LatticePointSet, count_correlations
from .measure import ArcPartition, MeasureError, arc_partition, from_coefficients
from .stats import EmpiricalDistribution, ks_to_cdf

__all__ = [
    "DerandomizationConfig",
    "window",
    "b_coefficients",
    "phi_eval",
    "sup_difference",
    "sup_error_bar",
    "moment_identity",
    "gaussianity_report",
    "partition_for",
]


@dataclass(frozen=True)
class DerandomizationConfig:
    K: int
    delta: float | None = None
    R: float = 5.0
    grid_step: float | None = None
    flags: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.R <= 1:
            raise ValueError("R must exceed 1")
        delta = self.K**-2 if self.delta is None else float(self.delta)
        if not 0 < delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        step = 1 / (10 * self.R) if self.grid_step is None else float(self.grid_step)
        if step <= 0 or step > 1 / (10 * self.R) + 1e-15:
            raise ValueError("grid_step must be positive and at most 1/(10 R)")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "grid_step", step)
        flags = []
        if delta < 1 / (2 * self.K):
            flags.append("delta below 1/(2K): arcs lighter than a uniform share are kept")
        object.__setattr__(self, "flags", tuple(flags))


def partition_for(coeffs: CoefficientVector, K: int, delta: float) -> ArcPartition:
    return arc_partition(from_coefficients(coeffs), coeffs.lattice, K, delta)


def window(coeffs: CoefficientVector, x, R: float, y) -> np.ndarray | float:
    """``f(x + (R/sqrt(E)) y)`` with the argument reduced mod 1."""
    pts = np.mod(np.asarray(x, dtype=float) + (R / math.sqrt(coeffs.E)) * np.asarray(y, dtype=float), 1.0)
    return evaluate(coeffs, pts)


def _kept(partition: ArcPartition):
    if not partition.kept_arcs:
        raise MeasureError("no arc passes the mass threshold")
    return partition.kept_arcs


def b_coefficients(coeffs: CoefficientVector, x, partition: ArcPartition) -> dict:
    """``b_k(x) = mu(I_k)^(-1/2) * sum over arc k of a_xi e(<xi, x>)``."""
    arcs = _kept(partition)
    x = np.asarray(x, dtype=float)
    terms = coeffs.a * np.exp(2j * np.pi * (x @ coeffs.lattice.points.T.astype(float)))
    return {arc.k: terms[..., list(arc.members)].sum(axis=-1) / math.sqrt(arc.mass) for arc in arcs}


def _b_matrix(coeffs, x, partition):
    b = b_coefficients(coeffs, x, partition)
    return np.stack([b[arc.k] for arc in partition.kept_arcs], axis=-1)


def phi_eval(coeffs: CoefficientVector, x, partition: ArcPartition, R: float, y) -> np.ndarray:
    """``phi_x(y) = sum_k mu(I_k)^(1/2) b_k(x) e(<R zeta_k, y>)`` for one x."""
    arcs = _kept(partition)
    b = _b_matrix(coeffs, x, partition)
    w = np.sqrt([arc.mass for arc in arcs]) * b
    zeta = np.stack([arc.midpoint_vector for arc in arcs])
    val = np.exp(2j * np.pi * R * (np.asarray(y, dtype=float) @ zeta.T)) @ w
    if np.max(np.abs(val.imag), initial=0.0) > 1e-9 * max(1.0, float(np.sum(np.abs(w)))):
        raise FloatingPointError("surrogate has a non-negligible imaginary part")
    return val.real


def _grid(step: float) -> np.ndarray:
    n = int(math.ceil(1 / step)) + 1
    g = np.linspace(-0.5, 0.5, n)
    yy = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1)
    return yy.reshape(-1, 2)


def sup_difference(coeffs: CoefficientVector, x, config: DerandomizationConfig,
                   partition: ArcPartition | None = None) -> float:
    """Largest ``|F_x - phi_x|`` over a uniform grid of ``[-1/2, 1/2]^2``.

    A lower bound for the true supremum; see :func:`sup_error_bar`.
    """
    if partition is None:
        partition = partition_for(coeffs, config.K, config.delta)
    y = _grid(config.grid_step)
    u = coeffs.lattice.unit_vectors()
    x = np.asarray(x, dtype=float)
    F = np.exp(2j * np.pi * config.R * (y @ u.T)) @ (
        coeffs.a * np.exp(2j * np.pi * (coeffs.lattice.points @ x))
    )
    phi = phi_eval(coeffs, x, partition, config.R, y)
    return float(np.max(np.abs(F.real - phi)))


def sup_error_bar(coeffs: CoefficientVector, config: DerandomizationConfig) -> float:
    """Bound on how far the grid maximum may sit below the true supremum.

    Both functions have y-frequencies of length R, so their difference has
    gradient at most ``2 pi R`` times the sum of amplitude moduli; a grid
    point lies within ``step / sqrt(2)`` of every y.
    """
    # |phi| has amplitude sum mu(I_k)^(1/2) |b_k| <= sum over kept arcs of |a_xi|
    amp = 2 * float(np.sum(np.abs(coeffs.a)))
    return 2 * math.pi * config.R * amp * config.grid_step / math.sqrt(2)


def moment_identity(lattice: LatticePointSet, l: int, grid_n: int) -> dict:
    """``integral over T^2 of |sum e(<xi, x>)|^(2l)`` against the tuple count.

    The integral is an exact uniform-grid average: ``|S|^(2l)`` is a
    trigonometric polynomial of coordinate degree at most ``2 l max|xi_i|``,
    so any grid with more points per axis than that degree is exact.
    """
    if grid_n < 1 or grid_n & (grid_n - 1):
        raise ValueError("grid_n must be a power of 2")
    maxc = int(np.max(np.abs(lattice.points))) if lattice.N else 0
    if grid_n <= 2 * l * maxc:
        raise ValueError(f"grid_n = {grid_n} must exceed 2*l*max|coordinate| = {2 * l * maxc}")
    A = np.zeros((grid_n, grid_n))
    np.add.at(A, (lattice.points[:, 0] % grid_n, lattice.points[:, 1] % grid_n), 1.0)
    S = np.fft.ifft2(A) * grid_n**2
    integral = float(np.mean(np.abs(S) ** (2 * l)))
    count = count_correlations(lattice, l).total_count
    return {
        "E": lattice.E,
        "N": lattice.N,
        "l": l,
        "grid_n": grid_n,
        "integral_estimate": integral,
        "count": count,
        "relative_gap": abs(integral - count) / count,
    }


def gaussianity_report(coeffs: CoefficientVector, partition: ArcPartition, n_centers: int,
                       seed: int, workers: int | None = None) -> dict:
    """Moments and normality diagnostics of ``b_k(x)`` over random centers x."""
    if n_centers < 1000:
        raise ValueError("n_centers must be at least 1000")
    arcs = _kept(partition)
    x = _rng.uniform_centers(seed, n_centers, workers)
    b = _b_matrix(coeffs, x, partition)
    ref = sstats.norm(scale=math.sqrt(0.5)).cdf
    per_arc = []
    for j, arc in enumerate(arcs):
        col = b[:, j]
        m2 = np.abs(col) ** 2
        ks_re = ks_to_cdf(EmpiricalDistribution(col.real), ref)
        ks_im = ks_to_cdf(EmpiricalDistribution(col.imag), ref)
        degenerate = len(arc.members) == 1
        per_arc.append(
            {
                "k": arc.k,
                "n_frequencies": len(arc.members),
                "mass": arc.mass,
                "mean_re": float(col.real.mean()),
                "mean_im": float(col.imag.mean()),
                "second_moment": float(m2.mean()),
                "second_moment_se": float(m2.std(ddof=1) / math.sqrt(n_centers)),
                "fourth_moment": float(np.mean(m2**2)),
                "ks_real_part": ks_re,
                "ks_imag_part": ks_im,
                "degenerate": degenerate,
                "gaussian_like": (not degenerate) and max(ks_re, ks_im) <= 0.05,
            }
        )
    ks = [arc.k for arc in arcs]
    max_corr = 0.0
    norms = np.sqrt(np.mean(np.abs(b) ** 2, axis=0))
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            if ks[j] == partition.antipodal_k(ks[i]):
                continue
            c = abs(np.mean(b[:, i] * np.conj(b[:, j]))) / (norms[i] * norms[j])
            max_corr = max(max_corr, float(c))
    return {
        "n_centers": n_centers,
        "seed": int(seed),
        "K": partition.K,
        "delta": partition.delta,
        "discarded_mass": partition.discarded_mass,
        "per_arc": per_arc,
        "max_pairwise_correlation": max_corr,
    }
