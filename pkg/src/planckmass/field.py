"""Stationary Gaussian fields with spectral measure on the unit circle.

A field with atomic spectral measure ``sum sigma_j delta_{u_j}`` is
``F(y) = sum_j X_j e(<u_j, y>)`` with independent complex Gaussian
amplitudes, ``E|X_j|^2 = sigma_j``, and ``X`` at the antipode of ``u_j``
equal to ``conj(X_j)``. Continuous parts are replaced by ``m`` equal-mass
quantile atoms. The normalised ball mass is computed exactly through the
disk kernel, never on a grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from . import _rng
from .eigenfunction import disk_kernel
from .measure import MeasureError, SpectralMeasure, atomic_measure, lebesgue_decompose
from .stats import EmpiricalDistribution

__all__ = [
    "AtomicFieldSample",
    "FieldSpec",
    "sample_atomic_field",
    "discretize_continuous",
    "covariance",
    "ball_mass",
    "ball_mass_quadrature",
    "field_value",
    "sample_ball_mass",
    "sample_w",
    "w_moments",
    "ergodic_average",
    "cross_term_samples",
    "kernel_matrix",
    "amplitudes",
]


@dataclass(frozen=True)
class AtomicFieldSample:
    """One realisation: directions, masses and complex amplitudes per atom."""

    directions: np.ndarray = field(repr=False)
    masses: np.ndarray = field(repr=False)
    amplitudes: np.ndarray = field(repr=False)
    R: float | None = None

    @property
    def m(self) -> int:
        return int(self.masses.size)


@dataclass(frozen=True)
class FieldSpec:
    measure: SpectralMeasure
    discretization_m: int = 256
    R: float = 1.0

    def __post_init__(self):
        if self.measure.continuous_weight > 0:
            m = self.discretization_m
            if m < 2 or m % 2:
                raise ValueError("discretization_m must be even and >= 2")
        if self.R <= 0:
            raise ValueError("R must be positive")


def _require_symmetric_atomic(mu: SpectralMeasure):
    if not mu.is_atomic:
        raise MeasureError("a purely atomic measure is required")
    if mu.representatives().size * 2 != mu.n_atoms:
        raise MeasureError("atoms are not antipode-symmetric")


def amplitudes(mu: SpectralMeasure, seed: int, purpose: int, n: int, workers=None) -> np.ndarray:
    """``n`` conjugate-paired amplitude vectors for the atoms of ``mu``, shape (n, m).

    Each representative gets ``sqrt(sigma/2) * (A + iB)`` with A, B
    standard normal; its antipodal partner gets the conjugate.
    """
    _require_symmetric_atomic(mu)
    reps = mu.representatives()
    partner = mu.antipode_index()[reps]
    scale = np.sqrt(mu.masses[reps] / 2)
    n_rep = reps.size

    def draw(b, start, stop):
        g = _rng.stream(seed, purpose, b).standard_normal((_rng.BLOCK, n_rep, 2))[: stop - start]
        z = scale * (g[..., 0] + 1j * g[..., 1])
        out = np.empty((stop - start, mu.n_atoms), dtype=complex)
        out[:, reps] = z
        out[:, partner] = np.conj(z)
        return out

    return _rng.block_map(draw, n, workers).reshape(n, mu.n_atoms)


def sample_atomic_field(mu_a: SpectralMeasure, seed: int, index: int = 0) -> AtomicFieldSample:
    """Realisation number ``index`` of the field with atomic measure ``mu_a``."""
    X = amplitudes(mu_a, seed, _rng.ATOMIC, index + 1)[index]
    return AtomicFieldSample(mu_a.unit_vectors(), mu_a.masses.copy(), X)


def field_value(sample: AtomicFieldSample, y) -> np.ndarray:
    """``F(y) = sum_j X_j e(<u_j, y>)`` at points ``y`` (shape (..., 2))."""
    y = np.asarray(y, dtype=float)
    val = np.exp(2j * np.pi * (y @ sample.directions.T)) @ sample.amplitudes
    if np.max(np.abs(val.imag), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(val), initial=0.0)):
        raise FloatingPointError("field value has a non-negligible imaginary part")
    return val.real


def discretize_continuous(mu_b: SpectralMeasure, m: int) -> SpectralMeasure:
    """``m`` atoms of mass ``1/m`` at the quantiles of the continuous part.

    Quantile levels ``(i + 1/2)/m`` are taken on [0, 1/2) and mirrored by
    ``+1/2``, which keeps the atoms antipode-symmetric.
    """
    if m < 2 or m % 2:
        raise ValueError("m must be even and >= 2")
    if mu_b.continuous_weight <= 0 or mu_b.density is None:
        raise MeasureError("a continuous measure is required")
    levels = (np.arange(m // 2) + 0.5) / m
    half = mu_b.density.quantile(levels)
    angles = np.concatenate([half, half + 0.5])
    return atomic_measure(angles, np.full(m, 1.0 / m))


def _continuous_cov(density, v: np.ndarray) -> float:
    s = math.hypot(v[0], v[1])
    if density.family == "uniform":
        return float(special.j0(2 * np.pi * s))
    f = lambda t: math.cos(2 * math.pi * (v[0] * math.cos(2 * math.pi * t) + v[1] * math.sin(2 * math.pi * t)))
    total = 0.0
    for a, b, w in zip(density.edges, density.edges[1:], density.masses):
        if w > 0:
            val, _ = integrate.quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-12)
            total += w / (b - a) * val
    return total


def covariance(mu: SpectralMeasure, v) -> float:
    """``E[F(x) F(x + v)] = integral of e(<v, lambda>) d mu(lambda)``."""
    v = np.asarray(v, dtype=float)
    out = 0.0
    if mu.atomic_weight > 0:
        out += mu.atomic_weight * float(np.sum(mu.masses * np.cos(2 * np.pi * (mu.unit_vectors() @ v))))
    if mu.continuous_weight > 0:
        out += mu.continuous_weight * _continuous_cov(mu.density, v)
    return out


def kernel_matrix(directions: np.ndarray, R: float) -> np.ndarray:
    diff = directions[:, None, :] - directions[None, :, :]
    return disk_kernel(R * np.hypot(diff[..., 0], diff[..., 1]))


def _quadratic_forms(X: np.ndarray, K: np.ndarray) -> np.ndarray:
    # K is real symmetric: Re(X^H K X) = Re X . K Re X + Im X . K Im X
    xr, xi = np.ascontiguousarray(X.real), np.ascontiguousarray(X.imag)
    val = np.einsum("nj,nj->n", xr @ K, xr) + np.einsum("nj,nj->n", xi @ K, xi)
    return np.where((val < 0) & (val > -1e-9), 0.0, val)


def ball_mass(sample: AtomicFieldSample, R: float) -> float:
    """``(1/(pi R^2)) * integral over B(R) of |F|^2``, exact through the disk kernel."""
    if R <= 0:
        raise ValueError("R must be positive")
    K = kernel_matrix(sample.directions, R)
    return float(_quadratic_forms(sample.amplitudes[None, :], K)[0])


def ball_mass_quadrature(sample: AtomicFieldSample, R: float, n_radial: int = 200,
                         n_angular: int = 400) -> float:
    """Polar-quadrature value of the ball mass (oracle for :func:`ball_mass`)."""
    rho, wr = np.polynomial.legendre.leggauss(n_radial)
    rho, wr = 0.5 * (rho + 1), 0.5 * wr
    phi = 2 * np.pi * np.arange(n_angular) / n_angular
    y = R * np.stack([np.outer(rho, np.cos(phi)), np.outer(rho, np.sin(phi))], axis=-1).reshape(-1, 2)
    vals = (field_value(sample, y) ** 2).reshape(n_radial, n_angular)
    return float(np.sum(wr * rho * vals.sum(axis=1)) * (2 * np.pi / n_angular) / np.pi)


def _components(spec: FieldSpec):
    """Atomic measures of the two independent parts and their weights."""
    alpha, mu_a, beta, mu_b = lebesgue_decompose(spec.measure)
    parts = []
    if alpha > 0:
        parts.append((alpha, mu_a, _rng.ATOMIC))
    if beta > 0:
        parts.append((beta, discretize_continuous(mu_b, spec.discretization_m), _rng.CONTINUOUS))
    return parts


def _combined_amplitudes(spec: FieldSpec, seed: int, n: int, workers=None):
    dirs, amps = [], []
    for weight, mu, purpose in _components(spec):
        dirs.append(mu.unit_vectors())
        amps.append(math.sqrt(weight) * amplitudes(mu, seed, purpose, n, workers))
    return np.concatenate(dirs), np.concatenate(amps, axis=1)


def sample_ball_mass(spec: FieldSpec, n: int, seed: int, R: float | None = None,
                     workers: int | None = None) -> EmpiricalDistribution:
    """``n`` independent ball masses of ``sqrt(alpha) F_A + sqrt(beta) F_B``."""
    R = spec.R if R is None else R
    dirs, X = _combined_amplitudes(spec, seed, n, workers)
    K = kernel_matrix(dirs, R)

    def block(b, start, stop):
        return _quadratic_forms(X[start:stop], K)

    values = _rng.block_map(block, n, workers)
    return EmpiricalDistribution(
        values,
        {
            "kind": "field_ball_mass",
            "R": float(R),
            "m": spec.discretization_m,
            "alpha": spec.measure.atomic_weight,
            "seed": int(seed),
            "generator": "SeedSequence/Philox per 256-index block",
        },
    )


def sample_w(mu_a: SpectralMeasure, n: int, seed: int, workers: int | None = None) -> EmpiricalDistribution:
    """``n`` draws of ``W = sum over all atoms of |X|^2`` (pairs count twice)."""
    X = amplitudes(mu_a, seed, _rng.W_SAMPLES, n, workers)
    values = np.sum(np.abs(X) ** 2, axis=1)
    return EmpiricalDistribution(
        values, {"kind": "W", "atoms": mu_a.n_atoms, "seed": int(seed), "generator": "SeedSequence/Philox"}
    )


def w_moments(mu_a: SpectralMeasure) -> tuple[float, float]:
    """Mean and variance of ``W``.

    Each antipodal pair contributes ``2|X|^2`` with ``|X|^2`` exponential of
    mean sigma, so ``Var W = sum_pairs 4 sigma^2 = 2 sum_atoms sigma^2``.
    """
    _require_symmetric_atomic(mu_a)
    return 1.0, float(2 * np.sum(mu_a.masses**2))


def ergodic_average(spec: FieldSpec, R_list, seed: int) -> list[tuple[float, float]]:
    """Ball averages of ``F^2`` for a single realisation at increasing radii."""
    if spec.measure.atomic_weight > 0:
        raise MeasureError("ergodic averages require a spectral measure with no atoms")
    dirs, X = _combined_amplitudes(spec, seed, 1)
    return [(float(R), float(_quadratic_forms(X, kernel_matrix(dirs, R))[0])) for R in R_list]


def cross_term_samples(spec: FieldSpec, R: float, n: int, seed: int) -> np.ndarray:
    """``(1/(pi R^2)) * integral over B(R) of F_A F_B`` for independent parts."""
    parts = _components(spec)
    if len(parts) != 2:
        raise MeasureError("cross term needs both an atomic and a continuous part")
    (_, mu_a, pa), (_, mu_b, pb) = parts
    XA = amplitudes(mu_a, seed, pa, n)
    XB = amplitudes(mu_b, seed, pb, n)
    diff = mu_a.unit_vectors()[:, None, :] - mu_b.unit_vectors()[None, :, :]
    K = disk_kernel(R * np.hypot(diff[..., 0], diff[..., 1]))
    return np.einsum("nj,jk,nk->n", XA, K, np.conj(XB)).real
