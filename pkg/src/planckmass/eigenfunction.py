"""Toral eigenfunctions and their Planck-scale mass.

An eigenfunction is ``f(x) = sum_xi a_xi e(<x, xi>)`` over the lattice
points of squared length E, with ``e(t) = exp(2 pi i t)``. Its mass on the
ball ``B(x, r)`` normalised by area is::

    M_f(x, r) = sum_{xi, xi'} a_xi conj(a_xi') e(<xi - xi', x>) D(r |xi - xi'|)

where ``D(s)`` is the area-average of ``e(<v, y>)`` over the unit disk for
``|v| = s``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import special

from . import _rng
from .lattice import LatticePointSet
from .stats import EmpiricalDistribution

__all__ = [
    "CoefficientVector",
    "CoefficientError",
    "generate_coefficients",
    "check_flatness",
    "evaluate",
    "disk_kernel",
    "mass_closed_form",
    "mass_quadrature",
    "mass_samples",
    "sample_mass",
    "mass_moment",
]


class CoefficientError(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientVector:
    """Coefficients ``a[i]`` for the frequency ``lattice.points[i]``."""

    lattice: LatticePointSet
    a: np.ndarray = field(repr=False)
    model: str = "custom"

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex).ravel()
        if a.size != self.lattice.N:
            raise CoefficientError("one coefficient per lattice point is required")
        if a.size == 0:
            raise CoefficientError("empty frequency set")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        if abs(np.sum(np.abs(a) ** 2) - 1.0) > 1e-12:
            raise CoefficientError("coefficients must satisfy sum |a|^2 = 1")
        if np.max(np.abs(a[self.lattice.negation_index()] - np.conj(a))) > 1e-12:
            raise CoefficientError("coefficients must satisfy a[-xi] = conj(a[xi])")

    @property
    def N(self) -> int:
        return self.lattice.N

    @property
    def E(self) -> int:
        return self.lattice.E

    @cached_property
    def difference_table(self):
        """Distinct differences d = xi - xi' and their weights sum a_xi conj(a_xi')."""
        p = self.lattice.points
        d = (p[:, None, :] - p[None, :, :]).reshape(-1, 2)
        w = (self.a[:, None] * np.conj(self.a)[None, :]).ravel()
        bound = 2 * math.isqrt(self.E) + 1
        keys = (d[:, 0] + bound) * (2 * bound + 1) + (d[:, 1] + bound)
        uniq, first, inv = np.unique(keys, return_index=True, return_inverse=True)
        weights = np.zeros(uniq.size, dtype=complex)
        np.add.at(weights, inv, w)
        return d[first], weights


def generate_coefficients(lattice: LatticePointSet, model: str = "flat", seed: int = 0) -> CoefficientVector:
    """Flat coefficients ``1/sqrt(N)``, or a uniform point on the complex sphere.

    For ``random_sphere`` an independent standard complex Gaussian is drawn
    for one representative of each antipodal pair, the partner gets the
    conjugate, and the vector is scaled to unit length.
    """
    N = lattice.N
    if N == 0:
        raise CoefficientError("empty frequency set")
    if model == "flat":
        return CoefficientVector(lattice, np.full(N, 1 / math.sqrt(N), dtype=complex), "flat")
    if model in ("random_sphere", "random-sphere"):
        rng = _rng.stream(seed, _rng.COEFFICIENTS)
        reps = lattice.representatives()
        neg = lattice.negation_index()
        z = rng.standard_normal(reps.size) + 1j * rng.standard_normal(reps.size)
        a = np.zeros(N, dtype=complex)
        a[reps] = z
        a[neg[reps]] = np.conj(z)
        a /= math.sqrt(np.sum(np.abs(a) ** 2))
        # exact symmetry after rounding in the division
        a[neg[reps]] = np.conj(a[reps])
        return CoefficientVector(lattice, a, "random_sphere")
    raise ValueError(f"unknown coefficient model {model!r}")


def check_flatness(coeffs: CoefficientVector, u_of_N: float) -> dict:
    max_ratio = float(coeffs.N * np.max(np.abs(coeffs.a) ** 2))
    return {"max_ratio": max_ratio, "u": float(u_of_N), "pass": max_ratio <= u_of_N}


def evaluate(coeffs: CoefficientVector, x) -> np.ndarray | float:
    """Value of the eigenfunction at ``x`` (shape ``(..., 2)``)."""
    x = np.asarray(x, dtype=float)
    phase = 2 * np.pi * (x @ coeffs.lattice.points.T.astype(float))
    val = np.exp(1j * phase) @ coeffs.a
    if np.max(np.abs(val.imag), initial=0.0) > 1e-9 * coeffs.N:
        raise FloatingPointError("eigenfunction value has a non-negligible imaginary part")
    val = val.real
    return float(val) if val.ndim == 0 else val


def disk_kernel(s) -> np.ndarray | float:
    """``D(s) = (1/pi) * integral over the unit disk of e(<v, y>) dy``, ``|v| = s``.

    Equals ``2 J_1(2 pi s) / (2 pi s)``. A short Taylor series is used below
    ``2 pi s = 1e-3`` so that ``D(0) = 1`` exactly.
    """
    s = np.asarray(s, dtype=float)
    t = 2 * np.pi * s
    small = t < 1e-3
    tt = np.where(small, 1.0, t)
    q = t * t / 4
    series = 1 - q / 2 + q * q / 12
    out = np.where(small, series, 2 * special.j1(tt) / tt)
    return float(out) if out.ndim == 0 else out


def mass_closed_form(coeffs: CoefficientVector, x, r: float) -> np.ndarray | float:
    """``M_f(x, r)`` from the difference-grouped kernel expansion, O(#differences)."""
    if r <= 0:
        raise ValueError("r must be positive")
    d, w = coeffs.difference_table
    c = w * disk_kernel(r * np.hypot(d[:, 0], d[:, 1]))
    x = np.asarray(x, dtype=float)
    phase = 2 * np.pi * (x @ d.T.astype(float))
    val = np.cos(phase) @ c.real - np.sin(phase) @ c.imag
    val = np.where((val < 0) & (val > -1e-9), 0.0, val)
    return float(val) if val.ndim == 0 else val


def _default_nodes(R: float) -> tuple[int, int]:
    return int(2 * math.pi * R) + 32, 2 * (int(4 * math.pi * R) + 32)


def mass_quadrature(coeffs: CoefficientVector, x, r: float, n_radial: int | None = None,
                    n_angular: int | None = None) -> float:
    """``(1/(pi r^2)) * integral over B(x, r) of |f|^2`` by polar quadrature.

    Gauss-Legendre in the radius and the periodic trapezoid rule in the
    angle. Node counts default to values that grow with ``r sqrt(E)``.
    """
    dr, da = _default_nodes(r * math.sqrt(coeffs.E))
    n_radial = dr if n_radial is None else n_radial
    n_angular = da if n_angular is None else n_angular
    if n_radial < 8 or n_angular < 8:
        raise ValueError("need at least 8 nodes in each direction")
    rho, wr = np.polynomial.legendre.leggauss(n_radial)
    rho, wr = 0.5 * (rho + 1), 0.5 * wr
    phi = 2 * np.pi * np.arange(n_angular) / n_angular
    y = np.stack(
        [np.outer(rho, np.cos(phi)), np.outer(rho, np.sin(phi))], axis=-1
    ).reshape(-1, 2)
    pts = np.asarray(x, dtype=float) + r * y
    phase = 2 * np.pi * (pts @ coeffs.lattice.points.T.astype(float))
    f = np.exp(1j * phase) @ coeffs.a
    vals = (np.abs(f) ** 2).reshape(n_radial, n_angular)
    integral = np.sum(wr * rho * vals.sum(axis=1)) * (2 * np.pi / n_angular)
    return float(integral / np.pi)


def mass_samples(coeffs: CoefficientVector, R: float, n_centers: int, seed: int,
                 workers: int | None = None):
    """Uniform centers (per-index streams) and their masses at ``r = R/sqrt(E)``."""
    if R <= 1:
        raise ValueError("R must exceed 1")
    if n_centers < 1:
        raise ValueError("n_centers must be >= 1")
    r = R / math.sqrt(coeffs.E)
    centers = _rng.uniform_centers(seed, n_centers, workers)
    coeffs.difference_table  # build once before threads share it

    def block(b, start, stop):
        return np.atleast_1d(mass_closed_form(coeffs, centers[start:stop], r))

    values = _rng.block_map(block, n_centers, workers)
    return centers, values


def sample_mass(coeffs: CoefficientVector, R: float, n_centers: int, seed: int,
                workers: int | None = None) -> EmpiricalDistribution:
    _, values = mass_samples(coeffs, R, n_centers, seed, workers)
    return EmpiricalDistribution(
        values,
        {
            "kind": "eigenfunction_mass",
            "E": coeffs.E,
            "N": coeffs.N,
            "model": coeffs.model,
            "R": float(R),
            "seed": int(seed),
            "generator": "SeedSequence/Philox per 256-index block",
        },
    )


def mass_moment(dist: EmpiricalDistribution, order: int) -> float:
    """Centred second moment ``mean((M-1)^2)`` or raw third moment ``mean(M^3)``."""
    if order == 2:
        return float(np.mean((dist.samples - 1.0) ** 2))
    if order == 3:
        return float(np.mean(dist.samples**3))
    raise ValueError("order must be 2 or 3")
