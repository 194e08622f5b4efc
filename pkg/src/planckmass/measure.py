"""Probability measures on the unit circle.

The circle is parameterised by angles in turns, ``theta in [0, 1)``, with
point ``(cos 2 pi theta, sin 2 pi theta)``. A measure is a weighted sum of an
atomic probability measure and a continuous probability density; the
continuous part is restricted to the uniform and piecewise-constant
families so that transport distances stay exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Density",
    "SpectralMeasure",
    "ArcPartition",
    "Arc",
    "MeasureError",
    "uniform_measure",
    "atomic_measure",
    "cilleruelo_measure",
    "from_coefficients",
    "lebesgue_decompose",
    "recompose",
    "arc_partition",
    "arc_index",
    "discretized_measure",
    "w1_distance",
]

MASS_TOL = 1e-12
ANGLE_TOL = 1e-12


class MeasureError(ValueError):
    pass


def _circ_dist(a, b):
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b), 1.0))
    return np.minimum(d, 1.0 - d)


@dataclass(frozen=True)
class Density:
    """Probability density on [0, 1): uniform, or constant on given arcs.

    ``edges`` runs from 0 to 1 and ``masses[i]`` is the probability of
    ``[edges[i], edges[i+1])``.
    """

    family: str = "uniform"
    edges: tuple = (0.0, 1.0)
    masses: tuple = (1.0,)

    def __post_init__(self):
        if self.family not in ("uniform", "piecewise"):
            raise MeasureError(f"unsupported density family {self.family!r}")
        if self.family == "uniform":
            object.__setattr__(self, "edges", (0.0, 1.0))
            object.__setattr__(self, "masses", (1.0,))
        edges = tuple(float(e) for e in self.edges)
        masses = tuple(float(m) for m in self.masses)
        if len(edges) != len(masses) + 1 or edges[0] != 0.0 or edges[-1] != 1.0:
            raise MeasureError("edges must run from 0 to 1 with one more entry than masses")
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise MeasureError("edges must be strictly increasing")
        if any(m < 0 for m in masses) or abs(sum(masses) - 1.0) > MASS_TOL * len(masses):
            raise MeasureError("piece masses must be nonnegative and sum to 1")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "masses", masses)
        if not self._is_symmetric():
            raise MeasureError("density is not invariant under theta -> theta + 1/2")

    def cdf(self, theta):
        """Mass of [0, theta] for theta in [0, 1]."""
        return np.interp(theta, self.edges, np.concatenate([[0.0], np.cumsum(self.masses)]))

    def pdf(self, theta):
        theta = np.mod(theta, 1.0)
        e = np.asarray(self.edges)
        i = np.clip(np.searchsorted(e, theta, side="right") - 1, 0, len(self.masses) - 1)
        return np.asarray(self.masses)[i] / np.diff(e)[i]

    def quantile(self, p):
        cum = np.concatenate([[0.0], np.cumsum(self.masses)])
        return np.interp(p, cum, self.edges)

    def _is_symmetric(self) -> bool:
        probe = np.unique(np.mod(np.concatenate([self.edges, np.add(self.edges, 0.5)]), 1.0))
        probe = probe[probe <= 0.5]
        lhs = self.cdf(probe + 0.5) - self.cdf(0.5)
        return bool(np.all(np.abs(lhs - self.cdf(probe)) <= 1e-12))

    def to_dict(self) -> dict:
        if self.family == "uniform":
            return {"family": "uniform", "params": {}}
        return {"family": "piecewise", "params": {"edges": list(self.edges), "masses": list(self.masses)}}

    @classmethod
    def from_dict(cls, d: dict) -> "Density":
        params = d.get("params", {}) or {}
        if d["family"] == "uniform":
            return cls("uniform")
        return cls(d["family"], tuple(params["edges"]), tuple(params["masses"]))


@dataclass(frozen=True)
class SpectralMeasure:
    """``atomic_weight * (sum of atoms) + continuous_weight * density``.

    Atom masses are those of the normalised atomic part, so they sum to 1
    whenever ``atomic_weight > 0``. A measure with both weights zero is the
    empty measure returned for missing parts of a decomposition.
    """

    angles: np.ndarray = field(repr=False)
    masses: np.ndarray = field(repr=False)
    atomic_weight: float = 1.0
    continuous_weight: float = 0.0
    density: Density | None = None

    def __post_init__(self):
        angles = np.mod(np.asarray(self.angles, dtype=float).ravel(), 1.0)
        masses = np.asarray(self.masses, dtype=float).ravel()
        if angles.shape != masses.shape:
            raise MeasureError("angles and masses differ in length")
        if np.any(masses <= 0):
            raise MeasureError("atom masses must be positive")
        angles, masses = _merge_atoms(angles, masses)
        angles.setflags(write=False)
        masses.setflags(write=False)
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "atomic_weight", float(self.atomic_weight))
        object.__setattr__(self, "continuous_weight", float(self.continuous_weight))
        self._validate()

    def _validate(self):
        a, b = self.atomic_weight, self.continuous_weight
        if a < 0 or b < 0:
            raise MeasureError("weights must be nonnegative")
        if self.is_empty:
            return
        if abs(a + b - 1.0) > MASS_TOL:
            raise MeasureError(f"atomic and continuous weights sum to {a + b}, not 1")
        if a > 0 and abs(self.masses.sum() - 1.0) > MASS_TOL * max(1, self.masses.size):
            raise MeasureError("atom masses must sum to 1")
        if a == 0 and self.masses.size:
            raise MeasureError("atoms given with zero atomic weight")
        if b > 0 and self.density is None:
            raise MeasureError("continuous weight given without a density")
        if self.masses.size:
            partner = np.mod(self.angles + 0.5, 1.0)
            d = _circ_dist(partner[:, None], self.angles[None, :])
            j = np.argmin(d, axis=1)
            if np.any(d[np.arange(d.shape[0]), j] > ANGLE_TOL) or np.any(
                np.abs(self.masses[j] - self.masses) > MASS_TOL
            ):
                raise MeasureError("atoms are not antipode-symmetric")

    @property
    def is_empty(self) -> bool:
        return self.atomic_weight == 0 and self.continuous_weight == 0 and self.masses.size == 0

    @property
    def is_atomic(self) -> bool:
        return self.continuous_weight == 0 and not self.is_empty

    @property
    def n_atoms(self) -> int:
        return int(self.masses.size)

    def unit_vectors(self) -> np.ndarray:
        t = 2 * np.pi * self.angles
        return np.stack([np.cos(t), np.sin(t)], axis=-1)

    def antipode_index(self) -> np.ndarray:
        partner = np.mod(self.angles + 0.5, 1.0)
        return np.argmin(_circ_dist(partner[:, None], self.angles[None, :]), axis=1)

    def representatives(self) -> np.ndarray:
        """One atom index per antipodal pair (the one with angle < 1/2)."""
        return np.flatnonzero(self.angles < 0.5 - ANGLE_TOL / 2)

    def cdf(self, theta) -> np.ndarray:
        """Total mass of [0, theta] for theta in [0, 1]."""
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        if self.masses.size:
            order = np.argsort(self.angles)
            cum = np.cumsum(self.masses[order])
            k = np.searchsorted(self.angles[order], theta, side="right")
            out = out + self.atomic_weight * np.where(k > 0, cum[np.maximum(k - 1, 0)], 0.0)
        if self.continuous_weight > 0:
            out = out + self.continuous_weight * self.density.cdf(theta)
        return out

    def to_dict(self) -> dict:
        return {
            "atomic_weight": self.atomic_weight,
            "atoms": [{"angle": float(t), "mass": float(m)} for t, m in zip(self.angles, self.masses)],
            "continuous_weight": self.continuous_weight,
            "density": None if self.density is None else self.density.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "SpectralMeasure":
        atoms = d.get("atoms", []) or []
        dens = d.get("density")
        return cls(
            [a["angle"] for a in atoms],
            [a["mass"] for a in atoms],
            atomic_weight=d.get("atomic_weight", 1.0 if atoms else 0.0),
            continuous_weight=d.get("continuous_weight", 0.0),
            density=None if dens is None else Density.from_dict(dens),
        )

    @classmethod
    def from_json(cls, text: str) -> "SpectralMeasure":
        return cls.from_dict(json.loads(text))

    @classmethod
    def empty(cls) -> "SpectralMeasure":
        return cls([], [], atomic_weight=0.0, continuous_weight=0.0)


def _merge_atoms(angles, masses):
    if angles.size == 0:
        return angles.copy(), masses.copy()
    order = np.argsort(angles, kind="stable")
    angles, masses = angles[order], masses[order]
    out_a, out_m = [angles[0]], [masses[0]]
    for t, m in zip(angles[1:], masses[1:]):
        if t - out_a[-1] <= ANGLE_TOL:
            out_m[-1] += m
        else:
            out_a.append(t)
            out_m.append(m)
    # wrap-around: an atom just below 1 coincides with one at 0
    if len(out_a) > 1 and (1.0 - out_a[-1]) + out_a[0] <= ANGLE_TOL:
        out_m[0] += out_m.pop()
        out_a.pop()
    return np.array(out_a), np.array(out_m)


def uniform_measure() -> SpectralMeasure:
    return SpectralMeasure([], [], atomic_weight=0.0, continuous_weight=1.0, density=Density("uniform"))


def atomic_measure(angles, masses) -> SpectralMeasure:
    return SpectralMeasure(angles, masses, atomic_weight=1.0, continuous_weight=0.0)


def cilleruelo_measure() -> SpectralMeasure:
    """Equal atoms at the four coordinate directions (1,0), (0,1), (-1,0), (0,-1)."""
    return atomic_measure([0.0, 0.25, 0.5, 0.75], [0.25] * 4)


def from_coefficients(coeffs, tol: float = 1e-10) -> SpectralMeasure:
    """Atomic measure with mass ``|a_xi|^2`` at the direction of each frequency."""
    a = np.asarray(coeffs.a, dtype=complex)
    lattice = coeffs.lattice
    w = np.abs(a) ** 2
    if abs(w.sum() - 1.0) > tol:
        raise MeasureError(f"coefficients are not normalised: sum |a|^2 = {w.sum()}")
    if np.max(np.abs(a[lattice.negation_index()] - np.conj(a)), initial=0.0) > tol:
        raise MeasureError("coefficients are not conjugate-symmetric")
    keep = w > 0
    return atomic_measure(lattice.angles()[keep], w[keep] / w.sum())


def lebesgue_decompose(mu: SpectralMeasure):
    """Split ``mu`` into ``(alpha, mu_A, beta, mu_B)`` with normalised parts."""
    empty = SpectralMeasure.empty()
    alpha, beta = mu.atomic_weight, mu.continuous_weight
    mu_a = atomic_measure(mu.angles, mu.masses) if alpha > 0 else empty
    mu_b = (
        SpectralMeasure([], [], atomic_weight=0.0, continuous_weight=1.0, density=mu.density)
        if beta > 0
        else empty
    )
    return alpha, mu_a, beta, mu_b


def recompose(alpha: float, mu_a: SpectralMeasure, beta: float, mu_b: SpectralMeasure) -> SpectralMeasure:
    return SpectralMeasure(
        mu_a.angles,
        mu_a.masses,
        atomic_weight=alpha,
        continuous_weight=beta,
        density=mu_b.density if beta > 0 else None,
    )


@dataclass(frozen=True)
class Arc:
    k: int
    midpoint: float
    mass: float
    members: tuple

    @property
    def midpoint_vector(self) -> np.ndarray:
        return np.array([math.cos(2 * math.pi * self.midpoint), math.sin(2 * math.pi * self.midpoint)])


@dataclass(frozen=True)
class ArcPartition:
    """Arcs ``((k-1)/2K, k/2K]``, ``-K+1 <= k <= K``, of mass at least ``delta``."""

    K: int
    delta: float
    kept_arcs: tuple
    discarded_mass: float
    lattice: object = field(default=None, repr=False, compare=False)
    point_masses: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def kept_mass(self) -> float:
        return float(sum(arc.mass for arc in self.kept_arcs))

    def arc(self, k: int) -> Arc:
        for arc in self.kept_arcs:
            if arc.k == k:
                return arc
        raise KeyError(k)

    def antipodal_k(self, k: int) -> int:
        return k - self.K if k > 0 else k + self.K

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "delta": self.delta,
            "discarded_mass": self.discarded_mass,
            "kept_arcs": [
                {"k": a.k, "midpoint": a.midpoint, "mass": a.mass, "n_frequencies": len(a.members)}
                for a in self.kept_arcs
            ],
        }


def arc_index(angles, K: int) -> np.ndarray:
    """Index k of the half-open arc ((k-1)/2K, k/2K] containing each angle.

    Angles are first mapped to (-1/2, 1/2]. Values within 1e-9 of an arc
    endpoint are snapped to it, so an exact boundary goes to the lower arc.
    """
    t = np.mod(np.asarray(angles, dtype=float), 1.0)
    t = np.where(t > 0.5, t - 1.0, t)
    u = t * 2 * K
    r = np.round(u)
    k = np.where(np.abs(u - r) < 1e-9, r, np.ceil(u)).astype(np.int64)
    return np.where(k <= -K, k + 2 * K, k)


def arc_partition(mu_f: SpectralMeasure, lattice, K: int, delta: float) -> ArcPartition:
    """Bin the frequencies of ``lattice`` into arcs and keep the heavy ones."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if not mu_f.is_atomic:
        raise MeasureError("arc_partition needs a purely atomic measure")
    theta = lattice.angles()
    d = _circ_dist(theta[:, None], mu_f.angles[None, :])
    j = np.argmin(d, axis=1)
    has = d[np.arange(theta.size), j] <= 1e-9
    point_mass = np.where(has, mu_f.masses[j], 0.0)
    if abs(point_mass.sum() - 1.0) > 1e-9:
        raise MeasureError("measure atoms do not sit on the lattice directions")
    ks = arc_index(theta, K)
    kept, discarded = [], 0.0
    for k in range(-K + 1, K + 1):
        members = np.flatnonzero(ks == k)
        mass = float(point_mass[members].sum())
        if members.size and mass >= delta:
            kept.append(Arc(k, float(np.mod((k - 0.5) / (2 * K), 1.0)), mass, tuple(members.tolist())))
        else:
            discarded += mass
    return ArcPartition(K, float(delta), tuple(kept), discarded, lattice, point_mass)


def discretized_measure(partition: ArcPartition) -> SpectralMeasure:
    """Atoms at the kept arc midpoints, masses renormalised over kept arcs."""
    if not partition.kept_arcs:
        raise MeasureError("no arc passes the mass threshold")
    masses = np.array([a.mass for a in partition.kept_arcs])
    return atomic_measure([a.midpoint for a in partition.kept_arcs], masses / masses.sum())


def _segments(mu: SpectralMeasure, nu: SpectralMeasure):
    """Breakpoints and per-segment (start value, slope) of cdf_mu - cdf_nu."""
    pts = [np.array([0.0, 1.0]), mu.angles, nu.angles]
    for m in (mu, nu):
        if m.continuous_weight > 0:
            pts.append(np.asarray(m.density.edges))
    b = np.unique(np.concatenate(pts))
    mids = 0.5 * (b[:-1] + b[1:])
    start = mu.cdf(b[:-1]) - nu.cdf(b[:-1])
    slope = np.zeros_like(mids)
    for m, sign in ((mu, 1.0), (nu, -1.0)):
        if m.continuous_weight > 0:
            slope += sign * m.continuous_weight * m.density.pdf(mids)
    return np.diff(b), start, slope


def w1_distance(mu: SpectralMeasure, nu: SpectralMeasure) -> float:
    """Wasserstein-1 distance on the circle of circumference 1.

    Uses ``W1 = min_c integral |F_mu - F_nu - c|``; the difference of the two
    CDFs is piecewise linear, so the optimal shift (its Lebesgue median) and
    the integral are both computed exactly.
    """
    for m in (mu, nu):
        if m.density is not None and m.density.family not in ("uniform", "piecewise"):
            raise MeasureError("unsupported density family")
    length, g0, slope = _segments(mu, nu)
    g1 = g0 + slope * length
    lo, hi = np.minimum(g0, g1), np.maximum(g0, g1)

    flat = hi - lo <= 0
    span = np.where(flat, 1.0, hi - lo)

    def below(c, strict=False):
        step = (lo < c) if strict else (lo <= c)
        frac = np.where(flat, step.astype(float), np.clip((c - lo) / span, 0, 1))
        return float(np.sum(length * frac))

    # below() is right-continuous, linear between knots, with jumps at flat pieces
    knots = np.unique(np.concatenate([lo, hi]))
    vals = np.array([below(c) for c in knots])
    i = int(np.searchsorted(vals, 0.5))
    if i == 0:
        c = knots[0]
    elif i >= knots.size:
        c = knots[-1]
    else:
        c0, c1, v0 = knots[i - 1], knots[i], vals[i - 1]
        v1 = below(c1, strict=True)
        c = c1 if v1 <= 0.5 or v1 == v0 else c0 + (0.5 - v0) * (c1 - c0) / (v1 - v0)
    a, b = g0 - c, g1 - c
    same = a * b >= 0
    denom = np.where(same, 1.0, np.abs(a) + np.abs(b))
    cost = np.where(same, np.abs(a + b) / 2, (a * a + b * b) / (2 * denom))
    return float(max(0.0, np.sum(length * cost)))
