"""Lattice points on circles and exact counts of vanishing 2l-sums.

The frequency set of a toral eigenfunction with eigenvalue parameter E is
the set of integer vectors of squared length E. Gaussian behaviour of the
eigenfunction is governed by how many ordered 2l-tuples of such vectors sum
to zero, compared to the number produced by pairwise cancellation alone.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LatticePointSet",
    "CorrelationReport",
    "CapExceededError",
    "enumerate_lattice_points",
    "diagonal_main_term",
    "count_correlations",
    "brute_force_correlations",
    "audit_a1",
    "L3_CAP",
    "BRUTE_FORCE_GUARD",
]

#: Largest multiplicity accepted by :func:`count_correlations` for l = 3.
L3_CAP = 512
#: Largest number of ordered tuples the brute-force oracle will visit.
BRUTE_FORCE_GUARD = 10**9


class CapExceededError(ValueError):
    """Raised when an exact count would not fit the documented size caps."""


@dataclass(frozen=True)
class LatticePointSet:
    """All integer vectors of squared length ``E``, lexicographically sorted."""

    E: int
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def N(self) -> int:
        return int(self.points.shape[0])

    def __len__(self) -> int:
        return self.N

    def index_of(self, xi) -> int:
        a, b = int(xi[0]), int(xi[1])
        hits = np.flatnonzero((self.points[:, 0] == a) & (self.points[:, 1] == b))
        if hits.size == 0:
            raise KeyError((a, b))
        return int(hits[0])

    def negation_index(self) -> np.ndarray:
        """Index permutation mapping each point to its negative."""
        order = {tuple(p): i for i, p in enumerate(self.points.tolist())}
        return np.array([order[(-a, -b)] for a, b in self.points.tolist()], dtype=np.int64)

    def representatives(self) -> np.ndarray:
        """One index per antipodal pair: the point with (x > 0) or (x == 0, y > 0)."""
        p = self.points
        mask = (p[:, 0] > 0) | ((p[:, 0] == 0) & (p[:, 1] > 0))
        return np.flatnonzero(mask)

    def unit_vectors(self) -> np.ndarray:
        return self.points / math.sqrt(self.E)

    def angles(self) -> np.ndarray:
        """Angles in turns, in [0, 1)."""
        p = self.points
        theta = np.arctan2(p[:, 1], p[:, 0]) / (2 * np.pi)
        return np.mod(theta, 1.0)

    def to_dict(self) -> dict:
        return {"E": self.E, "N": self.N, "points": self.points.tolist()}


@dataclass(frozen=True)
class CorrelationReport:
    E: int
    N: int
    l: int
    total_count: int
    diagonal_main_term: int
    residual: int
    gamma_exponent: float | None

    def to_dict(self) -> dict:
        return {
            "E": self.E,
            "N": self.N,
            "l": self.l,
            "total_count": self.total_count,
            "diagonal": self.diagonal_main_term,
            "residual": self.residual,
            "gamma_exponent": self.gamma_exponent,
        }


def enumerate_lattice_points(E: int) -> LatticePointSet:
    """Return every ``(a, b)`` in Z^2 with ``a*a + b*b == E``.

    An O(sqrt(E)) scan over ``a`` with an exact integer square-root test.
    Points are deduplicated and sorted lexicographically; the set is empty
    when ``E`` is not a sum of two squares.
    """
    E = int(E)
    if E < 1:
        raise ValueError(f"E must be a positive integer, got {E}")
    pts = set()
    amax = math.isqrt(E)
    for a in range(0, amax + 1):
        rest = E - a * a
        b = math.isqrt(rest)
        if b * b == rest:
            for sa in (a, -a):
                for sb in (b, -b):
                    pts.add((sa, sb))
    return LatticePointSet(E, np.array(sorted(pts), dtype=np.int64).reshape(-1, 2))


def diagonal_main_term(N: int, l: int) -> int:
    """Number of pairings of 2l items times N^l: ``(2l)! / (2^l l!) * N^l``."""
    pairings = math.factorial(2 * l) // (2**l * math.factorial(l))
    return pairings * int(N) ** l


def _encode(vectors: np.ndarray, offset: int, width: int) -> np.ndarray:
    return (vectors[..., 0] + offset) * width + (vectors[..., 1] + offset)


def _lfold_sums(points: np.ndarray, l: int) -> np.ndarray:
    """All N^l ordered l-fold vector sums, shape (N**l, 2)."""
    sums = np.zeros((1, 2), dtype=np.int64)
    for _ in range(l):
        sums = (sums[:, None, :] + points[None, :, :]).reshape(-1, 2)
    return sums


def count_correlations(lattice: LatticePointSet, l: int) -> CorrelationReport:
    """Exact number of ordered 2l-tuples in the set with zero vector sum.

    Builds the table c_l(s) of ordered l-fold sums and returns
    ``sum_s c_l(s) * c_l(-s)``. Exact integer arithmetic throughout.
    """
    if l not in (1, 2, 3):
        raise ValueError(f"l must be 1, 2 or 3, got {l}")
    N = lattice.N
    if N < 1:
        raise ValueError("empty lattice point set")
    if l == 3 and N > L3_CAP:
        raise CapExceededError(
            f"l = 3 needs an N^3 sum table; N = {N} exceeds the cap of {L3_CAP}"
        )
    bound = math.isqrt(lattice.E) * l
    offset, width = bound, 2 * bound + 1
    sums = _lfold_sums(lattice.points, l)
    keys, counts = np.unique(_encode(sums, offset, width), return_counts=True)
    neg_keys = _encode(-np.stack([keys // width - offset, keys % width - offset], axis=-1), offset, width)
    pos = np.searchsorted(keys, neg_keys)
    pos = np.minimum(pos, keys.size - 1)
    matched = keys[pos] == neg_keys
    # the total is at most N^(2l-1); int64 is exact below 2^62
    if N ** (2 * l - 1) < 2**62:
        total = int(np.sum(counts[matched] * counts[pos[matched]]))
    else:
        total = sum(int(a) * int(b) for a, b in zip(counts[matched], counts[pos[matched]]))
    diag = diagonal_main_term(N, l)
    residual = total - diag
    gamma = None
    if residual != 0 and N > 1:
        gamma = math.log(abs(residual)) / (l * math.log(N))
    return CorrelationReport(lattice.E, N, l, total, diag, residual, gamma)


def brute_force_correlations(lattice: LatticePointSet, l: int) -> int:
    """Zero-sum count by visiting every ordered 2l-tuple (oracle).

    The outer 2l - 2 indices are looped explicitly; the last two are checked
    against an N x N table of pair sums.
    """
    N = lattice.N
    if l < 1:
        raise ValueError("l must be >= 1")
    if N ** (2 * l) > BRUTE_FORCE_GUARD:
        raise CapExceededError(f"N^(2l) = {N ** (2 * l)} exceeds the brute-force guard")
    if N == 0:
        return 0
    pts = [tuple(p) for p in lattice.points.tolist()]
    pair = lattice.points[:, None, :] + lattice.points[None, :, :]
    px, py = pair[..., 0], pair[..., 1]
    total = 0
    for prefix in itertools.product(pts, repeat=2 * l - 2):
        sx = sum(p[0] for p in prefix)
        sy = sum(p[1] for p in prefix)
        total += int(np.count_nonzero((px == -sx) & (py == -sy)))
    return total


def audit_a1(lattice: LatticePointSet, gamma: float, c: float, l_max: int = 3) -> dict:
    """Check the spectral-correlation bound ``|residual| <= c * N^(gamma*l)``.

    The constant ``c`` is an explicit input. For every l the report also
    gives the smallest constant that would make that l pass.
    """
    if not 0 < gamma < 0.5:
        raise ValueError("gamma must lie in (0, 1/2)")
    if c <= 0:
        raise ValueError("c must be positive")
    if not 1 <= l_max <= 3:
        raise ValueError("l_max must be 1, 2 or 3")
    N = lattice.N
    if N < 2:
        raise ValueError("audit needs N >= 2")
    rows = []
    for l in range(1, l_max + 1):
        rep = count_correlations(lattice, l)
        scale = N ** (gamma * l)
        rows.append(
            {
                **rep.to_dict(),
                "bound": c * scale,
                "min_c": abs(rep.residual) / scale,
                "pass": abs(rep.residual) <= c * scale,
            }
        )
    return {
        "E": lattice.E,
        "N": N,
        "gamma": gamma,
        "c": c,
        "l_max": l_max,
        "per_l": rows,
        "pass": all(r["pass"] for r in rows),
    }
