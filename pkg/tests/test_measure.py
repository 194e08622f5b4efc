import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from planckmass.eigenfunction import generate_coefficients
from planckmass.lattice import enumerate_lattice_points
from planckmass.measure import (
    Density,
    MeasureError,
    SpectralMeasure,
    arc_index,
    arc_partition,
    atomic_measure,
    cilleruelo_measure,
    discretized_measure,
    from_coefficients,
    lebesgue_decompose,
    recompose,
    uniform_measure,
    w1_distance,
)


def lp_w1(a, b, n):
    """Transport LP between two mass vectors on the n-cycle with arc-length cost."""
    idx = np.arange(n)
    d = np.abs(idx[:, None] - idx[None, :]) / n
    cost = np.minimum(d, 1 - d).ravel()
    A = np.zeros((2 * n, n * n))
    for i in range(n):
        A[i, i * n:(i + 1) * n] = 1
        A[n + i, i::n] = 1
    res = linprog(cost, A_eq=A, b_eq=np.concatenate([a, b]), bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def symmetric_grid_mass(rng, n):
    half = rng.random(n // 2) * (rng.random(n // 2) < 0.5)
    half[0] += 0.1
    m = np.concatenate([half, half])
    return m / m.sum()


def grid_measure(mass, n):
    keep = mass > 0
    return atomic_measure(np.arange(n)[keep] / n, mass[keep] / mass[keep].sum())


def test_uniform_and_cilleruelo():
    u = uniform_measure()
    assert u.atomic_weight == 0 and u.continuous_weight == 1
    c = cilleruelo_measure()
    assert c.n_atoms == 4
    np.testing.assert_allclose(c.unit_vectors(), [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)
    assert set(c.representatives().tolist()) == {0, 1}


def test_validation_errors():
    with pytest.raises(MeasureError):
        atomic_measure([0.1], [1.0])  # no antipode
    with pytest.raises(MeasureError):
        atomic_measure([0.0, 0.5], [0.3, 0.3])
    with pytest.raises(MeasureError):
        atomic_measure([0.0, 0.5], [0.4, 0.6])
    with pytest.raises(MeasureError):
        SpectralMeasure([], [], atomic_weight=0.0, continuous_weight=1.0)
    with pytest.raises(MeasureError):
        Density("piecewise", (0.0, 0.3, 1.0), (0.5, 0.5))  # not half-turn symmetric
    with pytest.raises(MeasureError):
        Density("vonmises")


def test_atoms_merge():
    mu = atomic_measure([0.0, 1e-14, 0.5, 0.5 - 1e-14], [0.25] * 4)
    assert mu.n_atoms == 2
    np.testing.assert_allclose(mu.masses, [0.5, 0.5])


def test_json_roundtrip():
    dens = Density("piecewise", (0.0, 0.25, 0.5, 0.75, 1.0), (0.1, 0.4, 0.1, 0.4))
    mu = SpectralMeasure([0.0, 0.5], [0.5, 0.5], atomic_weight=0.3, continuous_weight=0.7, density=dens)
    back = SpectralMeasure.from_json(mu.to_json())
    assert back.to_dict() == mu.to_dict()
    assert w1_distance(mu, back) == 0


def test_decompose_recompose():
    mu = SpectralMeasure([0.1, 0.6], [0.5, 0.5], atomic_weight=0.25, continuous_weight=0.75,
                         density=Density("uniform"))
    alpha, mu_a, beta, mu_b = lebesgue_decompose(mu)
    assert (alpha, beta) == (0.25, 0.75)
    assert mu_a.is_atomic and mu_b.continuous_weight == 1
    assert recompose(alpha, mu_a, beta, mu_b).to_dict() == mu.to_dict()
    a2, ma2, b2, mb2 = lebesgue_decompose(cilleruelo_measure())
    assert b2 == 0 and mb2.is_empty


def test_from_coefficients():
    lat = enumerate_lattice_points(25)
    mu = from_coefficients(generate_coefficients(lat, "flat"))
    assert mu.n_atoms == 12
    np.testing.assert_allclose(mu.masses, 1 / 12)


def test_w1_closed_forms():
    u = uniform_measure()
    assert w1_distance(u, u) == 0
    # a pair of antipodal atoms against uniform: each point moves on average 1/8
    assert w1_distance(atomic_measure([0, 0.5], [0.5, 0.5]), u) == pytest.approx(1 / 8, abs=1e-14)
    # four atoms: mass within 1/8 of each atom, mean distance 1/16
    assert w1_distance(cilleruelo_measure(), u) == pytest.approx(1 / 16, abs=1e-14)
    a = atomic_measure([0, 0.5], [0.5, 0.5])
    b = atomic_measure([0.1, 0.6], [0.5, 0.5])
    assert w1_distance(a, b) == pytest.approx(0.1, abs=1e-14)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_w1_matches_transport_lp(seed):
    n = 24
    rng = np.random.default_rng(seed)
    a, b = symmetric_grid_mass(rng, n), symmetric_grid_mass(rng, n)
    got = w1_distance(grid_measure(a, n), grid_measure(b, n))
    assert got == pytest.approx(lp_w1(a, b, n), abs=1e-9)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_w1_metric_properties(seed):
    rng = np.random.default_rng(seed)
    n = 20
    mus = [grid_measure(symmetric_grid_mass(rng, n), n) for _ in range(3)]
    d01, d12, d02 = w1_distance(mus[0], mus[1]), w1_distance(mus[1], mus[2]), w1_distance(mus[0], mus[2])
    assert d01 == pytest.approx(w1_distance(mus[1], mus[0]), abs=1e-12)
    assert d02 <= d01 + d12 + 1e-12
    assert 0 <= d01 <= 0.5


def test_w1_piecewise_density_against_lp():
    # fine grid discretisation of a piecewise density converges to the exact value
    dens = Density("piecewise", (0.0, 0.25, 0.5, 0.75, 1.0), (0.35, 0.15, 0.35, 0.15))
    mu = SpectralMeasure([], [], atomic_weight=0.0, continuous_weight=1.0, density=dens)
    nu = cilleruelo_measure()
    exact = w1_distance(mu, nu)
    n = 200
    cells = (np.arange(n) + 0.5) / n
    a = np.diff(dens.cdf(np.arange(n + 1) / n))
    b = np.zeros(n)
    # atoms sit on cell boundaries; split them between the neighbouring cells
    for t in nu.angles:
        j = int(round(t * n))
        b[j % n] += 0.125
        b[(j - 1) % n] += 0.125
    approx = lp_w1(a, b, n)
    assert exact == pytest.approx(approx, abs=2 / n)
    assert cells.size == n


def test_arc_index_boundaries():
    K = 4
    # boundaries go to the lower arc: theta = k/2K belongs to arc k
    assert arc_index([0.0], K)[0] == 0
    assert arc_index([1 / 8], K)[0] == 1
    assert arc_index([1 / 8 + 1e-6], K)[0] == 2
    assert arc_index([0.5], K)[0] == 4
    assert arc_index([0.5 + 1e-6], K)[0] == -3
    ks = arc_index(np.linspace(0, 1, 1001, endpoint=False), K)
    assert ks.min() == -K + 1 and ks.max() == K


def test_arc_partition_invariants():
    lat = enumerate_lattice_points(5525)
    co = generate_coefficients(lat, "random_sphere", seed=3)
    mu = from_coefficients(co)
    for K in (2, 8, 32):
        part = arc_partition(mu, lat, K, K**-2)
        assert part.kept_mass + part.discarded_mass == pytest.approx(1, abs=1e-12)
        assert all(a.mass >= K**-2 for a in part.kept_arcs)
        members = sorted(i for a in part.kept_arcs for i in a.members)
        assert len(members) == len(set(members))
        for arc in part.kept_arcs:
            other = part.arc(part.antipodal_k(arc.k))
            assert other.mass == pytest.approx(arc.mass, abs=1e-12)


def test_discretized_measure_bound():
    lat = enumerate_lattice_points(5525)
    for seed in range(5):
        co = generate_coefficients(lat, "random_sphere", seed=seed)
        mu = from_coefficients(co)
        for K in (4, 16, 64):
            part = arc_partition(mu, lat, K, 0.5 / K)
            d = w1_distance(mu, discretized_measure(part))
            assert d <= 1 / (4 * K) + part.discarded_mass / 2 + 1e-12


def test_arc_partition_rejects():
    lat = enumerate_lattice_points(25)
    with pytest.raises(MeasureError):
        arc_partition(uniform_measure(), lat, 4, 0.1)
    with pytest.raises(ValueError):
        arc_partition(cilleruelo_measure(), lat, 0, 0.1)
