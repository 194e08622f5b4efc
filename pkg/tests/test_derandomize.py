import math

import numpy as np
import pytest

from planckmass.derandomize import (
    DerandomizationConfig,
    b_coefficients,
    gaussianity_report,
    moment_identity,
    partition_for,
    phi_eval,
    sup_difference,
    sup_error_bar,
    window,
)
from planckmass.eigenfunction import evaluate, generate_coefficients
from planckmass.lattice import count_correlations, enumerate_lattice_points

LAT = enumerate_lattice_points(1105)
FLAT = generate_coefficients(LAT)


def test_config_defaults_and_validation():
    c = DerandomizationConfig(K=8)
    assert c.delta == 1 / 64 and c.grid_step == pytest.approx(1 / 50)
    assert c.flags  # 1/64 < 1/16
    assert not DerandomizationConfig(K=8, delta=0.1).flags
    with pytest.raises(ValueError):
        DerandomizationConfig(K=0)
    with pytest.raises(ValueError):
        DerandomizationConfig(K=4, R=1.0)
    with pytest.raises(ValueError):
        DerandomizationConfig(K=4, grid_step=0.5)


def test_window_is_rescaled_eigenfunction():
    x = np.array([0.1, 0.2])
    y = np.array([0.3, -0.4])
    assert window(FLAT, x, 5.0, y) == pytest.approx(evaluate(FLAT, x + 5 / math.sqrt(1105) * y))


def test_b_coefficients_recover_eigenfunction_at_zero():
    part = partition_for(FLAT, 8, 1e-6)
    assert part.discarded_mass == 0
    x = np.array([0.37, 0.81])
    b = b_coefficients(FLAT, x, part)
    total = sum(math.sqrt(part.arc(k).mass) * b[k] for k in b)
    assert total.real == pytest.approx(evaluate(FLAT, x), abs=1e-12)
    # at y = 0 the surrogate equals f(x) whenever nothing is discarded
    assert phi_eval(FLAT, x, part, 5.0, np.zeros(2)) == pytest.approx(evaluate(FLAT, x), abs=1e-12)


def test_b_antipodal_conjugate():
    part = partition_for(FLAT, 16, 16**-2)
    x = np.random.default_rng(0).random((10, 2))
    b = b_coefficients(FLAT, x, part)
    for k in b:
        np.testing.assert_allclose(b[part.antipodal_k(k)], np.conj(b[k]), atol=1e-12)


def test_sup_difference_trivial_bound():
    cfg = DerandomizationConfig(K=64, R=3.0)
    x = np.array([0.2, 0.6])
    d = sup_difference(FLAT, x, cfg)
    assert 0 <= d <= 2 * np.sum(np.abs(FLAT.a))
    assert sup_error_bar(FLAT, cfg) > 0


def test_sup_difference_shrinks_with_K():
    x = np.random.default_rng(1).random((20, 2))
    med = {}
    for K in (16, 64):
        cfg = DerandomizationConfig(K=K, R=5.0)
        part = partition_for(FLAT, K, cfg.delta)
        med[K] = np.median([sup_difference(FLAT, xi, cfg, part) for xi in x])
    assert med[64] <= med[16]


def test_grid_sup_is_consistent_with_dense_probe():
    cfg = DerandomizationConfig(K=16, R=5.0)
    part = partition_for(FLAT, 16, cfg.delta)
    x = np.array([0.11, 0.73])
    grid_sup = sup_difference(FLAT, x, cfg, part)
    finer = sup_difference(FLAT, x, DerandomizationConfig(K=16, R=5.0, grid_step=cfg.grid_step / 4), part)
    assert grid_sup <= finer + 1e-12
    assert finer - grid_sup <= sup_error_bar(FLAT, cfg)


@pytest.mark.parametrize("E", [25, 65])
@pytest.mark.parametrize("l", [1, 2, 3])
def test_moment_identity(E, l):
    lat = enumerate_lattice_points(E)
    need = 2 * l * int(np.max(np.abs(lat.points)))
    grid_n = 1 << need.bit_length()
    rep = moment_identity(lat, l, grid_n)
    assert rep["count"] == count_correlations(lat, l).total_count
    assert rep["relative_gap"] <= 1e-9


def test_moment_identity_rejects_coarse_grid():
    lat = enumerate_lattice_points(25)
    with pytest.raises(ValueError):
        moment_identity(lat, 2, 16)
    with pytest.raises(ValueError):
        moment_identity(lat, 2, 48)


def test_gaussianity_report_structure():
    lat = enumerate_lattice_points(5525)
    co = generate_coefficients(lat)
    part = partition_for(co, 8, 1 / 64)
    rep = gaussianity_report(co, part, 2000, seed=0)
    assert len(rep["per_arc"]) == len(part.kept_arcs)
    for row in rep["per_arc"]:
        assert row["second_moment"] == pytest.approx(1, abs=4 * row["second_moment_se"] + 1e-12)
        assert abs(row["mean_re"]) < 0.1
    assert rep["max_pairwise_correlation"] < 0.15
    with pytest.raises(ValueError):
        gaussianity_report(co, part, 10, seed=0)


def test_gaussianity_report_worker_invariance():
    part = partition_for(FLAT, 8, 1 / 64)
    a = gaussianity_report(FLAT, part, 1000, seed=3, workers=1)
    b = gaussianity_report(FLAT, part, 1000, seed=3, workers=2)
    assert a == b


def test_surrogate_energy_is_kept_mass_on_torus_average():
    # integral over the square of |phi_x|^2 is w^H G w with G the sinc Gram matrix;
    # pointwise it differs from 1, averaged over an exact torus grid it equals the kept mass
    part = partition_for(FLAT, 8, 1 / 64)
    R = 5.0
    zeta = np.stack([a.midpoint_vector for a in part.kept_arcs])
    dz = R * (zeta[:, None, :] - zeta[None, :, :])
    G = np.sinc(dz[..., 0]) * np.sinc(dz[..., 1])
    n = 128  # exceeds twice the largest frequency coordinate 33
    g = np.arange(n) / n
    x = np.stack(np.meshgrid(g, g, indexing="ij"), -1).reshape(-1, 2)
    b = np.stack([b_coefficients(FLAT, x, part)[a.k] for a in part.kept_arcs], axis=-1)
    w = np.sqrt([a.mass for a in part.kept_arcs]) * b
    energy = np.einsum("nk,kl,nl->n", w, G, np.conj(w)).real
    assert np.ptp(energy) > 1e-3
    assert energy.mean() == pytest.approx(part.kept_mass, abs=1e-12)
