import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from planckmass.lattice import (
    CapExceededError,
    LatticePointSet,
    audit_a1,
    brute_force_correlations,
    count_correlations,
    diagonal_main_term,
    enumerate_lattice_points,
)


def naive_points(E):
    return sorted((a, b) for a in range(-E, E + 1) for b in range(-E, E + 1) if a * a + b * b == E)


def test_enumerate_small():
    assert enumerate_lattice_points(2).points.tolist() == [[-1, -1], [-1, 1], [1, -1], [1, 1]]
    assert enumerate_lattice_points(3).N == 0
    pts = {tuple(p) for p in enumerate_lattice_points(25).points.tolist()}
    expected = {(5, 0), (-5, 0), (0, 5), (0, -5)} | {(s * 3, t * 4) for s in (1, -1) for t in (1, -1)} | {
        (s * 4, t * 3) for s in (1, -1) for t in (1, -1)
    }
    assert pts == expected


def test_enumerate_1105():
    lat = enumerate_lattice_points(1105)
    assert lat.N == 32 == len(naive_points(1105))


def test_enumerate_rejects_nonpositive():
    with pytest.raises(ValueError):
        enumerate_lattice_points(0)


@given(st.integers(min_value=1, max_value=400))
@settings(max_examples=60, deadline=None)
def test_enumeration_matches_naive_scan(E):
    lat = enumerate_lattice_points(E)
    assert [tuple(p) for p in lat.points.tolist()] == naive_points(E)
    # negation closure
    s = {tuple(p) for p in lat.points.tolist()}
    assert all((-a, -b) in s for a, b in s)


def test_enumeration_deterministic():
    a = enumerate_lattice_points(5525).points
    b = enumerate_lattice_points(5525).points
    assert np.array_equal(a, b)


def test_representatives_and_negation():
    lat = enumerate_lattice_points(65)
    neg = lat.negation_index()
    assert np.array_equal(lat.points[neg], -lat.points)
    reps = lat.representatives()
    assert reps.size * 2 == lat.N
    assert set(reps) | set(neg[reps]) == set(range(lat.N))


@pytest.mark.parametrize("l,factor", [(1, 1), (2, 3), (3, 15)])
def test_diagonal_formula(l, factor):
    for N in (4, 12, 32, 100):
        assert diagonal_main_term(N, l) == factor * N**l
        assert diagonal_main_term(N, l) == math.factorial(2 * l) // (2**l * math.factorial(l)) * N**l


def test_l3_diagonal_for_N12():
    assert diagonal_main_term(12, 3) == 25920


# exact counts frozen from a direct product over all 2l-tuples
@pytest.mark.parametrize(
    "E,l,total",
    [(2, 1, 4), (2, 2, 36), (2, 3, 400), (5, 2, 168), (5, 3, 5840), (25, 2, 396), (25, 3, 21360), (65, 2, 720)],
)
def test_count_correlations_frozen(E, l, total):
    rep = count_correlations(enumerate_lattice_points(E), l)
    assert rep.total_count == total
    assert rep.residual == total - rep.diagonal_main_term


def test_brute_force_oracle_matches():
    for E in (2, 25):
        lat = enumerate_lattice_points(E)
        for l in (1, 2):
            assert brute_force_correlations(lat, l) == count_correlations(lat, l).total_count
    assert brute_force_correlations(enumerate_lattice_points(2), 1) == 4


def test_l1_is_N():
    for E in (1, 2, 25, 65, 1105, 5525):
        lat = enumerate_lattice_points(E)
        assert count_correlations(lat, 1).total_count == lat.N


def test_gamma_exponent():
    rep = count_correlations(enumerate_lattice_points(25), 2)
    assert rep.residual == -36
    assert rep.gamma_exponent == pytest.approx(math.log(36) / (2 * math.log(12)))
    assert count_correlations(enumerate_lattice_points(25), 1).gamma_exponent is None


def test_l3_cap():
    fake = LatticePointSet(10**12, np.zeros((600, 2), dtype=np.int64))
    with pytest.raises(CapExceededError):
        count_correlations(fake, 3)
    with pytest.raises(ValueError):
        count_correlations(enumerate_lattice_points(25), 4)


def test_brute_force_guard():
    lat = enumerate_lattice_points(1105)
    with pytest.raises(CapExceededError):
        brute_force_correlations(lat, 3)


def test_audit_zero_residual_always_passes():
    # E = 1 has the four unit vectors; residual for l = 1 is zero
    rep = audit_a1(enumerate_lattice_points(1), gamma=0.1, c=1e-9, l_max=1)
    assert rep["pass"]


def test_audit_records_residuals():
    rep = audit_a1(enumerate_lattice_points(65), gamma=0.4, c=1.0, l_max=2)
    row = rep["per_l"][1]
    assert row["residual"] == 720 - 3 * 16**2
    assert row["min_c"] == pytest.approx(48 / 16**0.8)
    assert row["pass"] is False
    assert audit_a1(enumerate_lattice_points(65), 0.4, row["min_c"] * 1.0001, 2)["per_l"][1]["pass"]


def test_audit_input_validation():
    lat = enumerate_lattice_points(25)
    with pytest.raises(ValueError):
        audit_a1(lat, gamma=0.6, c=1)
    with pytest.raises(ValueError):
        audit_a1(lat, gamma=0.2, c=0)
