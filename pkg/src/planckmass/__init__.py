"""Planck-scale mass distribution of toral Laplace eigenfunctions.

Exact lattice-point combinatorics, closed-form ball masses for
eigenfunctions and Gaussian random waves, the atomic / continuous split of
spectral measures, and the arc-aggregated surrogate used to compare the
two.
"""

__version__ = "0.1.0"

from .lattice import (  # noqa: E402
    LatticePointSet,
    CorrelationReport,
    enumerate_lattice_points,
    count_correlations,
    brute_force_correlations,
    audit_a1,
)
from .measure import (  # noqa: E402
    SpectralMeasure,
    Density,
    uniform_measure,
    atomic_measure,
    cilleruelo_measure,
    from_coefficients,
    lebesgue_decompose,
    arc_partition,
    discretized_measure,
    w1_distance,
)
from .eigenfunction import (  # noqa: E402
    CoefficientVector,
    generate_coefficients,
    check_flatness,
    evaluate,
    disk_kernel,
    mass_closed_form,
    mass_quadrature,
    sample_mass,
    mass_moment,
)
from .field import (  # noqa: E402
    FieldSpec,
    sample_atomic_field,
    discretize_continuous,
    covariance,
    ball_mass,
    sample_ball_mass,
    sample_w,
    w_moments,
    ergodic_average,
)
from .stats import EmpiricalDistribution, ecdf, ks_distance, gamma_cdf  # noqa: E402
from .compare import theorem1_compare, theorem2_compare, cilleruelo_adjudication  # noqa: E402
