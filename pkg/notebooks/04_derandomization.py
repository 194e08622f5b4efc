# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # De-randomisation: arcs, coefficients and the surrogate field
#
# Group frequencies into $2K$ arcs, keep those of mass at least
# $\delta$, and replace each arc by one plane wave in the direction of its
# midpoint. The arc coefficients $b_k(x)$, seen as functions of a uniform
# torus point $x$, have unit second moment.

# %%
import numpy as np

from planckmass.derandomize import (
    DerandomizationConfig,
    gaussianity_report,
    moment_identity,
    partition_for,
    sup_difference,
    sup_error_bar,
)
from planckmass.eigenfunction import generate_coefficients
from planckmass.lattice import enumerate_lattice_points

# %%
lat = enumerate_lattice_points(5525)
co = generate_coefficients(lat, "flat")
part = partition_for(co, 8, 1 / 64)
rep = gaussianity_report(co, part, 5000, seed=0)
for row in rep["per_arc"][:6]:
    print({k: row[k] for k in ("k", "n_frequencies", "second_moment", "ks_real_part", "gaussian_like")})
print("max pairwise correlation", rep["max_pairwise_correlation"])

# %% [markdown]
# ## Surrogate error on the window $[-1/2, 1/2]^2$
#
# The grid maximum is a lower bound for the supremum; the error bar bounds
# how far below it can sit.

# %%
x = np.random.default_rng(2).random((30, 2))
for K in (8, 16, 32, 64):
    cfg = DerandomizationConfig(K=K, R=5.0)
    p = partition_for(co, K, cfg.delta)
    sups = [sup_difference(co, xi, cfg, p) for xi in x]
    print(f"K = {K:3d}: median sup {np.median(sups):.3f}  grid error bar {sup_error_bar(co, cfg):.3f}")

# %% [markdown]
# ## Moments of the exponential sum count zero-sum tuples

# %%
print(moment_identity(enumerate_lattice_points(325), 3, 256))
