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
# # Lattice points and spectral correlations
#
# Frequencies of a toral eigenfunction with eigenvalue $4\pi^2 E$ are the
# integer points on the circle $|\xi|^2 = E$. Gaussian behaviour of the
# eigenfunction hinges on how few zero-sum $2l$-tuples exist beyond the
# pairings.

# %%
import numpy as np

from planckmass.lattice import audit_a1, count_correlations, enumerate_lattice_points

# %%
for E in (25, 65, 325, 1105, 5525):
    lat = enumerate_lattice_points(E)
    print(f"E = {E:5d}: N = {lat.N}")

# %% [markdown]
# ## Zero-sum tuples against the diagonal count
#
# The diagonal term counts tuples that cancel in pairs: $N$, $3N^2$ and
# $15N^3$ for $l = 1, 2, 3$ (the last one up to lower-order corrections).

# %%
for E in (25, 65, 325, 1105):
    lat = enumerate_lattice_points(E)
    for l in (2, 3):
        rep = count_correlations(lat, l)
        print(f"E={E:5d} l={l} total={rep.total_count:>10d} diagonal={rep.diagonal_main_term:>10d} "
              f"residual={rep.residual:>8d} gamma={rep.gamma_exponent}")

# %% [markdown]
# ## Auditing the correlation hypothesis
#
# The audit needs an explicit constant: it reports the smallest $c$ for
# which $|\text{residual}| \le c N^{l\gamma}$ holds at each $l$.

# %%
audit = audit_a1(enumerate_lattice_points(1105), gamma=0.45, c=1.0)
for row in audit["per_l"]:
    print(row)
