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
# # Gaussian fields with a given spectral measure
#
# A field with atomic spectral measure has conjugate-paired complex Gaussian
# amplitudes, one per atom. As $R \to \infty$ its ball mass tends to
# $W = \sum |X_j|^2$; continuous parts average out to a constant.

# %%
import numpy as np

from planckmass.field import FieldSpec, sample_ball_mass, sample_w, w_moments
from planckmass.measure import atomic_measure, cilleruelo_measure, uniform_measure
from planckmass.stats import gamma_cdf, ks_to_cdf

# %% [markdown]
# ## W for a single antipodal pair and for the four coordinate directions

# %%
for name, mu in (("pair", atomic_measure([0.0, 0.5], [0.5, 0.5])), ("four atoms", cilleruelo_measure())):
    w = sample_w(mu, 100_000, seed=0)
    print(name, "empirical", round(w.mean(), 4), round(w.var(), 4), "closed form", w_moments(mu))

# %% [markdown]
# For four equal atoms $W$ is a sum of two independent exponentials of mean
# 1/2, i.e. Gamma(2, 1/2), with variance 1/2. The unit exponential
# ($\chi^2(2)/2$) has variance 1 and does not fit.

# %%
d = sample_ball_mass(FieldSpec(cilleruelo_measure(), 4), 10_000, seed=0, R=50.0)
print("KS vs Gamma(2, 1/2):", ks_to_cdf(d, lambda t: gamma_cdf(2, 0.5, t)))
print("KS vs Gamma(1, 1):  ", ks_to_cdf(d, lambda t: gamma_cdf(1, 1, t)))

# %% [markdown]
# ## No atoms: the variance decays, but only with enough discretisation atoms
#
# Any field with $m$ equal atoms keeps a variance floor of $2/m$, so
# $m$ must grow with $R$ to see the decay.

# %%
for m in (256, 4096):
    spec = FieldSpec(uniform_measure(), m)
    row = [sample_ball_mass(spec, 2000, seed=1, R=R).var() for R in (25.0, 50.0, 100.0)]
    print(f"m = {m:5d}:", np.round(row, 5), "floor", 2 / m)
