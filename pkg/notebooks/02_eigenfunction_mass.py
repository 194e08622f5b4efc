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
# # Planck-scale mass of a toral eigenfunction
#
# $M_f(x, r)$ is the average of $|f|^2$ over the disk of radius
# $r = R/\sqrt{E}$ around $x$. The closed form sums over frequency
# differences weighted by the disk kernel $D(s) = 2J_1(2\pi s)/(2\pi s)$.

# %%
import math

import matplotlib.pyplot as plt
import numpy as np

from planckmass.eigenfunction import (
    generate_coefficients,
    mass_closed_form,
    mass_moment,
    mass_quadrature,
    sample_mass,
)
from planckmass.lattice import enumerate_lattice_points

# %% [markdown]
# ## Closed form against polar quadrature

# %%
co = generate_coefficients(enumerate_lattice_points(1105), "flat")
r = 5 / math.sqrt(1105)
for x in np.random.default_rng(0).random((3, 2)):
    print(mass_closed_form(co, x, r), mass_quadrature(co, x, r))

# %% [markdown]
# ## The law of the mass over random centers
#
# Its mean is exactly 1; the spread shrinks as $R$ grows.

# %%
fig, ax = plt.subplots()
for R in (2.0, 5.0, 10.0):
    d = sample_mass(co, R, 10_000, seed=1)
    print(f"R = {R:4.1f}: mean {d.mean():.4f}  var {d.var():.5f}  third moment {mass_moment(d, 3):.4f}")
    ax.step(d.samples, np.arange(1, d.n + 1) / d.n, label=f"R = {R:g}")
ax.set_xlabel("M_f(x, R/sqrt(E))")
ax.legend()
plt.show()
