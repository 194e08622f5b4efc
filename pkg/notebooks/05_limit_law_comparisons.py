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
# # Comparing mass laws
#
# Two comparisons: the eigenfunction mass law against the Gaussian ball-mass
# law with the same spectral measure, and the Gaussian ball mass against
# its large-$R$ limit $\alpha W(\mu_A) + \beta$.

# %%
import warnings

from planckmass.compare import HypothesisWarning, theorem1_compare, theorem2_compare
from planckmass.eigenfunction import generate_coefficients
from planckmass.lattice import enumerate_lattice_points
from planckmass.measure import Density, SpectralMeasure

# %% [markdown]
# At $N = 32$ the two laws differ in variance: $|a_\xi|^2 = 1/N$ is fixed
# for the eigenfunction, while the Gaussian diagonal fluctuates with
# variance about $2/N$.

# %%
co = generate_coefficients(enumerate_lattice_points(1105), "flat")
with warnings.catch_warnings():
    warnings.simplefilter("ignore", HypothesisWarning)
    rep = theorem1_compare(co, 5.0, 10_000, seed=0)
print("KS", rep.ks, "mean gap", rep.mean_gap, "variances", rep.left["var"], rep.right["var"])

# %%
mu = SpectralMeasure([0.0, 0.5], [0.5, 0.5], atomic_weight=0.5, continuous_weight=0.5, density=Density("uniform"))
for r in theorem2_compare(mu, [5.0, 20.0, 80.0], 5000, seed=0, m=1024):
    print(f"R = {r.extra['R']:5.1f}  KS {r.ks:.4f}  var {r.extra['left_var']:.4f} "
          f"target {r.extra['target_var_closed_form']:.4f}")
