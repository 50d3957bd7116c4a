"""
Building the submanifold
========================

Integrating the frame system over a grid gives sample points r(u) of a
submanifold whose induced metric is eta and whose second forms are the
prescribed Hessian slices. We check both, plus independence of the path.
"""

import numpy as np

from kpotential import (Grid, GramSpec, Polynomial, builtin, diagonalizing_transform, path_independence,
                        realize_grid, verify_first_form, verify_second_forms)

phi, eta = builtin("quintic_n3")
spec = GramSpec(k=1, p=1)
grid = Grid.box(-0.2, 0.2, 5, 3)

# %%
# Realize on a 5 x 5 x 5 grid with a small integration step.
real = realize_grid(phi, eta, spec, grid, h=0.005)
u, r = real.rows()
print("nodes:", len(u), " ambient dimension:", r.shape[1])
print("largest frame Gram drift:", real.max_drift)
print("first form:", max(verify_first_form(real.state(i), eta) for i in np.ndindex(5, 5, 5)))

# %%
# Second forms from central differences of r, split into the potential
# part and the flat extra direction.
check = verify_second_forms(real, phi, spec)
print(f"second forms: potential part {check.potential_part:.2e}, extra part {check.extra_part:.2e}")

# %%
# Two staircase paths to the same corner agree for a solution, not otherwise.
corner = np.full(3, 0.2)
for label, pot in (("solution", phi), ("perturbed", phi + Polynomial.monomial(1, (0, 4, 0)))):
    print(f"{label:9s} path dependence {path_independence(pot, eta, spec, np.zeros(3), corner, 0.01):.2e}")

# %%
# In coordinates where the ambient metric is diag(+1, ..., -1, ...).
z = r @ diagonalizing_transform(real.metric).T
print("first diagonal-coordinate rows:\n", np.round(z[:3], 4))
