"""
Flatness of the realization system
==================================

The frame of a k-potential submanifold obeys a linear system with
connection matrices A_i(u). It is consistent exactly when the curvature
of A vanishes, which again is WDVV. A two-parameter deformation of the
same system stays flat.
"""

import numpy as np

from kpotential import Connection, GramSpec, Polynomial, builtin, spectral_problem

phi, eta = builtin("deg11_n3")
bad = phi + Polynomial.monomial(1, (0, 4, 0))
spec = GramSpec(k=1, p=1)
rng = np.random.default_rng(2)
pts = rng.uniform(-1, 1, (20, 3))

# %%
# The connection is skew for the ambient metric, and flat for a solution.
good = Connection(phi, eta, spec)
print("skewness:", max(good.skewness(u) for u in pts))
print("curvature (solution):", max(np.abs(good.curvature(u)).max() for u in pts))
print("curvature (perturbed, smallest over points):", min(np.abs(Connection(bad, eta, spec).curvature(u)).max() for u in pts))

# %%
# The deformed problem is flat for every (lambda, rho) when phi solves WDVV.
for lam, rho in ((0.7, -1.3), (2.0, 0.5), (-3.0, 4.0)):
    worst = max(spectral_problem(phi, eta, spec, lam, rho, u).residual.max_abs for u in pts[:5])
    print(f"lambda = {lam:+.1f}, rho = {rho:+.1f}: residual {worst:.1e}")
