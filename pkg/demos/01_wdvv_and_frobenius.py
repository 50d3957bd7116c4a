"""
WDVV potentials and their Frobenius algebras
============================================

A polynomial potential together with a flat metric defines, at every point,
a commutative algebra on the tangent space. The algebra is associative
exactly where the WDVV equations hold.
"""

import numpy as np

from kpotential import (Polynomial, associativity_residual, builtin, find_unit, frobenius_algebra,
                        invariance_residual, multiply, wdvv_residual)

# %%
# The quintic solution with the antidiagonal metric.
phi, eta = builtin("quintic_n3")
print("Phi =", phi)
print("eta =\n", eta)

# %%
# WDVV holds at any point, up to rounding.
rng = np.random.default_rng(0)
for u in rng.uniform(-1, 1, (3, 3)):
    res = wdvv_residual(phi, eta, u)
    print(f"u = {np.round(u, 3)}  wdvv residual = {res.max_abs:.1e}")

# %%
# The algebra at one point: e1 is the unit and the form eta is invariant.
sc = frobenius_algebra(phi, eta, (0.2, 0.5, 1.3))
print("unit:", np.round(find_unit(sc), 12) + 0.0)
print("e2 o e3 =", multiply(sc, [0, 1, 0], [0, 0, 1]))
print("invariance:", invariance_residual(eta, sc), " associativity:", associativity_residual(sc))

# %%
# Adding (u2)^4 breaks WDVV, and with it associativity.
bad = phi + Polynomial.monomial(1, (0, 4, 0))
res = wdvv_residual(bad, eta, (0, 1, 2))
print(f"perturbed wdvv residual {res.max_abs:g} at indices {res.indices}")
print("perturbed associativity:", associativity_residual(frobenius_algebra(bad, eta, (0, 1, 2))))
