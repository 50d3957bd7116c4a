"""
Gauss and Ricci equations of k-potential submanifolds
=====================================================

The second forms of a k-potential submanifold are k copies of the Hessian
slices of the potential, plus p flat directions. For this Gram ansatz the
Ricci equations are the WDVV equations, and the Gauss tensor is a multiple
of a WDVV-type tensor, with factor sum(c^{rs}).
"""

import numpy as np

from kpotential import (GramSpec, Polynomial, builtin, gauss_from_ricci_check, gram_assemble,
                        invert, ricci_residual, second_forms, third_tensor, wdvv_residual)

phi, eta = builtin("septic_n3")
bad = phi + Polynomial.monomial(1, (0, 4, 0))
u = np.array([0.3, -0.4, 0.8])

# %%
# Gram matrix for k = 2 with crs = diag(1, -1) and one extra normal.
spec = GramSpec(k=2, p=1, crs=np.diag([1.0, -1.0]))
print(gram_assemble(spec, eta))

# %%
# Ricci residual versus WDVV residual: the same numbers, on and off shell.
for label, pot in (("solution", phi), ("perturbed", bad)):
    forms = second_forms(third_tensor(pot, u), spec)
    print(f"{label:9s} ricci {ricci_residual(forms, invert(eta)).max_abs:.3e}  "
          f"wdvv {wdvv_residual(pot, eta, u).max_abs:.3e}")

# %%
# The Gauss identity holds even off shell. With sum(c) = 0 the Gauss
# equations are satisfied automatically while Ricci still fails.
for crs in (np.diag([1.0, 2.0]), np.diag([1.0, -1.0])):
    check = gauss_from_ricci_check(bad, eta, GramSpec(2, 0, crs), u)
    print(f"sum(c) = {check.crs_sum:+.0f}: identity {'holds' if check.passed else 'fails'}, "
          f"gauss {check.gauss.max_abs:.3e}, ricci {check.ricci.max_abs:.3e}")
