"""
The N = 3 family and its hydrodynamic form
==========================================

With unit e1 and antidiagonal metric, the potential is fixed up to one
function f(u2, u3), and WDVV becomes a single third-order equation for f.
Its third derivatives (a, b, c) satisfy a first-order quasilinear system.
"""

import numpy as np

from kpotential import BUILTIN_F, Polynomial, abc_from_f, eqf_residual, shdt_residual, weingarten_n3

# %%
# All three polynomial solutions satisfy the equation exactly.
rng = np.random.default_rng(1)
for name in ("quintic_n3", "septic_n3", "deg11_n3"):
    f = BUILTIN_F[name]
    worst = max(abs(eqf_residual(f, p)) + np.abs(shdt_residual(f, p)).max() for p in rng.uniform(-1, 1, (50, 2)))
    print(f"{name:11s} f = {f}\n            worst residual {worst}")

# %%
# A non-solution: f = (u2)^3 u3. The defect of the equation is -36 (u2)^2.
f = Polynomial.monomial(1, (3, 1))
print("eqf at (1,1):", eqf_residual(f, (1, 1)))
print("shdt at (1,1):", shdt_residual(f, (1, 1)))

# %%
# The multiplication operators depend only on (a, b, c).
abc = abc_from_f(BUILTIN_F["quintic_n3"], (1, 2))
print("(a, b, c) =", abc.as_array())
for i, w in enumerate(weingarten_n3(abc), start=1):
    print(f"w{i} =\n{w}")
