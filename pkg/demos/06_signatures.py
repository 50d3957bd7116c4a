"""
Which ambient signatures can occur
==================================

The ambient metric is blockdiag(eta, mu) with mu built from eta, c^{rs}
and the extension block. Its signature depends only on how many positive
directions each piece has.
"""

from kpotential import admissible_signatures

# %%
# A 3-dimensional potential submanifold (k = 1, p = 0) with eta of
# signature (2, 1) lives in a space of signature 0 or 2.
print(sorted(admissible_signatures(3, 2, 1, 0)))

# %%
# More copies and extra normals widen the range.
for n, s, k, p in [(3, 3, 2, 0), (3, 2, 2, 1), (4, 2, 3, 2)]:
    print(f"N={n} s={s} k={k} p={p}: {sorted(admissible_signatures(n, s, k, p))}")
