# %% [markdown]
# # Building groups from pieces
#
# Products of two groups, adding a central cyclic factor, and splitting the
# central factors back off.

# %%
import numpy as np

from capacheck import (
    build,
    build_extraspecial,
    coordinate_subspace,
    coproduct,
    extend_with_central,
    is_capable,
    reduce_special,
    to_subspace,
)
from capacheck.enumeration import sample_subspaces

p = 3
rng = np.random.default_rng(1)
Xa = sample_subspaces(1, p, 1, 1, rng)[0]
Xb = sample_subspaces(3, p, 1, 1, rng)[0]
X = coproduct(Xa, Xb, 2, 3)
ps = build(5, p)
print([ps.format_v(v) for v in X.basis], is_capable(ps, X).capable)

# %% [markdown]
# A central cyclic factor changes nothing.

# %%
es = to_subspace(build_extraspecial(p))
big = extend_with_central(es)
print(is_capable(build(4, p), es).capable, is_capable(build(5, p), big).capable)

# %% [markdown]
# reduce_special finds the central generators and strips them.

# %%
red = reduce_special(build(5, p), big)
print(f"m = {red.m}, r = {red.r}, dim X'' = {red.X_reduced.dim}, capable = {red.capable}")
print(red.change_of_basis)

# %%
X = coordinate_subspace(3, p, [(3, 1), (3, 2)])
red = reduce_special(build(3, p), X)
print(red.m, red.r, red.X_reduced.dim, red.capable)
