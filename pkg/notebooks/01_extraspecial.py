# %% [markdown]
# # An extra-special group of order p^5
#
# Four generators, with the commutator relations below.  We encode the group as
# a subspace X of V and compute Z_X.

# %%
import numpy as np

from capacheck import build, build_extraspecial, is_capable, linalg, to_subspace

p = 3
pres = build_extraspecial(p)
ps = build(4, p)
X = to_subspace(pres)
print("relators:", pres.relators)
print("X =", [ps.format_v(v) for v in X.basis])

# %% [markdown]
# V has dimension 6 and X has dimension 5, so the group fails to be capable
# exactly when Z_X is all of V.

# %%
rep = is_capable(ps, X)
print(f"dim X = {rep.dimX}, dim Y = {rep.dimY}, dim Z = {rep.dimZ}, capable = {rep.capable}")
print("witness:", [ps.format_v(w) for w in rep.witnesses])

# %% [markdown]
# It is enough to see that v41 lies in Z_X, that is, each phi_k(v41) = w_41k is
# in Y_X.  Each one is an explicit combination of phi_r applied to vectors of X.

# %%
v = ps.v
f = lambda r, x: ps.phi_r(r) @ (x % p)
a, b = v(3, 1) - v(3, 2), v(3, 1) - v(4, 1)
combos = {
    1: f(1, v(4, 2) + a - b) + f(2, b) - f(3, v(2, 1)) + f(4, v(2, 1)),
    2: f(1, v(4, 2)) + f(4, v(2, 1)),
    3: f(1, v(4, 3)) - f(2, v(4, 3)) + f(3, v(4, 2)) + f(4, a),
    4: f(3, v(4, 2)) - f(2, v(4, 3)) + f(4, a - b),
}
for k, vec in combos.items():
    print(f"w_41{k}:", np.array_equal(vec % p, ps.w(4, 1, k)), linalg.membership(rep.Y, ps.w(4, 1, k)))

# %% [markdown]
# The same holds for other odd primes.

# %%
for q in (5, 7, 11):
    r = is_capable(build(4, q), to_subspace(build_extraspecial(q)))
    print(q, r.capable, r.dimZ)
