# %% [markdown]
# # Computing in the class-three nilpotent product
#
# Elements are kept in normal form; products are collected generator by
# generator.  This gives an independent check of the phi matrices.

# %%
from capacheck import build, compute_Y, oracle

n, p = 3, 5
x1, x2, x3 = (oracle.generator(n, p, s) for s in (1, 2, 3))
print(x2 * x1)
print(oracle.commutator(x3, x2, x1))
print(oracle.power(x1 * x2, p))

# %% [markdown]
# A Jacobi-type rewrite turns [x3, x2, x1] into basis commutators.

# %%
lhs = oracle.commutator(x3, x2, x1)
rhs = oracle.commutator(x3, x1, x2) * oracle.inverse(oracle.commutator(x2, x1, x3))
print(lhs == rhs)

# %% [markdown]
# Commuting a weight-two element with x_r reproduces the column phi_r(v_ji), and
# the group-level Y_X agrees with the linear-algebra one.

# %%
import random

ps = build(4, 3)
print("phi crosscheck:", oracle.phi_crosscheck(ps))
rng = random.Random(0)
X = oracle.random_subspace(ps.dimV, 3, rng, k=2)
print(oracle.group_level_YX(ps, X) == compute_Y(ps, X))

# %%
for name, ok, detail in oracle.selftest(identity_trials=100, assoc_trials=100):
    print(f"{name:<32} {'PASS' if ok else 'FAIL'} {detail}")
