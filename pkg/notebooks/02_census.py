# %% [markdown]
# # Counting capable groups on few generators
#
# Every subspace X of V gives a group.  For three generators every one of them
# is capable; for four generators over F_3 a small number are not.

# %%
from capacheck import census, count_subspaces, dimY_profile

for p in (3, 5):
    rep = census(3, p)
    print(f"n=3 p={p}: {rep.total} subspaces, {rep.capable} capable")

# %% [markdown]
# The top dimensions at n = 4 hold all the non-capable examples over F_3.  A
# full run over all 56632 subspaces takes under a minute (`capacheck census --n 4 --p 3`).

# %%
rep = census(4, 3, dims=[4, 5, 6])
for k, s in sorted(rep.per_dim.items()):
    print(f"dim X = {k}: {s.total} total ({count_subspaces(6, 3, k)} expected), {s.noncapable} non-capable")
print("audit violations:", {r: c for r, c in rep.violations.items() if c} or "none")

# %% [markdown]
# dim Y_X is n * dim X for lines and planes, but not always beyond that.

# %%
for k in (1, 2, 3):
    print(k, dict(sorted(dimY_profile(4, 3, k).items())))
