# %% [markdown]
# # Concatenated construction
#
# Stacking K scaled copies of a binary base code, with block weights growing
# like powers of u, lets a richer alphabet hold more subjects per test. The
# decoder peels the blocks off from the heaviest one down.

# %%
import itertools
import time

from sqgt import CodeMatrix, concat_construct, concat_decode, syndrome

# %%
cc = concat_construct(CodeMatrix.identity(5), q=4, eta=1, u=2)
print("K =", cc.K, "N =", cc.code.N)
print(cc.code.matrix)

# %% [markdown]
# Round-trip every set of at most two positives.

# %%
start = time.perf_counter()
sets = [s for k in range(3) for s in itertools.combinations(range(cc.code.N), k)]
errors = sum(concat_decode(syndrome(cc.code, s, cc.quantizer), cc).positives != s for s in sets)
print(f"{len(sets)} sets, {errors} errors, {time.perf_counter() - start:.3f} s")

# %% [markdown]
# With step 2 the block weights are 2, 6, 14 and so on. An alphabet of size 9
# allows entries up to 8, so only the first two blocks fit and K = 2.

# %%
cc9 = concat_construct(CodeMatrix.identity(4), q=9, eta=2, u=2)
print("K =", cc9.K, "block weights:", [int(cc9.block(j).max()) for j in range(1, cc9.K + 1)])
print(concat_decode(syndrome(cc9.code, (0, 6), cc9.quantizer), cc9))
