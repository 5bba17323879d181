# %% [markdown]
# # Capacity lower bound
#
# alpha(P_T, quantizer) = min_i I_i / i lower-bounds the number of subjects
# identified per test. We search over input distributions and quantizers for
# q = 3, Q = 3 and write the curve as CSV.

# %%
import csv
import sys

from sqgt import Quantizer, alpha, capacity_search

# %% [markdown]
# Sanity anchor: one positive, binary amounts, binary outcomes gives 1 bit.

# %%
print(capacity_search(1, 2, 2).alpha)

# %% [markdown]
# The published optima for m = 2..5 against our search.

# %%
published = {
    2: ([0.33, 0.34, 0.33], [[0, 1], [2], [3, 4]]),
    3: ([0.43, 0.46, 0.11], [[0, 1], [2], [3, 4, 5, 6]]),
    4: ([0.18, 0.64, 0.18], [[0, 1, 2, 3], [4], [5, 6, 7, 8]]),
    5: ([0.15, 0.70, 0.15], [[0, 1, 2, 3, 4], [5], [6, 7, 8, 9, 10]]),
}
rows = []
for m, (P, parts) in published.items():
    ref = alpha(P, m, Quantizer.from_partition(parts)).alpha
    found = capacity_search(m, 3, 3, grid_step=0.01)
    rows.append((m, ref, found.alpha, found.partition))
    print(f"m={m}: published {ref:.5f}  search {found.alpha:.5f}  {found.partition}")

# %% [markdown]
# The curve alpha versus m, in the same layout as the CLI's capacity CSV.

# %%
writer = csv.writer(sys.stdout)
writer.writerow(["m", "alpha_published", "alpha_search", "partition"])
for m, ref, val, part in rows:
    writer.writerow([m, f"{ref:.6f}", f"{val:.6f}", part])
