# %% [markdown]
# # Random codes and the critical rate
#
# A uniformly random code is disjunct with high probability when log2(N)/n
# stays below a critical rate set by how many rows of a (u+1)-column submatrix
# fail to certify a column.

# %%
import math

from sqgt.randomdesign import acceptable_row_count, critical_rate, estimate_disjunct_probability, union_bound_failure

# %%
for q, eta, u in [(2, 1, 1), (3, 1, 1), (4, 1, 2), (4, 2, 2)]:
    rep = critical_rate(q, eta, u)
    print(f"q={q} eta={eta} u={u}: A={acceptable_row_count(q, eta, u)} "
          f"of {q ** (u + 1)}, asymptotic rate {rep.asymptotic_rate:.4f} bits/test")

# %% [markdown]
# Binary OR channel, 512 subjects: 60 tests sit well below the critical rate,
# 10 tests sit far above it.

# %%
N = 512
for n in (10, 60):
    bound = union_bound_failure(n, N, 2, 1, 1)
    frac = estimate_disjunct_probability(n, N, 2, 1, 1, trials=100, seed=0)
    print(f"n={n}: rate {math.log2(N) / n:.3f}, failure bound {min(bound, 1):.4f}, disjunct fraction {frac:.2f}")

# %% [markdown]
# Finite-length critical rate with a 5% failure budget.

# %%
rep = critical_rate(2, 1, 1, n=60, epsilon=0.05)
print(rep.to_dict(), "max subjects:", math.floor(rep.max_subjects()))
