# %% [markdown]
# # The semi-quantitative channel
#
# Each test pools a set of subjects and reports the total amount of the
# defective substance only up to a staircase quantizer. Here we build a tiny
# code, simulate a syndrome, and decode it by brute force.

# %%
import numpy as np

from sqgt import CodeMatrix, DesignParams, Quantizer, is_sq_disjunct, naive_decode, syndrome

# %% [markdown]
# A scaled identity code over the alphabet {0, 1, 2, 3}: subject j appears
# only in test j, with amount 3.

# %%
code = CodeMatrix(3 * np.eye(5, dtype=int), q=4)
quant = Quantizer.for_design(1, q=4, u=2)
print(code.matrix)
print("thresholds:", quant.thresholds)

# %% [markdown]
# Quantized outcomes for two positives. With step 1 the quantizer is exact up
# to saturation, so the syndrome lists each positive's amount.

# %%
y = syndrome(code, (1, 4), quant)
print("syndrome:", y)

# %%
report = is_sq_disjunct(code, DesignParams(4, quant.Q, 2), quant)
print("disjunct:", report.is_disjunct)
print(naive_decode(code, y, quant))

# %% [markdown]
# A coarser quantizer (step 2) on a binary code loses every single positive:
# the sums 0 and 1 land in the same level, so no code can be disjunct.

# %%
binary = CodeMatrix.identity(5)
coarse = Quantizer.for_design(2, q=2, u=2)
print(syndrome(binary, (1, 4), coarse))
print(is_sq_disjunct(binary, DesignParams(2, coarse.Q, 2), coarse))
