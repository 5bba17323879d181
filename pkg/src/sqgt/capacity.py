"""Outcome distributions, mutual information and capacity lower bounds.

Sample amounts are drawn i.i.d. from a distribution ``P_T`` over ``[q]``.
With ``m`` positives split into ``i`` "unknown" and ``m - i`` "known" ones,
the relevant information per test is

    I_i = I(t_1; t_2, y) = H(y | t_2) = sum_w P(W_2 = w) H(quantize(W_1 + w))

because ``y`` is a function of both groups and ``t_1`` is independent of
``t_2``.  ``W_1`` and ``W_2`` are the pooled sums of the two groups.  All
information is in bits.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import Quantizer, ValidationError

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class SourceDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 1 or p.size < 2:
            raise ValidationError("P_T must be a vector over at least two symbols")
        if np.any(p < 0):
            raise ValidationError("P_T has negative entries")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValidationError(f"P_T sums to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def q(self) -> int:
        return self.probs.size

    @classmethod
    def bernoulli(cls, p: float) -> "SourceDistribution":
        return cls([1.0 - p, p])


def _probs(P_T) -> np.ndarray:
    if isinstance(P_T, SourceDistribution):
        return P_T.probs
    return SourceDistribution(P_T).probs


@dataclass(frozen=True)
class CapacityPoint:
    m: int
    P_T: np.ndarray
    quantizer: Quantizer
    alpha: float
    per_i: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return len(self.P_T)

    @property
    def partition(self) -> str:
        return self.quantizer.partition_string(self.m * (self.q - 1))

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "alpha_bits": self.alpha,
            "P_T": [float(p) for p in self.P_T],
            "thresholds": list(self.quantizer.thresholds),
            "partition": self.partition,
            "per_i_bits": [float(v) for v in self.per_i],
        }


def entropy(p) -> float:
    """Shannon entropy in bits; zero-probability entries contribute nothing."""
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def pmf_sum(P_T, count: int) -> np.ndarray:
    """PMF of the sum of ``count`` i.i.d. draws from ``P_T``."""
    if count < 0:
        raise ValidationError(f"count must be non-negative, got {count}")
    p = _probs(P_T)
    out = np.array([1.0])
    for _ in range(count):
        out = np.convolve(out, p)
    return out


def outcome_pmf(P_T, m: int, quantizer: Quantizer) -> np.ndarray:
    """Distribution of the test outcome with ``m`` positives present."""
    w = pmf_sum(P_T, m)
    edges = np.concatenate(([0], np.minimum(quantizer.thresholds, w.size), [w.size]))
    cdf = np.concatenate(([0.0], np.cumsum(w)))
    return np.diff(cdf[edges])


def _batched_pmfs(P: np.ndarray, m: int) -> list[np.ndarray]:
    """Row-wise PMFs of 0..m-fold sums for a batch ``P`` of shape (G, q)."""
    G, q = P.shape
    pmfs = [np.ones((G, 1))]
    for c in range(1, m + 1):
        prev = pmfs[-1]
        cur = np.zeros((G, prev.shape[1] + q - 1))
        for a in range(q):
            cur[:, a : a + prev.shape[1]] += prev * P[:, a : a + 1]
        pmfs.append(cur)
    return pmfs


def _xlog2x(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log2(p[pos])
    return out


def _info_batch(pmfs: list[np.ndarray], m: int, i: int, thresholds: tuple[int, ...]) -> np.ndarray:
    """``I_i`` for every row of a batch, given precomputed sum PMFs."""
    w1 = pmfs[i]
    w2 = pmfs[m - i]
    size1 = w1.shape[1]
    cdf = np.concatenate((np.zeros((w1.shape[0], 1)), np.cumsum(w1, axis=1)), axis=1)
    shifts = np.arange(w2.shape[1])[:, None]
    bounds = np.concatenate(([0], thresholds, [np.iinfo(np.int64).max // 2]))
    edges = np.clip(bounds[None, :] - shifts, 0, size1)  # (W2, Q+1)
    probs = np.diff(cdf[:, edges], axis=2)  # (G, W2, Q)
    probs = np.clip(probs, 0.0, None)
    cond_h = -_xlog2x(probs).sum(axis=2)  # (G, W2)
    return (w2 * cond_h).sum(axis=1)


def mutual_info_i(P_T, m: int, i: int, quantizer: Quantizer) -> float:
    """Information one test carries about ``i`` of ``m`` positives, in bits."""
    if not 1 <= i <= m:
        raise ValidationError(f"need 1 <= i <= m, got i={i}, m={m}")
    P = _probs(P_T)[None, :]
    return float(_info_batch(_batched_pmfs(P, m), m, i, quantizer.thresholds)[0])


def _per_i_batch(P: np.ndarray, m: int, thresholds: tuple[int, ...]) -> np.ndarray:
    pmfs = _batched_pmfs(P, m)
    return np.stack([_info_batch(pmfs, m, i, thresholds) for i in range(1, m + 1)], axis=1)


def _alpha_from_per_i(per_i: np.ndarray) -> np.ndarray:
    return (per_i / np.arange(1, per_i.shape[-1] + 1)).min(axis=-1)


def alpha(P_T, m: int, quantizer: Quantizer) -> CapacityPoint:
    """``min_i I_i / i`` at a fixed source distribution and quantizer."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    P = _probs(P_T)
    per_i = _per_i_batch(P[None, :], m, quantizer.thresholds)[0]
    return CapacityPoint(m, P.copy(), quantizer, float(_alpha_from_per_i(per_i)), per_i)


def simplex_grid(q: int, step: float) -> np.ndarray:
    """All distributions over ``q`` symbols with entries on multiples of ``step``."""
    k = round(1.0 / step)
    if k < 1 or abs(k * step - 1.0) > 1e-9:
        raise ValidationError(f"grid step {step} must divide 1")
    rows = []
    for bars in itertools.combinations(range(k + q - 1), q - 1):
        cuts = (-1,) + bars + (k + q - 1,)
        rows.append([cuts[a + 1] - cuts[a] - 1 for a in range(q)])
    return np.array(rows, dtype=float) / k


def quantizer_partitions(max_sum: int, Q: int):
    """Every quantizer splitting ``{0..max_sum}`` into ``Q`` nonempty contiguous
    regions, in lexicographic order of thresholds."""
    if Q < 2:
        raise ValidationError(f"Q must be >= 2, got {Q}")
    if Q > max_sum + 1:
        raise ValidationError(
            f"Q={Q} regions cannot be filled by the {max_sum + 1} attainable sums"
        )
    for th in itertools.combinations(range(1, max_sum + 1), Q - 1):
        yield Quantizer(th)


def _best_partition(P: np.ndarray, m: int, quantizers) -> tuple[float, Quantizer | None]:
    best_val, best_q = -np.inf, None
    for quant in quantizers:
        val = float(_alpha_from_per_i(_per_i_batch(P[None, :], m, quant.thresholds))[0])
        if val > best_val:
            best_val, best_q = val, quant
    return best_val, best_q


def _coordinate_ascent(P: np.ndarray, m: int, quant: Quantizer, value: float, step: float, tol: float):
    q = P.size
    moves = [(a, b) for a in range(q) for b in range(q) if a != b]
    while step >= tol:
        improved = True
        while improved:
            cands = np.repeat(P[None, :], len(moves), axis=0)
            for r, (a, b) in enumerate(moves):
                d = min(step, P[a])
                cands[r, a] -= d
                cands[r, b] += d
            vals = _alpha_from_per_i(_per_i_batch(cands, m, quant.thresholds))
            r = int(np.argmax(vals))
            improved = vals[r] > value + 1e-13
            if improved:
                P = cands[r] / cands[r].sum()
                value = float(vals[r])
        step /= 2
    return P, value


def capacity_search(
    m: int,
    q: int,
    Q: int,
    grid_step: float = 0.01,
    restrict_eta: Quantizer | None = None,
    refine: bool = True,
    refine_tol: float = 1e-4,
) -> CapacityPoint:
    """Lower bound on capacity by searching quantizers and source distributions.

    Every contiguous ``Q``-region quantizer of ``{0, ..., m(q-1)}`` (or only
    ``restrict_eta``) is evaluated on a simplex grid of resolution
    ``grid_step``; the best point is then polished by coordinate ascent with
    step halving down to ``refine_tol``.  Ties keep the first quantizer in
    lexicographic threshold order and the first grid point.
    """
    if m < 1 or q < 2:
        raise ValidationError("need m >= 1 and q >= 2")
    if not 0 < grid_step < 1:
        raise ValidationError(f"grid_step must lie in (0, 1), got {grid_step}")
    max_sum = m * (q - 1)
    if restrict_eta is not None:
        if restrict_eta.Q != Q:
            raise ValidationError(f"restricted quantizer has Q={restrict_eta.Q}, expected {Q}")
        quantizers = [restrict_eta]
    else:
        quantizers = list(quantizer_partitions(max_sum, Q))

    grid = simplex_grid(q, grid_step)
    pmfs = _batched_pmfs(grid, m)
    best_val, best_P, best_q = -np.inf, None, None
    for quant in quantizers:
        per_i = np.stack([_info_batch(pmfs, m, i, quant.thresholds) for i in range(1, m + 1)], axis=1)
        vals = _alpha_from_per_i(per_i)
        g = int(np.argmax(vals))
        if vals[g] > best_val:
            best_val, best_P, best_q = float(vals[g]), grid[g], quant

    if refine:
        P, val, quant = best_P, best_val, best_q
        for _ in range(20):
            P, val = _coordinate_ascent(P, m, quant, val, grid_step, refine_tol)
            other_val, other_q = _best_partition(P, m, quantizers)
            if other_val <= val + 1e-13:
                break
            val, quant = other_val, other_q
        if val > best_val:
            best_val, best_P, best_q = val, P, quant

    return alpha(SourceDistribution(best_P / best_P.sum()), m, best_q)


def log2_comb(n: int, k: int) -> float:
    """``log2(C(n, k))`` without forming the binomial; ``-inf`` when it is zero."""
    if k < 0 or k > n:
        return -math.inf
    k = min(k, n - k)
    if k <= 256:
        return sum(math.log2(n - j) for j in range(k)) - math.lgamma(k + 1) / _LN2
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / _LN2


def _test_bound(numerators, per_i) -> float:
    best = -math.inf
    for num, info in zip(numerators, per_i):
        if num == -math.inf:
            continue
        if info <= 1e-15:
            term = 0.0 if num == 0 else math.inf
        else:
            term = num / info
        best = max(best, term)
    return best


def sufficient_tests(N: int, m: int, P_T, quantizer: Quantizer) -> float:
    """Tests beyond which the average error vanishes:
    ``max_i log2(C(N-m, i) C(m, i)) / I_i``.  ``inf`` when some needed I_i is 0."""
    if not 1 <= m <= N:
        raise ValidationError(f"need 1 <= m <= N, got m={m}, N={N}")
    per_i = alpha(P_T, m, quantizer).per_i
    nums = [log2_comb(N - m, i) + log2_comb(m, i) for i in range(1, m + 1)]
    return _test_bound(nums, per_i)


def necessary_tests(N: int, m: int, P_T, quantizer: Quantizer) -> float:
    """Tests any zero-error design needs: ``max_i log2 C(N-m+i, i) / I_i``."""
    if not 1 <= m <= N:
        raise ValidationError(f"need 1 <= m <= N, got m={m}, N={N}")
    per_i = alpha(P_T, m, quantizer).per_i
    nums = [log2_comb(N - m + i, i) for i in range(1, m + 1)]
    return _test_bound(nums, per_i)
