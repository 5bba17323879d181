"""Random q-ary codes: acceptable-row counting, critical rate, Monte Carlo.

A row ``x`` of a ``(u + 1)``-column block *certifies* column 1 when
``x[0] // eta > sum(x[1:]) // eta``.  A row is *acceptable* when it does not.
A uniformly random code is SQ-disjunct with probability at least ``1 - eps``
once ``log2 N / n`` stays below the critical rate built from the number of
acceptable rows ``A``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import CodeMatrix, DesignParams, InfeasibleSizeError, Quantizer, ValidationError
from .disjunct import disjunct_work, is_sq_disjunct

DEFAULT_WORK_CAP = 10**10


def certifying_row_count(q: int, eta: int, u: int) -> int:
    """Rows of ``[q]^(u+1)`` certifying their first entry, by stars and bars.

    With ``x[0]`` in ``[i*eta, (i+1)*eta)`` the tail must sum to at most
    ``i*eta - 1 <= q - 2``, so the per-entry cap never binds and the tail count
    is ``C(i*eta + u - 1, u)``.
    """
    top = (q - 1) // eta
    total = 0
    for i in range(1, top + 1):
        heads = eta if i < top else q - top * eta
        total += heads * math.comb(i * eta + u - 1, u)
    return total


def acceptable_row_count(q: int, eta: int, u: int) -> int:
    """Number of rows of ``[q]^(u+1)`` that do not certify the first column."""
    if q < 2 or eta < 1 or u < 1:
        raise ValidationError("need q >= 2, eta >= 1, u >= 1")
    return q ** (u + 1) - certifying_row_count(q, eta, u)


def acceptable_row_count_brute(q: int, eta: int, u: int) -> int:
    """Enumerate all ``q**(u+1)`` rows.  Only for small parameters."""
    return sum(
        1
        for row in itertools.product(range(q), repeat=u + 1)
        if row[0] // eta <= sum(row[1:]) // eta
    )


@dataclass(frozen=True)
class CriticalRateReport:
    q: int
    eta: int
    u: int
    n: int | None
    epsilon: float
    A: int
    gamma: float
    asymptotic_rate: float
    R_critical: float

    def max_subjects(self) -> float:
        """Largest ``N`` allowed at this rate and length, ``2**(n * R)``."""
        if self.n is None:
            return math.inf
        return 2.0 ** (self.n * self.R_critical)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "eta": self.eta,
            "u": self.u,
            "n": self.n,
            "epsilon": self.epsilon,
            "A": self.A,
            "gamma": self.gamma,
            "asymptotic_rate": self.asymptotic_rate,
            "R_critical": self.R_critical,
        }


def critical_rate(q: int, eta: int, u: int, n: int | None = None, epsilon: float = 0.05) -> CriticalRateReport:
    """Critical rate ``log2(gamma)/(u+1) + log2(eps * u!)/(n (u+1))``.

    ``gamma = q**(u+1) / A``.  ``n=None`` gives the ``n -> inf`` limit.
    """
    if epsilon <= 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    if n is not None and n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    A = acceptable_row_count(q, eta, u)
    total = q ** (u + 1)
    log_gamma = math.log2(total) - math.log2(A)
    asym = log_gamma / (u + 1)
    if n is None:
        rate = asym
    else:
        rate = asym + (math.log2(epsilon) + math.lgamma(u + 1) / math.log(2)) / (n * (u + 1))
    return CriticalRateReport(q, eta, u, n, float(epsilon), A, 2.0**log_gamma, asym, rate)


def union_bound_failure(n: int, N: int, q: int, eta: int, u: int) -> float:
    """``(u+1) C(N, u+1) (A / q**(u+1))**n``, the union bound on non-disjunctness."""
    if N < u + 1:
        return 0.0
    A = acceptable_row_count(q, eta, u)
    log_p = math.log2(u + 1) + math.log2(math.comb(N, u + 1))
    log_p += n * (math.log2(A) - (u + 1) * math.log2(q))
    return min(1.0, 2.0**log_p)


def random_code(n: int, N: int, q: int, seed=None) -> CodeMatrix:
    """``n x N`` matrix of i.i.d. uniform symbols from ``[q]``."""
    rng = np.random.default_rng(seed)
    return CodeMatrix(rng.integers(0, q, size=(n, N), dtype=np.int64), q)


@dataclass(frozen=True)
class TrialResult:
    trial: int
    disjunct: bool
    witness: tuple[int, tuple[int, ...]] | None


def monte_carlo_trials(
    n: int,
    N: int,
    q: int,
    eta: int,
    u: int,
    trials: int,
    seed: int = 0,
    work_cap: int = DEFAULT_WORK_CAP,
) -> list[TrialResult]:
    """Draw ``trials`` random codes and check each for SQ-disjunctness.

    Trial ``t`` uses the generator seeded with ``[seed, t]``, so results do
    not depend on evaluation order.
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    work = trials * disjunct_work(N, u, n)
    if work > work_cap:
        raise InfeasibleSizeError(f"{work:.3g} comparisons exceed the cap {work_cap:.3g}")
    quant = Quantizer.for_design(eta, q, u)
    params = DesignParams(q, quant.Q, u)
    out = []
    for t in range(trials):
        code = random_code(n, N, q, seed=[seed, t])
        report = is_sq_disjunct(code, params, quant)
        out.append(TrialResult(t, report.is_disjunct, report.witness))
    return out


def estimate_disjunct_probability(
    n: int,
    N: int,
    q: int,
    eta: int,
    u: int,
    trials: int,
    seed: int = 0,
    work_cap: int = DEFAULT_WORK_CAP,
) -> float:
    """Fraction of random ``n x N`` codes that are SQ-disjunct."""
    results = monte_carlo_trials(n, N, q, eta, u, trials, seed, work_cap)
    return sum(r.disjunct for r in results) / trials
