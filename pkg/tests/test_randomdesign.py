import math

import numpy as np
import pytest

from sqgt.core import InfeasibleSizeError, ValidationError
from sqgt.randomdesign import (
    acceptable_row_count,
    acceptable_row_count_brute,
    critical_rate,
    estimate_disjunct_probability,
    monte_carlo_trials,
    random_code,
    union_bound_failure,
)

BOX = [(q, eta, u) for q in range(2, 7) for eta in range(1, q + 1) for u in range(1, 4)]


class TestAcceptableRows:
    def test_binary_or(self):
        assert acceptable_row_count_brute(2, 1, 1) == 3
        assert acceptable_row_count(2, 1, 1) == 3

    def test_eta_beyond_alphabet(self):
        assert acceptable_row_count(2, 2, 1) == 4
        assert acceptable_row_count(3, 5, 2) == 27

    def test_ternary(self):
        assert acceptable_row_count_brute(3, 1, 1) == 6
        assert acceptable_row_count(3, 1, 1) == 6

    def test_closed_form_matches_brute_force(self):
        assert len(BOX) == 60
        for q, eta, u in BOX:
            assert acceptable_row_count(q, eta, u) == acceptable_row_count_brute(q, eta, u)

    def test_extremes_in_eta(self):
        for q in range(2, 7):
            for u in range(1, 4):
                counts = [acceptable_row_count(q, eta, u) for eta in range(1, q + 1)]
                assert counts[0] == min(counts)
                assert counts[-1] == max(counts) == q ** (u + 1)

    def test_not_monotone_in_eta(self):
        # a coarser step can certify more rows when q - 1 is a multiple of it
        assert acceptable_row_count_brute(4, 2, 3) == 248
        assert acceptable_row_count_brute(4, 3, 3) == 246

    def test_bounds(self):
        for q, eta, u in BOX:
            assert 1 <= acceptable_row_count(q, eta, u) <= q ** (u + 1)


class TestCriticalRate:
    def test_binary_asymptote(self):
        rep = critical_rate(2, 1, 1, n=None, epsilon=1.0)
        assert rep.A == 3
        assert rep.asymptotic_rate == pytest.approx(0.5 * math.log2(4 / 3), abs=1e-15)
        assert rep.asymptotic_rate == pytest.approx(0.2075187496, abs=1e-9)

    def test_no_certifying_rows(self):
        rep = critical_rate(2, 2, 1, n=50)
        assert rep.gamma == 1.0 and rep.asymptotic_rate == 0.0

    def test_finite_length(self):
        # A = 54 by enumeration of all 64 rows
        rep = critical_rate(4, 1, 2, n=100, epsilon=0.01)
        assert rep.A == acceptable_row_count_brute(4, 1, 2) == 54
        want = math.log2(64 / 54) / 3 + math.log2(0.01 * 2) / 300
        assert rep.R_critical == pytest.approx(want, abs=1e-15)
        assert rep.R_critical == pytest.approx(0.06289131197959472, abs=1e-12)

    def test_epsilon_above_one(self):
        rep = critical_rate(2, 1, 1, n=10, epsilon=4.0)
        assert rep.R_critical > rep.asymptotic_rate

    def test_errors(self):
        with pytest.raises(ValidationError):
            critical_rate(2, 1, 1, n=10, epsilon=0)
        with pytest.raises(ValidationError):
            critical_rate(2, 1, 1, n=0)

    def test_rate_nonincreasing_in_u(self):
        for q in range(2, 7):
            for eta in range(1, q + 1):
                rates = [critical_rate(q, eta, u).asymptotic_rate for u in range(1, 4)]
                assert all(b <= a + 1e-15 for a, b in zip(rates, rates[1:]))

    def test_json(self):
        d = critical_rate(2, 1, 1, n=60).to_dict()
        assert set(d) >= {"A", "gamma", "R_critical", "asymptotic_rate"}


class TestRandomCode:
    def test_reproducible(self):
        assert random_code(5, 7, 3, seed=42) == random_code(5, 7, 3, seed=42)
        assert random_code(5, 7, 3, seed=42) != random_code(5, 7, 3, seed=43)

    def test_single_symbol(self):
        code = random_code(1, 1, 4, seed=0)
        assert code.matrix.shape == (1, 1) and 0 <= code.matrix[0, 0] < 4

    def test_histogram_uniform(self):
        q = 5
        code = random_code(200, 500, q, seed=7)
        counts = np.bincount(code.matrix.ravel(), minlength=q)
        total = code.matrix.size
        sigma = math.sqrt(total * (1 / q) * (1 - 1 / q))
        assert np.all(np.abs(counts - total / q) < 3 * sigma)


class TestMonteCarlo:
    def test_single_column(self):
        assert estimate_disjunct_probability(5, 1, 2, 1, 1, trials=10) == 1.0

    def test_below_critical_rate(self):
        assert union_bound_failure(60, 512, 2, 1, 1) == pytest.approx(
            2 * math.comb(512, 2) * 0.75**60, rel=1e-12
        )
        assert estimate_disjunct_probability(60, 512, 2, 1, 1, trials=30, seed=1) >= 0.9

    def test_far_above_critical_rate(self):
        assert estimate_disjunct_probability(10, 512, 2, 1, 1, trials=20, seed=1) <= 0.05

    def test_schedule_independent(self):
        full = monte_carlo_trials(8, 20, 3, 1, 2, trials=6, seed=9)
        again = monte_carlo_trials(8, 20, 3, 1, 2, trials=6, seed=9)
        assert full == again

    def test_work_cap(self):
        with pytest.raises(InfeasibleSizeError):
            estimate_disjunct_probability(60, 5000, 2, 1, 3, trials=5)

    def test_witness_present_on_failure(self):
        for r in monte_carlo_trials(4, 30, 2, 1, 1, trials=5, seed=3):
            assert r.disjunct == (r.witness is None)


def binom_upper_tail(k, n, p):
    return sum(math.comb(n, j) * p**j * (1 - p) ** (n - j) for j in range(k, n + 1))


@pytest.mark.parametrize(
    "q,eta,u,n",
    [(2, 1, 1, 40), (3, 1, 1, 20), (3, 2, 1, 40), (4, 1, 2, 60), (4, 2, 1, 30), (3, 1, 2, 60)],
)
def test_disjunct_at_critical_rate(q, eta, u, n):
    eps, trials = 0.05, 300
    rep = critical_rate(q, eta, u, n, eps)
    N = math.floor(rep.max_subjects())
    assert math.log2(N) / n <= rep.R_critical
    failures = trials - round(trials * estimate_disjunct_probability(n, N, q, eta, u, trials, seed=0))
    # one-sided test of "failure rate <= eps" at the 95% level
    assert binom_upper_tail(failures, trials, eps) > 0.05
