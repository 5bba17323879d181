import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqgt.core import CodeMatrix, DesignParams, Quantizer, ValidationError, is_included, syndrome
from sqgt.disjunct import (
    DisjunctReport,
    is_sq_disjunct,
    naive_decode,
    scale_code,
    unique_coordinate_check,
)

from oracles import certificate_disjunct, def5_disjunct


def check(code, u, quant):
    return is_sq_disjunct(code, DesignParams(code.q, quant.Q, u), quant)


def brute_witness(code, u, quant):
    """Smallest (codeword, covering) pair by direct search."""
    N = code.N
    t = min(u, N - 1)
    for x in range(N):
        others = [j for j in range(N) if j != x]
        for cover in itertools.combinations(others, t):
            if is_included(syndrome(code, [x], quant), syndrome(code, cover, quant)):
                return x, cover
    return None


class TestIsSqDisjunct:
    @pytest.mark.parametrize("q,eta", [(2, 1), (4, 1), (4, 3), (6, 2)])
    @pytest.mark.parametrize("u", [1, 2])
    def test_scaled_identity(self, q, eta, u):
        code = CodeMatrix((q - 1) * np.eye(3, dtype=int), q)
        assert check(code, u, Quantizer.for_design(eta, q, u)).is_disjunct

    def test_duplicate_columns(self):
        code = CodeMatrix([[3, 0, 3], [0, 3, 0], [1, 2, 1]], 4)
        report = check(code, 1, Quantizer.for_design(1, 4, 1))
        assert not report.is_disjunct
        assert report.witness == (0, (2,))

    @pytest.mark.parametrize("u", [1, 2, 3])
    def test_binary_with_eta_two_never_disjunct(self, u):
        rng = np.random.default_rng(u)
        for _ in range(10):
            code = CodeMatrix(rng.integers(0, 2, size=(6, u + 2)), 2)
            assert not check(code, u, Quantizer.equidistant(2, 2))

    def test_single_column_is_vacuous(self):
        code = CodeMatrix([[0], [1]], 2)
        assert check(code, 3, Quantizer.conventional()).is_disjunct

    def test_fewer_columns_than_u_uses_all_others(self):
        code = CodeMatrix([[1, 1], [0, 1]], 2)
        report = check(code, 3, Quantizer.conventional())
        assert report.witness == (0, (1,))

    def test_alphabet_mismatch(self):
        code = CodeMatrix([[1, 0]], 2)
        with pytest.raises(ValidationError):
            is_sq_disjunct(code, DesignParams(3, 2, 1), Quantizer.conventional())

    def test_saturating_quantizer_rejected(self):
        code = CodeMatrix(3 * np.eye(3, dtype=int), 4)
        with pytest.raises(ValidationError):
            check(code, 2, Quantizer.equidistant(1, 4))

    @settings(max_examples=80, deadline=None)
    @given(st.integers(2, 4), st.integers(1, 5), st.integers(2, 6), st.integers(1, 2), st.data())
    def test_witness_is_smallest_and_valid(self, q, n, N, u, data):
        flat = data.draw(st.lists(st.integers(0, q - 1), min_size=n * N, max_size=n * N))
        code = CodeMatrix(np.array(flat).reshape(n, N), q)
        eta = data.draw(st.integers(1, q))
        quant = Quantizer.for_design(eta, q, u)
        report = check(code, u, quant)
        assert report.witness == brute_witness(code, u, quant)
        if report.witness is not None:
            x, cover = report.witness
            assert x not in cover
            assert is_included(syndrome(code, [x], quant), syndrome(code, cover, quant))

    @settings(max_examples=80, deadline=None)
    @given(st.integers(2, 4), st.integers(1, 4), st.integers(2, 5), st.integers(1, 2), st.data())
    def test_agrees_with_quantified_definition(self, q, n, N, u, data):
        flat = data.draw(st.lists(st.integers(0, q - 1), min_size=n * N, max_size=n * N))
        matrix = np.array(flat).reshape(n, N)
        th = data.draw(st.lists(st.integers(1, u * (q - 1) + 1), min_size=1, max_size=3, unique=True))
        quant = Quantizer(tuple(sorted(th)))
        if quant.is_equidistant and quant.Q * quant.eta <= u * (q - 1):
            quant = Quantizer.for_design(quant.eta, q, u)
        code = CodeMatrix(matrix, q)
        assert check(code, u, quant).is_disjunct == def5_disjunct(matrix.tolist(), u, quant.thresholds)

    @pytest.mark.parametrize("q,eta", [(2, 2), (3, 3), (4, 5)])
    def test_necessary_condition(self, q, eta):
        rng = np.random.default_rng(q * 10 + eta)
        for u in (1, 2):
            for _ in range(10):
                code = CodeMatrix(rng.integers(0, q, size=(5, u + 1 + int(rng.integers(0, 3)))), q)
                assert not check(code, u, Quantizer.for_design(eta, q, u))


def test_report_json():
    assert DisjunctReport(True).to_dict() == {"disjunct": True, "witness": None}
    r = DisjunctReport(False, (2, (0, 4)))
    assert r.to_dict() == {"disjunct": False, "witness": {"codeword": 2, "covering": [0, 4]}}
    assert DisjunctReport.from_dict(r.to_dict()) == r
    with pytest.raises(ValueError):
        DisjunctReport(False)


class TestUniqueCoordinate:
    def test_scaled_identity(self):
        cols = (3 * np.eye(3, dtype=int)).T.tolist()
        assert unique_coordinate_check(cols, 1, u=2)

    def test_identical_vectors(self):
        assert not unique_coordinate_check([[1, 2, 0]] * 3, 1, u=2)

    def test_binary_eta_two(self):
        for cols in itertools.product(itertools.product(range(2), repeat=3), repeat=2):
            assert not unique_coordinate_check(list(cols), 2, u=1)

    def test_wrong_count(self):
        with pytest.raises(ValidationError):
            unique_coordinate_check([[1], [0]], 1, u=2)

    def test_matches_disjunct_check_exhaustively(self):
        # every 2 x 3 ternary matrix, u = 2, eta in {1, 2}
        for eta in (1, 2):
            quant = Quantizer.for_design(eta, 3, 2)
            for flat in itertools.product(range(3), repeat=6):
                m = np.array(flat).reshape(2, 3)
                code = CodeMatrix(m, 3)
                cert = unique_coordinate_check(m.T.tolist(), eta, u=2)
                assert cert == check(code, 2, quant).is_disjunct
                assert cert == certificate_disjunct(m.tolist(), 2, eta)


class TestScaleCode:
    def test_scale_identity(self):
        code = scale_code(CodeMatrix.identity(4), 3)
        assert code.q == 4
        assert np.array_equal(code.matrix, 3 * np.eye(4, dtype=int))

    def test_factor_one(self):
        base = CodeMatrix([[1, 0, 1], [0, 1, 1]], 2)
        assert scale_code(base, 1) == base

    def test_errors(self):
        with pytest.raises(ValidationError):
            scale_code(CodeMatrix([[2, 0]], 3), 2)
        with pytest.raises(ValidationError):
            scale_code(CodeMatrix.identity(3), 4, q=4)

    @pytest.mark.parametrize("eta", [1, 2, 3])
    @pytest.mark.parametrize("u", [1, 2, 3, 4])
    def test_scaled_identity_is_disjunct(self, eta, u):
        code = scale_code(CodeMatrix.identity(5), 3)
        assert check(code, u, Quantizer.for_design(eta, 4, u)).is_disjunct

    def test_general_thresholds(self):
        # first threshold at most the scale factor
        code = scale_code(CodeMatrix.identity(5), 3)
        for th in [(1, 5), (2, 3, 9), (3, 4)]:
            assert check(code, 2, Quantizer(th)).is_disjunct
        assert not check(code, 2, Quantizer((4, 6)))


class TestNaiveDecode:
    def test_recovers_positives(self):
        code = CodeMatrix(3 * np.eye(4, dtype=int), 4)
        quant = Quantizer.for_design(1, 4, 2)
        y = syndrome(code, [0, 2], quant)
        res = naive_decode(code, y, quant, DesignParams(4, quant.Q, 2))
        assert res.positives == (0, 2)
        assert res.consistent

    def test_zero_syndrome(self):
        code = CodeMatrix(3 * np.eye(4, dtype=int), 4)
        quant = Quantizer.for_design(1, 4, 2)
        assert naive_decode(code, [0, 0, 0, 0], quant).positives == ()

    def test_exhaustive_round_trip(self):
        code = CodeMatrix(3 * np.eye(5, dtype=int), 4)
        quant = Quantizer.for_design(1, 4, 2)
        params = DesignParams(4, quant.Q, 2)
        sets = [c for k in range(3) for c in itertools.combinations(range(5), k)]
        assert len(sets) == 16
        for s in sets:
            res = naive_decode(code, syndrome(code, s, quant), quant, params)
            assert res.positives == s and res.consistent

    def test_inconsistent_flagged(self):
        code = CodeMatrix(3 * np.eye(3, dtype=int), 4)
        quant = Quantizer.for_design(1, 4, 2)
        res = naive_decode(code, [1, 0, 0], quant)
        assert res.positives == () and not res.consistent
        res = naive_decode(code, [3, 3, 3], quant, DesignParams(4, quant.Q, 2))
        assert res.positives == (0, 1, 2) and not res.consistent

    def test_soundness_on_random_disjunct_codes(self):
        rng = np.random.default_rng(11)
        tried = 0
        while tried < 15:
            q, u = 4, 2
            code = CodeMatrix(rng.integers(0, q, size=(8, 6)), q)
            quant = Quantizer.for_design(1, q, u)
            if not check(code, u, quant):
                continue
            tried += 1
            for k in range(u + 1):
                for s in itertools.combinations(range(code.N), k):
                    res = naive_decode(code, syndrome(code, s, quant), quant)
                    assert res.positives == s and res.consistent
