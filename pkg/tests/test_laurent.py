"""Tests for Laurent polynomials and the two determinant back ends."""

import random
from fractions import Fraction

import numpy as np
import pytest
import sympy

from fourier_knots import laurent
from fourier_knots.laurent import (
    ONE,
    T,
    TVAR,
    STABLE_ROUNDS,
    LaurentPolynomial,
    bareiss_determinant,
    det_mod_p_batch,
    modular_determinant,
)


TREFOIL = LaurentPolynomial({-1: 1, 0: -1, 1: 1})
FIGURE_EIGHT = LaurentPolynomial({-1: -1, 0: 3, 1: -1})


# ── Arithmetic and text ─────────────────────────────────────────────────


class TestLaurentPolynomial:

    def test_zero_coefficients_dropped(self):
        p = LaurentPolynomial({0: 0, 2: 3})
        assert p.coefficients == {2: 3}
        assert LaurentPolynomial().is_zero()

    def test_non_integer_rejected(self):
        with pytest.raises(ValueError):
            LaurentPolynomial({0: 0.5})

    def test_arithmetic(self):
        p = TVAR - 1
        assert p * p == LaurentPolynomial({2: 1, 1: -2, 0: 1})
        assert 1 - TVAR == -p
        assert p + 1 == TVAR
        assert 2 * TVAR == LaurentPolynomial({1: 2})

    def test_constants_equal_ints(self):
        assert ONE == 1
        assert hash(LaurentPolynomial.constant(5)) == hash(5)
        assert LaurentPolynomial() == 0

    def test_evaluate_exact(self):
        assert TREFOIL.evaluate(1) == 1
        assert TREFOIL.evaluate(-1) == -3
        assert TREFOIL.evaluate(2) == Fraction(3, 2)

    def test_str(self):
        assert str(TREFOIL) == "t - 1 + t^-1"
        assert str(FIGURE_EIGHT) == "-t + 3 - t^-1"
        assert str(LaurentPolynomial({2: 2})) == "2*t^2"
        assert str(LaurentPolynomial()) == "0"

    def test_record_round_trip(self):
        assert TREFOIL.to_record() == "-1:1,0:-1,1:1"
        assert LaurentPolynomial.from_record(TREFOIL.to_record()) == TREFOIL
        assert LaurentPolynomial.from_record("") == 0

    def test_sympy_conversion(self):
        expr = T ** 2 - 3 + 2 / T
        p = LaurentPolynomial.from_sympy(expr)
        assert p == LaurentPolynomial({2: 1, 0: -3, -1: 2})
        assert sympy.simplify(p.to_sympy() - expr) == 0

    def test_sympy_rejects_non_monomials(self):
        with pytest.raises(ValueError):
            LaurentPolynomial.from_sympy(sympy.sin(T))


class TestNormalization:

    def test_centres_and_fixes_sign(self):
        raw = LaurentPolynomial({0: -1, 1: 1, 2: -1})  # -(t^2 - t + 1)
        assert raw.normalized() == TREFOIL

    def test_unit_multiples_share_a_normal_form(self):
        for k in range(-3, 4):
            for sign in (1, -1):
                assert (FIGURE_EIGHT.shifted(k) * sign).normalized() == FIGURE_EIGHT

    def test_palindromic(self):
        assert TREFOIL.is_palindromic()
        assert not LaurentPolynomial({0: 1, 1: 2}).is_palindromic()


# ── Determinants ────────────────────────────────────────────────────────


def _random_matrix(m, degree, seed):
    rng = random.Random(seed)
    return [
        [LaurentPolynomial({k: rng.randint(-2, 2) for k in range(degree + 1)}) for _ in range(m)]
        for _ in range(m)
    ]


class TestDeterminants:

    def test_empty_matrix(self):
        assert bareiss_determinant([]) == 1
        assert modular_determinant([]) == 1

    def test_two_by_two(self):
        m = [[TVAR, ONE], [ONE, TVAR]]
        assert bareiss_determinant(m) == LaurentPolynomial({2: 1, 0: -1})

    def test_negative_exponents_rejected(self):
        with pytest.raises(ValueError):
            bareiss_determinant([[LaurentPolynomial({-1: 1})]])

    @pytest.mark.parametrize("m,seed", [(3, 1), (5, 2), (7, 3)])
    def test_modular_matches_bareiss(self, m, seed):
        matrix = _random_matrix(m, 1, seed)
        assert modular_determinant(matrix, require_unit_at_one=False) == bareiss_determinant(matrix)

    def test_det_mod_p_batch(self):
        p = 101
        mats = np.array([[[2, 3], [5, 7]], [[0, 1], [1, 0]], [[4, 8], [2, 4]]], dtype=np.int64)
        np.testing.assert_array_equal(det_mod_p_batch(mats, p), [(14 - 15) % p, (0 - 1) % p, 0])

    def test_early_stop_needs_repeated_agreement(self, monkeypatch):
        real = laurent._primes_below
        used = []

        def counting(ceiling):
            for p in real(ceiling):
                used.append(p)
                yield p

        monkeypatch.setattr(laurent, "_primes_below", counting)
        m = 12
        big = LaurentPolynomial({0: 1000, 1: 1000})
        matrix = [
            [ONE if i == j else (big if j > i else LaurentPolynomial()) for j in range(m)]
            for i in range(m)
        ]
        assert modular_determinant(matrix) == 1
        assert len(used) == STABLE_ROUNDS + 1
