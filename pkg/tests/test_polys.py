import math

import numpy as np
import pytest

from biortho.polys import (
    Params,
    chu_vandermonde_sides,
    eval_biortho,
    eval_biortho_grid,
    eval_jacobi_recurrence,
    eval_jacobi_rep,
    jacobi_recurrence_grid,
    jacobi_rep_grid,
    normalization_at_one,
)


def gamma(x):
    return math.gamma(x)


class TestParams:
    def test_valid(self):
        Params(2.0, -0.5, 1.2)

    @pytest.mark.parametrize("alpha, a, b", [
        (0.0, 0.0, 0.0), (-1.0, 0.0, 0.0), (1.0, -1.0, 0.0), (1.0, 0.0, -1.5),
    ])
    def test_invalid(self, alpha, a, b):
        with pytest.raises(ValueError):
            Params(alpha, a, b)


class TestBiortho:
    def test_degree_zero_is_one(self):
        for p in (Params(1.0, 0.0, 0.0), Params(2.5, 0.7, -0.3)):
            for x in (-1.0, -0.4, 0.0, 0.9, 1.0):
                res = eval_biortho(p, 0, x)
                assert res.value == pytest.approx(1.0, abs=1e-14)
                assert res.condition_estimate == 1.0
                assert res.terms_used == 1

    def test_value_at_one_is_normalization(self):
        p = Params(2.0, 0.5, -0.3)
        for n in (0, 1, 5, 12):
            assert eval_biortho(p, n, 1.0).value == \
                pytest.approx(normalization_at_one(p, n), rel=1e-13)

    def test_near_one_matches_normalization(self):
        p = Params(2.0, 0.5, -0.3)
        for n in (1, 6, 12):
            val = eval_biortho(p, n, 1.0 - 1e-13).value
            assert val == pytest.approx(normalization_at_one(p, n), rel=1e-8)

    def test_degree_one_expansion(self):
        # alpha=2, a=b=0: the three raw terms give P_1(x) = x/2
        p = Params(2.0, 0.0, 0.0)
        assert eval_biortho(p, 1, 0.0).value == pytest.approx(0.0, abs=1e-15)
        assert eval_biortho(p, 1, 0.6).value == pytest.approx(0.3, rel=1e-14)
        assert eval_biortho(p, 1, 0.0).terms_used == 3

    def test_alpha_one_matches_classical_rep(self):
        p = Params(1.0, 0.5, -0.3)
        ref = eval_jacobi_rep(0.5, -0.3, 7, 0.3)
        assert eval_biortho(p, 7, 0.3).value == pytest.approx(ref, rel=1e-10)

    def test_boundary_minus_one(self):
        p = Params(2.0, 0.5, -0.3)
        closed = eval_biortho(p, 7, -1.0).value
        near = eval_biortho(p, 7, -1.0 + 1e-12).value
        assert closed == pytest.approx(near, rel=1e-9)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            eval_biortho(Params(1.0, 0.0, 0.0), 3, 1.5)
        with pytest.raises(ValueError):
            eval_biortho(Params(1.0, 0.0, 0.0), -1, 0.5)

    def test_condition_estimate_at_least_one(self):
        p = Params(3.0, 1.2, -0.5)
        _, conds = eval_biortho_grid(p, 10, np.linspace(-0.99, 0.99, 21))
        assert np.all(conds >= 1.0)

    def test_reduction_grid(self):
        # alpha = 1 collapses to the classical family
        xs = np.linspace(-1.0, 1.0, 41)
        for a in (-0.5, 0.0, 0.7, 2.3):
            for b in (-0.5, 2.3):
                p = Params(1.0, a, b)
                for n in (0, 3, 11, 30):
                    vals, _ = eval_biortho_grid(p, n, xs)
                    ref = jacobi_recurrence_grid(a, b, n, xs)
                    rel = np.abs(vals - ref) / np.maximum(1.0, np.abs(ref))
                    assert float(rel.max()) <= 1e-9

    @pytest.mark.parametrize("n", [3, 6, 10])
    def test_is_degree_n_polynomial(self, n):
        # (n+1)-th divided difference at n+2 Chebyshev points vanishes
        p = Params(2.0, 0.5, -0.3)
        xs = [math.cos((2 * k + 1) * math.pi / (2 * (n + 2)))
              for k in range(n + 2)][::-1]
        ys = [eval_biortho(p, n, x).value for x in xs]

        def divided(xs_, ys_):
            dd = list(ys_)
            for k in range(1, len(xs_)):
                dd = [(dd[i + 1] - dd[i]) / (xs_[i + k] - xs_[i])
                      for i in range(len(dd) - 1)]
            return dd[0]

        leading = divided(xs[:n + 1], ys[:n + 1])
        extra = divided(xs, ys)
        assert abs(extra) <= 1e-8 * abs(leading)


class TestClassicalJacobi:
    def test_degree_zero(self):
        assert eval_jacobi_rep(0.3, -0.2, 0, 0.77) == pytest.approx(1.0)

    def test_legendre_p2(self):
        for x in (-0.9, 0.0, 0.4, 1.0):
            assert eval_jacobi_rep(0.0, 0.0, 2, x) == \
                pytest.approx((3 * x * x - 1) / 2, abs=1e-13)

    def test_value_at_one(self):
        a, b, n = 0.7, -0.2, 5
        expected = gamma(n + a + 1) / (gamma(n + 1) * gamma(a + 1))
        assert eval_jacobi_rep(a, b, n, 1.0) == pytest.approx(expected, rel=1e-13)

    def test_recurrence_legendre_p3(self):
        assert eval_jacobi_recurrence(0.0, 0.0, 3, 0.5) == pytest.approx(-0.4375)

    def test_recurrence_degree_zero(self):
        assert eval_jacobi_recurrence(1.3, 0.1, 0, -0.2) == 1.0

    def test_rep_vs_recurrence(self):
        assert eval_jacobi_rep(1.0, 1.0, 4, 0.2) == \
            pytest.approx(eval_jacobi_recurrence(1.0, 1.0, 4, 0.2), rel=1e-12)

    def test_cross_oracle_grid(self):
        xs = np.linspace(-1.0, 1.0, 41)
        for a, b in ((-0.5, 0.7), (0.0, 0.0), (2.3, -0.5)):
            for n in (5, 20, 40):
                vals, conds = jacobi_rep_grid(a, b, n, xs)
                ref = jacobi_recurrence_grid(a, b, n, xs)
                mask = conds <= 1e10
                rel = np.abs(vals - ref) / np.maximum(1.0, np.abs(ref))
                assert float(rel[mask].max()) <= 1e-10


class TestNormalization:
    def test_degree_zero(self):
        assert normalization_at_one(Params(2.7, 1.1, 0.3), 0) == pytest.approx(1.0)

    def test_alpha_one_a_zero(self):
        assert normalization_at_one(Params(1.0, 0.0, 0.4), 5) == \
            pytest.approx(1.0, rel=1e-13)

    def test_ratio_one_when_exponent_is_one(self):
        # (a+1)/alpha = 1 makes the Gamma ratio collapse
        assert normalization_at_one(Params(2.0, 1.0, 0.0), 3) == \
            pytest.approx(1.0, rel=1e-13)


class TestChuVandermonde:
    def test_hand_case(self):
        lhs, rhs = chu_vandermonde_sides(2, 1, 0.0)
        assert lhs == -2.0 and rhs == -2.0

    def test_single_term(self):
        n, a = 7, 0.4
        lhs, rhs = chu_vandermonde_sides(n, 0, a)
        expected = gamma(n + a + 1) / (gamma(n + 1) * gamma(a + 1))
        assert lhs == pytest.approx(expected, rel=1e-13)
        assert lhs == rhs

    def test_deep_cancellation_case(self):
        lhs, rhs = chu_vandermonde_sides(6, 6, 0.7)
        assert abs(lhs - rhs) <= 1e-10 * abs(rhs)

    def test_full_range(self):
        for a in (-0.9, -0.5, 0.0, 1.5, 3.2):
            for n in range(0, 21):
                for r in range(0, n + 1):
                    lhs, rhs = chu_vandermonde_sides(n, r, a)
                    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))

    def test_bad_r(self):
        with pytest.raises(ValueError):
            chu_vandermonde_sides(3, 4, 0.0)
