"""Likelihood-equation solution counting and the constructed score systems."""

from fractions import Fraction

import numpy as np
import pytest

from kronmle.groebner import buchberger, dim_and_degree
from kronmle.mldegree import (
    TIMEOUT,
    SCORE_VARS,
    Timeout,
    b_zero_quadratic,
    count_solutions_off_locus,
    likelihood_equations_m2_2,
    ml_degree,
    ml_multiplicity_prop43,
    prop43_system,
    random_integer_sample,
    score_polynomials,
)
from kronmle.poly import Poly
from kronmle.solvers import exact_mle_k1


def xy_ring():
    vars = ("x", "y")
    return Poly.variable(vars, "x"), Poly.variable(vars, "y")


class TestRandomSample:
    def test_entries_in_range(self):
        s = random_integer_sample(4, 3, seed=0)
        for y in s.data:
            for i in range(4):
                for j in range(2):
                    assert 0 <= y[i, j] <= 16
                    assert y[i, j].denominator == 1

    def test_deterministic(self):
        a = random_integer_sample(3, 2, seed=5)
        b = random_integer_sample(3, 2, seed=5)
        assert a.data == b.data


class TestScorePolynomials:
    def test_requires_exact_m2_2(self):
        s = random_integer_sample(3, 2, seed=1)
        with pytest.raises(ValueError):
            score_polynomials(s.to_float())

    def test_g2_is_chart_determinant(self):
        s = random_integer_sample(3, 2, seed=1)
        _, g2, _ = score_polynomials(s)
        k12 = Poly.variable(SCORE_VARS, "k12")
        k22 = Poly.variable(SCORE_VARS, "k22")
        assert g2 == k22 - k12**2

    def test_degree_bookkeeping(self):
        for m1, n in ((2, 3), (3, 2), (4, 3)):
            s = random_integer_sample(m1, n, seed=2)
            g1, g2, gens = score_polynomials(s)
            assert g1.total_degree() <= m1
            for g in gens:
                assert g.total_degree() <= 2 * m1 - 1

    def test_g1_matches_numeric_determinant(self):
        from kronmle.linalg import Matrix

        s = random_integer_sample(3, 2, seed=3)
        g1, _, _ = score_polynomials(s)
        pt = {"k12": Fraction(1, 3), "k22": Fraction(7, 2)}
        k = Matrix(
            [[1, pt["k12"]], [pt["k12"], pt["k22"]]]
        )
        acc = Matrix.zeros(3, 3)
        for y in s.data:
            acc = acc + y @ k @ y.transpose()
        assert g1.evaluate(pt) == acc.det()

    def test_generators_vanish_at_exact_mle(self):
        # k = 1 instances have a rational MLE; on the k11 = 1 chart it must
        # solve the score equations exactly
        for m1, n in ((3, 2), (5, 3)):
            s = random_integer_sample(m1, n, seed=4)
            _, _, gens = score_polynomials(s)
            est = exact_mle_k1(s)
            scale = est.k2_exact[0, 0]
            pt = {
                "k12": est.k2_exact[0, 1] / scale,
                "k22": est.k2_exact[1, 1] / scale,
            }
            for g in gens:
                assert g.evaluate(pt) == 0


class TestCountSolutions:
    def test_simple_localized_count(self):
        x, y = xy_ring()
        # solutions (0, 0) and (1, 0); x != 0 keeps one of them
        assert count_solutions_off_locus((x * (x - 1), y), x) == 1

    def test_counts_with_multiplicity(self):
        x, y = xy_ring()
        assert count_solutions_off_locus((x**2 * (x - 1), y), x - 5) == 3

    def test_common_factor_divides_f(self):
        x, y = xy_ring()
        # shared factor (x - 1) is killed by localizing at f = x - 1
        gens = ((x - 1) * x, (x - 1) * (y - 2))
        assert count_solutions_off_locus(gens, (x - 1) * y) == 1

    def test_positive_dimensional_reports_zero(self):
        x, y = xy_ring()
        # the line x = 1 survives localization at y
        gens = ((x - 1) * x, (x - 1) * (y - 2))
        assert count_solutions_off_locus(gens, y) == 0

    def test_zero_generator(self):
        x, y = xy_ring()
        zero = Poly.constant(("x", "y"), 0)
        assert count_solutions_off_locus((zero, y), x) == 0

    def test_budget_exhaustion(self):
        x, y = xy_ring()
        gens = (x**3 + y**3 - 1, x**2 * y - 3 * x + 1)
        assert count_solutions_off_locus(gens, x, pair_budget=1) == TIMEOUT
        assert Timeout() == TIMEOUT


class TestMlDegree:
    @pytest.mark.parametrize(
        "m1,n,expect",
        [(2, 3, 3), (3, 2, 1), (3, 3, 4), (4, 3, 3)],
    )
    def test_small_cells(self, m1, n, expect):
        assert ml_degree(m1, n, seed=1) == expect

    def test_degenerate_cell_reports_zero(self):
        assert ml_degree(2, 2, seed=1) == 0
        assert ml_degree(3, 1, seed=1) == 0

    def test_row_two_stabilizes_at_three(self):
        for n in (3, 4, 5):
            assert ml_degree(2, n, seed=0) == 3

    def test_k1_cells_are_degree_one(self):
        for m1, n in ((3, 2), (5, 3)):
            assert 2 * n == m1 + 1
            assert ml_degree(m1, n, seed=0) == 1

    def test_agrees_with_saturated_ideal_route(self):
        # independent route: Rabinowitsch saturation in three variables,
        # then a full basis and standard-monomial count
        for m1, n in ((2, 3), (3, 2), (3, 3)):
            for seed in (1, 2):
                sat = likelihood_equations_m2_2(m1, n, seed)
                zero_dim, degree = dim_and_degree(buchberger(sat))
                assert zero_dim
                assert degree == ml_degree(m1, n, seed)


class TestQuadratics:
    def test_case_one_hand_coefficients(self):
        q = b_zero_quadratic(3, 2, "one")
        assert q.coefficients == (4, -11, -6)
        assert q.discriminant == 121 + 96 == 217
        assert str(q) == "4*x^2 + -11*x + -6"

    def test_case_two_hand_coefficients(self):
        q = b_zero_quadratic(2, 2, "two")
        assert q.coefficients == (4, 0, -6)
        assert q.discriminant == 96

    def test_case_one_values_at_denominator_roots(self):
        c2, c1, c0 = b_zero_quadratic(3, 2, "one").coefficients
        values = [c2 * t * t + c1 * t + c0 for t in (0, -1, 2)]
        assert values == [-6, 9, -12]

    def test_roots_solve_quadratic(self):
        q = b_zero_quadratic(3, 2, "one")
        for r in q.roots():
            c2, c1, c0 = (float(c) for c in q.coefficients)
            assert c2 * r * r + c1 * r + c0 == pytest.approx(0.0, abs=1e-9)

    def test_bad_case_id(self):
        with pytest.raises(ValueError):
            b_zero_quadratic(3, 2, "three")


class TestProp43:
    def test_regime_validation(self):
        with pytest.raises(ValueError):
            prop43_system(2, 2, "one")  # case one needs m2 > 2
        with pytest.raises(ValueError):
            prop43_system(3, 2, "two")  # case two needs m2 = 2
        with pytest.raises(ValueError):
            prop43_system(3, 1, "one")  # k >= 2

    def test_system_shape(self):
        sat = prop43_system(3, 2, "one")
        assert sat.vars == ("t", "b", "y_sat")
        assert len(sat.generators) == 3

    def test_case_one_count(self):
        count = ml_multiplicity_prop43(3, 2, "one")
        assert 2 <= count <= 5
        assert count == 4  # frozen regression value

    def test_case_two_counts(self):
        assert ml_multiplicity_prop43(2, 2, "two") == 2
        assert ml_multiplicity_prop43(2, 3, "two") == 4

    def test_b_zero_roots_satisfy_system(self):
        # on the b = 0 slice the saturated system reduces to the quadratic;
        # its roots must be among the system's solutions, so the count is
        # at least 2 whenever the discriminant is positive
        q = b_zero_quadratic(3, 2, "one")
        assert q.discriminant > 0
        assert ml_multiplicity_prop43(3, 2, "one") >= 2
