"""Mahler measures: Jensen reduction, torus quadrature, and path integrals."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from regulab.mahler import (
    BivariatePoly,
    FamilySpec,
    family_poly,
    jensen_path_eta,
    jensen_univariate,
    mahler_family,
    mahler_quadratic_y,
    mahler_torus2,
    split_angles,
)
from regulab.numerics import DegenerateInputError, Tolerance


class TestFamilySpec:
    def test_uppercases_family(self):
        assert FamilySpec("p", 3.0).family == "P"

    def test_rejects_unknown_family(self):
        with pytest.raises(ValueError):
            FamilySpec("Z", 1.0)


class TestBivariatePoly:
    def test_evaluation_matches_rows(self):
        p = family_poly(FamilySpec("P", 3.0))
        x, y = 0.3 + 0.4j, -1.1 + 0.2j
        expect = (x + x * x) + (1 + (2 - 3.0) * x + x * x) * y + (1 + x) * y * y
        assert abs(p(x, y) - expect) < 1e-14

    def test_coeffs_at_consistent_with_call(self):
        p = family_poly(FamilySpec("Q", 5.0))
        x = 0.7 - 0.2j
        a, b, c = p.coeffs_at(x)
        y = 1.3 + 0.1j
        assert abs((a * y * y + b * y + c) - p(x, y)) < 1e-12

    def test_y_degree(self):
        assert family_poly(FamilySpec("S", 2.0)).y_degree == 2
        assert family_poly(FamilySpec("R", 7.0)).y_degree == 2


class TestJensenUnivariate:
    def test_known_values(self):
        assert abs(jensen_univariate([1, -2]) - math.log(2)) < 1e-12
        assert abs(jensen_univariate([1, 1, 1])) < 1e-12  # cyclotomic
        assert abs(jensen_univariate([3]) - math.log(3)) < 1e-15

    def test_rejects_zero_polynomial(self):
        with pytest.raises(DegenerateInputError):
            jensen_univariate([0, 0])

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.floats(-5, 5), min_size=2, max_size=6).filter(
            lambda c: abs(c[0]) > 1e-2
        ),
        st.floats(0.1, 10),
    )
    def test_scaling_law(self, coeffs, c):
        # m(c * p) = log c + m(p)
        scaled = [c * a for a in coeffs]
        assert abs(
            jensen_univariate(scaled) - (math.log(c) + jensen_univariate(coeffs))
        ) < 1e-9

    def test_reciprocal_polynomial_invariance(self):
        # x^n p(1/x) has the same measure when p(0) != 0
        coeffs = [2.0, -3.0, 1.0, 0.5]
        assert abs(
            jensen_univariate(coeffs) - jensen_univariate(coeffs[::-1])
        ) < 1e-12


class TestMahlerMeasures:
    def test_constant_in_x(self):
        # y^2 - 4 factors as (y-2)(y+2): measure log 4, no x dependence
        p = BivariatePoly([[-4], [0], [1]])
        assert abs(mahler_quadratic_y(p) - math.log(4)) < 1e-10

    @pytest.mark.parametrize(
        "family,alpha",
        [("P", 3.0), ("P", -2.0), ("S", 1.0), ("Q", 5.0), ("R", 7.0)],
    )
    def test_two_methods_agree(self, family, alpha):
        fast = mahler_family(family, alpha, method="jensen")
        slow = mahler_family(family, alpha, method="torus2")
        assert abs(fast - slow) < 1e-4

    def test_boundary_parameter_converges(self):
        # at alpha = 4 the zero locus of the base family meets the torus
        # along a whole arc; the panel splitter must isolate it exactly
        val = mahler_family("P", 4.0)
        assert abs(val - 0.799134279601) < 1e-8

    def test_split_angles_find_arc_boundary(self):
        p = family_poly(FamilySpec("P", 4.0))
        cuts = split_angles(p)
        assert cuts[0] == 0.0 and abs(cuts[-1] - math.pi) < 1e-12
        assert any(1.80 < c < 1.82 for c in cuts)  # end of the on-torus arc
        assert all(b > a for a, b in zip(cuts, cuts[1:]))

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            mahler_family("P", 3.0, method="nope")

    def test_measure_nonnegative_for_integer_families(self):
        for family, alpha in (("P", 1.0), ("S", 3.0), ("Q", 6.0), ("R", 8.0)):
            assert mahler_family(family, alpha) >= -1e-12


class TestPathIntegral:
    def test_matches_measure_on_base_family(self):
        # the boundary-path integral of eta equals -2 pi (m - m of the
        # leading coefficient); the base family's leading term 1 + x has
        # measure 0
        alpha = 3.0
        m = mahler_family("P", alpha)
        path = jensen_path_eta(FamilySpec("P", alpha))
        assert abs(path + 2 * math.pi * m) < 1e-7

    def test_second_parameter(self):
        alpha = 1.0
        m = mahler_family("P", alpha)
        path = jensen_path_eta(FamilySpec("P", alpha))
        assert abs(path + 2 * math.pi * m) < 1e-7
