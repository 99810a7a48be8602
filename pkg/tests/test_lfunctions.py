"""Point counts, Hecke coefficients, and completed-L evaluation."""

import math
from fractions import Fraction

import pytest

from regulab.elliptic import WeierstrassCurve, deuring_curve
from regulab.lfunctions import (
    InconsistentDataError,
    MissingPrimeError,
    TABLE_ONE,
    an_coefficients,
    ap_bad,
    ap_good,
    ap_table,
    epsilon_detect,
    l_prime_zero,
    lambda_completed,
    parse_override_file,
    rescale_integral_model,
    table_one_lseries,
)


def _brute_affine_count(c: WeierstrassCurve, p: int) -> int:
    """O(p^2) enumeration oracle for the fast point counter."""
    a1, a2, a3, a4, a6 = (int(a) % p for a in (c.a1, c.a2, c.a3, c.a4, c.a6))
    n = 0
    for x in range(p):
        rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                n += 1
    return n


class TestPointCounts:
    @pytest.mark.parametrize("alpha", [1, 7, -2])
    @pytest.mark.parametrize("p", [5, 11, 13, 17])
    def test_against_enumeration(self, alpha, p):
        c = deuring_curve(alpha)
        if int(c.discriminant()) % p == 0:
            pytest.skip("bad prime for this parameter")
        assert ap_good(c, p) == p - _brute_affine_count(c, p)

    def test_hasse_bound_all_catalogued_curves(self):
        for alpha in TABLE_ONE:
            apt = ap_table(deuring_curve(alpha), TABLE_ONE[alpha][1], 200)
            for p, a in apt.ap.items():
                if p not in apt.bad:
                    assert a * a <= 4 * p, (alpha, p, a)

    def test_bad_prime_types_match_conductor(self):
        # multiplicative primes divide N once, additive primes twice
        for alpha, (_, conductor) in TABLE_ONE.items():
            apt = ap_table(deuring_curve(alpha), conductor, 50)
            for p, kind in apt.bad.items():
                if conductor % p:
                    continue
                if kind == "additive":
                    assert conductor % (p * p) == 0, (alpha, p)
                else:
                    assert conductor % (p * p) != 0, (alpha, p)

    def test_good_prime_refuses_bad_input(self):
        c = deuring_curve(3)  # discriminant 27 * 16 * (-5)
        with pytest.raises(Exception):
            ap_good(c, 3)

    def test_bad_prime_returns_unit_trace(self):
        c = deuring_curve(1)  # conductor 14
        a, kind = ap_bad(c, 7)
        assert a in (-1, 0, 1)
        assert kind in ("split-multiplicative", "nonsplit-multiplicative", "additive")


class TestRescaling:
    def test_nonminimal_model_is_reduced(self):
        # alpha = -8 has a spurious 2^12 in the raw discriminant
        c = deuring_curve(-8)
        m = rescale_integral_model(c)
        assert abs(int(m.discriminant())) < abs(int(c.discriminant()))

    def test_minimal_model_untouched(self):
        c = deuring_curve(1)
        m = rescale_integral_model(c)
        assert int(m.discriminant()) == int(c.discriminant())


class TestHeckeCoefficients:
    def test_multiplicativity(self):
        apt = ap_table(deuring_curve(1), 14, 200)
        a = an_coefficients(apt, 200)
        assert a[15] == a[3] * a[5]
        assert a[35] == a[5] * a[7]
        assert a[33] == a[3] * a[11]

    def test_prime_power_recursion_good(self):
        apt = ap_table(deuring_curve(1), 14, 200)
        a = an_coefficients(apt, 200)
        p = 3
        assert a[9] == a[3] * a[3] - p
        assert a[27] == a[3] * a[9] - p * a[3]

    def test_prime_power_bad_is_geometric(self):
        apt = ap_table(deuring_curve(1), 14, 200)
        a = an_coefficients(apt, 200)
        assert a[4] == a[2] ** 2  # 2 | 14 is multiplicative
        assert a[49] == a[7] ** 2

    def test_missing_prime_raises(self):
        apt = ap_table(deuring_curve(1), 14, 20)
        with pytest.raises(MissingPrimeError):
            an_coefficients(apt, 30)


@pytest.fixture(scope="module")
def series14():
    return table_one_lseries(1, bound=400)


class TestCompletedL:
    def test_cutoff_independence(self, series14):
        for s in (0.3, 0.7, 1.0):
            v1 = lambda_completed(series14, s, cutoff=1.0)
            v2 = lambda_completed(series14, s, cutoff=1.35)
            assert abs(v1 - v2) < 1e-8, s

    def test_truncation_stability(self, series14):
        v1 = lambda_completed(series14, 0.0, m=200)
        v2 = lambda_completed(series14, 0.0, m=400)
        assert abs(v1 - v2) < 1e-12

    def test_same_conductor_same_lseries(self):
        # three catalogued parameters share conductor 14 and hence L'
        vals = [l_prime_zero(table_one_lseries(a)) for a in (-8, 1, 7)]
        assert max(vals) - min(vals) < 1e-10

    def test_functional_sign_stable_in_bound(self):
        for bound in (100, 200, 400):
            s = table_one_lseries(1, bound=bound)
            assert s.epsilon == 1

    def test_corrupted_coefficient_detected(self):
        good = table_one_lseries(1, bound=200)
        bad = list(good.coefficients)
        bad[3] += 2  # no sign makes the functional equation close
        with pytest.raises(InconsistentDataError):
            epsilon_detect(good.conductor, bad)

    def test_derivative_positive_for_rank_one(self):
        for alpha in TABLE_ONE:
            assert l_prime_zero(table_one_lseries(alpha)) > 0.0


class TestOverrides:
    def test_parse_override_file(self):
        text = "# comment\n2 -1\n7 1   # trailing\n\n11 -2\n"
        assert parse_override_file(text) == {2: -1, 7: 1, 11: -2}

    def test_override_changes_table(self):
        apt = ap_table(deuring_curve(1), 14, 50, overrides={13: ap_good(deuring_curve(1), 13)})
        assert apt.ap[13] == ap_good(deuring_curve(1), 13)


class TestCatalog:
    def test_catalogued_ratios_are_rational(self):
        for alpha, (ratio, conductor) in TABLE_ONE.items():
            assert isinstance(ratio, Fraction)
            assert conductor in (14, 20, 36)

    def test_unknown_parameter_rejected(self):
        with pytest.raises(Exception):
            table_one_lseries(3)
