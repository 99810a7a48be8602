"""Dilogarithm / Bloch-Wigner / elliptic dilogarithm tests.

li2 is cross-checked against mpmath's polylog as an independent oracle.
"""

import cmath
import math
import random

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from regulab.dilogarithm import (
    QPoint,
    bloch_wigner,
    elliptic_dilog,
    elliptic_dilog_divisor,
    li2,
)
from regulab.numerics import Tolerance

mpmath.mp.dps = 30


def _mp_li2(z: complex) -> complex:
    return complex(mpmath.polylog(2, mpmath.mpc(z)))


class TestLi2:
    @pytest.mark.parametrize(
        "z",
        [0.3, -0.7, 0.5 + 0.5j, -2.0 + 1.0j, 4.0 - 3.0j, 0.99, 1.0001 + 1e-9j,
         -50.0, 0.001j, 0.9 + 0.01j],
    )
    def test_against_mpmath(self, z):
        assert abs(li2(z) - _mp_li2(z)) < 1e-13

    def test_special_values(self):
        assert abs(li2(1.0) - math.pi**2 / 6) < 1e-15
        assert abs(li2(-1.0) + math.pi**2 / 12) < 1e-15
        assert li2(0.0) == 0.0

    def test_random_plane_sweep(self):
        rng = random.Random(7)
        for _ in range(60):
            z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
            assert abs(li2(z) - _mp_li2(z)) < 1e-12


class TestBlochWigner:
    def test_vanishes_on_real_line(self):
        for x in (-3.0, -1.0, 0.5, 2.0, 100.0):
            assert bloch_wigner(x) == 0.0

    def test_odd_under_conjugation(self):
        z = 0.4 + 1.3j
        assert abs(bloch_wigner(z) + bloch_wigner(z.conjugate())) < 1e-14

    def test_six_fold_symmetry(self):
        # D(z) = D(1 - 1/z) = D(1/(1-z))
        z = 0.3 + 0.8j
        d = bloch_wigner(z)
        assert abs(bloch_wigner(1 - 1 / z) - d) < 1e-13
        assert abs(bloch_wigner(1 / (1 - z)) - d) < 1e-13

    def test_inversion_antisymmetry(self):
        z = -1.2 + 0.7j
        assert abs(bloch_wigner(1 / z) + bloch_wigner(z)) < 1e-13

    @settings(max_examples=60, deadline=None)
    @given(
        st.complex_numbers(
            min_magnitude=1e-2, max_magnitude=20, allow_nan=False, allow_infinity=False
        ),
        st.complex_numbers(
            min_magnitude=1e-2, max_magnitude=20, allow_nan=False, allow_infinity=False
        ),
    )
    def test_five_term_relation(self, x, y):
        # D(x) + D(y) + D((1-x)/(1-xy)) + D(1-xy) + D((1-y)/(1-xy)) = 0
        if abs(1 - x * y) < 1e-3 or abs(1 - x) < 1e-3 or abs(1 - y) < 1e-3:
            return
        total = (
            bloch_wigner(x)
            + bloch_wigner(y)
            + bloch_wigner((1 - x) / (1 - x * y))
            + bloch_wigner(1 - x * y)
            + bloch_wigner((1 - y) / (1 - x * y))
        )
        assert abs(total) < 1e-11


class TestQPoint:
    def test_normalizes_into_annulus(self):
        q = 0.1 + 0.02j
        p = QPoint(q, 1000.0 + 0.0j)
        assert abs(q) < abs(p.z) <= 1.0

    def test_rejects_bad_q(self):
        with pytest.raises(ValueError):
            QPoint(1.5, 1.0)
        with pytest.raises(ValueError):
            QPoint(0.3, 0.0)


class TestEllipticDilog:
    def test_lattice_periodicity(self):
        q = 0.05 * cmath.exp(0.4j)
        z = 0.6 * cmath.exp(1.1j)
        a = elliptic_dilog(QPoint(q, z))
        b = elliptic_dilog(QPoint(q, q * z))
        assert abs(a - b) < 1e-11

    def test_odd_under_inversion(self):
        q = 0.07
        z = 0.5 * cmath.exp(0.9j)
        assert abs(elliptic_dilog(QPoint(q, z)) + elliptic_dilog(QPoint(q, 1 / z))) < 1e-11

    def test_divisor_linearity(self):
        q = 0.06
        z = 0.4 * cmath.exp(0.7j)
        pts = {"a": QPoint(q, z), "b": QPoint(q, z * z)}
        single = elliptic_dilog(pts["a"]) * 2 - elliptic_dilog(pts["b"])

        class Div:
            def items(self):
                return [("a", 2), ("b", -1)]

        assert abs(elliptic_dilog_divisor(pts, Div(), Tolerance(absolute=1e-12)) - single) < 1e-11
