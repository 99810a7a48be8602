"""Mahler measures of the quadratic-in-y family polynomials.

The main route is Jensen reduction: for P = A(x) y^2 + B(x) y + C(x),

    m(P) = m(A) + (1/2pi) int_0^{2pi} sum_i max(log|y_i(e^{i theta})|, 0) dtheta,

with the branch-label-free integrand (no choice of "the large root" is
ever needed).  Quadrature panels are split at torus zeros of A, at
angles where a root crosses the unit circle, and at discriminant
collisions, all found by scan + refinement.  A slower direct
two-dimensional torus quadrature cross-validates the result without
ever solving for roots.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .numerics import (
    DegenerateInputError,
    NoConvergenceError,
    QuadratureResult,
    Tolerance,
    integrate_adaptive,
    integrate_endpoint_singular,
    solve_quadratic_stable,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FamilySpec:
    family: str
    alpha: float

    def __post_init__(self):
        if self.family.upper() not in ("P", "S", "Q", "R"):
            raise DegenerateInputError(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", self.family.upper())


class BivariatePoly:
    """sum_j y^j * (row_j polynomial in x), y-degree <= 2.

    rows[j] lists ascending-power x coefficients of the y^j coefficient.
    """

    def __init__(self, rows):
        rows = [list(map(float, r)) for r in rows]
        while rows and not any(rows[-1]):
            rows.pop()
        if not rows or not any(any(r) for r in rows):
            raise DegenerateInputError("zero polynomial")
        if len(rows) > 3:
            raise DegenerateInputError("y-degree must be <= 2")
        self.rows = rows

    @property
    def y_degree(self) -> int:
        return len(self.rows) - 1

    @property
    def leading_y_coeff(self):
        """P*(x): ascending coefficients of the top y-power row."""
        return list(self.rows[-1])

    def row_at(self, j: int, x: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in reversed(self.rows[j]):
            acc = acc * x + c
        return acc

    def coeffs_at(self, x: complex):
        """(A, B, C) with P = A y^2 + B y + C at this x (missing rows are 0)."""
        vals = [self.row_at(j, x) for j in range(len(self.rows))]
        vals += [0.0] * (3 - len(vals))
        return vals[2], vals[1], vals[0]

    def __call__(self, x: complex, y: complex) -> complex:
        a, b, c = self.coeffs_at(x)
        return (a * y + b) * y + c


def family_poly(spec: FamilySpec) -> BivariatePoly:
    a = spec.alpha
    if spec.family == "P":
        return BivariatePoly([[0, 1, 1], [1, 2 - a, 1], [1, 1]])
    if spec.family == "S":
        return BivariatePoly([[0, 0, 0, 0, 1], [1, a, 2 * a, a, 1], [1]])
    if spec.family == "Q":
        return BivariatePoly([[0, 1, 1, 1], [0, a, a], [1, 1, 1]])
    return BivariatePoly([[0, 0, 1, 1, 1], [1, a, 2 * a - 4, a, 1], [1, 1, 1]])


def jensen_univariate(coeffs) -> float:
    """m(p) = log|lead| + sum log max(1, |root|); coeffs descending."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "f")
    if c.size == 0:
        raise DegenerateInputError("zero polynomial")
    m = math.log(abs(c[0]))
    if c.size > 1:
        for r in np.roots(c):
            if abs(r) > 1.0:  # log+ of anything inside the disk is 0
                m += math.log(abs(r))
    return m


# ---------------------------------------------------------------------------
# Jensen reduction on |x| = 1
# ---------------------------------------------------------------------------


def _torus_roots(p: BivariatePoly, theta: float):
    x = cmath.exp(1j * theta)
    a, b, c = p.coeffs_at(x)
    if p.y_degree == 2:
        return solve_quadratic_stable(a, b, c)
    if p.y_degree == 1:
        return (-c / b,) if b != 0 else ()
    return ()


def _positive_log_sum(p: BivariatePoly, theta: float) -> float:
    total = 0.0
    for r in _torus_roots(p, theta):
        if r != 0:
            total += max(math.log(abs(r)), 0.0)
    return total


def _leading_torus_zeros(p: BivariatePoly):
    """Angles in (0, pi) where P*(e^{i theta}) = 0 (plus pi if x=-1 is a zero)."""
    lead = list(reversed(p.leading_y_coeff))
    out = []
    if len(lead) > 1:
        for r in np.roots(lead):
            if abs(abs(r) - 1.0) < 1e-9:
                th = math.atan2(r.imag, r.real) % TWO_PI
                if 0.0 < th <= math.pi:
                    out.append(th)
    return out


def _scan_split_angles(p: BivariatePoly, n: int = 1024):
    """Unit-circle crossings of the roots and discriminant collisions in (0, pi)."""
    thetas = np.linspace(0.0, math.pi, n + 1)
    cross = np.empty(n + 1)
    disc = np.empty(n + 1)
    for k, th in enumerate(thetas):
        x = cmath.exp(1j * th)
        a, b, c = p.coeffs_at(x)
        disc[k] = abs(b * b - 4.0 * a * c)
        try:
            roots = _torus_roots(p, th)
        except DegenerateInputError:
            cross[k] = math.nan
            continue
        val = 1.0
        for r in roots:
            val *= abs(r) - 1.0
        cross[k] = val
    out = []

    def cross_at(th):
        val = 1.0
        for r in _torus_roots(p, th):
            val *= abs(r) - 1.0
        return val

    # Where both roots sit exactly on the unit circle (the zero locus can
    # contain a whole torus arc) cross vanishes identically; the kink sits
    # at the arc boundary, not at every sample.  Elsewhere a sign change
    # marks a root crossing the circle.
    on_circle = 1e-12
    for k in range(n):
        v0, v1 = cross[k], cross[k + 1]
        if math.isnan(v0) or math.isnan(v1):
            continue
        flat0, flat1 = abs(v0) < on_circle, abs(v1) < on_circle
        if flat0 and flat1:
            continue
        lo, hi = thetas[k], thetas[k + 1]
        if flat0 or flat1:
            # boundary of an on-circle arc: bisect on the flatness predicate
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if (abs(cross_at(mid)) < on_circle) == flat0:
                    lo = mid
                else:
                    hi = mid
            out.append(0.5 * (lo + hi))
        elif v0 * v1 < 0.0:
            flo = v0
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = cross_at(mid)
                if flo * fm <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            out.append(0.5 * (lo + hi))
    # local minima of |discriminant|: possible branch collisions (sqrt kinks)
    scale = max(disc.max(), 1.0)
    for k in range(1, n):
        if disc[k] <= disc[k - 1] and disc[k] <= disc[k + 1] and disc[k] < 1e-2 * scale:
            lo, hi = thetas[k - 1], thetas[k + 1]
            for _ in range(120):
                m1 = lo + (hi - lo) * 0.382
                m2 = lo + (hi - lo) * 0.618
                d1 = abs(_disc_at(p, m1))
                d2 = abs(_disc_at(p, m2))
                if d1 < d2:
                    hi = m2
                else:
                    lo = m1
            out.append(0.5 * (lo + hi))
    return out


def _disc_at(p: BivariatePoly, theta: float):
    a, b, c = p.coeffs_at(cmath.exp(1j * theta))
    return b * b - 4.0 * a * c


def split_angles(p: BivariatePoly):
    """Sorted panel boundaries on [0, pi] for the Jensen-path quadrature."""
    pts = {0.0, math.pi}
    pts.update(_leading_torus_zeros(p))
    pts.update(_scan_split_angles(p))
    srt = sorted(t for t in pts if -1e-12 <= t <= math.pi + 1e-12)
    merged = [srt[0]]
    for t in srt[1:]:
        if t - merged[-1] > 1e-9:
            merged.append(t)
    return merged


def mahler_quadratic_y(p: BivariatePoly, tol: Tolerance = Tolerance(absolute=1e-10)) -> float:
    """Mahler measure by Jensen reduction in y (y-degree 1 or 2 required)."""
    if p.y_degree == 0:
        return jensen_univariate(list(reversed(p.rows[0])))
    base = jensen_univariate(list(reversed(p.leading_y_coeff)))
    panels = split_angles(p)
    per_panel = Tolerance(absolute=max(tol.absolute / max(len(panels), 1), 1e-14))
    total = 0.0
    for lo, hi in zip(panels[:-1], panels[1:]):
        total += integrate_endpoint_singular(
            lambda th: _positive_log_sum(p, th), lo, hi, per_panel
        ).value
    # real coefficients: the [pi, 2pi] half mirrors [0, pi]
    return base + total / math.pi


def mahler_torus2(p: BivariatePoly, tol: Tolerance = Tolerance(absolute=1e-5)) -> float:
    """Direct quadrature of log|P| over the torus; root-free cross-check."""

    def inner(theta: float) -> float:
        a, b, c = p.coeffs_at(cmath.exp(1j * theta))

        def f(phi: float) -> float:
            y = cmath.exp(1j * phi)
            v = abs((a * y + b) * y + c)
            return math.log(v) if v > 0 else -745.0

        # locate near-zeros of |P| on this circle to place panels
        n = 256
        phis = np.linspace(0.0, TWO_PI, n + 1)
        vals = np.array([f(ph) for ph in phis])
        cuts = {0.0, TWO_PI}
        floor = np.median(vals) - 4.0
        for k in range(1, n):
            if vals[k] < vals[k - 1] and vals[k] < vals[k + 1] and vals[k] < floor:
                lo, hi = phis[k - 1], phis[k + 1]
                for _ in range(120):
                    m1 = lo + (hi - lo) * 0.382
                    m2 = lo + (hi - lo) * 0.618
                    if f(m1) < f(m2):
                        hi = m2
                    else:
                        lo = m1
                cuts.add(0.5 * (lo + hi))
        interior = sorted(c for c in cuts if 0.0 < c < TWO_PI)
        with warnings.catch_warnings():
            # the error estimate is checked explicitly below
            warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
            acc, err = scipy.integrate.quad(
                f, 0.0, TWO_PI, points=interior, limit=400,
                epsabs=tol.absolute * 0.05, epsrel=0.0,
            )
        if err > tol.absolute:
            raise NoConvergenceError(
                f"inner torus integral error {err:.3g}",
                QuadratureResult(acc, err, 1),
            )
        return acc / TWO_PI

    res = integrate_adaptive(inner, 0.0, math.pi, Tolerance(absolute=tol.absolute * math.pi))
    return res.value / math.pi


def mahler_family(family: str, alpha: float, method: str = "jensen",
                  tol: Tolerance = Tolerance(absolute=1e-10)) -> float:
    p = family_poly(FamilySpec(family, alpha))
    if method == "jensen":
        return mahler_quadratic_y(p, tol)
    if method == "torus2":
        return mahler_torus2(p, Tolerance(absolute=max(tol.absolute, 1e-6)))
    raise DegenerateInputError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# path integrals of eta(x, y) = log|x| d arg y - log|y| d arg x
# ---------------------------------------------------------------------------


class SingularPathError(ValueError):
    pass


def eta_path_integral(x_of_t, y_of_t, partition,
                      tol: Tolerance = Tolerance(absolute=1e-9)) -> float:
    """Numeric line integral of eta along t -> (x(t), y(t)).

    ``partition`` is the increasing list of parameter breakpoints; x and y
    must be nonvanishing on every closed subinterval.
    """
    if len(partition) < 2:
        raise DegenerateInputError("partition needs at least two breakpoints")

    def integrand(t, h):
        x, y = x_of_t(t), y_of_t(t)
        if x == 0 or y == 0:
            raise SingularPathError(f"path hits a zero of x or y at t={t}")
        dx = (x_of_t(t + h) - x_of_t(t - h)) / (2.0 * h)
        dy = (y_of_t(t + h) - y_of_t(t - h)) / (2.0 * h)
        return math.log(abs(x)) * (dy / y).imag - math.log(abs(y)) * (dx / x).imag

    total = 0.0
    for lo, hi in zip(partition[:-1], partition[1:]):
        h = max(1e-7 * (hi - lo), 1e-12)
        total += integrate_endpoint_singular(
            lambda t: integrand(t, h), lo, hi, tol
        ).value
    return total


def jensen_path_eta(spec: FamilySpec, tol: Tolerance = Tolerance(absolute=1e-9)) -> float:
    """int eta over the family's Jensen path {|x|=1, |y| >= 1}.

    Equals -2 pi (m(P) - m(P*)) by Jensen's formula; both torus halves
    are covered via the conjugation symmetry of real coefficients.
    """
    p = family_poly(spec)
    panels = split_angles(p)

    def x_of(th):
        return cmath.exp(1j * th)

    def y_of(th):
        roots = _torus_roots(p, th)
        return max(roots, key=abs)

    total = 0.0
    for lo, hi in zip(panels[:-1], panels[1:]):
        mid = 0.5 * (lo + hi)
        try:
            if abs(y_of(mid)) < 1.0 + 1e-13:
                continue  # panel lies outside the Jensen path
        except DegenerateInputError:
            pass
        total += eta_path_integral(x_of, y_of, [lo, hi], tol)
    return 2.0 * total  # conjugate half of the torus contributes equally
