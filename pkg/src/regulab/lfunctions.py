"""L-series of the integral family curves and L'(E, 0).

a_p comes from direct point counting over F_p; bad-prime coefficients
use the count of nonsingular points, which lands in {1, -1, 0} according
to split-multiplicative / nonsplit-multiplicative / additive reduction.
The completed L-function is evaluated through the smoothed approximate
functional equation with incomplete-gamma weights, and L'(E, 0) = Lambda(0).

The functional-equation sign is never taken from the literature: it is
detected numerically by demanding that the approximate functional
equation give cutoff-independent values (only the true sign does).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import scipy.special

from .elliptic import WeierstrassCurve, deuring_curve
from .numerics import DegenerateInputError


class NeedsOverrideError(ValueError):
    """A bad-prime coefficient could not be derived from the model."""


class InconsistentDataError(ValueError):
    """Neither functional-equation sign fits: some a_p is wrong."""


class MissingPrimeError(KeyError):
    pass


@dataclass
class APTable:
    curve: WeierstrassCurve
    ap: dict
    bad: dict  # prime -> reduction type string

    def __post_init__(self):
        for p, a in self.ap.items():
            if p in self.bad:
                if a not in (-1, 0, 1):
                    raise ValueError(f"bad-prime a_{p}={a} outside {{1,-1,0}}")
            elif a * a > 4 * p:
                raise ValueError(f"a_{p}={a} violates the Hasse bound")


@dataclass
class LSeries:
    conductor: int
    epsilon: int
    coefficients: list = field(repr=False)  # a_1 .. a_M at indices 1 .. M

    def __post_init__(self):
        if self.conductor <= 0:
            raise ValueError("conductor must be positive")
        if self.epsilon not in (-1, 1):
            raise ValueError("sign must be +-1")
        if self.coefficients[1] != 1:
            raise ValueError("a_1 must be 1")

    @property
    def bound(self) -> int:
        return len(self.coefficients) - 1


def _primes_up_to(m: int):
    sieve = bytearray([1]) * (m + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, int(math.isqrt(m)) + 1):
        if sieve[i]:
            sieve[i * i:: i] = bytearray(len(sieve[i * i:: i]))
    return [i for i in range(2, m + 1) if sieve[i]]


def _int_coeffs(c: WeierstrassCurve):
    coeffs = []
    for a in (c.a1, c.a2, c.a3, c.a4, c.a6):
        if a != int(a):
            raise DegenerateInputError("integer model required for counting")
        coeffs.append(int(a))
    return coeffs


def _affine_count(c: WeierstrassCurve, p: int) -> int:
    a1, a2, a3, a4, a6 = (a % p for a in _int_coeffs(c))
    if p == 2:
        return sum(
            (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0
            for x in (0, 1) for y in (0, 1)
        )
    # complete the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    half = (p - 1) // 2
    count = 0
    for x in range(p):
        w = (((4 * x + b2) * x + 2 * b4) * x + b6) % p
        if w == 0:
            count += 1
        else:
            count += 1 + (1 if pow(w, half, p) == 1 else -1)
    return count


def ap_good(c: WeierstrassCurve, p: int) -> int:
    """a_p = p + 1 - #E(F_p) at a prime of good reduction."""
    if int(c.discriminant()) % p == 0:
        raise DegenerateInputError(f"p={p} divides the discriminant; use ap_bad")
    a = p - _affine_count(c, p)
    assert a * a <= 4 * p
    return a


def ap_bad(c: WeierstrassCurve, p: int):
    """(a_p, reduction type) at a prime dividing the discriminant.

    The count of nonsingular points mod p is p - a_p, so counting affine
    solutions and dropping the unique singular point decides the type:
    a_p = 1 split multiplicative, -1 nonsplit, 0 additive.
    """
    if int(c.discriminant()) % p != 0:
        raise DegenerateInputError(f"p={p} is a good prime")
    a = p - _affine_count(c, p)
    kinds = {1: "split-multiplicative", -1: "nonsplit-multiplicative", 0: "additive"}
    if a not in kinds:
        raise NeedsOverrideError(
            f"nonsingular count at p={p} gives a_p={a}; the model is likely "
            "non-minimal there - supply an override"
        )
    return a, kinds[a]


def rescale_integral_model(c: WeierstrassCurve) -> WeierstrassCurve:
    """Strip non-minimal discriminant factors by u-rescaling (u in 6,3,2)."""
    for u in (6, 3, 2):
        scaled = (c.a1 / u, c.a2 / u**2, c.a3 / u**3, c.a4 / u**4, c.a6 / u**6)
        if all(a == int(a) for a in scaled):
            return WeierstrassCurve(*(int(a) for a in scaled))
    return c


def ap_table(c: WeierstrassCurve, conductor: int, bound: int,
             overrides: dict | None = None) -> APTable:
    c = rescale_integral_model(c)
    disc = abs(int(c.discriminant()))
    ap = {}
    bad = {}
    for p in _primes_up_to(bound):
        if overrides and p in overrides:
            ap[p] = overrides[p]
            if conductor % p == 0:
                bad[p] = "override"
            continue
        if disc % p == 0:
            a, kind = ap_bad(c, p)
            expected_additive = conductor % (p * p) == 0
            if expected_additive != (kind == "additive"):
                raise NeedsOverrideError(
                    f"reduction type at p={p} ({kind}) contradicts the "
                    f"conductor {conductor}; supply an override"
                )
            ap[p] = a
            bad[p] = kind
        else:
            ap[p] = ap_good(c, p)
    return APTable(c, ap, bad)


def an_coefficients(apt: APTable, bound: int) -> list:
    """a_1..a_bound from the prime table via Hecke multiplicativity."""
    a = [0] * (bound + 1)
    a[1] = 1
    small = _primes_up_to(bound)
    for n in range(2, bound + 1):
        m = n
        val = 1
        for p in small:
            if p * p > m:
                break
            if m % p == 0:
                k = 0
                while m % p == 0:
                    m //= p
                    k += 1
                val *= _prime_power_coeff(apt, p, k)
        if m > 1:
            val *= apt.ap[m] if m in apt.ap else _raise_missing(m)
        a[n] = val
    return a


def _raise_missing(p):
    raise MissingPrimeError(f"a_p missing for p={p}")


def _prime_power_coeff(apt: APTable, p: int, k: int) -> int:
    if p not in apt.ap:
        _raise_missing(p)
    ap = apt.ap[p]
    if p in apt.bad:
        return ap**k
    prev, cur = 1, ap
    for _ in range(k - 1):
        prev, cur = cur, ap * cur - p * prev
    return cur


def _upper_gamma(s: float, x: float) -> float:
    """Upper incomplete gamma for real s (including s <= 0), x > 0."""
    if s > 0:
        return scipy.special.gammaincc(s, x) * scipy.special.gamma(s)
    if s == 0.0:
        return float(scipy.special.exp1(x))
    # downward recurrence Gamma(s,x) = (Gamma(s+1,x) - x^s e^{-x}) / s
    return (_upper_gamma(s + 1.0, x) - x**s * math.exp(-x)) / s


def _half_sum(series: LSeries, s: float, cutoff: float, m: int) -> float:
    """sum_{n<=m} a_n (sqrt(N)/(2 pi n))^s Gamma(s, 2 pi n t / sqrt(N))."""
    rtn = math.sqrt(series.conductor)
    total = 0.0
    for n in range(1, m + 1):
        an = series.coefficients[n]
        if an == 0:
            continue
        x = 2.0 * math.pi * n * cutoff / rtn
        total += an * (rtn / (2.0 * math.pi * n)) ** s * _upper_gamma(s, x)
    return total


def lambda_completed(series: LSeries, s: float, m: int | None = None,
                     cutoff: float = 1.0, tol: float = 1e-10) -> float:
    """Completed Lambda(s) = N^{s/2} (2 pi)^{-s} Gamma(s) L(E, s).

    Smoothed approximate functional equation:
    Lambda(s) = F_t(s) + eps F_{1/t}(2 - s) with the half-sums F as in
    _half_sum; independent of the cutoff t when eps is correct.
    """
    m = m or series.bound
    if m > series.bound:
        raise DegenerateInputError("not enough coefficients for requested bound")
    tail = math.exp(-2.0 * math.pi * m * min(cutoff, 1.0 / cutoff)
                    / math.sqrt(series.conductor))
    if tail > tol:
        raise DegenerateInputError(
            f"tail bound {tail:.2e} exceeds tol; increase the coefficient bound"
        )
    return (_half_sum(series, s, cutoff, m)
            + series.epsilon * _half_sum(series, 2.0 - s, 1.0 / cutoff, m))


def epsilon_detect(conductor: int, coefficients: list, m: int | None = None) -> int:
    """Functional-equation sign by cutoff independence of the smoothed sum.

    For the true sign the approximate functional equation is independent
    of the splitting parameter; the wrong sign leaves an O(1) mismatch.
    """
    m = m or len(coefficients) - 1
    best = {}
    for eps in (1, -1):
        trial = LSeries(conductor, eps, coefficients)
        v1 = lambda_completed(trial, 0.7, m, cutoff=1.0)
        v2 = lambda_completed(trial, 0.7, m, cutoff=1.35)
        best[eps] = abs(v1 - v2)
    winner = min(best, key=best.get)
    if best[winner] > 1e-6:
        raise InconsistentDataError(
            f"no sign fits the functional equation (residuals {best}); "
            "some coefficient is wrong"
        )
    return winner


def l_prime_zero(series: LSeries) -> float:
    """L'(E, 0) = Lambda(0) (the completed function forces L(E,0) = 0)."""
    return lambda_completed(series, 0.0)


def parse_override_file(text: str) -> dict:
    """Plain-text override table: one 'p a_p' pair per line; '#' comments."""
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DegenerateInputError(f"malformed override line: {line!r}")
        out[int(parts[0])] = int(parts[1])
    return out


# the seven proven parameter/ratio/conductor rows for the cubic family
TABLE_ONE = {
    -4: (Fraction(2), 36),
    2: (Fraction(1, 2), 36),
    -8: (Fraction(10), 14),
    1: (Fraction(1), 14),
    7: (Fraction(6), 14),
    -2: (Fraction(3), 20),
    4: (Fraction(2), 20),
}


def table_one_lseries(alpha: int, bound: int = 200,
                      overrides: dict | None = None) -> LSeries:
    """L-series of the cubic-family curve for a proven-ratio parameter."""
    if alpha not in TABLE_ONE:
        raise DegenerateInputError(f"alpha={alpha} is not a catalogued parameter")
    _, conductor = TABLE_ONE[alpha]
    apt = ap_table(deuring_curve(alpha), conductor, bound, overrides)
    coeffs = an_coefficients(apt, bound)
    eps = epsilon_detect(conductor, coeffs, bound)
    return LSeries(conductor, eps, coeffs)
