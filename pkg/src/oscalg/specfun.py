"""Special functions used to build the oscillator eigenstates.

Laguerre polynomials, associated Legendre functions (ordinary and the
imaginary-argument "hat" variant) and Clebsch-Gordan coefficients.  All
Legendre-family functions carry the Condon-Shortley phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


def _check_finite(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _out(arr, x):
    return float(arr) if np.ndim(x) == 0 else arr


@dataclass(frozen=True)
class PolyIndex:
    degree: int
    order: float

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")


def laguerre(n: int, alpha: float, x):
    """Generalized Laguerre polynomial L_n^alpha(x).

    Zero for n < 0 and one for n == 0, for any real alpha.
    """
    xa = _check_finite(x)
    if n < 0:
        return _out(np.zeros_like(xa), x)
    prev = np.ones_like(xa)
    if n == 0:
        return _out(prev, x)
    cur = 1.0 + alpha - xa
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - xa) * cur - (k + alpha) * prev) / (k + 1)
    return _out(cur, x)


def laguerre_deriv(n: int, alpha: float, x, order: int = 1):
    """k-th derivative of L_n^alpha, via d/dx L_n^a = -L_{n-1}^{a+1}."""
    return (-1) ** order * laguerre(n - order, alpha + order, x)


def _double_factorial_odd(m: int) -> float:
    # (2m-1)!! == (2m)! / (2^m m!)
    return float(math.prod(range(1, 2 * m, 2))) if m > 0 else 1.0


def _negative_order_factor(l: int, m: int) -> float:
    # P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m
    return (-1) ** m * math.factorial(l - m) / math.factorial(l + m)


def legendre_p(l: int, m: int, z):
    """Associated Legendre function P_l^m(z) on [-1, 1], Condon-Shortley phase."""
    za = _check_finite(z, "z")
    if np.any(np.abs(za) > 1.0):
        raise DomainError("|z| must be <= 1")
    if l < 0:
        raise DomainError("degree must be non-negative")
    if abs(m) > l:
        return _out(np.zeros_like(za), z)
    if m < 0:
        return _out(_negative_order_factor(l, -m) * np.asarray(legendre_p(l, -m, za)), z)
    pmm = (-1) ** m * _double_factorial_odd(m) * (1.0 - za * za) ** (m / 2)
    if l == m:
        return _out(pmm, z)
    pm1 = (2 * m + 1) * za * pmm
    for k in range(m + 2, l + 1):
        pmm, pm1 = pm1, ((2 * k - 1) * za * pm1 - (k + m - 1) * pmm) / (k - m)
    return _out(pm1, z)


def legendre_phat(l: int, m: int, zeta):
    """Imaginary-argument associated Legendre function.

    Solves (1+z^2) f'' + 2 z f' - l(l+1) f + m^2/(1+z^2) f = 0 and is real on
    the real line.  Related to the ordinary function by
    P_l^m(i*zeta) = i^(l-m) * legendre_phat(l, m, zeta); evaluated here with a
    real recurrence seeded from (-1)^m (2m-1)!! (1+zeta^2)^(m/2).
    """
    za = _check_finite(zeta, "zeta")
    if l < 0:
        raise DomainError("degree must be non-negative")
    if abs(m) > l:
        return _out(np.zeros_like(za), zeta)
    if m < 0:
        # continuation of the P_l^{-m} relation: i^(l+m) and i^(l-m) absorb (-1)^m
        ratio = math.factorial(l + m) / math.factorial(l - m)
        return _out(ratio * np.asarray(legendre_phat(l, -m, za)), zeta)
    pmm = (-1) ** m * _double_factorial_odd(m) * (1.0 + za * za) ** (m / 2)
    if l == m:
        return _out(pmm, zeta)
    pm1 = (2 * m + 1) * za * pmm
    for k in range(m + 2, l + 1):
        pmm, pm1 = pm1, ((2 * k - 1) * za * pm1 + (k + m - 1) * pmm) / (k - m)
    return _out(pm1, zeta)


# --- Clebsch-Gordan -------------------------------------------------------


@dataclass(frozen=True)
class CGIndex:
    j1: float
    m1: float
    j2: float
    m2: float
    J: float
    M: float


def _half(x) -> Fraction:
    f = Fraction(x).limit_denominator(2)
    if abs(float(f) - float(x)) > 1e-12:
        raise ValueError(f"{x} is not half-integer valued")
    return f


def _fact(f: Fraction) -> int:
    if f.denominator != 1 or f < 0:
        raise ValueError
    return math.factorial(int(f))


def clebsch_gordan_squared(idx: CGIndex) -> tuple[int, Fraction]:
    """Exact (sign, square) of <j1 m1 j2 m2 | J M> from the Racah formula."""
    j1, m1, j2, m2, J, M = (_half(v) for v in (idx.j1, idx.m1, idx.j2, idx.m2, idx.J, idx.M))
    if m1 + m2 != M or abs(m1) > j1 or abs(m2) > j2 or abs(M) > J:
        return 0, Fraction(0)
    if not (abs(j1 - j2) <= J <= j1 + j2):
        return 0, Fraction(0)
    for a, b in ((j1, m1), (j2, m2), (J, M)):
        if (a - b).denominator != 1:
            return 0, Fraction(0)
    if (j1 + j2 + J).denominator != 1:
        return 0, Fraction(0)

    pref = Fraction(
        int(2 * J + 1) * _fact(J + j1 - j2) * _fact(J - j1 + j2) * _fact(j1 + j2 - J),
        _fact(j1 + j2 + J + 1),
    )
    pref *= Fraction(
        _fact(J + M) * _fact(J - M) * _fact(j1 - m1) * _fact(j1 + m1) * _fact(j2 - m2) * _fact(j2 + m2)
    )
    total = Fraction(0)
    k = 0
    while True:
        args = (
            Fraction(k),
            j1 + j2 - J - k,
            j1 - m1 - k,
            j2 + m2 - k,
            J - j2 + m1 + k,
            J - j1 - m2 + k,
        )
        if args[1] < 0 or args[2] < 0 or args[3] < 0:
            break
        if args[4] >= 0 and args[5] >= 0:
            total += Fraction((-1) ** k, math.prod(_fact(a) for a in args))
        k += 1
    if total == 0:
        return 0, Fraction(0)
    sign = 1 if total > 0 else -1
    return sign, pref * total * total


def clebsch_gordan_exact(idx: CGIndex) -> sympy.Expr:
    sign, sq = clebsch_gordan_squared(idx)
    return sign * sympy.sqrt(sympy.Rational(sq.numerator, sq.denominator))


def clebsch_gordan(idx: CGIndex) -> float:
    """<j1 m1 j2 m2 | J M>, zero when a selection rule is violated."""
    sign, sq = clebsch_gordan_squared(idx)
    return sign * math.sqrt(sq)
