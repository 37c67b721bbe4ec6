"""Closed-form oscillator eigenstates for O(2), O(3) and O(2,1).

Units hbar = omega = 1; energies are in units of omega.  Coordinates:

    O2   x = rho cos(phi),              y = rho sin(phi)
    O3   x = rho cos(phi) sin(theta),   y = rho sin(phi) sin(theta),  z = rho cos(theta)
    O21  x = rho cos(phi) cosh(beta),   y = rho sin(phi) cosh(beta),  t = rho sinh(beta)

The third coordinate is carried in ``aux`` (theta for O3, beta for O21).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import laguerre, legendre_p, legendre_phat

TWO_PI = 2.0 * math.pi


class GroupKind(str, enum.Enum):
    O2 = "o2"
    O3 = "o3"
    O21 = "o21"

    @property
    def dim(self) -> int:
        return 2 if self is GroupKind.O2 else 3


class LabelError(ValueError):
    """Quantum numbers that do not index a state of the requested family."""


class UnsupportedError(RuntimeError):
    """Operation not defined for the given family of states."""


class NonFockError(TypeError):
    """A non-normalizable function was passed where a Fock state is required."""


@dataclass(frozen=True, order=True)
class StateLabel:
    group: GroupKind
    s: float
    n: int
    l: int = 0
    m: int = 0

    def __post_init__(self):
        object.__setattr__(self, "group", GroupKind(self.group))

    def as_dict(self) -> dict:
        return {"group": self.group.value, "s": self.s, "n": self.n, "l": self.l, "m": self.m}


@dataclass(frozen=True, order=True)
class ZetaLabel:
    """Occupation label of (abar_+)^alpha (abar_-)^beta (abar_par)^gamma psi_0."""

    alpha: int
    beta: int
    gamma: int = 0
    s: float = 0.0

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise LabelError("occupations must be non-negative")

    @property
    def N(self) -> float:
        return self.alpha + self.beta + self.gamma + self.s

    @property
    def m(self) -> int:
        return self.alpha - self.beta


@dataclass(frozen=True)
class CoordPoint:
    rho: float
    phi: float
    aux: float = 0.0


def _is_half(s: float) -> bool:
    return abs(s - 0.5) < 1e-12


def validate_label(label: StateLabel) -> bool:
    """True iff ``label`` indexes a normalizable Fock-space state."""
    s, n, l, m = label.s, label.n, label.l, label.m
    if n < 0:
        return False
    if label.group is GroupKind.O2:
        if not 0.0 <= s < 1.0 or n + m + s < 0:
            return False
        # L_n^{m+s} carries no factor of x for non-integer order, so the
        # radial factor rho^{m+s} must itself be square integrable.
        return s == 0.0 or m + s > -1.0
    if l < 0:
        return False
    if s == 0.0:
        return abs(m) <= l
    if _is_half(s):
        # lower index of P_m^l: nonzero only for m >= l
        return m >= l
    return False


def _require(label: StateLabel) -> None:
    if not validate_label(label):
        raise LabelError(f"inadmissible label {label}")


def energy(label: StateLabel) -> float:
    _require(label)
    if label.group is GroupKind.O2:
        return 2 * label.n + label.m + label.s + 1.0
    return 2 * label.n + label.l + 1.5 - label.s


def casimir_eigenvalue(label: StateLabel) -> float:
    """Eigenvalue substituted for the group Casimir in the radial equation."""
    if label.group is GroupKind.O2:
        return (label.m + label.s) ** 2
    if label.s == 0.0:
        return label.l * (label.l + 1.0)
    return label.l**2 - 0.25


def normalization_2d(n: int, m: int, s: float) -> float:
    """(-1)^n sqrt(Gamma(n+1) / (pi Gamma(n+m+s+1))); zero when n+m+s < 0."""
    if n < 0 or n + m + s < 0:
        return 0.0
    return (-1) ** n * math.exp(0.5 * (math.lgamma(n + 1) - math.lgamma(n + m + s + 1))) / math.sqrt(math.pi)


def formal_normalization_2d(n: int, m: int, s: float) -> float:
    # same expression continued to n+m+s < 0 where Gamma(n+m+s+1) > 0
    g = math.gamma(n + m + s + 1)
    return (-1) ** n * math.sqrt(math.gamma(n + 1) / (math.pi * g))


def radial_exponent(label: StateLabel) -> float:
    if label.group is GroupKind.O2:
        return label.m + label.s
    return label.l - label.s


def leading_power(label: StateLabel) -> float:
    """Small-rho power of the radial factor; L_n^m carries x^|m| when s=0, m<0."""
    a = radial_exponent(label)
    if label.group is GroupKind.O2 and label.s == 0.0:
        return abs(a)
    return a


def laguerre_order(label: StateLabel) -> float:
    if label.group is GroupKind.O2:
        return label.m + label.s
    return label.l - label.s + 0.5


def radial_terms(label: StateLabel):
    """(power, factor, n, alpha) with rho^power * factor * L_n^alpha(rho^2) the radial polynomial.

    For s=0, m<0 in O2 the Laguerre polynomial of negative order is rewritten
    through L_n^{-k}(x) = (-x)^k (n-k)!/n! L_{n-k}^k(x), which avoids the
    cancellation of its low-order terms at small rho.
    """
    a, al, n = radial_exponent(label), laguerre_order(label), label.n
    if label.group is GroupKind.O2 and label.s == 0.0 and label.m < 0 and n >= -label.m:
        k = -label.m
        return float(k), (-1) ** k * math.factorial(n - k) / math.factorial(n), n - k, float(k)
    return a, 1.0, n, al


def radial_normalization_3d(n: int, l: int, s: float) -> float:
    # int rho^2 drho rho^{2(l-s)} e^{-rho^2} (L_n^{l-s+1/2})^2 = Gamma(n+l-s+3/2) / (2 n!)
    return math.sqrt(2.0 * math.exp(math.lgamma(n + 1) - math.lgamma(n + l - s + 1.5)))


def spherical_constant(l: int, m: int) -> float:
    return math.sqrt((2 * l + 1) / (4 * math.pi) * math.factorial(l - m) / math.factorial(l + m))


def norm_const(label: StateLabel) -> float:
    """The A coefficient; the s=1/2 angular constant is fixed to 1."""
    if label.group is GroupKind.O2:
        return normalization_2d(label.n, label.m, label.s) if validate_label(label) else 0.0
    if not validate_label(label):
        return 0.0
    radial = radial_normalization_3d(label.n, label.l, label.s)
    if label.s == 0.0:
        return radial * spherical_constant(label.l, label.m)
    return radial


def _check_coords(group: GroupKind, rho, phi, aux):
    if np.any(rho < 0) or np.any(~np.isfinite(rho)):
        raise ValueError("rho must be finite and >= 0")
    if np.any(phi < 0) or np.any(phi >= TWO_PI + 1e-12):
        raise ValueError("phi must lie in [0, 2pi)")
    if group is GroupKind.O3 and (np.any(aux < 0) or np.any(aux > math.pi)):
        raise ValueError("theta must lie in [0, pi]")
    if group is GroupKind.O21 and np.any(~np.isfinite(aux)):
        raise ValueError("beta must be finite")


def _angular(label: StateLabel, aux):
    l, m = label.l, label.m
    if label.group is GroupKind.O3:
        if label.s == 0.0:
            return legendre_p(l, m, np.cos(aux))
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.cos(aux) / np.sin(aux)
            return legendre_phat(m, l, z) / np.sqrt(np.abs(np.sin(aux)))
    if label.s == 0.0:
        return legendre_phat(l, m, np.sinh(aux))
    return legendre_p(m, l, np.tanh(aux)) / np.sqrt(np.cosh(aux))


def evaluate(label: StateLabel, rho, phi, aux=0.0, const: float | None = None):
    """Vectorized amplitude of the closed-form state at polar coordinates."""
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    aux = np.asarray(aux, dtype=float)
    _check_coords(label.group, rho, phi, aux)
    A = norm_const(label) if const is None else const
    if A == 0.0:
        return np.zeros(np.broadcast(rho, phi, aux).shape, dtype=complex)
    a, c, n, al = radial_terms(label)
    with np.errstate(divide="ignore", invalid="ignore"):
        radial = c * rho**a * np.exp(-rho * rho / 2) * laguerre(n, al, rho * rho)
    out = A * radial * np.exp(1j * (label.m + label.s) * phi)
    if label.group is not GroupKind.O2:
        out = out * _angular(label, aux)
    return out


def eval_state(label: StateLabel, p: CoordPoint) -> complex:
    return complex(evaluate(label, p.rho, p.phi, p.aux))


@dataclass(frozen=True)
class OscillatorState:
    label: StateLabel
    norm_const: float
    energy: float

    def __call__(self, rho, phi, aux=0.0):
        return evaluate(self.label, rho, phi, aux, const=self.norm_const)

    def at(self, p: CoordPoint) -> complex:
        return complex(self(p.rho, p.phi, p.aux))

    def as_dict(self) -> dict:
        return {**self.label.as_dict(), "energy": self.energy, "norm_const": self.norm_const}


def make_state(label: StateLabel) -> OscillatorState:
    return OscillatorState(label, norm_const(label), energy(label))


@dataclass(frozen=True)
class NonFockFunction:
    """A well-defined but non-normalizable function, e.g. psi_{0,-1}.

    Kept out of inner products; composed operator chains may pass through it.
    """

    label: StateLabel
    scale: complex = 1.0
    norm_const: float = field(init=False)

    def __post_init__(self):
        if self.label.group is not GroupKind.O2:
            raise UnsupportedError("non-Fock functions are only modelled for O2")
        object.__setattr__(
            self, "norm_const", formal_normalization_2d(self.label.n, self.label.m, self.label.s)
        )

    def __call__(self, rho, phi, aux=0.0):
        return self.scale * evaluate(self.label, rho, phi, aux, const=self.norm_const)


def ground_state(group: GroupKind, s: float, m0: int = 0) -> OscillatorState:
    """The n = l = 0 state; for s=1/2 in 3D the m0-th member of the ground multiplet."""
    group = GroupKind(group)
    if m0 != 0 and (group is GroupKind.O2 or s == 0.0):
        raise LabelError("m0 must be 0 unless the ground level is degenerate")
    if m0 < 0:
        raise LabelError("m0 must be >= 0")
    return make_state(StateLabel(group, s, 0, 0, m0))


def polar_from_cartesian(group: GroupKind, x, y, w=0.0):
    """Inverse of the coordinate map; ``w`` is z for O3 and t for O21."""
    x, y, w = (np.asarray(v, dtype=float) for v in (x, y, w))
    phi = np.mod(np.arctan2(y, x), TWO_PI)
    phi = np.where(phi >= TWO_PI, 0.0, phi)
    r2 = x * x + y * y
    if group is GroupKind.O2:
        return np.sqrt(r2), phi, np.zeros_like(phi)
    if group is GroupKind.O3:
        rho = np.sqrt(r2 + w * w)
        return rho, phi, np.arccos(np.clip(w / rho, -1.0, 1.0))
    if np.any(w * w >= r2):
        raise ValueError("point outside the spacelike sector")
    return np.sqrt(r2 - w * w), phi, np.arctanh(w / np.sqrt(r2))


def cartesian_from_polar(group: GroupKind, rho, phi, aux=0.0):
    rho, phi, aux = (np.asarray(v, dtype=float) for v in (rho, phi, aux))
    if group is GroupKind.O2:
        return rho * np.cos(phi), rho * np.sin(phi), np.zeros_like(rho)
    if group is GroupKind.O3:
        return rho * np.cos(phi) * np.sin(aux), rho * np.sin(phi) * np.sin(aux), rho * np.cos(aux)
    return rho * np.cos(phi) * np.cosh(aux), rho * np.sin(phi) * np.cosh(aux), rho * np.sinh(aux)


def cartesian_form(label: StateLabel, x, y, aux=0.0):
    """Cartesian closed form of a ground state (n = l = m = 0).

    ``aux`` is z for O3 and t for O21.  The phase uses the two-argument
    angle in [0, 2pi).
    """
    if (label.n, label.l, label.m) != (0, 0, 0):
        raise UnsupportedError("Cartesian form is only available for ground states")
    _require(label)
    x, y, w = (np.asarray(v, dtype=float) for v in (x, y, aux))
    s = label.s
    A = norm_const(label)
    r2 = x * x + y * y
    phase = np.exp(1j * s * np.mod(np.arctan2(y, x), TWO_PI))
    if label.group is GroupKind.O2:
        return A * np.exp(-r2 / 2) * r2 ** (s / 2) * phase
    sign = 1.0 if label.group is GroupKind.O3 else -1.0
    with np.errstate(divide="ignore"):
        return A * np.exp(-(r2 + sign * w * w) / 2) * phase / r2 ** (s / 2)
