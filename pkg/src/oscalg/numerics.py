"""Quadrature inner products, Schrodinger residuals and indefinite-metric norms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre, roots_legendre

from .specfun import laguerre
from .states import (
    GroupKind,
    LabelError,
    NonFockError,
    NonFockFunction,
    OscillatorState,
    StateLabel,
    casimir_eigenvalue,
    energy,
    leading_power,
    make_state,
    radial_terms,
    validate_label,
)


class BasisError(ValueError):
    """Labels that cannot share a Gram matrix."""


class PhaseConvention(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    KIMNOZ = "kimnoz"
    FKR = "fkr"


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor-product rule: Gauss-Laguerre in x = rho^2, uniform in phi,
    Gauss-Legendre panels in theta (O3) or in beta on [-cutoff, cutoff] (O21).

    ``radial_alpha`` is the exponent of the generalized Laguerre weight
    x^alpha e^{-x}; ``None`` picks it from the states being integrated.
    """

    radial_nodes: int = 48
    azimuthal_nodes: int = 32
    aux_nodes: int = 48
    cutoff: float = 12.0
    theta_exclusion: float = 1e-6
    radial_alpha: float | None = None
    metric: int = 1

    def __post_init__(self):
        if min(self.radial_nodes, self.azimuthal_nodes, self.aux_nodes) < 8:
            raise ValueError("node counts must be >= 8")
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")


@dataclass(frozen=True)
class NormReport:
    value: float
    convergence_estimate: float
    divergent: bool

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "convergence_estimate": self.convergence_estimate,
            "divergent": self.divergent,
        }


# --- rules ------------------------------------------------------------------


@lru_cache(maxsize=64)
def radial_rule(nodes: int, alpha: float):
    """Nodes/weights for int_0^inf x^alpha e^{-x} f(x) dx."""
    x, w = roots_genlaguerre(nodes, alpha)
    return x, w


def azimuthal_rule(nodes: int):
    phi = np.arange(nodes) * (2 * math.pi / nodes)
    return phi, np.full(nodes, 2 * math.pi / nodes)


@lru_cache(maxsize=64)
def _gl(nodes: int):
    return roots_legendre(nodes)


def panel_rule(a: float, b: float, nodes: int, panels: int):
    """Composite Gauss-Legendre on [a, b]."""
    t, w = _gl(nodes)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    ww = (half[:, None] * w[None, :]).ravel()
    return x, ww


def cutoff_rule(cutoff: float, nodes: int):
    # unit-width panels keep sech-type integrands resolved
    return panel_rule(-cutoff, cutoff, nodes, max(1, int(math.ceil(2 * cutoff))))


def theta_rule(nodes: int):
    """Gauss-Legendre in z = cos(theta); weights already include sin(theta) dtheta."""
    z, w = _gl(nodes)
    return np.arccos(z), w


# --- grids -----------------------------------------------------------------


def _labels_of(*fs):
    out = []
    for f in fs:
        if isinstance(f, NonFockFunction):
            raise NonFockError("non-Fock functions are excluded from inner products")
        if isinstance(f, OscillatorState):
            out.append(f.label)
        elif isinstance(f, StateLabel):
            out.append(f)
    return out


def _auto_alpha(group: GroupKind, labels) -> float:
    # x^alpha matches the leading radial power of |psi|^2 times the volume element
    base = 0.0 if group is GroupKind.O2 else 0.5
    if not labels:
        return base
    return min(leading_power(lb) for lb in labels) + base


def _grid(group: GroupKind, spec: QuadratureSpec, alpha: float, cutoff: float | None = None):
    """Return (rho, phi, aux, weight) arrays for the full volume element."""
    x, wr = radial_rule(spec.radial_nodes, float(alpha))
    rho = np.sqrt(x)
    base = 0.0 if group is GroupKind.O2 else 0.5
    # int rho^{D-1} drho f = 1/2 int x^{(D-2)/2} f dx; rule weight is x^alpha e^{-x}
    wr = 0.5 * wr * np.exp(x) * x ** (base - alpha)
    phi, wphi = azimuthal_rule(spec.azimuthal_nodes)
    if group is GroupKind.O2:
        R, P = np.meshgrid(rho, phi, indexing="ij")
        W = np.outer(wr, wphi)
        return R, P, np.zeros_like(R), W
    if group is GroupKind.O3:
        aux, wa = theta_rule(spec.aux_nodes)
    else:
        B = spec.cutoff if cutoff is None else cutoff
        aux, wa = cutoff_rule(B, spec.aux_nodes)
        wa = wa * np.cosh(aux)
    R, A, P = np.meshgrid(rho, aux, phi, indexing="ij")
    W = wr[:, None, None] * wa[None, :, None] * wphi[None, None, :]
    return R, P, A, W


def _as_callable(f):
    if isinstance(f, StateLabel):
        f = make_state(f)
    return f


def _group_of(f, g, group):
    labels = _labels_of(f, g)
    groups = {lb.group for lb in labels}
    if group is not None:
        groups.add(GroupKind(group))
    if len(groups) != 1:
        raise BasisError("cannot infer a single coordinate group")
    return groups.pop(), labels


def inner_product(f, g, spec: QuadratureSpec = QuadratureSpec(), group=None) -> complex:
    """<f, g> = int conj(f) g dV; f, g are states, labels or callables(rho, phi, aux)."""
    grp, labels = _group_of(f, g, group)
    alpha = spec.radial_alpha if spec.radial_alpha is not None else _auto_alpha(grp, labels)
    R, P, A, W = _grid(grp, spec, alpha)
    fv = _as_callable(f)(R, P, A)
    gv = _as_callable(g)(R, P, A)
    return complex(np.sum(W * np.conj(fv) * gv))


def orthonormality_matrix(labels, spec: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    if not labels:
        return np.zeros((0, 0), dtype=complex)
    groups = {lb.group for lb in labels}
    ss = {lb.s for lb in labels}
    if len(groups) != 1 or len(ss) != 1:
        raise BasisError("labels must share group and s")
    for lb in labels:
        if not validate_label(lb):
            raise LabelError(f"inadmissible label {lb}")
    grp = groups.pop()
    alpha = spec.radial_alpha if spec.radial_alpha is not None else _auto_alpha(grp, labels)
    R, P, A, W = _grid(grp, spec, alpha)
    vals = np.array([make_state(lb)(R, P, A).ravel() for lb in labels])
    return (np.conj(vals) * W.ravel()) @ vals.T


# --- Schrodinger residual ---------------------------------------------------


def radial_residual(label: StateLabel, rho, eps_shift: float = 0.0):
    """[-d2 - (D-1)/rho d + C/rho^2 + rho^2 - eps] R and R itself, analytically."""
    a, c, n, al = radial_terms(label)
    D = label.group.dim
    eps = 2.0 * energy(label) + eps_shift
    u = rho * rho
    L = laguerre(n, al, u)
    L1 = -laguerre(n - 1, al + 1, u)
    L2 = laguerre(n - 2, al + 2, u)
    g = c * rho**a * np.exp(-u / 2)
    h = a / rho - rho
    g1 = g * h
    g2 = g * (h * h - a / u - 1.0)
    R = g * L
    dR = g1 * L + g * 2 * rho * L1
    d2R = g2 * L + 2 * g1 * 2 * rho * L1 + g * (2 * L1 + 4 * u * L2)
    res = -d2R - (D - 1) / rho * dR + casimir_eigenvalue(label) / u * R + u * R - eps * R
    return res, R


def schrodinger_residual(
    state, spec: QuadratureSpec = QuadratureSpec(), eps_shift: float = 0.0
) -> float:
    """Relative L2 residual of the radial Schrodinger equation.

    ``eps_shift`` perturbs the eigenvalue eps = 2E; a nonzero shift is the
    negative control for the check.
    """
    label = state.label if isinstance(state, OscillatorState) else state
    if not validate_label(label):
        raise LabelError(f"inadmissible label {label}")
    D = label.group.dim
    alpha = leading_power(label) + (D - 2) / 2
    x, w = radial_rule(spec.radial_nodes, alpha)
    rho = np.sqrt(x)
    res, R = radial_residual(label, rho, eps_shift)
    # divide out rho^{2a} so the weight x^alpha carries the small-rho behaviour
    scale = rho ** (-2 * leading_power(label)) * np.exp(x)
    num = np.sum(w * scale * np.abs(res) ** 2)
    den = np.sum(w * scale * np.abs(R) ** 2)
    return float(math.sqrt(num / den))


# --- norms with divergence detection ----------------------------------------


def _angular_half_norm(label: StateLabel, cut: float, nodes: int) -> float:
    """Angular integral of |F|^2 over the patch truncated at |u| <= cut.

    For O3 s=1/2 the variable u = -log tan(theta/2) maps theta to the line
    (cot(theta) = -sinh(u)); for O21 it is beta itself.
    """
    from .specfun import legendre_p, legendre_phat

    u, w = cutoff_rule(cut, nodes)
    if label.group is GroupKind.O3:
        # |F|^2 sin(theta) dtheta = |P^_m^l(sinh u)|^2 sech(u) du
        f = legendre_phat(label.m, label.l, np.sinh(u)) ** 2 / np.cosh(u)
    else:
        # |G|^2 cosh(beta) dbeta = |P_m^l(tanh beta)|^2 dbeta
        f = legendre_p(label.m, label.l, np.tanh(u)) ** 2
    return math.fsum(w * f)


def _angular_s0_o21_norm(label: StateLabel, cut: float, nodes: int) -> float:
    from .specfun import legendre_phat
    from .states import spherical_constant

    b, w = cutoff_rule(cut, nodes)
    f = (spherical_constant(label.l, label.m) * legendre_phat(label.l, label.m, np.sinh(b))) ** 2
    return math.fsum(w * f * np.cosh(b))


def _theta_cut(eps: float) -> float:
    return -math.log(math.tan(eps / 2))


def norm_report(
    label: StateLabel, spec: QuadratureSpec = QuadratureSpec(), rel_tol: float = 1e-3
) -> NormReport:
    """Norm of a state, flagging divergence as the angular cutoff is relaxed.

    O21 states are integrated over |beta| <= B and 2B; O3 s=1/2 states over
    theta in [eps, pi - eps] for eps and eps^2.  Divergent values are
    reported, never regularized.
    """
    if not validate_label(label):
        raise LabelError(f"inadmissible label {label}")
    grp = label.group
    if grp is GroupKind.O2 or (grp is GroupKind.O3 and label.s == 0.0):
        v = inner_product(label, label, spec).real
        return NormReport(v, 0.0, False)
    radial = 1.0  # radial factor is normalized by construction
    if grp is GroupKind.O3:
        c1 = _theta_cut(spec.theta_exclusion)
        c2 = _theta_cut(spec.theta_exclusion**2)
        f = _angular_half_norm
    else:
        c1, c2 = spec.cutoff, 2 * spec.cutoff
        f = _angular_s0_o21_norm if label.s == 0.0 else _angular_half_norm
    v1 = 2 * math.pi * radial * f(label, c1, spec.aux_nodes)
    v2 = 2 * math.pi * radial * f(label, c2, spec.aux_nodes)
    delta = abs(v2 - v1)
    return NormReport(v2, delta, bool(delta > rel_tol * max(1.0, abs(v1))))


# --- indefinite metric --------------------------------------------------------


def _vacuum_moment(k: int, commutator: int) -> Fraction:
    """<0| b^k (b^dagger)^k |0> / k! when [b, b^dagger] = commutator and b|0> = 0."""
    val = Fraction(1)
    for j in range(1, k + 1):
        # b (b^dagger)^j |0> = j * commutator * (b^dagger)^(j-1) |0>
        val *= j * commutator
    return val / math.factorial(k)


def ghost_norm(convention: PhaseConvention, n0: int) -> int:
    """Norm of the state with n0 timelike excitations above the convention's ground.

    FKR: a0 annihilates, abar0 creates, [a0, abar0] = eta00 = -1.
    Kim-Noz: roles swap, the creator is a0 and [abar0, a0] = -eta00 = +1.
    """
    if n0 < 0:
        raise LabelError("n0 must be >= 0")
    convention = PhaseConvention(convention)
    eta00 = -1
    if convention is PhaseConvention.FKR:
        val = _vacuum_moment(n0, eta00)
    elif convention is PhaseConvention.KIMNOZ:
        val = _vacuum_moment(n0, -eta00)
    else:
        val = _vacuum_moment(n0, 1)
    assert val.denominator == 1
    return int(val)


def _cartesian_grid(spec: QuadratureSpec, cutoff: float):
    x, wr = radial_rule(spec.radial_nodes, 0.0)
    rho = np.sqrt(x)
    wr = 0.5 * wr * np.exp(x)
    phi, wphi = azimuthal_rule(spec.azimuthal_nodes)
    t, wt = cutoff_rule(cutoff, spec.aux_nodes)
    R, P, T = np.meshgrid(rho, phi, t, indexing="ij")
    W = wr[:, None, None] * wphi[None, :, None] * wt[None, None, :]
    return R * np.cos(P), R * np.sin(P), T, W


def metric_norm(
    f, metric_weight: float, spec: QuadratureSpec = QuadratureSpec(), regulator: float = 1.0
) -> NormReport:
    """eta * int |f|^2 e^{-2 regulator t^2} dt d^2x over 2+1 Minkowski space.

    ``f`` is a callable (x, y, t).  The Gaussian regulator tames the growing
    e^{+t^2/2} of the FKR ground state; divergence is checked by doubling the
    t cutoff.
    """
    if isinstance(f, NonFockFunction):
        raise NonFockError("non-Fock functions are excluded from norms")
    vals = []
    for cut in (spec.cutoff, 2 * spec.cutoff):
        X, Y, T, W = _cartesian_grid(spec, cut)
        vals.append(float(np.sum(W * np.abs(f(X, Y, T)) ** 2 * np.exp(-2 * regulator * T * T))))
    delta = abs(vals[1] - vals[0])
    return NormReport(metric_weight * vals[1], delta, bool(delta > 1e-6 * max(1.0, vals[0])))


def fkr_ground(x, y, t, A0: float = math.pi ** (-0.75)):
    """e^{-(x^2 + y^2 - t^2)/2}; with regulator 1 its regularized norm is 1."""
    return A0 * np.exp(-(x * x + y * y - t * t) / 2)


def timelike_excitation(f, h: float = 1e-3):
    """abar0 f = (t + d/dt) f / sqrt(2), by 4th-order central differences."""

    def g(x, y, t):
        d = (-f(x, y, t + 2 * h) + 8 * f(x, y, t + h) - 8 * f(x, y, t - h) + f(x, y, t - 2 * h)) / (12 * h)
        return (t * f(x, y, t) + d) / math.sqrt(2)

    return g
