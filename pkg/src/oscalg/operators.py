"""Ladder and symmetry operators.

Three realizations are provided: index actions on labels
(``apply_symbolic``, ``apply_cartesian``), explicit differential operators in
polar coordinates (``apply_differential``), and an exact term algebra on
finite sums rho^p e^{iq phi} e^{-rho^2/2} (``PolarSeries``) used for
commutator checks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import BasisError, PhaseConvention, QuadratureSpec, azimuthal_rule, radial_rule
from .specfun import laguerre
from .states import (
    GroupKind,
    LabelError,
    NonFockFunction,
    OscillatorState,
    StateLabel,
    UnsupportedError,
    ZetaLabel,
    cartesian_from_polar,
    formal_normalization_2d,
    laguerre_order,
    make_state,
    norm_const,
    radial_terms,
    validate_label,
)

__all__ = [
    "LadderKind",
    "LadderOp",
    "PhaseConvention",
    "SymbolicAction",
    "apply_symbolic",
    "apply_cartesian",
    "cartesian_energy",
    "apply_differential",
    "PolarSeries",
    "su2_generators",
    "commutator_residual",
    "angular_raise_lower",
    "apply_angular_generator",
    "angular_factor",
    "SERIES_OPS",
    "delta_ground_residual",
    "delta_ground_ratio",
    "q_ground_residual",
]

SQRT2 = math.sqrt(2.0)
RHO_MIN = 5e-4
FD_STEP = 1e-4


class LadderKind(str, enum.Enum):
    A_PLUS = "a+"
    A_MINUS = "a-"
    ABAR_PLUS = "abar+"
    ABAR_MINUS = "abar-"
    A_PAR = "a_par"
    ABAR_PAR = "abar_par"
    CARTESIAN = "cartesian"


@dataclass(frozen=True)
class LadderOp:
    """A creation/annihilation operator.

    ``mu`` and ``bar`` are used only by Cartesian operators; ``mu = 0`` is
    the timelike mode.  The "par" operators act along the third axis (z for
    O3, t for O21).
    """

    kind: LadderKind
    group: GroupKind = GroupKind.O2
    phases: PhaseConvention = PhaseConvention.EUCLIDEAN
    mu: int | None = None
    bar: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", LadderKind(self.kind))
        object.__setattr__(self, "group", GroupKind(self.group))
        object.__setattr__(self, "phases", PhaseConvention(self.phases))
        if self.kind in (LadderKind.A_PAR, LadderKind.ABAR_PAR) and self.group is GroupKind.O2:
            raise LabelError("the parallel operators need a third axis")
        if self.kind is LadderKind.CARTESIAN and (self.mu is None or self.mu < 0):
            raise LabelError("Cartesian operators need a mode index mu >= 0")

    @property
    def creation(self) -> bool:
        if self.kind is LadderKind.CARTESIAN:
            return self.bar
        return self.kind in (LadderKind.ABAR_PLUS, LadderKind.ABAR_MINUS, LadderKind.ABAR_PAR)

    def __str__(self):
        if self.kind is LadderKind.CARTESIAN:
            return ("abar" if self.bar else "a") + f"^{self.mu}"
        return self.kind.value


@dataclass(frozen=True)
class SymbolicAction:
    """coeff * out, where ``kind`` is "state", "nonfock" or "zero"."""

    coeff: float
    out: object
    kind: str

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_nonfock(self) -> bool:
        return self.kind == "nonfock"

    def as_dict(self) -> dict:
        out = self.out
        if isinstance(out, StateLabel):
            out = out.as_dict()
        elif isinstance(out, ZetaLabel):
            out = {"alpha": out.alpha, "beta": out.beta, "gamma": out.gamma, "s": out.s}
        elif isinstance(out, tuple):
            out = list(out)
        return {"coeff": self.coeff, "out": out, "kind": self.kind}


ZERO = SymbolicAction(0.0, None, "zero")


# --- symbolic actions ---------------------------------------------------------

# (coefficient squared, dn, dm) for the O2 number basis
_O2_RULES = {
    LadderKind.A_PLUS: (lambda n, m, s: n, -1, +1),
    LadderKind.A_MINUS: (lambda n, m, s: n + m + s, 0, -1),
    LadderKind.ABAR_PLUS: (lambda n, m, s: n + m + s + 1, 0, +1),
    LadderKind.ABAR_MINUS: (lambda n, m, s: n + 1, +1, -1),
}


def _o2_action(kind: LadderKind, label: StateLabel) -> SymbolicAction:
    if kind not in _O2_RULES:
        raise LabelError(f"{kind.value} does not act on O2 labels")
    c2, dn, dm = _O2_RULES[kind]
    sq = c2(label.n, label.m, label.s)
    if abs(sq) < 1e-14:
        return ZERO
    if sq < 0:
        raise LabelError(f"{kind.value} leaves the formal family at {label}")
    out = StateLabel(label.group, label.s, label.n + dn, 0, label.m + dm)
    return SymbolicAction(math.sqrt(sq), out, "state" if validate_label(out) else "nonfock")


def _zeta_action(op: LadderOp, z: ZetaLabel) -> SymbolicAction:
    """Action on the unnormalized zeta states; creation coefficients are 1."""
    if z.s != 0.0:
        if op.group is not GroupKind.O2:
            raise UnsupportedError("the vector ladder fails for the s=1/2 ground multiplet")
        if not op.creation:
            raise UnsupportedError("annihilators on s != 0 zeta states: use StateLabel")
    a, b, g = z.alpha, z.beta, z.gamma
    if op.group is GroupKind.O2 and g:
        raise LabelError("O2 zeta labels have gamma = 0")
    k = op.kind
    if k is LadderKind.ABAR_PLUS:
        return SymbolicAction(1.0, ZetaLabel(a + 1, b, g, z.s), "state")
    if k is LadderKind.ABAR_MINUS:
        return SymbolicAction(1.0, ZetaLabel(a, b + 1, g, z.s), "state")
    if k is LadderKind.ABAR_PAR:
        return SymbolicAction(1.0, ZetaLabel(a, b, g + 1, z.s), "state")
    # [a_+, abar_-] = [a_-, abar_+] = 1, [a_par, abar_par] = +1 (O3) or -1 (O21)
    if k is LadderKind.A_PLUS:
        return SymbolicAction(float(b), ZetaLabel(a, b - 1, g), "state") if b else ZERO
    if k is LadderKind.A_MINUS:
        return SymbolicAction(float(a), ZetaLabel(a - 1, b, g), "state") if a else ZERO
    if k is LadderKind.A_PAR:
        eta = 1.0 if op.group is GroupKind.O3 else -1.0
        return SymbolicAction(eta * g, ZetaLabel(a, b, g - 1), "state") if g else ZERO
    raise LabelError("Cartesian operators act on occupation vectors")


def apply_symbolic(op: LadderOp, label) -> SymbolicAction:
    """Index action of a polar ladder operator.

    O2 ``StateLabel`` inputs use the normalized number basis; chains may pass
    through non-Fock labels (formal normalization).  ``ZetaLabel`` inputs use
    the unnormalized zeta basis.
    """
    if isinstance(label, ZetaLabel):
        return _zeta_action(op, label)
    if label.group is not GroupKind.O2:
        if label.s != 0.0:
            raise UnsupportedError("the vector ladder fails for the s=1/2 ground multiplet")
        raise LabelError("3D states are addressed through ZetaLabel")
    if label.n < 0 or not 0.0 <= label.s < 1.0:
        raise LabelError(f"bad label {label}")
    return _o2_action(op.kind, label)


# --- Cartesian modes ----------------------------------------------------------


def _check_occ(occ, convention: PhaseConvention):
    occ = tuple(int(v) for v in occ)
    if any(v < 0 for v in occ):
        raise LabelError("occupations are non-negative (FKR stores -n0)")
    if convention is PhaseConvention.KIMNOZ and occ[0] < 1:
        raise LabelError("Kim-Noz timelike occupation must be >= 1")
    return occ


def apply_cartesian(op: LadderOp, occ, convention: PhaseConvention | None = None) -> SymbolicAction:
    """Ladder action on an occupation vector; index 0 is timelike unless Euclidean.

    Kim-Noz: abar^0 lowers n0 with sqrt(n0-1), a^0 raises it with sqrt(n0).
    FKR: the stored count k = -n0 is raised by abar^0 with sqrt(k+1) and
    lowered by a^0 with sqrt(k).
    """
    conv = PhaseConvention(convention or op.phases)
    if op.kind is not LadderKind.CARTESIAN:
        raise LabelError("apply_cartesian needs a Cartesian operator")
    occ = _check_occ(occ, conv)
    mu = op.mu
    if mu >= len(occ):
        raise LabelError("mode index out of range")
    n = occ[mu]
    timelike_kn = conv is PhaseConvention.KIMNOZ and mu == 0
    if op.bar:
        coeff2, step = (n - 1, -1) if timelike_kn else (n + 1, +1)
    else:
        coeff2, step = (n, +1) if timelike_kn else (n, -1)
    if coeff2 == 0:
        return ZERO
    out = list(occ)
    out[mu] += step
    return SymbolicAction(math.sqrt(coeff2), tuple(out), "state")


def cartesian_energy(convention: PhaseConvention, occ) -> float:
    """Oscillator energy of an occupation vector, half a quantum per mode."""
    conv = PhaseConvention(convention)
    occ = _check_occ(occ, conv)
    spatial = sum(occ[1:])
    half = len(occ) / 2
    if conv is PhaseConvention.KIMNOZ:
        return -occ[0] + spatial + half
    return occ[0] + spatial + half


# --- differential realization -------------------------------------------------


def _d1(g, x, h):
    # fourth-order central difference
    return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h)


def _d2(g, x, h):
    return (-g(x + 2 * h) + 16 * g(x + h) - 30 * g(x) + 16 * g(x - h) - g(x - 2 * h)) / (12 * h * h)


def _o2_state_derivs(label: StateLabel, const: float, rho: float, phi: float):
    """psi, d_rho psi, d_phi psi for an O2 closed form (formal constants allowed)."""
    a, c, n, al = radial_terms(label)
    u = rho * rho
    L = laguerre(n, al, u)
    dL = -laguerre(n - 1, al + 1, u)
    ang = np.exp(1j * (label.m + label.s) * phi)
    g = c * const * rho**a * math.exp(-u / 2) * ang
    f = g * L
    return f, f * (a / rho - rho) + g * 2 * rho * dL, 1j * (label.m + label.s) * f


def _polar_derivs(f, group: GroupKind, rho: float, phi: float, aux: float):
    """(f, d_rho f, d_phi f, d_aux f) at a point."""
    if isinstance(f, StateLabel):
        f = make_state(f)
    if group is GroupKind.O2 and isinstance(f, (OscillatorState, NonFockFunction)):
        const = f.norm_const * getattr(f, "scale", 1.0)
        v, dr, dp = _o2_state_derivs(f.label, const, rho, phi)
        return v, dr, dp, 0.0
    h = FD_STEP
    v = complex(f(rho, phi, aux))
    dr = complex(_d1(lambda r: f(r, phi, aux), rho, h))
    if isinstance(f, OscillatorState):
        dp = 1j * (f.label.m + f.label.s) * v
    else:
        dp = complex(_d1(lambda q: f(rho, q % (2 * math.pi), aux), phi, h))
    da = 0.0 if group is GroupKind.O2 else complex(_d1(lambda b: f(rho, phi, b), aux, h))
    return v, dr, dp, da


def _cartesian_gradient(f, group: GroupKind, rho: float, phi: float, aux: float):
    """(f, d_x f, d_y f, d_w f) with w = z (O3) or t (O21)."""
    v, dr, dp, da = _polar_derivs(f, group, rho, phi, aux)
    c, s = math.cos(phi), math.sin(phi)
    if group is GroupKind.O2:
        radial, trans, dw = dr, 0.0, 0.0
        perp = dp / rho
    elif group is GroupKind.O3:
        st, ct = math.sin(aux), math.cos(aux)
        radial = st * dr + ct / rho * da
        perp = dp / (rho * st)
        dw = ct * dr - st / rho * da
    else:
        ch, sh = math.cosh(aux), math.sinh(aux)
        radial = ch * dr - sh / rho * da
        perp = dp / (rho * ch)
        dw = -sh * dr + ch / rho * da
    return v, c * radial - s * perp, s * radial + c * perp, dw


def apply_differential(op: LadderOp, f, p) -> complex:
    """Apply a polar ladder operator as a differential operator at ``p``.

    O2 states (including non-Fock functions) are differentiated
    analytically; anything else by fourth-order central differences.
    """
    from .specfun import DomainError

    rho, phi, aux = float(p.rho), float(p.phi), float(p.aux)
    if rho <= RHO_MIN:
        raise DomainError("rho too close to the coordinate singularity")
    group = op.group
    if group is GroupKind.O3 and min(aux, math.pi - aux) <= 2 * FD_STEP:
        raise DomainError("theta too close to a pole")
    v, fx, fy, fw = _cartesian_gradient(f, group, rho, phi, aux)
    x, y, w = (float(c) for c in cartesian_from_polar(group, rho, phi, aux))
    k = op.kind
    if k is LadderKind.CARTESIAN:
        if op.mu == 1:
            return (x * v + (-fx if op.bar else fx)) / SQRT2
        if op.mu == 2:
            return (y * v + (-fy if op.bar else fy)) / SQRT2
        k = LadderKind.ABAR_PAR if op.bar else LadderKind.A_PAR
    if k in (LadderKind.A_PAR, LadderKind.ABAR_PAR):
        if group is GroupKind.O2:
            raise LabelError("no third axis in O2")
        # O21 timelike: a0 = (t - d_t)/sqrt2, abar0 = (t + d_t)/sqrt2
        sign = 1.0 if group is GroupKind.O3 else -1.0
        if k is LadderKind.ABAR_PAR:
            sign = -sign
        return (w * v + sign * fw) / SQRT2
    sgn = 1.0 if k in (LadderKind.A_PLUS, LadderKind.ABAR_PLUS) else -1.0
    zc = complex(x, sgn * y)
    dc = fx + sgn * 1j * fy
    if k in (LadderKind.A_PLUS, LadderKind.A_MINUS):
        return 0.5 * (zc * v + dc)
    return 0.5 * (zc * v - dc)


# --- exact term algebra ------------------------------------------------------


def _key(p: float, q: float):
    return (round(p, 12), round(q, 12))


class PolarSeries:
    """e^{-rho^2/2} * sum_k c_k rho^{p_k} e^{i q_k phi} with exact ladder actions."""

    def __init__(self, terms=None):
        self.terms: dict = {}
        for (p, q), c in (terms or {}).items():
            self._add(p, q, c)

    def _add(self, p, q, c):
        k = _key(p, q)
        self.terms[k] = self.terms.get(k, 0.0) + complex(c)

    @classmethod
    def from_label(cls, label: StateLabel, const: float | None = None) -> "PolarSeries":
        if label.group is not GroupKind.O2:
            raise UnsupportedError("PolarSeries models O2 functions")
        if const is None:
            const = norm_const(label) if validate_label(label) else formal_normalization_2d(
                label.n, label.m, label.s
            )
        q = label.m + label.s
        al = laguerre_order(label)
        n = label.n
        out = cls()
        for k in range(n + 1):
            # L_n^al(x) = sum_k (-1)^k binom(n+al, n-k) x^k / k!
            binom = math.prod((al + k + j) / j for j in range(1, n - k + 1))
            out._add(q + 2 * k, q, const * (-1) ** k * binom / math.factorial(k))
        return out

    def __call__(self, rho, phi, aux=0.0):
        rho = np.asarray(rho, dtype=float)
        phi = np.asarray(phi, dtype=float)
        tot = np.zeros(np.broadcast(rho, phi).shape, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            for (p, q), c in self.terms.items():
                if c != 0:
                    tot = tot + c * rho**p * np.exp(1j * q * phi)
        return tot * np.exp(-rho * rho / 2)

    def __add__(self, other):
        out = PolarSeries(self.terms)
        for (p, q), c in other.terms.items():
            out._add(p, q, c)
        return out

    def __mul__(self, c):
        return PolarSeries({k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def min_power(self) -> float:
        ps = [p for (p, _), c in self.terms.items() if abs(c) > 0]
        return min(ps) if ps else 0.0

    def ladder(self, kind: LadderKind) -> "PolarSeries":
        kind = LadderKind(kind)
        out = PolarSeries()
        for (p, q), c in self.terms.items():
            if kind is LadderKind.A_PLUS:
                out._add(p - 1, q + 1, 0.5 * (p - q) * c)
            elif kind is LadderKind.A_MINUS:
                out._add(p - 1, q - 1, 0.5 * (p + q) * c)
            elif kind is LadderKind.ABAR_PLUS:
                out._add(p + 1, q + 1, c)
                out._add(p - 1, q + 1, -0.5 * (p - q) * c)
            elif kind is LadderKind.ABAR_MINUS:
                out._add(p + 1, q - 1, c)
                out._add(p - 1, q - 1, -0.5 * (p + q) * c)
            else:
                raise LabelError(f"{kind.value} is not an O2 polar operator")
        return out


def _lad(kind):
    return lambda f: f.ladder(kind)


def _seq(*kinds):
    # rightmost acts first
    def run(f):
        for k in reversed(kinds):
            f = f.ladder(k)
        return f

    return run


_P, _M_, _BP, _BM = LadderKind.A_PLUS, LadderKind.A_MINUS, LadderKind.ABAR_PLUS, LadderKind.ABAR_MINUS

SERIES_OPS = {
    "a+": _lad(_P),
    "a-": _lad(_M_),
    "abar+": _lad(_BP),
    "abar-": _lad(_BM),
    "N": lambda f: _seq(_BP, _M_)(f) + _seq(_BM, _P)(f),
    "M": lambda f: PolarSeries({(p, q): q * c for (p, q), c in f.terms.items()}),
    "Delta": lambda f: _seq(_BP, _P)(f) + _seq(_BM, _M_)(f),
    "Q": lambda f: -1j * (_seq(_BP, _P)(f) - _seq(_BM, _M_)(f)),
}
for _name in ("M", "Delta", "Q"):
    SERIES_OPS["half_" + _name] = (lambda g: lambda f: 0.5 * g(f))(SERIES_OPS[_name])


def _series_op(A):
    if callable(A):
        return A
    return SERIES_OPS[A]


def _series_norm(f: PolarSeries, spec: QuadratureSpec, alpha: float) -> float:
    x, wr = radial_rule(spec.radial_nodes, alpha)
    rho = np.sqrt(x)
    phi, wphi = azimuthal_rule(spec.azimuthal_nodes)
    wr = 0.5 * wr * np.exp(x) * x ** (-alpha)
    R, P = np.meshgrid(rho, phi, indexing="ij")
    return float(math.sqrt(np.sum(np.outer(wr, wphi) * np.abs(f(R, P)) ** 2)))


def commutator_residual(A, B, expected, probes, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """max_f ||(AB - BA - expected) f|| / ||f|| over O2 probe functions.

    ``A``, ``B`` are names from ``SERIES_OPS`` or callables on PolarSeries;
    ``expected`` is a scalar (times identity) or an operator.
    """
    A, B = _series_op(A), _series_op(B)
    if isinstance(expected, (int, float, complex)):
        E = (lambda c: lambda f: c * f)(expected)
    else:
        E = _series_op(expected)
    worst = 0.0
    for f in probes:
        if isinstance(f, StateLabel):
            f = PolarSeries.from_label(f)
        r = A(B(f)) - B(A(f)) - E(f)
        alpha = max(min(f.min_power(), r.min_power() if r.terms else 0.0), -0.99)
        worst = max(worst, _series_norm(r, spec, alpha) / _series_norm(f, spec, alpha))
    return worst


# --- SU(2) generators on fixed-N blocks ----------------------------------------


def _su2_basis(basis):
    if isinstance(basis, (int, np.integer)):
        if basis < 0:
            raise BasisError("N must be >= 0")
        return [ZetaLabel(a, int(basis) - a) for a in range(int(basis), -1, -1)]
    basis = list(basis)
    if not basis:
        raise BasisError("empty basis")
    Ns = {z.alpha + z.beta for z in basis}
    if len(Ns) != 1 or any(z.gamma or z.s for z in basis):
        raise BasisError("SU(2) blocks need s=0 zeta states of a single N")
    return basis


def su2_generators(basis):
    """(M/2, Delta/2, Q/2) on the normalized zeta states of one mode number.

    ``basis`` is N (ordered alpha = N..0) or an explicit list of ZetaLabel.
    """
    basis = _su2_basis(basis)
    idx = {(z.alpha, z.beta): i for i, z in enumerate(basis)}
    d = len(basis)
    M = np.zeros((d, d), dtype=complex)
    D = np.zeros((d, d), dtype=complex)
    Q = np.zeros((d, d), dtype=complex)
    for j, z in enumerate(basis):
        a, b = z.alpha, z.beta
        M[j, j] = a - b
        # abar_+ a_+ moves a quantum from beta to alpha, abar_- a_- the reverse
        up = idx.get((a + 1, b - 1))
        dn = idx.get((a - 1, b + 1))
        if up is not None:
            c = math.sqrt(b * (a + 1))
            D[up, j] += c
            Q[up, j] += -1j * c
        if dn is not None:
            c = math.sqrt(a * (b + 1))
            D[dn, j] += c
            Q[dn, j] += 1j * c
    return 0.5 * M, 0.5 * D, 0.5 * Q


# --- angular raising and lowering --------------------------------------------


def _angular_valid(s: float, l: int, m: int) -> bool:
    if l < 0:
        return False
    if s == 0.0:
        return abs(m) <= l
    if abs(s - 0.5) < 1e-12:
        return m >= l
    return False


def angular_raise_lower(group: GroupKind, s: float, which: str, l: int, m: int, exact_phase: bool = False):
    """(coeff, m') of L^+- (O3) or A^+- (O21) on the angular factor.

    Coefficients follow the real convention; with ``exact_phase`` the O21
    boost coefficients carry their factor i.  For s=1/2 the O3 generator is
    the cot(theta) form, which is minus the s=0 form.
    """
    group = GroupKind(group)
    if group is GroupKind.O2:
        raise LabelError("O2 has no angular raising operators")
    if which not in ("+", "-"):
        raise LabelError("which must be '+' or '-'")
    if not _angular_valid(s, l, m):
        raise LabelError(f"invalid angular labels l={l}, m={m}, s={s}")
    up = which == "+"
    mp = m + 1 if up else m - 1
    if s == 0.0:
        coeff = math.sqrt((l - m) * (l + m + 1)) if up else math.sqrt((l + m) * (l - m + 1))
    elif up:
        coeff = -float(l - m - 1)
    else:
        coeff = 0.0 if mp < l else -float(l + m)
    if coeff == 0.0:
        coeff = 0.0
    if exact_phase and group is GroupKind.O21:
        return 1j * coeff, mp
    return coeff, mp


def apply_angular_generator(label: StateLabel, which: str, aux: float, phi: float) -> complex:
    """L^+- or A^+- applied to the angular factor of ``label`` by differences."""
    from .states import _angular, spherical_constant

    s, m = label.s, label.m
    C = spherical_constant(label.l, m) if s == 0.0 else 1.0
    q = m + s

    def Y(b):
        return C * complex(_angular(label, np.asarray(b)))

    sgn = 1.0 if which == "+" else -1.0
    e = np.exp(1j * (q + sgn) * phi)
    dY = _d1(Y, aux, FD_STEP)
    y = Y(aux)
    if label.group is GroupKind.O3:
        cot = math.cos(aux) / math.sin(aux)
        val = sgn * dY + 1j * cot * (1j * q) * y
        return complex(e * (val if s == 0.0 else -val))
    return complex(-1j * e * (dY + sgn * 1j * math.tanh(aux) * (1j * q) * y))


def angular_factor(label: StateLabel, aux: float, phi: float) -> complex:
    from .states import _angular, spherical_constant

    C = spherical_constant(label.l, label.m) if label.s == 0.0 else 1.0
    return complex(C * _angular(label, np.asarray(aux)) * np.exp(1j * (label.m + label.s) * phi))


# --- broken SU(2): Delta on the s-ground state -------------------------------


def _local_ground(s: float, x0: float, y0: float):
    """psi_0 with the phase branch centred on (x0, y0)."""
    from .states import normalization_2d

    A = normalization_2d(0, 0, s)
    phi0 = math.atan2(y0, x0)

    def f(x, y):
        r2 = x * x + y * y
        ph = phi0 + np.angle((x + 1j * y) * np.exp(-1j * phi0))
        return A * np.exp(-r2 / 2) * r2 ** (s / 2) * np.exp(1j * s * ph)

    return f


def _delta_q(f, x: float, y: float, h: float = 1e-3):
    # Delta = (x^2 - y^2 - d_x^2 + d_y^2)/2,  Q = xy - d_x d_y
    v = f(x, y)
    fxx = _d2(lambda u: f(u, y), x, h)
    fyy = _d2(lambda u: f(x, u), y, h)
    fxy = _d1(lambda u: _d1(lambda w: f(w, u), x, h), y, h)
    return v, 0.5 * ((x * x - y * y) * v - fxx + fyy), x * y * v - fxy


def _check_origin(x, y):
    from .specfun import DomainError

    if math.hypot(x, y) < 1e-8:
        raise DomainError("the s-ground state is singular at the origin")


def delta_ground_residual(s: float, x: float, y: float) -> complex:
    """Delta psi_0 - s (x^2+y^2-s+1)/(x+iy)^2 psi_0 at (x, y)."""
    _check_origin(x, y)
    v, d, _ = _delta_q(_local_ground(s, x, y), x, y)
    return complex(d - s * (x * x + y * y - s + 1) / complex(x, y) ** 2 * v)


def delta_ground_ratio(s: float, x: float, y: float) -> complex:
    """(Delta psi_0)/psi_0 by differences."""
    _check_origin(x, y)
    v, d, _ = _delta_q(_local_ground(s, x, y), x, y)
    return complex(d / v)


def q_ground_residual(s: float, x: float, y: float) -> complex:
    """Q psi_0 - i Delta psi_0, relative to |psi_0|."""
    _check_origin(x, y)
    v, d, q = _delta_q(_local_ground(s, x, y), x, y)
    return complex((q - 1j * d) / abs(v))
