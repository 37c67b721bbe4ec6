"""Fock-space bookkeeping: zeta states, Casimir blocks, multiplicities and
irreducible tensor creation operators."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
import sympy

from .operators import LadderKind, PolarSeries
from .specfun import CGIndex, clebsch_gordan_exact
from .states import (
    GroupKind,
    LabelError,
    OscillatorState,
    StateLabel,
    UnsupportedError,
    ZetaLabel,
    norm_const,
)

__all__ = [
    "ZetaLabel",
    "OperatorBlock",
    "TensorOperator",
    "zeta_to_state_2d",
    "multiplicity",
    "casimir_content",
    "level_content",
    "msq_block",
    "delta_block",
    "tensor_operator",
    "GaussPoly",
    "build_excited",
    "degeneracy_table",
    "degeneracy_csv",
]


def _label_dict(b):
    if isinstance(b, ZetaLabel):
        return {"alpha": b.alpha, "beta": b.beta, "gamma": b.gamma, "s": b.s}
    return b.as_dict()


@dataclass
class OperatorBlock:
    basis: list
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        d = len(self.basis)
        if self.entries.shape != (d, d):
            raise ValueError("block must be square and match its basis")

    def eigenvalues(self) -> np.ndarray:
        E = self.entries
        if np.allclose(E, E.conj().T, atol=1e-14):
            return np.linalg.eigvalsh(E)
        return np.sort_complex(np.linalg.eigvals(E))

    def as_dict(self) -> dict:
        return {
            "basis": [_label_dict(b) for b in self.basis],
            "re": self.entries.real.tolist(),
            "im": self.entries.imag.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


# --- 2D zeta states ------------------------------------------------------------


def zeta_to_state_2d(z: ZetaLabel):
    """(label, N_ab) with zeta_ab = N_ab psi_{beta, alpha-beta}."""
    s = z.s
    lab = StateLabel(GroupKind.O2, s, z.beta, 0, z.alpha - z.beta)
    N = math.sqrt(math.factorial(z.beta) * math.exp(math.lgamma(s + z.alpha + 1) - math.lgamma(s + 1)))
    return lab, N


# --- counting --------------------------------------------------------------------


def _is_half(s):
    return abs(s - 0.5) < 1e-12


def multiplicity(group: GroupKind, N: float, s: float):
    """Number of states of mode number N; ``math.inf`` for the 3D s=1/2 family."""
    group = GroupKind(group)
    if group is GroupKind.O2:
        k = N - s
        if not 0.0 <= s < 1.0 or k < -1e-12 or abs(k - round(k)) > 1e-12:
            raise LabelError("N - s must be a non-negative integer")
        return int(round(k)) + 1
    if _is_half(s):
        return math.inf
    if s != 0.0 or N < 0 or N != int(N):
        raise LabelError("3D mode numbers are non-negative integers with s in {0, 1/2}")
    N = int(N)
    return (N + 1) * (N + 2) // 2


def casimir_content(N: int) -> list[int]:
    """l = N, N-2, ..., 1 or 0."""
    if N < 0:
        raise LabelError("N must be >= 0")
    return list(range(N, -1, -2))


def level_content(N: int) -> list[tuple[int, int]]:
    """(n, l) pairs with 2n + l = N."""
    return [((N - l) // 2, l) for l in casimir_content(N)]


# --- Casimir block ---------------------------------------------------------------


def _msq_basis(N: int, m: int) -> list[ZetaLabel]:
    out = []
    for g in range(N + 1):
        for a in range(N + 1):
            b = a - m
            if b >= 0 and a + b + g == N:
                out.append(ZetaLabel(a, b, g))
    return out


def msq_block(N: int, m: int, group: GroupKind = GroupKind.O3) -> OperatorBlock:
    """M^2 on the normalized zeta states with fixed N and m, ordered by (gamma, alpha).

    For O21 the timelike parallel mode flips the sign of the couplings.
    """
    group = GroupKind(group)
    if group is GroupKind.O2:
        raise LabelError("msq_block is a 3D construction")
    basis = _msq_basis(N, m)
    if not basis:
        raise LabelError(f"no zeta states with N={N}, m={m}")
    idx = {(z.alpha, z.beta, z.gamma): i for i, z in enumerate(basis)}
    sign = -1.0 if group is GroupKind.O3 else 1.0
    E = np.zeros((len(basis), len(basis)))
    for j, z in enumerate(basis):
        a, b, g = z.alpha, z.beta, z.gamma
        E[j, j] = N * (N + 1) - 4 * a * b - g * (g - 1)
        i = idx.get((a + 1, b + 1, g - 2))
        if i is not None:
            E[i, j] = sign * 2 * math.sqrt((a + 1) * (b + 1) * g * (g - 1))
        i = idx.get((a - 1, b - 1, g + 2))
        if i is not None:
            E[i, j] = sign * 2 * math.sqrt(a * b * (g + 2) * (g + 1))
    return OperatorBlock(basis, E)


# --- Delta block -----------------------------------------------------------------


def delta_block(N: float, s: float = 0.0):
    """(Delta on normalized zeta_ab with alpha+beta = N-s, ground-term flag).

    The flag is True when Delta psi_0 != 0, the obstruction to diagonalizing
    Delta on the zeta states.
    """
    k = N - s
    if k < -1e-12 or abs(k - round(k)) > 1e-12:
        raise LabelError("N - s must be a non-negative integer")
    K = int(round(k))
    basis = [ZetaLabel(a, K - a, 0, s) for a in range(K + 1)]
    E = np.zeros((K + 1, K + 1))
    for j, z in enumerate(basis):
        a, b = z.alpha, z.beta
        if a > 0:
            E[j - 1, j] = a * math.sqrt((b + 1) / (s + a))
        if b > 0:
            E[j + 1, j] = b * math.sqrt((s + a + 1) / b)
    ground = PolarSeries.from_label(StateLabel(GroupKind.O2, s, 0, 0, 0))
    dg = ground.ladder(LadderKind.A_PLUS).ladder(LadderKind.ABAR_PLUS)
    dg = dg + ground.ladder(LadderKind.A_MINUS).ladder(LadderKind.ABAR_MINUS)
    flag = any(abs(c) > 1e-12 for c in dg.terms.values())
    return OperatorBlock(basis, E), flag


# --- tensor operators --------------------------------------------------------------

# monomial exponents over (abar_+, abar_-, abar_par)
_FUNDAMENTAL = {
    1: [(sympy.Integer(-1), (1, 0, 0))],
    0: [(sympy.Integer(1), (0, 0, 1))],
    -1: [(sympy.Integer(1), (0, 1, 0))],
}
_NAMES = ("abar+", "abar-", "abar_par")


@dataclass
class TensorOperator:
    j: int
    m: int
    terms: list = field(default_factory=list)

    def __post_init__(self):
        if abs(self.m) > self.j:
            raise LabelError("|m| must be <= j")

    def coefficients(self) -> dict:
        return {mono: c for c, mono in self.terms}

    def __str__(self):
        parts = []
        for c, mono in self.terms:
            ops = "*".join(f"{n}^{e}" if e > 1 else n for n, e in zip(_NAMES, mono) if e)
            parts.append(f"({sympy.nsimplify(c)})*{ops or '1'}")
        return " + ".join(parts) if parts else "0"

    def as_dict(self) -> dict:
        return {
            "j": self.j,
            "m": self.m,
            "terms": [
                {"coeff": float(c), "exact": str(c), "abar+": e[0], "abar-": e[1], "abar_par": e[2]}
                for c, e in self.terms
            ],
        }


def _product(t1, t2):
    acc = {}
    for c1, e1 in t1:
        for c2, e2 in t2:
            e = tuple(x + y for x, y in zip(e1, e2))
            acc[e] = acc.get(e, 0) + c1 * c2
    return acc


def _couple(j1: int, comps1: dict, J: int, M: int) -> list:
    acc = {}
    for m2 in (-1, 0, 1):
        m1 = M - m2
        if abs(m1) > j1:
            continue
        cg = clebsch_gordan_exact(CGIndex(j1, m1, 1, m2, J, M))
        if cg == 0:
            continue
        for e, c in _product(comps1[m1], _FUNDAMENTAL[m2]).items():
            acc[e] = acc.get(e, 0) + cg * c
    terms = [(sympy.nsimplify(sympy.simplify(c)), e) for e, c in acc.items()]
    return sorted([t for t in terms if t[0] != 0], key=lambda t: t[1], reverse=True)


def _multiplet(j: int) -> dict:
    comps = dict(_FUNDAMENTAL)
    for jj in range(1, j):
        comps = {M: _couple(jj, comps, jj + 1, M) for M in range(-jj - 1, jj + 2)}
    return comps


def tensor_operator(j: int, m: int) -> TensorOperator:
    """Rank-j creation tensor, built by stretched coupling j x 1 -> j+1.

    j = 0 returns the singlet obtained from 1 x 1 -> 0.
    """
    if j < 0 or abs(m) > j:
        raise LabelError("need j >= 0 and |m| <= j")
    if j == 0:
        return TensorOperator(0, 0, _couple(1, _FUNDAMENTAL, 0, 0))
    return TensorOperator(j, m, _multiplet(j)[m])


# --- Gaussian-polynomial states -----------------------------------------------------

X, Y, W = sympy.symbols("x y w", real=True)


@dataclass
class GaussPoly:
    """A0 * P(x, y, w) * G with G = exp(-(x^2 + y^2 + eta w^2)/2), eta = +1 (O3), -1 (O21)."""

    group: GroupKind
    poly: sympy.Expr
    A0: float = 1.0

    def _new(self, poly):
        return GaussPoly(self.group, sympy.expand(poly), self.A0)

    def create(self, which: str) -> "GaussPoly":
        P = self.poly
        if which in ("abar+", "abar-"):
            sg = 1 if which == "abar+" else -1
            z = X + sg * sympy.I * Y
            return self._new(sympy.Rational(1, 2) * (2 * z * P - sympy.diff(P, X) - sg * sympy.I * sympy.diff(P, Y)))
        if which == "abar_par":
            if self.group is GroupKind.O3:
                return self._new((2 * W * P - sympy.diff(P, W)) / sympy.sqrt(2))
            return self._new((2 * W * P + sympy.diff(P, W)) / sympy.sqrt(2))
        raise LabelError(f"unknown creation operator {which}")

    def apply_tensor(self, t: TensorOperator) -> "GaussPoly":
        total = sympy.Integer(0)
        for c, (a, b, g) in t.terms:
            f = self
            for name, e in zip(_NAMES, (a, b, g)):
                for _ in range(e):
                    f = f.create(name)
            total += c * f.poly
        return self._new(total)

    def __call__(self, rho, phi, aux=0.0):
        from .states import cartesian_from_polar

        x, y, w = cartesian_from_polar(self.group, rho, phi, aux)
        eta = 1.0 if self.group is GroupKind.O3 else -1.0
        fn = sympy.lambdify((X, Y, W), self.poly, "numpy")
        val = np.asarray(fn(x, y, w), dtype=complex)
        return self.A0 * val * np.exp(-(x * x + y * y + eta * w * w) / 2)


def build_excited(tensor: TensorOperator, ground: OscillatorState) -> GaussPoly:
    """Apply a creation tensor to a 3D s=0 ground state."""
    lab = ground.label
    if lab.group is GroupKind.O2:
        raise LabelError("tensor operators act on 3D ground states")
    if lab.s != 0.0:
        raise UnsupportedError("the vector ladder fails for the s=1/2 ground multiplet")
    if (lab.n, lab.l, lab.m) != (0, 0, 0):
        raise LabelError("build_excited needs the ground state")
    return GaussPoly(lab.group, sympy.Integer(1), ground.norm_const).apply_tensor(tensor)


# --- degeneracy tables ---------------------------------------------------------------


def degeneracy_table(N_max: int) -> list[tuple[int, int, int]]:
    """(N, l, 2l+1) rows for the 3D s=0 levels."""
    return [(N, l, 2 * l + 1) for N in range(N_max + 1) for l in casimir_content(N)]


def degeneracy_csv(N_max: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "l", "count"])
    w.writerows(degeneracy_table(N_max))
    return buf.getvalue()
