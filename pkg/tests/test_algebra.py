import json
import math

import numpy as np
import pytest
import sympy as sp

from oscalg.algebra import (
    GaussPoly,
    OperatorBlock,
    build_excited,
    casimir_content,
    degeneracy_csv,
    degeneracy_table,
    delta_block,
    level_content,
    msq_block,
    multiplicity,
    tensor_operator,
    zeta_to_state_2d,
)
from oscalg.numerics import QuadratureSpec, inner_product
from oscalg.operators import PolarSeries
from oscalg.states import (
    GroupKind,
    LabelError,
    StateLabel,
    UnsupportedError,
    ZetaLabel,
    energy,
    ground_state,
    make_state,
    validate_label,
)

O2, O3, O21 = GroupKind.O2, GroupKind.O3, GroupKind.O21
X, Y, W = sp.symbols("x y w", real=True)


def test_zeta_to_state_examples():
    lab, N = zeta_to_state_2d(ZetaLabel(2, 1))
    assert (lab.n, lab.m) == (1, 1) and N == pytest.approx(math.sqrt(2))
    lab, N = zeta_to_state_2d(ZetaLabel(0, 0, 0, 0.5))
    assert (lab.n, lab.m) == (0, 0) and N == 1.0


def test_zeta_states_match_created_functions():
    # abar+^a abar-^b psi_0 == N_ab psi_{b, a-b}
    for s in (0.0, 0.25, 0.5):
        for a in range(4):
            for b in range(4):
                f = PolarSeries.from_label(StateLabel(O2, s, 0, 0, 0))
                for _ in range(b):
                    f = f.ladder("abar-")
                for _ in range(a):
                    f = f.ladder("abar+")
                lab, N = zeta_to_state_2d(ZetaLabel(a, b, 0, s))
                # labels with m+s <= -1 only exist with their formal constant
                ref = N * PolarSeries.from_label(lab)(1.3, 0.7)
                assert f(1.3, 0.7) == pytest.approx(ref, rel=1e-11)
                if validate_label(lab):
                    assert energy(lab) == pytest.approx(a + b + s + 1)
                    assert make_state(lab)(1.3, 0.7) * N == pytest.approx(ref, rel=1e-11)


def test_multiplicity_examples():
    assert multiplicity(O3, 2, 0.0) == 6
    assert multiplicity(O3, 3, 0.0) == 10
    assert multiplicity(O2, 3.5, 0.5) == 4
    assert multiplicity(O21, 1, 0.5) == math.inf
    with pytest.raises(LabelError):
        multiplicity(O2, 3.2, 0.5)


def test_casimir_content_and_degeneracies():
    assert casimir_content(2) == [2, 0]
    assert casimir_content(4) == [4, 2, 0]
    assert casimir_content(1) == [1]
    for N in range(13):
        assert sum(2 * l + 1 for l in casimir_content(N)) == (N + 1) * (N + 2) // 2 == multiplicity(O3, N, 0.0)
        for n, l in level_content(N):
            assert energy(StateLabel(O3, 0.0, n, l, 0)) == N + 1.5
    rows = degeneracy_table(3)
    assert rows[0] == (0, 0, 1) and (3, 1, 3) in rows
    assert degeneracy_csv(1) == "N,l,count\n0,0,1\n1,1,3\n"


def test_msq_examples():
    B = msq_block(2, 0)
    assert B.basis == [ZetaLabel(1, 1, 0), ZetaLabel(0, 0, 2)]
    r = 2 * math.sqrt(2)
    np.testing.assert_allclose(B.entries, [[2, -r], [-r, 4]], atol=1e-14)
    np.testing.assert_allclose(B.eigenvalues(), [0, 6], atol=1e-12)
    np.testing.assert_allclose(msq_block(1, 0).entries, [[2]])
    for N in range(7):
        np.testing.assert_allclose(msq_block(N, N).entries, [[N * (N + 1)]])
    with pytest.raises(LabelError):
        msq_block(2, 3)


def test_msq_eigenvalues_follow_l_content():
    for N in range(7):
        for m in range(-N, N + 1):
            ref = sorted(l * (l + 1) for l in casimir_content(N) if l >= abs(m))
            for grp in (O3, O21):
                ev = msq_block(N, m, grp).eigenvalues()
                np.testing.assert_allclose(np.sort(ev.real), ref, atol=1e-10)
                assert np.max(np.abs(ev.imag)) < 1e-10


def _zeta_poly(group, a, b, g):
    f = GaussPoly(group, sp.Integer(1))
    for name, e in (("abar_par", g), ("abar-", b), ("abar+", a)):
        for _ in range(e):
            f = f.create(name)
    return f.poly / sp.sqrt(sp.factorial(a) * sp.factorial(b) * sp.factorial(g))


def _casimir_poly(group, P):
    # L^2 on polynomial prefactors; the Gaussian is invariant under each generator
    Lz = lambda f: -sp.I * (X * sp.diff(f, Y) - Y * sp.diff(f, X))
    if group is O3:
        Lx = lambda f: -sp.I * (Y * sp.diff(f, W) - W * sp.diff(f, Y))
        Ly = lambda f: -sp.I * (W * sp.diff(f, X) - X * sp.diff(f, W))
        return sp.expand(Lx(Lx(P)) + Ly(Ly(P)) + Lz(Lz(P)))
    Kx = lambda f: -sp.I * (W * sp.diff(f, X) + X * sp.diff(f, W))
    Ky = lambda f: -sp.I * (W * sp.diff(f, Y) + Y * sp.diff(f, W))
    return sp.expand(Lz(Lz(P)) - Kx(Kx(P)) - Ky(Ky(P)))


def _project(target, basis_polys):
    # solve target = sum c_i basis_i on polynomial coefficients
    gens = (X, Y, W)
    monos = set()
    for p in basis_polys + [target]:
        monos |= set(sp.Poly(p, *gens).as_dict())
    monos = sorted(monos)
    A = np.array([[complex(sp.Poly(p, *gens).as_dict().get(k, 0)) for p in basis_polys] for k in monos])
    t = np.array([complex(sp.Poly(target, *gens).as_dict().get(k, 0)) for k in monos])
    c, *_ = np.linalg.lstsq(A, t, rcond=None)
    assert np.linalg.norm(A @ c - t) < 1e-10 * max(1.0, np.linalg.norm(t))
    return c


def test_msq_against_differential_casimir():
    for grp in (O3, O21):
        for N in range(5):
            for m in range(-N, N + 1):
                B = msq_block(N, m, grp)
                polys = [_zeta_poly(grp, z.alpha, z.beta, z.gamma) for z in B.basis]
                # all zeta polynomials of level N make the projection well posed
                for j, p in enumerate(polys):
                    c = _project(_casimir_poly(grp, p), polys)
                    np.testing.assert_allclose(c, B.entries[:, j], atol=1e-10)


def test_delta_block():
    B, flag = delta_block(1, 0.0)
    np.testing.assert_allclose(B.eigenvalues().real, [-1, 1], atol=1e-12)
    assert not flag
    B, flag = delta_block(2, 0.0)
    np.testing.assert_allclose(np.sort(B.eigenvalues().real), [-2, 0, 2], atol=1e-12)
    for N in range(7):
        B, flag = delta_block(N, 0.0)
        np.testing.assert_allclose(np.sort(B.eigenvalues().real), np.arange(-N, N + 1, 2), atol=1e-10)
        assert not flag
    for s in (0.25, 0.5):
        for k in range(4):
            assert delta_block(k + s, s)[1]


def test_block_serialization():
    B = msq_block(2, 0)
    d = json.loads(B.to_json())
    assert d["basis"][1] == {"alpha": 0, "beta": 0, "gamma": 2, "s": 0.0}
    np.testing.assert_allclose(np.array(d["re"]), B.entries.real)
    with pytest.raises(ValueError):
        OperatorBlock([ZetaLabel(0, 0)], np.zeros((2, 2)))


def test_tensor_examples():
    assert tensor_operator(2, 2).coefficients() == {(2, 0, 0): 1}
    c = tensor_operator(2, 0).coefficients()
    assert sp.simplify(c[(1, 1, 0)] + 2 / sp.sqrt(6)) == 0
    assert sp.simplify(c[(0, 0, 2)] - 2 / sp.sqrt(6)) == 0
    c = tensor_operator(0, 0).coefficients()
    assert sp.simplify(c[(1, 1, 0)] + 2 / sp.sqrt(3)) == 0
    assert sp.simplify(c[(0, 0, 2)] + 1 / sp.sqrt(3)) == 0
    t1 = [tensor_operator(1, m).coefficients() for m in (1, 0, -1)]
    assert t1 == [{(1, 0, 0): -1}, {(0, 0, 1): 1}, {(0, 1, 0): 1}]
    for j in range(1, 5):
        for m in range(-j, j + 1):
            assert all(sum(e) == j for _, e in tensor_operator(j, m).terms)
    with pytest.raises(LabelError):
        tensor_operator(1, 2)
    assert "abar+^2" in str(tensor_operator(2, 2))
    assert tensor_operator(2, -1).as_dict()["j"] == 2


def test_tensor_components_are_m_eigenvectors():
    Lz = lambda f: -sp.I * (X * sp.diff(f, Y) - Y * sp.diff(f, X))
    Lm = lambda f: sp.expand((-sp.I * (Y * sp.diff(f, W) - W * sp.diff(f, Y)))
                             - sp.I * (-sp.I * (W * sp.diff(f, X) - X * sp.diff(f, W))))
    g = ground_state(O3, 0.0)
    for j in range(1, 4):
        polys = {m: build_excited(tensor_operator(j, m), g).poly for m in range(-j, j + 1)}
        for m, P in polys.items():
            assert sp.expand(Lz(P) - m * P) == 0
            # Condon-Shortley lowering between neighbouring components
            if m > -j:
                lower = sp.sqrt((j + m) * (j - m + 1)) * polys[m - 1]
                assert sp.expand(Lm(P) - lower) == 0


def test_build_excited_vector_multiplet():
    rng = np.random.default_rng(7)
    rho, phi = rng.uniform(0.2, 3, 12), rng.uniform(0, 2 * math.pi, 12)
    for grp, aux in ((O3, rng.uniform(0.1, 3.0, 12)), (O21, rng.uniform(-2, 2, 12))):
        g = ground_state(grp, 0.0)
        A0 = g.norm_const
        env = A0 * rho * np.exp(-rho**2 / 2)
        if grp is O3:
            a, b = np.sin(aux), np.cos(aux)
        else:
            a, b = np.cosh(aux), np.sinh(aux)
        ref = {-1: env * a * np.exp(-1j * phi), 0: env * math.sqrt(2) * b, 1: -env * a * np.exp(1j * phi)}
        for m in (-1, 0, 1):
            got = build_excited(tensor_operator(1, m), g)(rho, phi, aux)
            np.testing.assert_allclose(got, ref[m], rtol=1e-10, atol=1e-12)


def test_rank2_overlaps():
    spec = QuadratureSpec()
    g = ground_state(O3, 0.0)
    for m in range(-2, 3):
        F = build_excited(tensor_operator(2, m), g)
        lab = StateLabel(O3, 0.0, 0, 2, m)
        norm = math.sqrt(inner_product(F, F, group=O3, spec=spec).real)
        ov = inner_product(lab, F, group=O3, spec=spec) / norm
        assert ov == pytest.approx(1.0, abs=1e-8)
    S = build_excited(tensor_operator(0, 0), g)
    norm = math.sqrt(inner_product(S, S, group=O3, spec=spec).real)
    assert inner_product(StateLabel(O3, 0.0, 1, 0, 0), S, group=O3, spec=spec) / norm == pytest.approx(1.0, abs=1e-8)


def test_build_excited_errors():
    with pytest.raises(UnsupportedError):
        build_excited(tensor_operator(1, 0), ground_state(O3, 0.5))
    with pytest.raises(UnsupportedError):
        build_excited(tensor_operator(1, 1), ground_state(O21, 0.5, m0=1))
    with pytest.raises(LabelError):
        build_excited(tensor_operator(1, 0), ground_state(O2, 0.0))
