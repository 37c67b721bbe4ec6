"""Command-line front end: ``oscalg {spectrum,verify,blocks,ghost,eval,tensor}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import algebra, numerics, operators
from .states import (
    CoordPoint,
    GroupKind,
    LabelError,
    NonFockFunction,
    StateLabel,
    UnsupportedError,
    energy,
    evaluate,
    make_state,
    norm_const,
    validate_label,
)

SCHEMA = 1
CAP = 12

DEFAULTS = {
    "group": "o2",
    "s": 0.0,
    "nmax": 2,
    "lmax": 2,
    "mmax": 2,
    "Nmax": None,
    "format": "json",
    "out": None,
    "tol": 1e-7,
    "radial_nodes": 48,
    "azimuthal_nodes": 32,
    "aux_nodes": 48,
    "cutoff": 12.0,
    "theta_exclusion": 1e-6,
    "N": 2,
    "m": None,
    "n": 0,
    "l": 0,
    "rho": 1.0,
    "phi": 0.5,
    "aux": 0.5,
    "j": 1,
    "convention": "both",
    "n0max": 4,
    "modes": 3,
    "inject_perturbation": False,
}

INT_KEYS = {"nmax", "lmax", "mmax", "Nmax", "radial_nodes", "azimuthal_nodes", "aux_nodes", "N", "m", "n", "l", "j", "n0max", "modes"}
FLOAT_KEYS = {"s", "tol", "cutoff", "theta_exclusion", "rho", "phi", "aux"}
BOOL_KEYS = {"inject_perturbation"}


class UsageError(ValueError):
    """Configuration outside the supported ranges (exit code 2)."""


# --- configuration ------------------------------------------------------------------


def _coerce(key: str, value: str):
    if value.lower() in ("none", ""):
        return None
    if key in INT_KEYS:
        return int(value)
    if key in FLOAT_KEYS:
        return float(value)
    if key in BOOL_KEYS:
        return value.lower() in ("1", "true", "yes", "on")
    return value


def load_config(path: str) -> dict:
    """Flat ``key = value`` file; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (p.strip() for p in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _coerce(key, value)
    return out


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(load_config(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None and v is not False:
            cfg[key] = v
    for key in ("nmax", "lmax", "mmax", "Nmax", "N", "n", "l", "j"):
        v = cfg.get(key)
        if v is not None and (v < 0 or v > CAP):
            raise UsageError(f"{key}={v} outside 0..{CAP}")
    if cfg["m"] is not None and abs(cfg["m"]) > CAP:
        raise UsageError(f"m={cfg['m']} outside -{CAP}..{CAP}")
    try:
        cfg["group"] = GroupKind(cfg["group"])
    except ValueError:
        raise UsageError(f"unknown group {cfg['group']!r}")
    s = cfg["s"]
    if cfg["group"] is GroupKind.O2 and not 0.0 <= s < 1.0:
        raise UsageError("O2 needs 0 <= s < 1")
    if cfg["group"] is not GroupKind.O2 and s not in (0.0, 0.5):
        raise UsageError("3D groups need s in {0, 0.5}")
    if cfg["format"] not in ("json", "csv"):
        raise UsageError("format must be json or csv")
    return cfg


def quad_spec(cfg: dict) -> numerics.QuadratureSpec:
    try:
        return numerics.QuadratureSpec(
            radial_nodes=cfg["radial_nodes"],
            azimuthal_nodes=cfg["azimuthal_nodes"],
            aux_nodes=cfg["aux_nodes"],
            cutoff=cfg["cutoff"],
            theta_exclusion=cfg["theta_exclusion"],
        )
    except ValueError as exc:
        raise UsageError(str(exc))


def threads() -> int:
    try:
        n = int(os.environ.get("OSC_ALG_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def pmap(fn, items):
    """Ordered map, parallel up to OSC_ALG_THREADS workers."""
    items = list(items)
    n = threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# --- label enumeration ---------------------------------------------------------------


def enumerate_labels(cfg: dict) -> list[StateLabel]:
    g, s = cfg["group"], cfg["s"]
    Nmax = cfg["Nmax"]
    out = []
    if g is GroupKind.O2:
        if Nmax is not None:
            cands = [(n, m) for n in range(Nmax + 1) for m in range(-Nmax, Nmax + 1) if 2 * n + m <= Nmax]
        else:
            M = cfg["mmax"]
            cands = [(n, m) for n in range(cfg["nmax"] + 1) for m in range(-M, M + 1)]
        out = [StateLabel(g, s, n, 0, m) for n, m in cands]
    else:
        if Nmax is not None:
            nl = [(n, l) for n in range(Nmax + 1) for l in range(Nmax + 1) if 2 * n + l <= Nmax]
        else:
            nl = [(n, l) for n in range(cfg["nmax"] + 1) for l in range(cfg["lmax"] + 1)]
        for n, l in nl:
            ms = range(-l, l + 1) if s == 0.0 else range(l, max(l, cfg["mmax"]) + 1)
            out.extend(StateLabel(g, s, n, l, m) for m in ms)
    return sorted((lb for lb in out if validate_label(lb)), key=lambda lb: (energy(lb), lb.n, lb.l, lb.m))


def _mode_number(lb: StateLabel) -> float:
    if lb.group is GroupKind.O2:
        return 2 * lb.n + lb.m + lb.s
    return 2 * lb.n + lb.l


def _degeneracy(lb: StateLabel):
    d = algebra.multiplicity(lb.group, _mode_number(lb), lb.s)
    return "inf" if d == math.inf else d


# --- output ---------------------------------------------------------------------------


def _emit(cfg: dict, payload: dict, rows: list[dict] | None = None) -> None:
    if cfg["format"] == "csv" and rows is not None:
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=True) + "\n"
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _num(x: float) -> float:
    # stable JSON: round away last-bit noise
    return float(f"{x:.15g}")


# --- commands -------------------------------------------------------------------------


def cmd_spectrum(cfg: dict) -> int:
    rows = [
        {
            "group": lb.group.value,
            "s": lb.s,
            "n": lb.n,
            "l": lb.l,
            "m": lb.m,
            "E": _num(energy(lb)),
            "degeneracy": _degeneracy(lb),
        }
        for lb in enumerate_labels(cfg)
    ]
    _emit(cfg, {"command": "spectrum", "rows": rows}, rows)
    return 0


def _check(name, residual, tol, status=None, **extra):
    ok = status or ("pass" if residual < tol else "fail")
    return {"name": name, "residual": _num(float(residual)), "tol": tol, "status": ok, **extra}


def _verify_o2(cfg, spec, labels, eps_shift):
    tol = cfg["tol"]
    s = cfg["s"]

    def schro():
        r = max(numerics.schrodinger_residual(lb, spec, eps_shift) for lb in labels)
        return _check("schrodinger", r, tol)

    def gram():
        G = numerics.orthonormality_matrix(labels, spec)
        return _check("orthonormality", np.max(np.abs(G - np.eye(len(labels)))), tol)

    def ladder():
        pts = [CoordPoint(0.3 + 0.4 * i, 0.2 + 0.7 * i, 0.0) for i in range(6)]
        worst = 0.0
        for lb in labels:
            st = make_state(lb)
            for k in ("a+", "a-", "abar+", "abar-"):
                op = operators.LadderOp(k)
                act = operators.apply_symbolic(op, lb)
                for p in pts:
                    d = operators.apply_differential(op, st, p)
                    if act.is_zero:
                        ref = 0.0
                    elif act.is_nonfock:
                        ref = act.coeff * NonFockFunction(act.out)(p.rho, p.phi)
                    else:
                        ref = act.coeff * make_state(act.out).at(p)
                    worst = max(worst, abs(d - ref) / max(1.0, abs(ref)))
        return _check("ladder", worst, tol)

    def comm():
        ops = operators.SERIES_OPS
        probes = labels[:6]
        pairs = [
            ("a+", "abar-", 1.0),
            ("a-", "abar+", 1.0),
            ("a+", "abar+", 0.0),
            ("a-", "abar-", 0.0),
            ("a+", "a-", 0.0),
            ("abar+", "abar-", 0.0),
            ("N", "a+", lambda f: -1 * ops["a+"](f)),
            ("N", "a-", lambda f: -1 * ops["a-"](f)),
            ("M", "a+", ops["a+"]),
            ("M", "a-", lambda f: -1 * ops["a-"](f)),
            ("M", "N", 0.0),
        ]
        r = max(operators.commutator_residual(A, B, E, probes, spec) for A, B, E in pairs)
        return _check("commutators", r, tol)

    def su2():
        worst = 0.0
        for N in range(7):
            hm, hd, hq = operators.su2_generators(N)
            c = lambda a, b: a @ b - b @ a
            worst = max(
                worst,
                np.max(np.abs(c(hm, hd) - 1j * hq)),
                np.max(np.abs(c(hq, hm) - 1j * hd)),
                np.max(np.abs(c(hd, hq) - 1j * hm)),
                np.max(np.abs(hm @ hm + hd @ hd + hq @ hq - 0.25 * N * (N + 2) * np.eye(N + 1))),
            )
        return _check("su2_closure", worst, 1e-12)

    def breaking():
        _, flag = algebra.delta_block(1 + s, s)
        return _check("delta_ground_flag", 0.0, 1.0, status="pass" if flag == (s != 0.0) else "fail", flag=flag)

    return [schro, gram, ladder, comm, su2, breaking]


def _verify_3d(cfg, spec, labels, eps_shift):
    tol = cfg["tol"]
    g, s = cfg["group"], cfg["s"]

    def schro():
        r = max(numerics.schrodinger_residual(lb, spec, eps_shift) for lb in labels)
        return _check("schrodinger", r, tol)

    checks = [schro]
    if g is GroupKind.O3 and s == 0.0:

        def gram():
            G = numerics.orthonormality_matrix(labels, spec)
            return _check("orthonormality", np.max(np.abs(G - np.eye(len(labels)))), tol)

        def msq():
            worst = 0.0
            for N in range(7):
                for m in range(-N, N + 1):
                    ev = np.sort(algebra.msq_block(N, m).eigenvalues().real)
                    ref = np.sort([l * (l + 1) for l in algebra.casimir_content(N) if l >= abs(m)])
                    worst = max(worst, np.max(np.abs(ev - ref)))
            return _check("casimir_blocks", worst, 1e-9)

        checks += [gram, msq]
    else:
        for lb in labels:

            def norm(lb=lb):
                rep = numerics.norm_report(lb, spec)
                name = f"norm n={lb.n} l={lb.l} m={lb.m}"
                status = "divergent" if rep.divergent else "pass"
                return _check(name, rep.convergence_estimate, None, status=status, value=_num(rep.value))

            checks.append(norm)
    return checks


def cmd_verify(cfg: dict) -> int:
    spec = quad_spec(cfg)
    labels = enumerate_labels(cfg)
    if not labels:
        raise UsageError("no admissible labels in range")
    eps_shift = 0.1 if cfg["inject_perturbation"] else 0.0
    builder = _verify_o2 if cfg["group"] is GroupKind.O2 else _verify_3d
    results = pmap(lambda fn: fn(), builder(cfg, spec, labels, eps_shift))
    ok = all(r["status"] != "fail" for r in results)
    rows = [{"name": r["name"], "residual": r["residual"], "status": r["status"]} for r in results]
    _emit(cfg, {"command": "verify", "group": cfg["group"].value, "s": cfg["s"], "checks": results, "ok": ok}, rows)
    return 0 if ok else 1


def cmd_blocks(cfg: dict) -> int:
    N = cfg["N"]
    ms = [cfg["m"]] if cfg["m"] is not None else list(range(-N, N + 1))
    if any(abs(m) > N for m in ms):
        raise UsageError("|m| must be <= N")

    def one(m):
        b = algebra.msq_block(N, m, cfg["group"] if cfg["group"] is not GroupKind.O2 else GroupKind.O3)
        ev = [_num(v) for v in np.sort(b.eigenvalues().real)]
        return {"m": m, "block": b.as_dict(), "eigenvalues": ev}

    msq = pmap(one, ms)
    s = cfg["s"] if cfg["group"] is GroupKind.O2 else 0.0
    dblock, flag = algebra.delta_block(N + s, s)
    dev = dblock.eigenvalues()
    payload = {
        "command": "blocks",
        "N": N,
        "msq": msq,
        "l_content": algebra.casimir_content(N),
        "level_content": [{"n": n, "l": l} for n, l in algebra.level_content(N)],
        "delta": {
            "s": s,
            "block": dblock.as_dict(),
            "eigenvalues_re": [_num(v) for v in np.real(dev)],
            "eigenvalues_im": [_num(v) for v in np.imag(dev)],
            "ground_obstruction": flag,
        },
    }
    rows = [{"N": n, "l": l, "count": c} for n, l, c in algebra.degeneracy_table(N)]
    _emit(cfg, payload, rows)
    return 0


def cmd_ghost(cfg: dict) -> int:
    convs = ["kimnoz", "fkr"] if cfg["convention"] == "both" else [cfg["convention"]]
    D = cfg["modes"]
    rows = []
    for c in convs:
        conv = numerics.PhaseConvention(c)
        for k in range(cfg["n0max"] + 1):
            occ0 = k + 1 if conv is numerics.PhaseConvention.KIMNOZ else k
            occ = (occ0,) + (0,) * (D - 1)
            rows.append(
                {
                    "convention": c,
                    "n0": occ0,
                    "excitations": k,
                    "norm": numerics.ghost_norm(conv, k),
                    "timelike_energy": -occ0 if conv is numerics.PhaseConvention.KIMNOZ else occ0,
                    "energy": _num(operators.cartesian_energy(conv, occ)),
                }
            )
    spec = quad_spec(cfg)
    exc = numerics.timelike_excitation(numerics.fkr_ground)
    metric = {
        "ground": numerics.metric_norm(numerics.fkr_ground, 1.0, spec).as_dict(),
        "excited_eta_weighted": numerics.metric_norm(exc, -1.0, spec).as_dict(),
        "excited_unit_weighted": numerics.metric_norm(exc, 1.0, spec).as_dict(),
    }
    metric = {k: {kk: (_num(vv) if isinstance(vv, float) else vv) for kk, vv in v.items()} for k, v in metric.items()}
    _emit(cfg, {"command": "ghost", "rows": rows, "metric_norms": metric}, rows)
    return 0


def cmd_eval(cfg: dict) -> int:
    lb = StateLabel(cfg["group"], cfg["s"], cfg["n"], cfg["l"], cfg["m"] or 0)
    if not validate_label(lb):
        raise UsageError(f"inadmissible label {lb.as_dict()}")
    aux = 0.0 if lb.group is GroupKind.O2 else cfg["aux"]
    try:
        v = complex(evaluate(lb, cfg["rho"], cfg["phi"], aux))
    except ValueError as exc:
        raise UsageError(str(exc))
    row = {
        **lb.as_dict(),
        "rho": cfg["rho"],
        "phi": cfg["phi"],
        "aux": aux,
        "re": _num(v.real),
        "im": _num(v.imag),
        "energy": _num(energy(lb)),
        "norm_const": _num(norm_const(lb)),
    }
    _emit(cfg, {"command": "eval", "value": row}, [row])
    return 0


def cmd_tensor(cfg: dict) -> int:
    j = cfg["j"]
    ms = [cfg["m"]] if cfg["m"] is not None else list(range(j, -j - 1, -1))
    out = []
    for m in ms:
        try:
            t = algebra.tensor_operator(j, m)
        except LabelError as exc:
            raise UsageError(str(exc))
        out.append({**t.as_dict(), "text": str(t)})
    rows = [{"j": d["j"], "m": d["m"], "operator": d["text"]} for d in out]
    _emit(cfg, {"command": "tensor", "components": out}, rows)
    return 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "blocks": cmd_blocks,
    "ghost": cmd_ghost,
    "eval": cmd_eval,
    "tensor": cmd_tensor,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oscalg", description="Polar oscillator eigenstates and their operator algebra.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config")
    common.add_argument("--group", choices=["o2", "o3", "o21"])
    common.add_argument("--s", type=float)
    common.add_argument("--nmax", type=int)
    common.add_argument("--lmax", type=int)
    common.add_argument("--mmax", type=int)
    common.add_argument("--Nmax", type=int, help="bound on the mode number instead of n/l/m ranges")
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--out")
    common.add_argument("--tol", type=float)
    common.add_argument("--radial-nodes", dest="radial_nodes", type=int)
    common.add_argument("--azimuthal-nodes", dest="azimuthal_nodes", type=int)
    common.add_argument("--aux-nodes", dest="aux_nodes", type=int)
    common.add_argument("--cutoff", type=float)
    common.add_argument("--theta-exclusion", dest="theta_exclusion", type=float)

    sub.add_parser("spectrum", parents=[common], help="energies and degeneracies")
    v = sub.add_parser("verify", parents=[common], help="residual checks; exit 1 on failure")
    v.add_argument("--inject-perturbation", dest="inject_perturbation", action="store_true",
                   help="shift eps by 0.1 (negative control)")
    b = sub.add_parser("blocks", parents=[common], help="Casimir and Delta block matrices")
    b.add_argument("--N", type=int)
    b.add_argument("--m", type=int)
    g = sub.add_parser("ghost", parents=[common], help="timelike norms and spectra")
    g.add_argument("--convention", choices=["kimnoz", "fkr", "both"])
    g.add_argument("--n0max", type=int)
    g.add_argument("--modes", type=int)
    e = sub.add_parser("eval", parents=[common], help="evaluate one eigenstate")
    for name in ("n", "l", "m"):
        e.add_argument(f"--{name}", type=int)
    for name in ("rho", "phi", "aux"):
        e.add_argument(f"--{name}", type=float)
    t = sub.add_parser("tensor", parents=[common], help="irreducible creation tensors")
    t.add_argument("--j", type=int)
    t.add_argument("--m", type=int)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, LabelError, UnsupportedError) as exc:
        print(f"oscalg: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"oscalg: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
