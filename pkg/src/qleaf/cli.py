"""Command-line front end.

Four subcommands:

* ``rep``      build one representation and serialize every operator matrix;
* ``verify``   run residual suites (bracket tables, exchange matrices,
               algebra relations, Casimir, semiclassical limits);
* ``pathint``  compare lattice path-integral matrix elements against their
               spectral oracles, with a winding-convergence table;
* ``leaf``     sample classical leaf geometry to CSV/JSON.

Every command prints a JSON run report to stdout (or ``--out``).  Exit
codes: 0 success, 1 a check failed or an internal assertion tripped,
2 bad flags.  Verbosity is controlled by the environment variable
QLEAF_LOG (quiet | info | debug); numerics are controlled by flags only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time

import numpy as np

from . import leaf as leafmod
from . import pathint as pimod
from . import repq
from . import rmatrix
from .leaf import LeafPoint, leaf_function

log = logging.getLogger("qleaf")

_E = math.e


def _setup_logging():
    level = os.environ.get("QLEAF_LOG", "quiet").lower()
    table = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, level=table.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

def _complex_obj(z: complex) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _matrix_obj(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[_complex_obj(z) for z in row] for row in m],
    }


class Report:
    """Accumulates named residual checks; pass iff residual <= tolerance."""

    def __init__(self, command: str, params: dict):
        self.command = command
        self.params = params
        self.checks = []
        self._t0 = time.perf_counter()
        self.extra = {}

    def check(self, name: str, residual: float, tolerance: float) -> bool:
        ok = bool(residual <= tolerance)
        self.checks.append({
            "name": name,
            "residual": float(residual),
            "tolerance": float(tolerance),
            "pass": ok,
        })
        log.info("%s: residual %.3e vs %.1e -> %s", name, residual, tolerance,
                 "pass" if ok else "FAIL")
        return ok

    @property
    def all_pass(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def as_dict(self) -> dict:
        out = {
            "command": self.command,
            "params": self.params,
            "checks": sorted(self.checks, key=lambda c: c["name"]),
        }
        out.update(self.extra)
        out["wall_ms"] = round(1000.0 * (time.perf_counter() - self._t0), 3)
        return out


def _emit(payload: dict, out_path):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _half_integer(parser, value: float) -> float:
    if abs(2 * value - round(2 * value)) > 1e-9 or round(2 * value) < 1:
        parser.error(f"--spin must be a half-integer >= 1/2, got {value}")
    return value


# ---------------------------------------------------------------------------
# rep
# ---------------------------------------------------------------------------

def _rep_payload(meta, rep) -> dict:
    q = meta.context().q
    cas = repq.casimir(rep, q)
    matrices = {
        "a": rep.a,
        "chi_plus": rep.chi_plus,
        "chi_minus": rep.chi_minus,
        "h": rep.h,
        "x_plus": rep.x_plus,
        "x_minus": rep.x_minus,
        "su2_h": rep.su2_h,
        "su2_x_plus": rep.su2_x_plus,
        "su2_x_minus": rep.su2_x_minus,
        "lplus": rep.lplus.as_matrix(),
        "lminus": rep.lminus.as_matrix(),
        "l": rep.l.as_matrix(),
        "casimir": cas,
    }
    return {
        "hilbert": {
            "j": meta.j,
            "hbar": meta.hbar,
            "n": meta.n,
            "m_parity": meta.m_parity,
            "r": meta.r,
            "m_values": list(meta.m_values),
            "j_lattice": list(meta.j_lattice),
        },
        "q": q,
        "lambda": meta.context().lam,
        "casimir_eigenvalue": float(np.real(cas[0, 0])),
        "matrices": {k: _matrix_obj(v) for k, v in matrices.items()},
    }


def _rep_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["matrix", "row", "col", "re", "im"])
    for name, mat in sorted(payload["matrices"].items()):
        for i, row in enumerate(mat["entries"]):
            for j, z in enumerate(row):
                writer.writerow([name, i, j, repr(z["re"]), repr(z["im"])])
    return buf.getvalue()


def cmd_rep(args, parser) -> int:
    _half_integer(parser, args.spin)
    meta = repq.hilbert(args.spin, args.hbar)
    rep = repq.build_rep(meta)
    payload = _rep_payload(meta, rep)
    payload["command"] = "rep"
    payload["params"] = {"spin": args.spin, "hbar": args.hbar, "format": args.format}
    if args.format == "csv":
        text = _rep_csv(payload)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(payload, args.out)
    return 0


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

def _suite_poisson(report: Report, rng):
    for r in (0.5, 1.0, 2.0):
        worst = 0.0
        for _ in range(50):
            p = _random_point(r, rng)
            worst = max(worst, leafmod.bracket_table_residual(p))
        report.check(f"poisson-table[r={r}]", worst, 1e-9)
        worst_j = 0.0
        for triple in (("alpha", "beta", "gamma"), ("beta", "gamma", "delta")):
            for _ in range(5):
                p = _random_point(r, rng, margin=0.2)
                worst_j = max(worst_j, leafmod.jacobi_residual(p, triple))
        report.check(f"jacobi[r={r}]", worst_j, 1e-7)


def _random_point(r, rng, margin=0.02) -> LeafPoint:
    J = rng.uniform(-r * (1 - margin), r * (1 - margin))
    phi = rng.uniform(0.0, 2 * math.pi)
    return LeafPoint.from_darboux(r, J, phi)


def _suite_rmatrix(report: Report):
    report.check("classical-ybe[+]", rmatrix.ybe_residual("classical", +1), 1e-13)
    report.check("classical-ybe[-]", rmatrix.ybe_residual("classical", -1), 1e-13)
    for q in (1.1, 2.0, _E):
        report.check(f"quantum-ybe[q={q:.6g}]",
                     max(rmatrix.ybe_residual("quantum", +1, q),
                         rmatrix.ybe_residual("quantum", -1, q)), 1e-12)
    report.check("adjoint-invariance", rmatrix.adjoint_invariance_residual(), 1e-13)
    report.check("cocycle", rmatrix.verify_cocycle(), 1e-10)
    report.check("rtt-table", rmatrix.rtt_check(), 1e-11)
    for hb in (0.2, 0.1):
        big = rmatrix.semiclassical_residual(hb)
        small = rmatrix.semiclassical_residual(hb / 2)
        ratio = max(big) / max(small)
        report.check(f"semiclassical-ratio[hbar={hb}]", abs(ratio - 4.0), 0.5)


def _suite_algebra(report: Report, meta, rep):
    q = meta.context().q
    report.check("chi-algebra", repq.verify_chi_algebra(rep, q), 1e-10)
    report.check("jimbo-drinfeld", repq.verify_jimbo_drinfeld(rep, q), 1e-10)
    report.check("su2-exact", repq.verify_su2_algebra(rep, meta.hbar), 1e-12)
    ladder_gap = max(
        float(np.max(np.abs(rep.x_plus - repq.ladder_matrix(meta, +1)))),
        float(np.max(np.abs(rep.x_minus - repq.ladder_matrix(meta, -1)))),
    )
    report.check("ladder-equivalence", ladder_gap, 1e-12)


def _suite_casimir(report: Report, meta, rep, naive: bool):
    q = meta.context().q
    if naive:
        cand = repq.naive_trace(rep)
        report.check("casimir-centrality[naive-trace]",
                     repq.centrality_residual(cand, rep), 1e-10)
        return
    cas = repq.casimir(rep, q)
    expected = (q ** meta.n + q ** -meta.n) * np.eye(meta.n)
    report.check("casimir-eigenvalue", float(np.linalg.norm(cas - expected)), 1e-10)
    report.check("casimir-centrality", repq.centrality_residual(cas, rep), 1e-10)


def _suite_limit(report: Report):
    rows = repq.classical_limit_scan(1.0, [8, 16, 32])
    for a, b in zip(rows, rows[1:]):
        report.check(f"limit-ratio[N={a.n}->{b.n}]", abs(b.eps / a.eps - 0.5), 0.125)
    for row in rows:
        report.check(f"limit-exact-relation[N={row.n}]", row.exact_residual, 1e-10)


def cmd_verify(args, parser) -> int:
    _half_integer(parser, args.spin)
    rng = np.random.default_rng(args.seed)
    report = Report("verify", {
        "suite": args.suite, "spin": args.spin, "hbar": args.hbar,
        "naive_trace": bool(args.naive_trace), "seed": args.seed,
    })
    needs_rep = args.suite in ("all", "algebra", "rll", "reflection", "casimir")
    meta = rep = None
    if needs_rep:
        meta = repq.hilbert(args.spin, args.hbar)
        rep = repq.build_rep(meta)
        q = meta.context().q
    if args.suite in ("all", "poisson"):
        _suite_poisson(report, rng)
    if args.suite in ("all", "rmatrix"):
        _suite_rmatrix(report)
    if args.suite in ("all", "algebra"):
        _suite_algebra(report, meta, rep)
    if args.suite in ("all", "rll"):
        report.check("rll", repq.verify_rll(rep, q), 1e-10)
    if args.suite in ("all", "reflection"):
        report.check("reflection", repq.verify_reflection(rep, q), 1e-10)
    if args.suite in ("all", "casimir"):
        _suite_casimir(report, meta, rep, args.naive_trace)
    if args.suite in ("all", "limit"):
        _suite_limit(report)
    _emit(report.as_dict(), args.out)
    return 0 if report.all_pass else 1


# ---------------------------------------------------------------------------
# pathint
# ---------------------------------------------------------------------------

_INSERT_TOL = {
    "a": 2e-2, "H": 2e-2, "gauss-L+": 2e-2,
    "chi+": 1e-2, "chi-": 1e-2, "X+": 1e-2, "X-": 1e-2,
}


def _insertion_and_oracle(name: str, meta, rep):
    r, hbar = meta.r, meta.hbar
    if name == "gauss-L+":
        ch = math.cosh(r)

        def f2(j_later, j_earlier):
            mid = 0.5 * (j_later + j_earlier)
            rad = -1.0 + 2.0 * ch * np.exp(mid) - np.exp(j_later + j_earlier)
            return np.exp(-0.5 * j_later) * np.sqrt(np.maximum(rad, 0.0))

        ins = pimod.Insertion(F=f2, p=+1, prescription="gauss-ordered")
        return ins, rep.a @ rep.chi_plus
    table = {
        "a": ("a", 0, rep.a),
        "chi+": ("chi+", +1, rep.chi_plus),
        "chi-": ("chi-", -1, rep.chi_minus),
        "H": ("H", 0, rep.h),
        "X+": ("X+", +1, rep.x_plus),
        "X-": ("X-", -1, rep.x_minus),
    }
    fname, p, oracle = table[name]
    hb = hbar if fname in ("H", "X+", "X-") else None
    lf = leaf_function(fname, r, hb)
    return pimod.Insertion(F=lf.F, p=p, prescription="midpoint-phi"), oracle


def _rel_error(lattice: np.ndarray, oracle: np.ndarray) -> float:
    return float(np.max(np.abs(lattice - oracle)) / np.max(np.abs(oracle)))


def cmd_pathint(args, parser) -> int:
    _half_integer(parser, args.spin)
    meta = repq.hilbert(args.spin, args.hbar)
    rep = repq.build_rep(meta)
    ins, oracle = _insertion_and_oracle(args.insert, meta, rep)
    tol = args.tol if args.tol is not None else _INSERT_TOL[args.insert]
    nj = args.nj
    if ins.prescription != "midpoint-phi" and args.nj > 1000:
        nj = 600  # two-momentum grid is quadratic in nj; keep it desk-size
    report = Report("pathint", {
        "spin": args.spin, "hbar": args.hbar, "insert": args.insert,
        "nj": nj, "windings": args.windings, "nphi": args.nphi,
        "kernel": args.kernel, "tol": tol,
    })
    convergence = []
    final = None
    for w in sorted({args.windings // 4, args.windings // 2, args.windings}):
        cfg = pimod.PathLatticeConfig(nj=nj, windings=w, nphi=args.nphi,
                                      kernel=args.kernel)
        lattice = pimod.matrix_element_lattice(ins, meta, cfg)
        err = _rel_error(lattice, oracle)
        convergence.append({"windings": w, "max_rel_error": err})
        if w == args.windings:
            final = lattice
            report.check(f"pathint[{args.insert}]", err, tol)
    report.extra["lattice"] = _matrix_obj(final)
    report.extra["oracle"] = _matrix_obj(oracle)
    report.extra["max_rel_error"] = convergence[-1]["max_rel_error"]
    report.extra["convergence"] = convergence
    _emit(report.as_dict(), args.out)
    return 0 if report.all_pass else 1


# ---------------------------------------------------------------------------
# leaf sampling
# ---------------------------------------------------------------------------

def _leaf_rows(radius: float, samples: int) -> list:
    rows = []
    n3_grid = np.linspace(-1.0, 1.0, samples + 2)[1:-1]
    for i, n3 in enumerate(n3_grid):
        J = -math.log(math.cosh(radius) + math.sinh(radius) * float(n3))
        phi = (2.0 * math.pi * i) / samples
        p = LeafPoint.from_darboux(radius, J, phi)
        x1, x2, x3 = p.exp_coords()
        z = p.stereo()
        sb = leafmod.stereo_bracket(p)
        rows.append({
            "J": p.J, "phi": p.phi,
            "x1": x1, "x2": x2, "x3": x3,
            "z_re": z.real, "z_im": z.imag,
            "bracket_residual": leafmod.bracket_table_residual(p),
            "stereo_bracket_re": sb.real, "stereo_bracket_im": sb.imag,
        })
    return rows


def cmd_leaf(args, parser) -> int:
    if args.radius <= 0:
        parser.error(f"--radius must be positive, got {args.radius}")
    if args.samples < 1:
        parser.error("--samples must be positive")
    rows = _leaf_rows(args.radius, args.samples)
    if args.format == "json":
        payload = {
            "command": "leaf",
            "params": {"radius": args.radius, "samples": args.samples},
            "rows": rows,
        }
        _emit(payload, args.out)
        return 0
    fields = list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields)
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) for k, v in row.items()})
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qleaf",
        description="Symplectic leaves of the dual of SU(2), their quantization, "
                    "and numerical verification of the deformed algebra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rep = sub.add_parser("rep", help="build a representation and dump its matrices")
    p_rep.add_argument("--spin", type=float, required=True)
    p_rep.add_argument("--hbar", type=float, default=0.5)
    p_rep.add_argument("--out", default=None)
    p_rep.add_argument("--format", choices=("json", "csv"), default="json")

    p_ver = sub.add_parser("verify", help="run residual verification suites")
    p_ver.add_argument("--suite", default="all",
                       choices=("all", "poisson", "rmatrix", "algebra", "rll",
                                "reflection", "casimir", "limit"))
    p_ver.add_argument("--spin", type=float, default=0.5)
    p_ver.add_argument("--hbar", type=float, default=0.5)
    p_ver.add_argument("--naive-trace", action="store_true",
                       help="debug: use the unweighted auxiliary trace in the "
                            "casimir suite (fails its centrality check)")
    p_ver.add_argument("--seed", type=int, default=2024)
    p_ver.add_argument("--out", default=None)

    p_pi = sub.add_parser("pathint", help="lattice path-integral matrix elements")
    p_pi.add_argument("--spin", type=float, required=True)
    p_pi.add_argument("--hbar", type=float, default=0.5)
    p_pi.add_argument("--insert", required=True,
                      choices=("a", "chi+", "chi-", "H", "X+", "X-", "gauss-L+"))
    p_pi.add_argument("--nj", type=int, default=2000)
    p_pi.add_argument("--windings", type=int, default=200)
    p_pi.add_argument("--nphi", type=int, default=512)
    p_pi.add_argument("--kernel", choices=("fejer", "dirichlet"), default="fejer")
    p_pi.add_argument("--tol", type=float, default=None)
    p_pi.add_argument("--out", default=None)

    p_leaf = sub.add_parser("leaf", help="sample classical leaf geometry")
    p_leaf.add_argument("--radius", type=float, required=True)
    p_leaf.add_argument("--samples", type=int, default=10)
    p_leaf.add_argument("--out", default=None)
    p_leaf.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"rep": cmd_rep, "verify": cmd_verify,
                "pathint": cmd_pathint, "leaf": cmd_leaf}
    try:
        return handlers[args.command](args, parser)
    except (ValueError, AssertionError, repq.CentralityError,
            pimod.ConfigTooCoarseError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
