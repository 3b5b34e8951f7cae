"""Acceptance suite: one test per criterion, at the stated tolerance.

Each test prints a single PASS line on success (visible with ``pytest -s``
or in the captured output); the pytest verdict itself is the pass/fail
record.  All tolerances are pinned here, not configurable.
"""

import math

import numpy as np
import pytest

from qleaf import pathint as pimod
from qleaf import repq
from qleaf.leaf import (
    LeafPoint,
    ThetaForm,
    bracket_table_residual,
    jacobi_residual,
    leaf_function,
    pole_loop_phase,
)
from qleaf.numkit import frobenius
from qleaf.pathint import Insertion, PathLatticeConfig
from qleaf.rmatrix import (
    adjoint_invariance_residual,
    rtt_check,
    semiclassical_residual,
    verify_cocycle,
    ybe_residual,
)

Q2_HBAR = 2.0 * math.log(2.0)
SPIN_GRID = [0.5 * k for k in range(1, 11)]            # j = 1/2 .. 5
HBAR_GRID = [0.05, 0.5, 1.386294]


def _random_point(rng, r, margin=0.02):
    J = rng.uniform(-r * (1 - margin), r * (1 - margin))
    phi = rng.uniform(0, 2 * math.pi)
    return LeafPoint.from_darboux(r, J, phi)


def test_criterion_01_poisson_table_and_jacobi():
    rng = np.random.default_rng(101)
    worst_table = 0.0
    worst_jacobi = 0.0
    for r in (0.5, 1.0, 2.0):
        for _ in range(50):
            worst_table = max(worst_table,
                              bracket_table_residual(_random_point(rng, r)))
        for names in (("alpha", "beta", "gamma"), ("beta", "gamma", "delta")):
            for _ in range(10):
                p = _random_point(rng, r, margin=0.2)
                worst_jacobi = max(worst_jacobi, jacobi_residual(p, names))
    assert worst_table < 1e-9
    assert worst_jacobi < 1e-7
    print(f"\nPASS criterion 1: poisson table {worst_table:.2e} < 1e-9, "
          f"jacobi {worst_jacobi:.2e} < 1e-7")


def test_criterion_02_group_bracket_table():
    worst = rtt_check(samples=20)
    assert worst < 1e-11
    print(f"\nPASS criterion 2: bracket table from r+ commutator {worst:.2e} < 1e-11")


def test_criterion_03_r_matrix_structure():
    qybe = max(max(ybe_residual("quantum", s, q) for s in (+1, -1))
               for q in (1.1, 2.0, math.e))
    assert qybe < 1e-12
    cybe = max(ybe_residual("classical", +1), ybe_residual("classical", -1))
    assert cybe < 1e-13
    adj = adjoint_invariance_residual()
    assert adj < 1e-13
    coc = verify_cocycle()
    assert coc < 1e-10
    ratios = []
    for hbar in (0.2, 0.1):
        ratios.append(max(semiclassical_residual(hbar))
                      / max(semiclassical_residual(hbar / 2)))
    assert all(3.5 <= rho <= 4.5 for rho in ratios)
    print(f"\nPASS criterion 3: qybe {qybe:.2e}, cybe {cybe:.2e}, adjoint {adj:.2e}, "
          f"cocycle {coc:.2e}, scaling ratios {[f'{r:.2f}' for r in ratios]}")


def test_criterion_04_quantum_algebra_grid():
    worst = {"algebra": 0.0, "jimbo-drinfeld": 0.0, "rll": 0.0, "reflection": 0.0}
    for j in SPIN_GRID:
        for hbar in HBAR_GRID:
            meta = repq.hilbert(j, hbar)
            rep = repq.build_rep(meta)
            q = meta.context().q
            worst["algebra"] = max(worst["algebra"], repq.verify_chi_algebra(rep, q))
            worst["jimbo-drinfeld"] = max(worst["jimbo-drinfeld"],
                                          repq.verify_jimbo_drinfeld(rep, q))
            worst["rll"] = max(worst["rll"], repq.verify_rll(rep, q))
            worst["reflection"] = max(worst["reflection"],
                                      repq.verify_reflection(rep, q))
    for name, value in worst.items():
        assert value < 1e-10, name
    print("\nPASS criterion 4: " +
          ", ".join(f"{k} {v:.2e} < 1e-10" for k, v in worst.items()))


def test_criterion_05_casimir():
    worst_eig = 0.0
    worst_cent = 0.0
    for j in SPIN_GRID:
        for hbar in HBAR_GRID:
            meta = repq.hilbert(j, hbar)
            rep = repq.build_rep(meta)
            q = meta.context().q
            cas = repq.casimir(rep, q, tol=1e-10)  # raises if checks fail
            expected = (q ** meta.n + q ** -meta.n) * np.eye(meta.n)
            worst_eig = max(worst_eig, frobenius(cas - expected))
            worst_cent = max(worst_cent, repq.centrality_residual(cas, rep))
    assert worst_eig < 1e-10
    assert worst_cent < 1e-10
    golden_half = repq.casimir(repq.build_rep(repq.hilbert(0.5, Q2_HBAR)), 2.0)
    assert golden_half[0, 0].real == pytest.approx(4.25, abs=1e-12)
    golden_one = repq.casimir(repq.build_rep(repq.hilbert(1.0, Q2_HBAR)), 2.0)
    assert golden_one[0, 0].real == pytest.approx(8.125, abs=1e-12)
    print(f"\nPASS criterion 5: eigenvalue {worst_eig:.2e} < 1e-10, centrality "
          f"{worst_cent:.2e} < 1e-10, goldens 4.25 / 8.125 exact")


def test_criterion_06_oracle_equivalence():
    worst_ladder = 0.0
    worst_su2 = 0.0
    for j in SPIN_GRID:
        for hbar in HBAR_GRID:
            meta = repq.hilbert(j, hbar)
            rep = repq.build_rep(meta)
            worst_ladder = max(
                worst_ladder,
                float(np.max(np.abs(rep.x_plus - repq.ladder_matrix(meta, +1)))),
                float(np.max(np.abs(rep.x_minus - repq.ladder_matrix(meta, -1)))),
            )
            worst_su2 = max(worst_su2, repq.verify_su2_algebra(rep, hbar))
    assert worst_ladder < 1e-12
    assert worst_su2 < 1e-12
    print(f"\nPASS criterion 6: insertion vs q-ladder {worst_ladder:.2e} < 1e-12, "
          f"undeformed algebra {worst_su2:.2e} < 1e-12")


def test_criterion_07_radius_quantization():
    hbar = 0.5
    grid = [0.25 * k / 2.0 for k in range(1, 101)]  # hits every N/2 step
    rows = pimod.quantization_scan(hbar, grid)
    n_admissible = 0
    for row in rows:
        ratio = 2.0 * row.r / hbar
        should = abs(ratio - round(ratio)) < 1e-9 and round(ratio) >= 1
        assert row.admissible == should
        if row.admissible:
            n_admissible += 1
            assert row.n == round(ratio)
            assert row.m_parity == (0 if row.n % 2 == 1 else 1)
            assert row.phase == pytest.approx(-1.0, abs=1e-9)
            theta = ThetaForm(hbar=hbar, m_parity=row.m_parity)
            for pole in ("north", "south"):
                assert pole_loop_phase(theta, row.r, pole) == pytest.approx(-1.0)
    assert n_admissible > 0
    print(f"\nPASS criterion 7: 100-point scan, {n_admissible} admissible radii, "
          f"parity rule and loop phase -1 everywhere")


def test_criterion_08_path_integral():
    cfg = PathLatticeConfig(nj=2000, windings=200, nphi=512, kernel="fejer")
    worst_chi = 0.0
    worst_a = 0.0
    for j in (0.5, 1.0):
        meta = repq.hilbert(j, Q2_HBAR)
        rep = repq.build_rep(meta)
        for name, p, oracle in (("chi+", +1, rep.chi_plus),
                                ("chi-", -1, rep.chi_minus)):
            f = leaf_function(name, meta.r)
            got = pimod.matrix_element_lattice(Insertion(F=f.F, p=p), meta, cfg)
            worst_chi = max(worst_chi, float(
                np.max(np.abs(got - oracle)) / np.max(np.abs(oracle))))
        fa = leaf_function("a", meta.r)
        got = pimod.matrix_element_lattice(Insertion(F=fa.F, p=0), meta, cfg)
        worst_a = max(worst_a, float(
            np.max(np.abs(got - rep.a)) / np.max(np.abs(rep.a))))
    assert worst_chi < 1e-2
    assert worst_a < 2e-2

    meta = repq.hilbert(1.0, 0.5)
    hfun = lambda J: J * J / 2.0
    exact = pimod.propagator_exact(hfun, 1.0, meta)
    lattice = pimod.propagator_lattice(hfun, 1.0, meta, cfg)
    prop_err = float(np.max(np.abs(lattice - exact)))
    assert prop_err < 1e-2

    errs = []
    for w in (32, 64, 128):
        cfg_w = PathLatticeConfig(nj=2400, windings=w, nphi=512, kernel="fejer")
        u = pimod.propagator_lattice(hfun, 1.0, meta, cfg_w)
        errs.append(float(np.max(np.abs(u - exact))))
    assert errs[0] > errs[1] > errs[2]
    print(f"\nPASS criterion 8: chi rel {worst_chi:.2e} < 1e-2, a rel "
          f"{worst_a:.2e} < 2e-2, propagator {prop_err:.2e} < 1e-2, "
          f"W-doubling errors {[f'{e:.1e}' for e in errs]} monotone")


def test_criterion_09_semiclassical_operator_limit():
    rows = repq.classical_limit_scan(1.0, [8, 16, 32])
    ratios = [b.eps / a.eps for a, b in zip(rows, rows[1:])]
    assert all(0.375 <= rho <= 0.625 for rho in ratios)
    print(f"\nPASS criterion 9: limit-scan ratios "
          f"{[f'{r:.3f}' for r in ratios]} within [0.375, 0.625]")


def test_criterion_10_negative_controls():
    rep = repq.build_rep(repq.hilbert(0.5, Q2_HBAR))
    naive_resid = repq.centrality_residual(repq.naive_trace(rep), rep)
    assert naive_resid > 1e-3

    meta = repq.hilbert(1.0, Q2_HBAR)
    rep1 = repq.build_rep(meta)
    ch = math.cosh(meta.r)
    delta_hat = repq.weyl_quantize(lambda J: 2 * ch - math.exp(-J), 0, meta)
    gap = frobenius(delta_hat - rep1.l.blocks[1][1])
    assert gap > 1e-3
    print(f"\nPASS criterion 10: naive trace non-centrality {naive_resid:.2e} "
          f"> 1e-3, delta-block ordering gap {gap:.2e} > 1e-3")
