import math

import numpy as np
import pytest

from qleaf.leaf import ThetaForm, pole_loop_phase
from qleaf.numkit import BlockOp2, frobenius
from qleaf.repq import (
    CentralityError,
    HilbertMeta,
    QContext,
    build_rep,
    casimir,
    centrality_residual,
    classical_limit_scan,
    hilbert,
    ladder_matrix,
    naive_trace,
    qnumber,
    reflection_residual,
    rll_residuals,
    verify_chi_algebra,
    verify_jimbo_drinfeld,
    verify_reflection,
    verify_rll,
    verify_su2_algebra,
    weyl_quantize,
)

Q2_HBAR = 2.0 * math.log(2.0)  # deformation with q = 2


class TestQContext:
    def test_values(self):
        ctx = QContext(Q2_HBAR)
        assert ctx.q == pytest.approx(2.0)
        assert ctx.lam == pytest.approx(1.5)

    def test_from_q(self):
        assert QContext.from_q(2.0).hbar == pytest.approx(Q2_HBAR)

    def test_invalid(self):
        with pytest.raises(ValueError):
            QContext(0.0)
        with pytest.raises(ValueError):
            QContext.from_q(1.0)


class TestHilbert:
    def test_spin_half(self):
        meta = hilbert(0.5, 0.5)
        assert meta.n == 2
        assert meta.m_parity == 1
        assert meta.r == pytest.approx(0.5)
        assert list(meta.m_values) == [-0.5, 0.5]

    def test_spin_one(self):
        meta = hilbert(1.0, 0.5)
        assert meta.n == 3
        assert meta.m_parity == 0
        assert meta.r == pytest.approx(0.75)

    def test_mode_numbers_integral(self):
        for j in (0.5, 1.0, 1.5, 2.0, 2.5):
            meta = hilbert(j, 0.7)
            ks = meta.m_values + 0.5 * meta.m_parity
            assert np.allclose(ks, np.round(ks))
        assert list(hilbert(0.5, 1.0).mode_numbers) == [0, 1]

    def test_lattice_strictly_inside(self):
        meta = hilbert(2.5, 0.3)
        assert np.max(np.abs(meta.j_lattice)) == pytest.approx(meta.r - meta.hbar / 2)

    def test_radius_satisfies_loop_phase(self):
        meta = hilbert(1.5, 0.8)
        theta = ThetaForm(hbar=0.8, m_parity=meta.m_parity)
        for pole in ("north", "south"):
            assert pole_loop_phase(theta, meta.r, pole) == pytest.approx(-1.0)

    def test_rejects_bad_spin(self):
        with pytest.raises(ValueError):
            hilbert(0.3, 0.5)
        with pytest.raises(ValueError):
            hilbert(0.0, 0.5)
        with pytest.raises(ValueError):
            HilbertMeta(j=0.5, hbar=-1.0)


class TestWeylQuantize:
    def test_constant_is_identity(self):
        meta = hilbert(1.0, 0.5)
        assert np.array_equal(weyl_quantize(lambda J: 1.0, 0, meta), np.eye(3))

    def test_diagonal_exponential(self):
        meta = hilbert(0.5, Q2_HBAR)
        got = weyl_quantize(lambda J: math.exp(-J), 0, meta)
        assert np.allclose(np.diag(got), [2.0, 0.5])

    def test_chi_plus_single_entry(self):
        meta = hilbert(0.5, Q2_HBAR)
        rep = build_rep(meta)
        # radicand at the midpoint: -1 + 2 cosh(hbar) - 1 = 4 sinh^2(hbar/2)
        assert rep.chi_plus[1, 0] == pytest.approx(1.5)
        assert np.count_nonzero(rep.chi_plus) == 1

    def test_band_structure(self):
        meta = hilbert(1.5, 0.5)
        up = weyl_quantize(lambda J: 1.0, +1, meta)
        assert np.array_equal(up, np.diag(np.ones(3), -1))
        down = weyl_quantize(lambda J: 1.0, -1, meta)
        assert np.array_equal(down, np.diag(np.ones(3), +1))

    def test_rejects_large_winding(self):
        with pytest.raises(ValueError):
            weyl_quantize(lambda J: 1.0, 2, hilbert(0.5, 0.5))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            weyl_quantize(lambda J: float("nan"), 0, hilbert(0.5, 0.5))


class TestRepSet:
    def test_h_spectrum(self):
        rep = build_rep(hilbert(0.5, Q2_HBAR))
        assert np.allclose(np.diag(rep.h), [-1.0, 1.0])
        assert rep.x_plus[1, 0] == pytest.approx(1.0)  # [1]_q = 1

    def test_x_plus_spin_one(self):
        rep = build_rep(hilbert(1.0, Q2_HBAR))
        vals = rep.x_plus[rep.x_plus != 0]
        assert np.allclose(np.abs(vals), math.sqrt(2.5))  # sqrt([2]_2 [1]_2)

    def test_su2_matrix_elements_small_hbar(self):
        hbar = 1e-3
        rep = build_rep(hilbert(1.0, hbar))
        j = 1.0
        for m in (-1.0, 0.0):
            want = hbar * math.sqrt((j + 0.5) ** 2 - (m + 0.5) ** 2)
            row = int(m + 1) + 1
            assert rep.su2_x_plus[row, row - 1] == pytest.approx(want, rel=1e-12)

    def test_unitarity_pairs(self):
        rep = build_rep(hilbert(2.0, 0.7))
        assert np.array_equal(rep.chi_minus, rep.chi_plus.conj().T)
        assert np.array_equal(rep.x_minus, rep.x_plus.conj().T)
        assert np.array_equal(rep.su2_x_minus, rep.su2_x_plus.conj().T)

    def test_ladder_termination(self):
        rep = build_rep(hilbert(1.5, 0.4))
        n = rep.meta.n
        top = np.zeros(n)
        top[-1] = 1.0
        assert np.linalg.norm(rep.chi_plus @ top) == 0.0
        bottom = np.zeros(n)
        bottom[0] = 1.0
        assert np.linalg.norm(rep.chi_minus @ bottom) == 0.0

    def test_lplus_blocks(self):
        rep = build_rep(hilbert(0.5, Q2_HBAR))
        assert np.array_equal(rep.lplus.blocks[0][1], rep.a @ rep.chi_plus)
        assert np.array_equal(rep.lminus.blocks[1][0], -(rep.a @ rep.chi_minus))
        # off-diagonal of L+ equals q^{-1/2} lambda X+
        want = 2.0 ** -0.5 * 1.5
        assert rep.lplus.blocks[0][1][1, 0] == pytest.approx(want)
        assert rep.lplus.blocks[0][1][1, 0] == pytest.approx(1.0606601718, abs=1e-9)


class TestChiAlgebra:
    def test_q2(self):
        meta = hilbert(0.5, Q2_HBAR)
        assert verify_chi_algebra(build_rep(meta), 2.0) < 1e-12

    def test_large_spin(self):
        meta = hilbert(5.0, 0.05)
        assert verify_chi_algebra(build_rep(meta), meta.context().q) < 1e-10

    def test_commutative_limit(self):
        meta = hilbert(1.0, 1e-8)
        rep = build_rep(meta)
        comm = rep.chi_plus @ rep.a - rep.a @ rep.chi_plus
        assert frobenius(comm) < 1e-7  # O(hbar)

    def test_closed_form_diagonal(self):
        # q g(m-1/2)^2 - q^-1 g(m+1/2)^2 = lambda (e^{2 hbar m} - 1)
        meta = hilbert(1.5, 0.6)
        rep = build_rep(meta)
        q = meta.context().q
        lam = meta.context().lam
        lhs = q * (rep.chi_plus @ rep.chi_minus) - (1 / q) * (rep.chi_minus @ rep.chi_plus)
        for idx, m in enumerate(meta.m_values):
            assert lhs[idx, idx].real == pytest.approx(
                lam * (math.exp(2 * meta.hbar * m) - 1.0), abs=1e-12)


class TestJimboDrinfeld:
    def test_q2(self):
        assert verify_jimbo_drinfeld(build_rep(hilbert(0.5, Q2_HBAR)), 2.0) < 1e-12

    def test_j3(self):
        ctx = QContext.from_q(1.2)
        meta = hilbert(3.0, ctx.hbar)
        assert verify_jimbo_drinfeld(build_rep(meta), 1.2) < 1e-10

    def test_su2_relations_exact(self):
        for j, hbar in ((0.5, 0.3), (2.0, 0.9), (4.5, 0.11)):
            meta = hilbert(j, hbar)
            assert verify_su2_algebra(build_rep(meta), hbar) < 1e-12


class TestLadderOracle:
    def test_qnumber(self):
        assert qnumber(1, 2.0) == pytest.approx(1.0)
        assert qnumber(2, 2.0) == pytest.approx(2.5)
        assert qnumber(3, 2.0) == pytest.approx((8 - 1 / 8) / 1.5)

    def test_insertion_equals_ladder(self):
        for j in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0):
            for hbar in (0.05, 0.5, Q2_HBAR):
                meta = hilbert(j, hbar)
                rep = build_rep(meta)
                gap = np.max(np.abs(rep.x_plus - ladder_matrix(meta, +1)))
                gap = max(gap, np.max(np.abs(rep.x_minus - ladder_matrix(meta, -1))))
                assert gap < 1e-12


class TestExchangeRelations:
    # (j, hbar): includes q = 2, q = e^{0.3} and q = 1.4 points
    GRID = [(0.5, Q2_HBAR), (1.0, 0.5), (2.0, 0.6),
            (1.5, 2 * math.log(1.4)), (3.5, 0.2)]

    def test_rll(self):
        for j, hbar in self.GRID:
            meta = hilbert(j, hbar)
            assert verify_rll(build_rep(meta), meta.context().q) < 1e-11

    def test_reflection(self):
        for j, hbar in self.GRID:
            meta = hilbert(j, hbar)
            assert verify_reflection(build_rep(meta), meta.context().q) < 1e-11

    def test_degenerate_q1(self):
        # diagonal blocks, lambda = 0, R = identity: all residuals vanish
        n = 3
        diag = np.diag(np.exp(np.linspace(-0.5, 0.5, n))).astype(complex)
        z = np.zeros((n, n), dtype=complex)
        lplus = BlockOp2.from_blocks(diag, z, z, np.linalg.inv(diag))
        lminus = BlockOp2.from_blocks(np.linalg.inv(diag), z, z, diag)
        assert max(rll_residuals(lplus, lminus, 1.0)) < 1e-14
        l = BlockOp2.from_blocks(diag @ diag, z, z, np.linalg.inv(diag @ diag))
        assert reflection_residual(l, 1.0) < 1e-14


class TestCasimir:
    def test_golden_q2(self):
        rep = build_rep(hilbert(0.5, Q2_HBAR))
        cas = casimir(rep, 2.0)
        assert np.allclose(cas, 4.25 * np.eye(2), atol=1e-12)

    def test_golden_spin_one(self):
        rep = build_rep(hilbert(1.0, Q2_HBAR))
        cas = casimir(rep, 2.0)
        assert np.allclose(cas, 8.125 * np.eye(3), atol=1e-12)

    def test_matches_classical_trace(self):
        for j, hbar in ((1.5, 0.3), (3.0, 0.7)):
            meta = hilbert(j, hbar)
            rep = build_rep(meta)
            q = meta.context().q
            val = casimir(rep, q)[0, 0].real
            assert val == pytest.approx(2.0 * math.cosh(meta.r), abs=1e-10)
            assert val == pytest.approx(q ** meta.n + q ** -meta.n, abs=1e-10)

    def test_naive_trace_not_central(self):
        rep = build_rep(hilbert(0.5, Q2_HBAR))
        resid = centrality_residual(naive_trace(rep), rep)
        assert resid > 1e-3

    def test_casimir_error_on_corrupted_weight(self):
        rep = build_rep(hilbert(0.5, Q2_HBAR))
        with pytest.raises(CentralityError):
            casimir(rep, 2.1)  # wrong weight breaks both checks

    def test_delta_quantization_differs_from_l22(self):
        # the naive mid-point operator of the (2,2) leaf entry is not the
        # (2,2) block of the assembled L: ordering matters for q != 1
        meta = hilbert(1.0, Q2_HBAR)
        rep = build_rep(meta)
        ch = math.cosh(meta.r)
        delta_hat = weyl_quantize(lambda J: 2 * ch - math.exp(-J), 0, meta)
        gap = frobenius(delta_hat - rep.l.blocks[1][1])
        assert gap > 1e-3
        # while the (1,1) entry quantizes directly onto the L block
        alpha_hat = weyl_quantize(lambda J: math.exp(-J), 0, meta)
        assert frobenius(alpha_hat - rep.l.blocks[0][0]) < 1e-12


class TestClassicalLimitScan:
    def test_ratio_window(self):
        rows = classical_limit_scan(1.0, [8, 16, 32])
        for a, b in zip(rows, rows[1:]):
            assert 0.375 <= b.eps / a.eps <= 0.625

    def test_exact_relation_stays_tight(self):
        for row in classical_limit_scan(1.0, [8, 16, 32, 64]):
            assert row.exact_residual < 1e-10

    def test_monotone_decrease(self):
        rows = classical_limit_scan(1.0, [8, 16, 32, 64])
        eps = [row.eps for row in rows]
        assert all(b < a for a, b in zip(eps, eps[1:]))

    def test_rejects_tiny_dimension(self):
        with pytest.raises(ValueError):
            classical_limit_scan(1.0, [1])
