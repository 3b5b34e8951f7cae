"""Finite-dimensional unitary representations of the deformed algebra.

On a leaf of quantized radius r = N*hbar/2 the Hilbert space has dimension
N = 2j+1 and the momentum variable is confined to the lattice J_m = hbar*m,
m = -j..j.  A leaf function F(J) e^{i p phi} becomes the banded operator

    O[m', m] = F((m' - p/2) * hbar) * delta(m' - p - m)

(the mid-point rule: the argument sits halfway between the connected
lattice sites).  Applying this to the Gauss-decomposition functions yields
the generators of the deformed algebra; this module builds the whole
operator family for a given (j, hbar) and provides residual verifiers for
each algebraic identity they satisfy.

Basis ordering is ascending in m everywhere, so raising operators populate
the first subdiagonal in (row, column) convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import leaf as _leaf
from .numkit import BlockOp2, block_inverse_triangular, embed_aux, frobenius, kron
from .rmatrix import quantum_r

__all__ = [
    "QContext",
    "HilbertMeta",
    "hilbert",
    "weyl_quantize",
    "RepSet",
    "build_rep",
    "qnumber",
    "ladder_matrix",
    "verify_chi_algebra",
    "verify_jimbo_drinfeld",
    "verify_su2_algebra",
    "verify_rll",
    "verify_reflection",
    "casimir",
    "naive_trace",
    "CentralityError",
    "LimitScanRow",
    "classical_limit_scan",
]


@dataclass(frozen=True)
class QContext:
    """Deformation scalars: hbar > 0, q = e^{hbar/2} > 1, lambda = q - 1/q."""

    hbar: float

    def __post_init__(self):
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")

    @property
    def q(self) -> float:
        return math.exp(self.hbar / 2.0)

    @property
    def lam(self) -> float:
        return self.q - 1.0 / self.q

    @staticmethod
    def from_q(q: float) -> "QContext":
        if q <= 1:
            raise ValueError("q must exceed 1")
        return QContext(hbar=2.0 * math.log(q))


@dataclass(frozen=True)
class HilbertMeta:
    """Spin, dimension, parity and momentum lattice of one representation."""

    j: float
    hbar: float
    n: int = field(init=False)
    m_parity: int = field(init=False)

    def __post_init__(self):
        two_j = 2.0 * self.j
        if abs(two_j - round(two_j)) > 1e-9 or round(two_j) < 1:
            raise ValueError(f"j must be a half-integer >= 1/2, got {self.j}")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        object.__setattr__(self, "n", int(round(two_j)) + 1)
        object.__setattr__(self, "m_parity", 0 if self.n % 2 == 1 else 1)

    @property
    def r(self) -> float:
        """Leaf radius; the loop-phase condition fixes r = N*hbar/2."""
        return 0.5 * self.n * self.hbar

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic labels -j..j ascending."""
        return -self.j + np.arange(self.n)

    @property
    def j_lattice(self) -> np.ndarray:
        """Momentum lattice J_m = hbar*m; |J_m| <= r - hbar/2 strictly inside."""
        return self.hbar * self.m_values

    @property
    def mode_numbers(self) -> np.ndarray:
        """Integer angular modes k = m + M/2 of the surviving states."""
        return np.round(self.m_values + 0.5 * self.m_parity).astype(int)

    def context(self) -> QContext:
        return QContext(self.hbar)


def hilbert(j: float, hbar: float) -> HilbertMeta:
    """Hilbert-space metadata for spin j at deformation hbar.

    The returned radius satisfies the polar loop-phase condition
    (phase -1 at both poles) with the returned parity.
    """
    meta = HilbertMeta(j=j, hbar=hbar)
    theta = _leaf.ThetaForm(hbar=hbar, m_parity=meta.m_parity)
    for pole in ("north", "south"):
        phase = _leaf.pole_loop_phase(theta, meta.r, pole)
        if abs(phase + 1.0) > 1e-9:
            raise AssertionError("loop-phase condition violated for quantized radius")
    return meta


def weyl_quantize(F: Callable[[float], float], p: int, meta: HilbertMeta) -> np.ndarray:
    """Banded operator of the insertion F(J) e^{i p phi} on the m-lattice.

    Populates the single diagonal m' = m + p with F((m' - p/2) * hbar).
    """
    if abs(p) > 1:
        raise ValueError("winding p must be -1, 0 or +1")
    n = meta.n
    mvals = meta.m_values
    out = np.zeros((n, n), dtype=complex)
    for row in range(n):
        col = row - p
        if not (0 <= col < n):
            continue
        val = F((mvals[row] - 0.5 * p) * meta.hbar)
        if not np.isfinite(val):
            raise ValueError(f"insertion not finite at lattice point m'={mvals[row]}")
        out[row, col] = val
    return out


def _clamped(F: Callable[[float], float]) -> Callable[[float], float]:
    """Clamp tiny negative radicand artifacts of a nonneg function to zero."""

    def wrapped(J: float) -> float:
        v = F(J)
        if -1e-12 < v < 0.0:
            return 0.0
        return v

    return wrapped


@dataclass(frozen=True)
class RepSet:
    """All operator matrices of one representation (ascending-m basis).

    ``a``, ``chi_plus``, ``chi_minus`` generate the Gauss-decomposition
    algebra; ``h``, ``x_plus``, ``x_minus`` are the deformed generators;
    ``su2_h``, ``su2_x_plus``, ``su2_x_minus`` the undeformed ones.  The
    triangular operator matrices ``lplus``, ``lminus`` and their ratio
    ``l`` carry the exchange relations.
    """

    meta: HilbertMeta
    a: np.ndarray
    chi_plus: np.ndarray
    chi_minus: np.ndarray
    h: np.ndarray
    x_plus: np.ndarray
    x_minus: np.ndarray
    su2_h: np.ndarray
    su2_x_plus: np.ndarray
    su2_x_minus: np.ndarray
    lplus: BlockOp2
    lminus: BlockOp2
    l: BlockOp2


def build_rep(meta: HilbertMeta) -> RepSet:
    """Quantize the Gauss-decomposition functions into a full RepSet.

    The triangular matrices multiply in the exact written order
    (diagonal piece first, then the unipotent piece), i.e. the
    off-diagonal entries are the operator products a*chi_pm with no
    symmetrization; this ordering is what makes the exchange relations
    hold without normalization adjustments.
    """
    r, hbar = meta.r, meta.hbar
    fa = _leaf.leaf_function("a", r)
    fchi_p = _leaf.leaf_function("chi+", r)
    fchi_m = _leaf.leaf_function("chi-", r)
    fh = _leaf.leaf_function("H", r, hbar)
    fx_p = _leaf.leaf_function("X+", r, hbar)
    fx_m = _leaf.leaf_function("X-", r, hbar)
    fht = _leaf.leaf_function("Ht", r)
    fxt_p = _leaf.leaf_function("Xt+", r)
    fxt_m = _leaf.leaf_function("Xt-", r)

    a = weyl_quantize(_clamped(fa.F), 0, meta)
    chi_plus = weyl_quantize(_clamped(fchi_p.F), +1, meta)
    chi_minus = weyl_quantize(_clamped(fchi_m.F), -1, meta)
    h = weyl_quantize(fh.F, 0, meta)
    x_plus = weyl_quantize(_clamped(fx_p.F), +1, meta)
    x_minus = weyl_quantize(_clamped(fx_m.F), -1, meta)
    su2_h = weyl_quantize(fht.F, 0, meta)
    su2_x_plus = weyl_quantize(_clamped(fxt_p.F), +1, meta)
    su2_x_minus = weyl_quantize(_clamped(fxt_m.F), -1, meta)

    diag = np.diag(a)
    if np.any(diag.real <= 0):
        raise AssertionError("diagonal entries of a must be positive")
    a_inv = np.diag(1.0 / diag)
    zero = np.zeros((meta.n, meta.n), dtype=complex)

    lplus = BlockOp2.from_blocks(a, a @ chi_plus, zero, a_inv)
    lminus = BlockOp2.from_blocks(a_inv, zero, -(a @ chi_minus), a)
    l = block_inverse_triangular(lminus, "lower") @ lplus
    return RepSet(
        meta=meta,
        a=a,
        chi_plus=chi_plus,
        chi_minus=chi_minus,
        h=h,
        x_plus=x_plus,
        x_minus=x_minus,
        su2_h=su2_h,
        su2_x_plus=su2_x_plus,
        su2_x_minus=su2_x_minus,
        lplus=lplus,
        lminus=lminus,
        l=l,
    )


def qnumber(n: float, q: float) -> float:
    """[n]_q = (q^n - q^-n) / (q - 1/q)."""
    return (q ** n - q ** -n) / (q - 1.0 / q)


def ladder_matrix(meta: HilbertMeta, sign: int = +1) -> np.ndarray:
    """Raising/lowering operator from the q-number formula.

    (X+)[m+1, m] = sqrt([j-m]_q [j+m+1]_q); the lowering partner is its
    transpose.  This is an independent construction of the deformed
    generators, used to cross-check the mid-point quantization route.
    """
    q = meta.context().q
    j = meta.j
    n = meta.n
    out = np.zeros((n, n), dtype=complex)
    for col in range(n - 1):
        m = meta.m_values[col]
        out[col + 1, col] = math.sqrt(qnumber(j - m, q) * qnumber(j + m + 1, q))
    return out if sign > 0 else out.conj().T


def _relative_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """||lhs - rhs||_F normalized by the relation scale max(1, ||lhs||, ||rhs||).

    Operator norms grow like powers of q across the verification grid, so a
    raw Frobenius difference at fixed tolerance would measure roundoff at
    scale rather than validity of the identity.
    """
    return frobenius(lhs - rhs) / max(1.0, frobenius(lhs), frobenius(rhs))


def verify_chi_algebra(rep: RepSet, q: float) -> float:
    """Residual of the Gauss-piece exchange relations.

    chi+ a = q a chi+;  chi- a = q^-1 a chi-;
    q chi+ chi- - q^-1 chi- chi+ = lambda (a^-4 - 1).
    """
    lam = q - 1.0 / q
    a, cp, cm = rep.a, rep.chi_plus, rep.chi_minus
    a_inv4 = np.linalg.matrix_power(np.diag(1.0 / np.diag(a)), 4)
    eye = np.eye(rep.meta.n, dtype=complex)
    return max(
        _relative_residual(cp @ a, q * (a @ cp)),
        _relative_residual(cm @ a, (1.0 / q) * (a @ cm)),
        _relative_residual(q * (cp @ cm) - (1.0 / q) * (cm @ cp),
                           lam * (a_inv4 - eye)),
    )


def verify_jimbo_drinfeld(rep: RepSet, q: float) -> float:
    """Residual of [H, X+-] = +-2 X+- and [X+, X-] = (q^H - q^-H)/(q - 1/q)."""
    h, xp, xm = rep.h, rep.x_plus, rep.x_minus
    lam = q - 1.0 / q
    qh = np.diag(q ** np.diag(h).real)
    qh_inv = np.diag(q ** -np.diag(h).real)
    return max(
        _relative_residual(h @ xp - xp @ h, 2.0 * xp),
        _relative_residual(h @ xm - xm @ h, -2.0 * xm),
        _relative_residual(xp @ xm - xm @ xp, (qh - qh_inv) / lam),
    )


def verify_su2_algebra(rep: RepSet, hbar: float) -> float:
    """Residual of the undeformed relations [H~, X~+-] = +-2 hbar X~+-,
    [X~+, X~-] = hbar H~ (these hold exactly on the lattice)."""
    h, xp, xm = rep.su2_h, rep.su2_x_plus, rep.su2_x_minus
    return max(
        _relative_residual(h @ xp - xp @ h, 2.0 * hbar * xp),
        _relative_residual(h @ xm - xm @ h, -2.0 * hbar * xm),
        _relative_residual(xp @ xm - xm @ xp, hbar * h),
    )


def rll_residuals(lplus: BlockOp2, lminus: BlockOp2, q: float) -> tuple:
    """The four exchange-relation residuals R L1 L2 = L2 L1 R.

    Ordered: (R+, L+L+), (R-, L-L-), (R+, L+L-), (R-, L-L+).
    """
    n = lplus.dim
    eye_n = np.eye(n, dtype=complex)
    rp = kron(quantum_r(+1, q), eye_n)
    rm = kron(quantum_r(-1, q), eye_n)
    l1p, l2p = embed_aux(lplus, 1), embed_aux(lplus, 2)
    l1m, l2m = embed_aux(lminus, 1), embed_aux(lminus, 2)

    def resid(R, l1, l2):
        return _relative_residual(R @ l1 @ l2, l2 @ l1 @ R)

    return (
        resid(rp, l1p, l2p),
        resid(rm, l1m, l2m),
        resid(rp, l1p, l2m),
        resid(rm, l1m, l2p),
    )


def verify_rll(rep: RepSet, q: float) -> float:
    """Max residual over the four exchange relations of L+ and L-."""
    return max(rll_residuals(rep.lplus, rep.lminus, q))


def reflection_residual(l: BlockOp2, q: float) -> float:
    """Residual of R+^-1 L1 R+ L2 = L2 R-^-1 L1 R- for the assembled L."""
    n = l.dim
    eye_n = np.eye(n, dtype=complex)
    rp = kron(quantum_r(+1, q), eye_n)
    rm = kron(quantum_r(-1, q), eye_n)
    l1, l2 = embed_aux(l, 1), embed_aux(l, 2)
    lhs = np.linalg.inv(rp) @ l1 @ rp @ l2
    rhs = l2 @ np.linalg.inv(rm) @ l1 @ rm
    return _relative_residual(lhs, rhs)


def verify_reflection(rep: RepSet, q: float) -> float:
    return reflection_residual(rep.l, q)


class CentralityError(RuntimeError):
    """The weighted trace failed its centrality or eigenvalue check."""


def casimir(rep: RepSet, q: float, tol: float = 1e-10) -> np.ndarray:
    """Central element from the weighted auxiliary trace of L.

    Returns q^-1 L[0][0] + q L[1][1].  The plain (unweighted) auxiliary
    trace of the assembled L is *not* central for q != 1 -- see
    ``naive_trace`` -- whereas this weighted combination is a multiple of
    the identity with eigenvalue q^N + q^-N = 2 cosh(r).  Raises
    CentralityError if the eigenvalue check (absolute) or the centrality
    check (commutator norm relative to the operator scale, see
    ``centrality_residual``) fails at tolerance ``tol``.
    """
    n = rep.meta.n
    c = (1.0 / q) * rep.l.blocks[0][0] + q * rep.l.blocks[1][1]
    expected = (q ** n + q ** -n) * np.eye(n, dtype=complex)
    if frobenius(c - expected) > tol:
        raise CentralityError(
            f"weighted trace differs from (q^N + q^-N) * identity by "
            f"{frobenius(c - expected):.3e}"
        )
    if centrality_residual(c, rep) > tol:
        raise CentralityError("weighted trace does not commute with the ladders")
    return c


def naive_trace(rep: RepSet) -> np.ndarray:
    """Unweighted auxiliary trace L[0][0] + L[1][1] (debug: non-central)."""
    return rep.l.blocks[0][0] + rep.l.blocks[1][1]


def centrality_residual(c: np.ndarray, rep: RepSet) -> float:
    """Max ladder-commutator norm of a candidate Casimir, scale-normalized.

    Normalized by max(1, ||c||_2) so that the value measures failure to
    commute rather than the operator magnitude: the Casimir eigenvalue
    grows like q^N across the verification grid and a raw commutator norm
    at fixed absolute tolerance would conflate roundoff at scale 10^3 with
    genuine non-centrality.
    """
    scale = max(1.0, float(np.linalg.norm(c, 2)))
    return max(
        frobenius(c @ rep.x_plus - rep.x_plus @ c),
        frobenius(c @ rep.x_minus - rep.x_minus @ c),
    ) / scale


@dataclass(frozen=True)
class LimitScanRow:
    n: int
    hbar: float
    eps: float
    exact_residual: float


def classical_limit_scan(r_fixed: float, n_list: Sequence[int]) -> list:
    """Semiclassical degradation of the commutator-to-bracket approximation.

    At fixed leaf radius, hbar_N = 2 r / N.  The exchange relation
    chi+ a = q a chi+ is exact at every N; dividing the commutator by
    hbar and comparing with the leading bracket value (1/2) a chi+ leaves
    an O(hbar) defect

        eps(N) = || (chi+ a - a chi+)/hbar - (1/2) a chi+ || / || a chi+ ||

    which should halve when N doubles.  Returns one row per N with the
    defect and the (machine-size) residual of the exact relation.
    """
    rows = []
    for n in n_list:
        if n < 2:
            raise ValueError("need dimension >= 2")
        hbar = 2.0 * r_fixed / n
        meta = hilbert((n - 1) / 2.0, hbar)
        rep = build_rep(meta)
        q = meta.context().q
        achi = rep.a @ rep.chi_plus
        comm = rep.chi_plus @ rep.a - rep.a @ rep.chi_plus
        eps = frobenius(comm / hbar - 0.5 * achi) / frobenius(achi)
        exact = frobenius(rep.chi_plus @ rep.a - q * achi)
        rows.append(LimitScanRow(n=n, hbar=hbar, eps=eps, exact_residual=exact))
    return rows
