"""Discretized phase-space path integral on a quantized leaf.

The propagator of a Hamiltonian H(J) between angular eigenstates is a sum
over paths on the leaf.  Discretized, each time slice contributes a
momentum integral over the open interval (-r, r) and an angular integral
over the circle; summing the angular winding number produces (in the
limit) a Dirac comb that pins J onto the shifted integer lattice.  At
finite truncation the comb is a Dirichlet kernel, or a Fejer kernel when
the winding terms are Cesaro-weighted -- the latter trades the slow
oscillatory tail for monotone convergence and is the default.

The numerical scheme:

* momentum integrals: Gauss-Legendre on (-r, r), endpoints excluded;
* angular integrals: uniform-grid trapezoid sums, evaluated in closed form
  (they are geometric sums);
* winding sums: truncated at |n| <= W with the chosen kernel weights.

Everything converges to the spectral results of :mod:`qleaf.repq`; those
serve as oracles for calibration and testing, never the other way around.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .numkit import gauss_legendre
from .repq import HilbertMeta

__all__ = [
    "ConfigTooCoarseError",
    "PathLatticeConfig",
    "Insertion",
    "winding_kernel",
    "phi_integral",
    "propagator_exact",
    "propagator_lattice",
    "mode_amplitudes",
    "matrix_element_lattice",
    "ScanRow",
    "quantization_scan",
]


class ConfigTooCoarseError(RuntimeError):
    """Self-estimated discretization error exceeds the requested tolerance."""


@dataclass(frozen=True)
class PathLatticeConfig:
    """Discretization knobs for the lattice path integral.

    ``p_slices`` time slices, ``nj`` momentum quadrature nodes per slice,
    winding truncation ``windings`` (sum over |n| <= windings), kernel
    "fejer" or "dirichlet", and ``nphi`` angular grid points.
    """

    p_slices: int = 1
    nj: int = 1600
    windings: int = 128
    kernel: str = "fejer"
    nphi: int = 512

    def __post_init__(self):
        if self.p_slices < 1 or self.nj < 8 or self.windings < 0 or self.nphi < 4:
            raise ValueError("lattice configuration too small")
        if self.kernel not in ("fejer", "dirichlet"):
            raise ValueError(f"unknown kernel {self.kernel!r}")


@dataclass(frozen=True)
class Insertion:
    """An operator insertion for lattice matrix-element extraction.

    ``prescription`` selects the discretization of the phase-space product:

    * "midpoint-phi": F(J_i) with the angular factor at the slice midpoint
      (single time interval suffices);
    * "midpoint-J": F((J_i + J_{i-1})/2) with the angular factor at the
      junction (needs two time intervals);
    * "gauss-ordered": F(J_i, J_{i-1}) of both adjacent momenta, also at
      the junction; used for split integrands whose limit is an ordered
      operator product rather than a mid-point quantization.

    For the two-J prescriptions ``F`` is called as F(J_later, J_earlier).
    """

    F: Callable
    p: int
    prescription: str = "midpoint-phi"

    def __post_init__(self):
        if abs(self.p) > 1:
            raise ValueError("winding p must be -1, 0 or +1")
        if self.prescription not in ("midpoint-phi", "midpoint-J", "gauss-ordered"):
            raise ValueError(f"unknown prescription {self.prescription!r}")


def winding_kernel(alpha: np.ndarray, windings: int, kind: str) -> np.ndarray:
    """Truncated winding sum sum_n w_n exp(2 pi i n alpha) as a function of alpha.

    Dirichlet (w_n = 1):   sin((2W+1) pi a) / sin(pi a)
    Fejer (w_n = 1-|n|/(W+1)): [sin((W+1) pi a)]^2 / ((W+1) sin^2(pi a))

    Both tend to a Dirac comb on the integers as W grows.
    """
    a = np.asarray(alpha, dtype=float)
    w = int(windings)
    s = np.sin(np.pi * a)
    near_int = np.abs(s) < 1e-9
    s_safe = np.where(near_int, 1.0, s)
    if kind == "dirichlet":
        out = np.sin((2 * w + 1) * np.pi * a) / s_safe
        return np.where(near_int, float(2 * w + 1), out)
    if kind == "fejer":
        out = (np.sin((w + 1) * np.pi * a) / s_safe) ** 2 / (w + 1)
        return np.where(near_int, float(w + 1), out)
    raise ValueError(f"unknown kernel {kind!r}")


def phi_integral(beta: np.ndarray, nphi: int) -> np.ndarray:
    """Trapezoid sum of exp(i beta phi) over a uniform nphi-point circle grid.

    The sum is geometric, so it is evaluated in closed form:

        h * [ (e^{2 pi i b} - 1)/(e^{i h b} - 1) + (e^{2 pi i b} - 1)/2 ]

    with h = 2 pi / nphi, and the limit value 2 pi where the denominator
    vanishes (b a multiple of nphi, including b = 0).
    """
    b = np.asarray(beta, dtype=float)
    h = 2.0 * math.pi / nphi
    z = np.exp(1j * h * b)
    num = np.exp(2j * math.pi * b) - 1.0
    deg = np.abs(z - 1.0) < 1e-12
    z_safe = np.where(deg, 2.0, z)
    geo = num / (z_safe - 1.0)
    out = h * (geo + 0.5 * num)
    return np.where(deg, 2.0 * math.pi, out)


def propagator_exact(hfun: Callable[[float], float], T: float,
                     meta: HilbertMeta) -> np.ndarray:
    """Spectral propagator: diagonal phases exp(-i H(J_m) T / hbar)."""
    j_lat = meta.j_lattice
    vals = np.array([hfun(J) for J in j_lat], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("Hamiltonian not finite on the momentum lattice")
    return np.diag(np.exp(-1j * vals * T / meta.hbar))


def _slice_matrix(ffun: Callable, p: int, meta: HilbertMeta,
                  cfg: PathLatticeConfig, bra_modes: np.ndarray,
                  ket_modes: np.ndarray) -> np.ndarray:
    """One-slice mode matrix of the insertion F(J) e^{i p phi}.

    E[k', k] = (1 / (2 pi * 2 pi hbar)) * sum_i w_i F(J_i) K(alpha_i)
               * S(alpha_i - k') * S(k + p - alpha_i)

    with alpha = (J + c)/hbar + p/2, K the winding kernel and S the
    closed-form circle-grid sum.  Modes are the integer angular numbers
    k = m + M/2.
    """
    r, hbar = meta.r, meta.hbar
    c = 0.5 * meta.m_parity * hbar
    nodes, weights = gauss_legendre(cfg.nj, -r, r)
    fvals = np.array([ffun(J) for J in nodes], dtype=complex)
    alpha = (nodes + c) / hbar + 0.5 * p
    kern = winding_kernel(alpha, cfg.windings, cfg.kernel)
    base = weights * fvals * kern
    s_bra = phi_integral(alpha[None, :] - bra_modes[:, None], cfg.nphi)
    s_ket = phi_integral(ket_modes[:, None] + p - alpha[None, :], cfg.nphi)
    norm = 1.0 / (2.0 * math.pi * 2.0 * math.pi * hbar)
    return norm * np.einsum("i,bi,ki->bk", base, s_bra, s_ket)


def _extended_modes(meta: HilbertMeta, buffer: int = 8) -> np.ndarray:
    k = meta.mode_numbers
    return np.arange(k[0] - buffer, k[-1] + buffer + 1)


def propagator_lattice(hfun: Callable[[float], float], T: float,
                       meta: HilbertMeta, cfg: PathLatticeConfig,
                       tol: Optional[float] = None) -> np.ndarray:
    """Lattice propagator projected on the surviving angular modes.

    For a single slice this is the direct mode-space double integral; for
    several slices the one-slice kernel is composed through an extended
    mode window (intermediate angular integrals couple all modes, but
    non-propagating ones are suppressed by the winding kernel).  Converges
    entrywise to :func:`propagator_exact` as nj, windings, nphi grow.

    If ``tol`` is given, the result is recomputed at half the winding
    truncation and a ConfigTooCoarseError is raised when the difference
    exceeds ``tol``.
    """
    if tol is not None:
        coarse = replace(cfg, windings=max(1, cfg.windings // 2))
        a = _propagator_lattice_raw(hfun, T, meta, cfg)
        b = _propagator_lattice_raw(hfun, T, meta, coarse)
        if float(np.max(np.abs(a - b))) > tol:
            raise ConfigTooCoarseError(
                f"winding-halving error estimate {float(np.max(np.abs(a - b))):.3e} "
                f"exceeds tolerance {tol:.3e}"
            )
        return a
    return _propagator_lattice_raw(hfun, T, meta, cfg)


def _propagator_lattice_raw(hfun, T, meta, cfg) -> np.ndarray:
    tau = T / cfg.p_slices

    def ffun(J: float) -> complex:
        return np.exp(-1j * hfun(J) * tau / meta.hbar)

    surviving = meta.mode_numbers.astype(float)
    if cfg.p_slices == 1:
        return _slice_matrix(ffun, 0, meta, cfg, surviving, surviving)
    modes = _extended_modes(meta).astype(float)
    one = _slice_matrix(ffun, 0, meta, cfg, modes, modes)
    full = np.linalg.matrix_power(one, cfg.p_slices)
    sel = np.array([np.where(modes == k)[0][0] for k in surviving])
    return full[np.ix_(sel, sel)]


def mode_amplitudes(meta: HilbertMeta, cfg: PathLatticeConfig,
                    modes: Sequence[int]) -> np.ndarray:
    """Diagonal H=0 single-slice amplitudes <k|U|k> for arbitrary modes.

    Modes whose shifted momentum hbar*(k - M/2) lies outside (-r, r) do
    not propagate: their amplitude tends to zero as the winding truncation
    grows.
    """
    marr = np.asarray(modes, dtype=float)
    mat = _slice_matrix(lambda J: 1.0, 0, meta, cfg, marr, marr)
    return np.diag(mat)


def _two_slice_matrix(ffun2: Callable, p: int, meta: HilbertMeta,
                      cfg: PathLatticeConfig) -> np.ndarray:
    """Two-slice junction insertion F(J_2, J_1) e^{i p phi_junction}.

    E[k',k] = (1/(2 pi hbar))^2 (1/(2 pi)) * sum_{i1,i2} w1 w2 F(J2, J1)
              K(a1) K(a2) S(k - a1) S(a1 - a2 + p) S(a2 - k')

    with a_i = (J_i + c)/hbar.  In the limit the three circle sums force
    k -> a1, a2 -> a1 + p, k' -> a2, collapsing onto
    F(hbar m', hbar m) delta(m' - p - m).
    """
    r, hbar = meta.r, meta.hbar
    c = 0.5 * meta.m_parity * hbar
    nodes, weights = gauss_legendre(cfg.nj, -r, r)
    alpha = (nodes + c) / hbar
    kern = winding_kernel(alpha, cfg.windings, cfg.kernel)
    wk = weights * kern
    j2g, j1g = np.meshgrid(nodes, nodes, indexing="ij")
    fgrid = _call_on_grid(ffun2, j2g, j1g)
    s_mid = phi_integral(alpha[None, :] - alpha[:, None] + p, cfg.nphi)  # [i2, i1]
    modes = meta.mode_numbers.astype(float)
    s_ket = phi_integral(modes[:, None] - alpha[None, :], cfg.nphi)      # [k, i1]
    s_bra = phi_integral(alpha[:, None] - modes[None, :], cfg.nphi)      # [i2, k']
    inner = (fgrid * s_mid) @ (wk[:, None] * s_ket.T)                    # [i2, k]
    mat = (wk[:, None] * s_bra).T @ inner                                # [k', k]
    norm = (1.0 / (2.0 * math.pi * hbar)) ** 2 / (2.0 * math.pi)
    return norm * mat


def matrix_element_lattice(ins: Insertion, meta: HilbertMeta,
                           cfg: PathLatticeConfig,
                           tol: Optional[float] = None) -> np.ndarray:
    """Matrix elements of an insertion from the H=0 lattice path integral.

    Mid-point prescriptions converge to the banded mid-point operator of
    :func:`qleaf.repq.weyl_quantize`; the gauss-ordered two-momentum
    prescription converges to the corresponding ordered operator product.

    With ``tol`` set, a winding-halved rerun provides an error estimate
    and a ConfigTooCoarseError is raised when it exceeds ``tol``.
    """
    if tol is not None:
        a = _matrix_element_raw(ins, meta, cfg)
        b = _matrix_element_raw(ins, meta, replace(cfg, windings=max(1, cfg.windings // 2)))
        if float(np.max(np.abs(a - b))) > tol:
            raise ConfigTooCoarseError(
                f"winding-halving error estimate {float(np.max(np.abs(a - b))):.3e} "
                f"exceeds tolerance {tol:.3e}"
            )
        return a
    return _matrix_element_raw(ins, meta, cfg)


def _call_on_grid(f, *grids) -> np.ndarray:
    """Evaluate f on meshgrids, falling back to elementwise for scalar-only f."""
    try:
        out = np.asarray(f(*grids), dtype=complex)
        if out.shape == grids[0].shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.vectorize(f, otypes=[complex])(*grids)


def _matrix_element_raw(ins, meta, cfg) -> np.ndarray:
    if ins.prescription == "midpoint-phi":
        modes = meta.mode_numbers.astype(float)
        return _slice_matrix(ins.F, ins.p, meta, cfg, modes, modes)
    if ins.prescription == "midpoint-J":
        def f2(j_later, j_earlier):
            return _call_on_grid(ins.F, 0.5 * (j_later + j_earlier))
        return _two_slice_matrix(f2, ins.p, meta, cfg)
    return _two_slice_matrix(ins.F, ins.p, meta, cfg)


# ---------------------------------------------------------------------------
# radius quantization scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    """Verdict of both polar loop-phase conditions for one radius.

    ``admissible`` / ``m_parity`` / ``phase`` refer to the condition
    phase = -1 (parity M = 0 for odd N, 1 for even N), the one that
    reproduces the correct matrix elements; the ``plus_*`` fields to the
    weaker single-valuedness condition phase = +1, which pairs the
    opposite parity with each N.
    """

    r: float
    admissible: bool
    n: Optional[int]
    m_parity: Optional[int]
    phase: Optional[complex]
    plus_admissible: bool
    plus_m_parity: Optional[int]
    plus_phase: Optional[complex]


def quantization_scan(hbar: float, r_grid: Sequence[float]) -> list:
    """Scan radii for admissibility r = N hbar / 2 with integer N.

    For each admissible radius, reports the parity required by the
    phase = -1 condition alongside the one the phase = +1 condition would
    demand; inadmissible radii get all-None verdict fields.
    """
    from .leaf import ThetaForm, pole_loop_phase

    if hbar <= 0:
        raise ValueError("hbar must be positive")
    rows = []
    for r in r_grid:
        ratio = 2.0 * r / hbar
        n = int(round(ratio))
        if n < 1 or abs(ratio - n) > 1e-9 * max(1.0, abs(ratio)):
            rows.append(ScanRow(r=r, admissible=False, n=None, m_parity=None,
                                phase=None, plus_admissible=False,
                                plus_m_parity=None, plus_phase=None))
            continue
        m_minus = 0 if n % 2 == 1 else 1
        m_plus = 1 - m_minus
        phase_minus = pole_loop_phase(ThetaForm(hbar=hbar, m_parity=m_minus), r, "north")
        phase_plus = pole_loop_phase(ThetaForm(hbar=hbar, m_parity=m_plus), r, "north")
        rows.append(ScanRow(
            r=r, admissible=True, n=n, m_parity=m_minus, phase=phase_minus,
            plus_admissible=True, plus_m_parity=m_plus, plus_phase=phase_plus,
        ))
    return rows
