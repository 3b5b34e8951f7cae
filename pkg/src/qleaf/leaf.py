"""Classical geometry of the symplectic leaves of the dual group of SU(2).

The dual group is realized as the hermitian positive definite unimodular
2x2 matrices.  Its symplectic leaves are the spheres of constant trace
2*cosh(r); this module provides

* the three coordinate charts on a leaf (exponential, Darboux, stereographic)
  and their conversions,
* the 2x2 matrix of a leaf point and the dressing action on it,
* the canonical family of leaf functions F(J) * exp(i*p*phi) that get
  quantized downstream,
* a Poisson bracket engine in Darboux coordinates (exact partials for the
  named functions, central finite differences for arbitrary callables),
* the loop phase of the Poincare 1-form around the poles, which drives the
  radius quantization.

Sign conventions: the "realtime" bracket is dJ/dphi-ordered,
{f,h} = f_J h_phi - f_phi h_J, and the "euclidean" bracket is i times it.
The euclidean convention is the one that reproduces the complex-coordinate
bracket table of the leaf entries (alpha..delta) without stray factors of i.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .numkit import as_complex_matrix, frobenius, identity

__all__ = [
    "PoleError",
    "LeafPoint",
    "LeafFunction",
    "leaf_function",
    "LEAF_FUNCTION_NAMES",
    "L_matrix",
    "to_darboux",
    "bracket",
    "bracket_table_residual",
    "jacobi_residual",
    "stereo_bracket",
    "dress",
    "ThetaForm",
    "pole_loop_phase",
]

_POLE_TOL = 1e-14


class PoleError(ValueError):
    """Operation undefined at a pole of the leaf (phi chart degenerate)."""


# ---------------------------------------------------------------------------
# leaf points and charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LeafPoint:
    """A point on the radius-r leaf, stored in Darboux coordinates (J, phi).

    J lies in [-r, r]; the boundary values are the poles, where phi is
    meaningless and ``at_pole`` is set (phi is stored as 0 there).
    """

    r: float
    J: float
    phi: float
    at_pole: bool = False

    def __post_init__(self):
        if not (self.r > 0):
            raise ValueError(f"leaf radius must be positive, got {self.r}")
        if abs(self.J) > self.r + 1e-12:
            raise ValueError(f"|J|={abs(self.J)} exceeds leaf radius {self.r}")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_darboux(r: float, J: float, phi: float) -> "LeafPoint":
        if abs(abs(J) - r) <= _POLE_TOL * max(1.0, r):
            return LeafPoint(r=r, J=math.copysign(r, J), phi=0.0, at_pole=True)
        return LeafPoint(r=r, J=J, phi=phi % (2 * math.pi))

    @staticmethod
    def from_exp(x1: float, x2: float, x3: float) -> "LeafPoint":
        r = math.sqrt(x1 * x1 + x2 * x2 + x3 * x3)
        if r == 0.0:
            raise ValueError("the zero-dimensional r=0 leaf is not supported")
        n3 = x3 / r
        J = -math.log(math.cosh(r) + math.sinh(r) * n3)
        s2 = x1 * x1 + x2 * x2
        if s2 / (r * r) < _POLE_TOL:
            return LeafPoint(r=r, J=math.copysign(r, -n3), phi=0.0, at_pole=True)
        # n1 + i n2 = s exp(-i phi)
        phi = (-math.atan2(x2, x1)) % (2 * math.pi)
        return LeafPoint(r=r, J=J, phi=phi)

    @staticmethod
    def from_stereo(r: float, z: complex) -> "LeafPoint":
        """Point with stereographic coordinate z = x_minus / (r - x3)."""
        u = (z * z.conjugate()).real
        n3 = (u - 1.0) / (u + 1.0)
        J = -math.log(math.cosh(r) + math.sinh(r) * n3)
        if abs(z) == 0.0:
            return LeafPoint(r=r, J=r, phi=0.0, at_pole=True)
        phi = cmath.phase(z) % (2 * math.pi)
        return LeafPoint(r=r, J=J, phi=phi)

    # -- chart values --------------------------------------------------------

    @property
    def n3(self) -> float:
        v = (math.exp(-self.J) - math.cosh(self.r)) / math.sinh(self.r)
        return min(1.0, max(-1.0, v))

    def exp_coords(self) -> tuple:
        n3 = self.n3
        s = math.sqrt(max(0.0, 1.0 - n3 * n3))
        # n1 + i n2 = s exp(-i phi)
        return (self.r * s * math.cos(self.phi),
                -self.r * s * math.sin(self.phi),
                self.r * n3)

    def stereo(self) -> complex:
        """z chart; infinite at the n3=+1 pole (J=-r)."""
        n3 = self.n3
        if 1.0 - n3 < _POLE_TOL:
            return complex(math.inf, 0.0)
        mod = math.sqrt((1.0 + n3) / (1.0 - n3))
        return mod * cmath.exp(1j * self.phi)

    def stereo_w(self) -> complex:
        """w = -1/z chart; finite everywhere except the n3=-1 pole (J=+r)."""
        n3 = self.n3
        if 1.0 + n3 < _POLE_TOL:
            return complex(math.inf, 0.0)
        mod = math.sqrt((1.0 - n3) / (1.0 + n3))
        return -mod * cmath.exp(-1j * self.phi)


def to_darboux(p: LeafPoint) -> tuple:
    """Darboux coordinates (J, phi) of a point; phi = 0 with J = +-r at poles."""
    return (p.J, p.phi)


def L_matrix(p: LeafPoint) -> np.ndarray:
    """The hermitian positive definite unimodular 2x2 matrix of a leaf point.

    cosh(r) + sinh(r) * (unit vector dotted into the Pauli matrices); its
    (1,1) entry equals exp(-J) and its eigenvalues are exp(+-r).
    """
    n3 = p.n3
    s = math.sqrt(max(0.0, 1.0 - n3 * n3))
    n_minus = s * cmath.exp(1j * p.phi)   # (1,2) entry / sinh r
    ch, sh = math.cosh(p.r), math.sinh(p.r)
    return np.array(
        [[ch + sh * n3, sh * n_minus],
         [sh * n_minus.conjugate(), ch - sh * n3]],
        dtype=complex,
    )


def dress(p: LeafPoint, T) -> LeafPoint:
    """Dressing action L -> T^-1 L T of a special unitary T on a leaf point.

    The trace is invariant, so the image lies on the same leaf.
    """
    T = as_complex_matrix(T)
    if T.shape != (2, 2):
        raise ValueError("T must be 2x2")
    if frobenius(T.conj().T @ T - identity(2)) > 1e-10:
        raise ValueError("T is not unitary")
    if abs(np.linalg.det(T) - 1.0) > 1e-10:
        raise ValueError("T does not have unit determinant")
    L = T.conj().T @ L_matrix(p) @ T
    ch = 0.5 * np.trace(L).real
    r = math.acosh(max(1.0, ch))
    sh = math.sinh(r)
    x3 = r * (L[0, 0].real - ch) / sh
    n_minus = L[0, 1] / sh
    x1 = r * n_minus.real
    x2 = -r * n_minus.imag
    return LeafPoint.from_exp(x1, x2, x3)


# ---------------------------------------------------------------------------
# leaf functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LeafFunction:
    """A function F(J) * exp(i*p*phi) on a fixed leaf, with exact dF/dJ."""

    name: str
    p: int
    F: Callable[[float], float]
    dF: Callable[[float], float]
    r: float

    def value(self, J: float, phi: float) -> complex:
        return self.F(J) * cmath.exp(1j * self.p * phi)

    def __call__(self, J: float, phi: float) -> complex:
        return self.value(J, phi)


def _radial_entry(r: float, sign: int):
    """sqrt(-1 + 2 cosh(r) e^{sJ} - e^{2sJ}) and its J-derivative.

    The radicand factorizes as -(e^{sJ} - e^r)(e^{sJ} - e^{-r}), so it is
    nonnegative on [-r, r] and vanishes exactly at the endpoints.
    """
    ch = math.cosh(r)

    def F(J: float) -> float:
        e = math.exp(sign * J)
        rad = -1.0 + 2.0 * ch * e - e * e
        return math.sqrt(max(0.0, rad))

    def dF(J: float) -> float:
        e = math.exp(sign * J)
        val = F(J)
        if val == 0.0:
            raise ZeroDivisionError("derivative singular at the leaf boundary")
        return sign * (ch * e - e * e) / val

    return F, dF


def leaf_function(name: str, r: float, hbar: Optional[float] = None) -> LeafFunction:
    """Build a named leaf function on the radius-r leaf.

    Names: the matrix entries "alpha", "beta", "gamma", "delta" of the leaf
    matrix; the Gauss-decomposition pieces "a", "chi+", "chi-"; the
    deformed-generator insertions "H", "X+", "X-" (these need ``hbar``);
    and the undeformed angular momentum insertions "Ht", "Xt+", "Xt-".
    """
    ch = math.cosh(r)
    if name == "alpha":
        return LeafFunction(name, 0, lambda J: math.exp(-J),
                            lambda J: -math.exp(-J), r)
    if name == "delta":
        return LeafFunction(name, 0, lambda J: 2.0 * ch - math.exp(-J),
                            lambda J: math.exp(-J), r)
    if name in ("beta", "gamma"):
        F, dF = _radial_entry(r, -1)
        return LeafFunction(name, +1 if name == "beta" else -1, F, dF, r)
    if name == "a":
        return LeafFunction(name, 0, lambda J: math.exp(-J / 2.0),
                            lambda J: -0.5 * math.exp(-J / 2.0), r)
    if name in ("chi+", "chi-"):
        F, dF = _radial_entry(r, +1)
        return LeafFunction(name, +1 if name == "chi+" else -1, F, dF, r)
    if name in ("H", "X+", "X-"):
        if hbar is None or hbar <= 0:
            raise ValueError(f"{name!r} needs a positive hbar")
        if name == "H":
            return LeafFunction(name, 0, lambda J: 2.0 * J / hbar,
                                lambda J: 2.0 / hbar, r)
        lam = math.exp(hbar / 2.0) - math.exp(-hbar / 2.0)

        def F(J: float) -> float:
            return math.sqrt(max(0.0, 2.0 * ch - 2.0 * math.cosh(J))) / lam

        def dF(J: float) -> float:
            val = F(J)
            if val == 0.0:
                raise ZeroDivisionError("derivative singular at the leaf boundary")
            return -math.sinh(J) / (lam * lam * val)

        return LeafFunction(name, +1 if name == "X+" else -1, F, dF, r)
    if name == "Ht":
        return LeafFunction(name, 0, lambda J: 2.0 * J, lambda J: 2.0, r)
    if name in ("Xt+", "Xt-"):
        def F(J: float) -> float:
            return math.sqrt(max(0.0, r * r - J * J))

        def dF(J: float) -> float:
            val = F(J)
            if val == 0.0:
                raise ZeroDivisionError("derivative singular at the leaf boundary")
            return -J / val

        return LeafFunction(name, +1 if name == "Xt+" else -1, F, dF, r)
    raise ValueError(f"unknown leaf function {name!r}")


LEAF_FUNCTION_NAMES = (
    "alpha", "beta", "gamma", "delta",
    "a", "chi+", "chi-",
    "H", "X+", "X-",
    "Ht", "Xt+", "Xt-",
)


# ---------------------------------------------------------------------------
# Poisson bracket engine
# ---------------------------------------------------------------------------

def _partials(f, J: float, phi: float) -> tuple:
    """(df/dJ, df/dphi) at (J, phi); exact for LeafFunction, else central FD."""
    if isinstance(f, LeafFunction):
        phase = cmath.exp(1j * f.p * phi)
        return (f.dF(J) * phase, 1j * f.p * f.F(J) * phase)
    hJ = 1e-6 * max(1.0, abs(J))
    hp = 1e-6
    dJ = (f(J + hJ, phi) - f(J - hJ, phi)) / (2.0 * hJ)
    dphi = (f(J, phi + hp) - f(J, phi - hp)) / (2.0 * hp)
    return (dJ, dphi)


def bracket(f, h, p: LeafPoint, convention: str = "euclidean") -> complex:
    """Poisson bracket {f, h} at a leaf point in Darboux coordinates.

    ``convention="realtime"`` is f_J h_phi - f_phi h_J; ``"euclidean"`` is
    i times that and reproduces the complex-coordinate bracket table of
    the leaf matrix entries.  Arguments may be LeafFunction instances
    (exact partials) or callables of (J, phi) (finite differences with
    step 1e-6 * max(1, |J|)).
    """
    if convention not in ("euclidean", "realtime"):
        raise ValueError(f"unknown convention {convention!r}")
    if p.at_pole:
        raise PoleError("bracket undefined at a pole (phi chart degenerate)")
    fJ, fphi = _partials(f, p.J, p.phi)
    hJ, hphi = _partials(h, p.J, p.phi)
    rt = fJ * hphi - fphi * hJ
    return 1j * rt if convention == "euclidean" else rt


def bracket_table_residual(p: LeafPoint) -> float:
    """Largest violation of the leaf-entry bracket table at a point.

    In the euclidean convention the matrix entries of the leaf satisfy

        {alpha,beta} = alpha*beta      {alpha,gamma} = -alpha*gamma
        {alpha,delta} = 0              {beta,gamma} = alpha*(alpha-delta)
        {beta,delta} = alpha*beta      {gamma,delta} = -alpha*gamma
    """
    al = leaf_function("alpha", p.r)
    be = leaf_function("beta", p.r)
    ga = leaf_function("gamma", p.r)
    de = leaf_function("delta", p.r)
    J, phi = p.J, p.phi
    va, vb = al.value(J, phi), be.value(J, phi)
    vg, vd = ga.value(J, phi), de.value(J, phi)
    table = [
        (al, be, va * vb),
        (al, ga, -va * vg),
        (al, de, 0.0),
        (be, ga, va * (va - vd)),
        (be, de, va * vb),
        (ga, de, -va * vg),
    ]
    return max(abs(bracket(f, h, p) - want) for f, h, want in table)


def jacobi_residual(p: LeafPoint, names: tuple = ("alpha", "beta", "gamma")) -> float:
    """|{f,{g,h}} + {g,{h,f}} + {h,{f,g}}| at a point, inner brackets exact,
    outer brackets by finite differences on the inner values."""
    fs = [leaf_function(nm, p.r) for nm in names]

    def inner(g, h):
        def val(J, phi):
            return bracket(g, h, LeafPoint.from_darboux(p.r, J, phi))
        return val

    f, g, h = fs
    total = (bracket(f, inner(g, h), p)
             + bracket(g, inner(h, f), p)
             + bracket(h, inner(f, g), p))
    return abs(total)


def stereo_bracket(p: LeafPoint, chart: str = "z") -> complex:
    """Wick-rotated bracket of the stereographic pair (conj(z), z) at p.

    In the z chart this is (i/2)(1+|z|^2)^2 ((|z|^2-1)/(|z|^2+1) + coth r);
    in the w = -1/z chart the middle term flips sign, which is the
    numerical witness that the structure is not symmetric under exchanging
    the two poles.  Equals i times the euclidean bracket of (conj, coord).
    """
    coth = math.cosh(p.r) / math.sinh(p.r)
    if chart == "z":
        u = abs(p.stereo()) ** 2
        middle = (u - 1.0) / (u + 1.0) if math.isfinite(u) else 1.0
        if not math.isfinite(u):
            return complex(0.0, math.inf)
        return 0.5j * (1.0 + u) ** 2 * (middle + coth)
    if chart == "w":
        v = abs(p.stereo_w()) ** 2
        if not math.isfinite(v):
            return complex(0.0, math.inf)
        return 0.5j * (1.0 + v) ** 2 * (coth - (v - 1.0) / (v + 1.0))
    raise ValueError(f"chart must be 'z' or 'w', got {chart!r}")


# ---------------------------------------------------------------------------
# Poincare form and pole phases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaForm:
    """The 1-form (J + c) dphi with c = M*hbar/2, M in {0, 1}."""

    hbar: float
    m_parity: int = 0

    def __post_init__(self):
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if self.m_parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")

    @property
    def c(self) -> float:
        return 0.5 * self.m_parity * self.hbar


def pole_loop_phase(theta: ThetaForm, r: float, pole: str = "north") -> complex:
    """exp(2 pi i (J_pole + c) / hbar) around an infinitesimal polar loop.

    ``pole="north"`` is the n3=+1 pole where J = -r; ``"south"`` has J = +r.
    A consistent quantization demands the value -1 at both poles, which
    forces r onto the half-integer lattice N*hbar/2 with the parity of M
    tied to that of N.
    """
    if pole not in ("north", "south"):
        raise ValueError(f"pole must be 'north' or 'south', got {pole!r}")
    j_pole = -r if pole == "north" else r
    return cmath.exp(2j * math.pi * (j_pole + theta.c) / theta.hbar)
