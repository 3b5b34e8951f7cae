"""Classical and quantum exchange matrices and their structural identities.

The 4x4 classical matrices r_plus / r_minus generate the Poisson-Lie
bracket on the group and its dual; their quantum counterparts R_plus(q) /
R_minus(q) generate the exchange relations of the deformed algebra.  This
module holds both families together with numerical verifiers for every
identity they are supposed to satisfy:

* classical and quantum Yang-Baxter equations on the triple tensor space,
* adjoint invariance of the symmetrized part,
* the cocommutator delta(x) = [r, x (x) 1 + 1 (x) x] and the Lie-bialgebra
  cocycle condition on structure constants,
* the semiclassical expansion R(q) = 1 + hbar*r + O(hbar^2),
* recovery of the group-coordinate bracket table from [r_plus, T (x) T].

Each verifier returns a residual; the caller owns the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numkit import frobenius, kron, lift_two_site

__all__ = [
    "SL2_BASIS",
    "swap_matrix",
    "classical_r",
    "ClassicalR",
    "quantum_r",
    "semiclassical_residual",
    "ybe_residual",
    "adjoint_invariance_residual",
    "cocommutator",
    "expand_in_pair_basis",
    "structure_constants",
    "dual_structure_constants",
    "cocycle_residual",
    "verify_cocycle",
    "tt_bracket_table",
    "rtt_check",
    "random_sl2c",
]

# sl(2) basis in the fundamental representation, ordered (H, X+, X-)
_H = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_XP = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
_XM = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SL2_BASIS = (_H, _XP, _XM)


def swap_matrix() -> np.ndarray:
    """The 4x4 permutation exchanging the two tensor legs."""
    s = np.zeros((4, 4), dtype=complex)
    s[0, 0] = s[3, 3] = 1.0
    s[1, 2] = s[2, 1] = 1.0
    return s


def classical_r(sign: int) -> np.ndarray:
    """The classical exchange matrix r_plus (sign=+1) or r_minus (sign=-1).

    r_plus = (1/4) H (x) H + X+ (x) X-, and r_minus is minus its leg swap.
    """
    r = 0.25 * kron(_H, _H) + kron(_XP, _XM)
    if sign > 0:
        return r
    s = swap_matrix()
    return -(s @ r @ s)


@dataclass(frozen=True)
class ClassicalR:
    """The pair (r_plus, r_minus) plus the adjoint-invariant symmetric part."""

    r_plus: np.ndarray
    r_minus: np.ndarray

    @staticmethod
    def build() -> "ClassicalR":
        return ClassicalR(classical_r(+1), classical_r(-1))

    @property
    def symmetric_part(self) -> np.ndarray:
        s = swap_matrix()
        return self.r_plus + s @ self.r_plus @ s


def quantum_r(sign: int, q: float) -> np.ndarray:
    """Quantum exchange matrix R_plus(q) or R_minus(q); identity at q=1."""
    if q <= 0:
        raise ValueError("q must be positive")
    lam = q - 1.0 / q
    if sign > 0:
        m = np.array(
            [[q, 0, 0, 0], [0, 1, lam, 0], [0, 0, 1, 0], [0, 0, 0, q]],
            dtype=complex,
        )
        return q ** -0.5 * m
    m = np.array(
        [[1 / q, 0, 0, 0], [0, 1, 0, 0], [0, -lam, 1, 0], [0, 0, 0, 1 / q]],
        dtype=complex,
    )
    return q ** 0.5 * m


def semiclassical_residual(hbar: float) -> tuple:
    """Frobenius norms of R_pm(e^{hbar/2}) - 1 - hbar*r_pm.

    Both vanish quadratically in hbar, so successive halving of hbar
    should shrink them by a factor close to 4.
    """
    if not (0 < hbar <= 1):
        raise ValueError("hbar must lie in (0, 1]")
    q = math.exp(hbar / 2.0)
    eye = np.eye(4, dtype=complex)
    res = []
    for sign in (+1, -1):
        res.append(frobenius(quantum_r(sign, q) - eye - hbar * classical_r(sign)))
    return tuple(res)


def ybe_residual(kind: str, sign: int, q: Optional[float] = None) -> float:
    """Yang-Baxter residual on the 8-dimensional triple tensor space.

    classical: || [r12, r13] + [r12, r23] + [r13, r23] ||
    quantum:   || R12 R13 R23 - R23 R13 R12 ||
    """
    if kind == "classical":
        r = classical_r(sign)
        r12 = lift_two_site(r, (0, 1))
        r13 = lift_two_site(r, (0, 2))
        r23 = lift_two_site(r, (1, 2))

        def comm(x, y):
            return x @ y - y @ x

        return frobenius(comm(r12, r13) + comm(r12, r23) + comm(r13, r23))
    if kind == "quantum":
        if q is None:
            raise ValueError("quantum Yang-Baxter needs q")
        R = quantum_r(sign, q)
        R12 = lift_two_site(R, (0, 1))
        R13 = lift_two_site(R, (0, 2))
        R23 = lift_two_site(R, (1, 2))
        return frobenius(R12 @ R13 @ R23 - R23 @ R13 @ R12)
    raise ValueError(f"kind must be 'classical' or 'quantum', got {kind!r}")


def _coproduct(x: np.ndarray) -> np.ndarray:
    eye = np.eye(2, dtype=complex)
    return kron(x, eye) + kron(eye, x)


def adjoint_invariance_residual(candidate: Optional[np.ndarray] = None) -> float:
    """max_x || [I, x(x)1 + 1(x)x] || over the sl(2) basis.

    By default ``candidate`` is the symmetrized part r_plus + swap(r_plus),
    which is adjoint invariant; passing r_plus alone gives a nonzero value,
    witnessing that the symmetrization is what makes invariance hold.
    """
    if candidate is None:
        candidate = ClassicalR.build().symmetric_part
    best = 0.0
    for x in SL2_BASIS:
        dx = _coproduct(x)
        best = max(best, frobenius(candidate @ dx - dx @ candidate))
    return best


def cocommutator(x) -> np.ndarray:
    """delta(x) = [r_plus, x (x) 1 + 1 (x) x] for traceless 2x2 x."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (2, 2):
        raise ValueError("x must be 2x2")
    if abs(np.trace(x)) > 1e-12 * max(1.0, frobenius(x)):
        raise ValueError("x must be traceless")
    r = classical_r(+1)
    dx = _coproduct(x)
    return r @ dx - dx @ r


def expand_in_pair_basis(m: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Expand a 4x4 matrix in the basis e_a (x) e_b of sl(2) pairs.

    Returns the 3x3 coefficient array c with m = sum_ab c[a,b] e_a (x) e_b.
    Raises if the least-squares residual exceeds ``tol`` (the input does
    not lie in the span).
    """
    cols = []
    for ea in SL2_BASIS:
        for eb in SL2_BASIS:
            cols.append(kron(ea, eb).reshape(-1))
    A = np.array(cols).T
    coef, *_ = np.linalg.lstsq(A, m.reshape(-1), rcond=None)
    resid = frobenius(A @ coef - m.reshape(-1))
    if resid > tol:
        raise ValueError(f"matrix not in the sl2 (x) sl2 span (residual {resid:.2e})")
    return coef.reshape(3, 3)


def structure_constants() -> np.ndarray:
    """f[i,j,k] with [e_i, e_j] = sum_k f[i,j,k] e_k on the (H, X+, X-) basis."""
    A = np.array([e.reshape(-1) for e in SL2_BASIS]).T
    f = np.zeros((3, 3, 3))
    for i, ei in enumerate(SL2_BASIS):
        for j, ej in enumerate(SL2_BASIS):
            comm = ei @ ej - ej @ ei
            coef, *_ = np.linalg.lstsq(A, comm.reshape(-1), rcond=None)
            f[i, j, :] = coef.real
    return f


def dual_structure_constants(tol: float = 1e-10) -> np.ndarray:
    """ftilde[a,b,c]: antisymmetrized coefficient of e_a (x) e_b in delta(e_c).

    The cocommutator pairs with wedge products, so only the antisymmetric
    part of the expansion is meaningful; it is extracted as
    (coef[a,b] - coef[b,a]) / 2.
    """
    ft = np.zeros((3, 3, 3))
    for c, ec in enumerate(SL2_BASIS):
        coef = expand_in_pair_basis(cocommutator(ec), tol=tol).real
        ft[:, :, c] = 0.5 * (coef - coef.T)
    return ft


def cocycle_residual(f: np.ndarray, ftilde: np.ndarray) -> float:
    """Largest violation of the Lie-bialgebra compatibility condition.

    For every (i, j, a, b) checks

        f[i,j,s] ft[a,b,s] - f[i,s,a] ft[s,b,j] + f[i,s,b] ft[s,a,j]
                           - f[j,s,b] ft[s,a,i] + f[j,s,a] ft[s,b,i] = 0

    summed over s, where ft[a,b,c] is the coefficient array of
    ``dual_structure_constants``.
    """
    t1 = np.einsum("ijs,abs->ijab", f, ftilde)
    t2 = np.einsum("isa,sbj->ijab", f, ftilde)
    t3 = np.einsum("isb,saj->ijab", f, ftilde)
    t4 = np.einsum("jsb,sai->ijab", f, ftilde)
    t5 = np.einsum("jsa,sbi->ijab", f, ftilde)
    return float(np.max(np.abs(t1 - t2 + t3 - t4 + t5)))


def verify_cocycle() -> float:
    """Cocycle residual for the structure constants induced by r_plus."""
    return cocycle_residual(structure_constants(), dual_structure_constants())


def tt_bracket_table(T: np.ndarray) -> np.ndarray:
    """Predicted bracket matrix {T1, T2} from the six coordinate brackets.

    With T = [[a, b], [c, d]], the independent brackets are

        {a,b} = ab/2   {a,c} = ac/2   {a,d} = bc
        {b,c} = 0      {b,d} = bd/2   {c,d} = cd/2

    and the rest follow from antisymmetry.  Entry ((i,k),(j,l)) of the
    returned 4x4 matrix is {T[i,j], T[k,l]}.
    """
    a, b, c, d = T[0, 0], T[0, 1], T[1, 0], T[1, 1]
    six = {
        (0, 1): a * b / 2.0,
        (0, 2): a * c / 2.0,
        (0, 3): b * c,
        (1, 2): 0.0,
        (1, 3): b * d / 2.0,
        (2, 3): c * d / 2.0,
    }
    idx = {0: (0, 0), 1: (0, 1), 2: (1, 0), 3: (1, 1)}
    out = np.zeros((4, 4), dtype=complex)
    for u in range(4):
        for v in range(4):
            if u == v:
                val = 0.0
            elif (u, v) in six:
                val = six[(u, v)]
            else:
                val = -six[(v, u)]
            i, j = idx[u]
            k, l = idx[v]
            out[i * 2 + k, j * 2 + l] = val
    return out


def random_sl2c(rng: np.random.Generator) -> np.ndarray:
    """A random complex 2x2 matrix normalized to unit determinant."""
    while True:
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        det = np.linalg.det(m)
        if abs(det) > 1e-3:
            return m / np.sqrt(det)


def rtt_check(samples: int = 20, seed: int = 7) -> float:
    """Max deviation of [r_plus, T (x) T] from the coordinate bracket table.

    Checks all 16 entries (the six independent brackets, their
    antisymmetric partners, and the vanishing diagonal) at ``samples``
    random unimodular complex points.
    """
    rng = np.random.default_rng(seed)
    r = classical_r(+1)
    worst = 0.0
    for _ in range(samples):
        T = random_sl2c(rng)
        m = kron(T, T)
        lhs = r @ m - m @ r
        worst = max(worst, float(np.max(np.abs(lhs - tt_bracket_table(T)))))
    return worst
