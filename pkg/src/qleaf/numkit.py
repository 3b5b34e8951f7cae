"""Dense complex linear algebra substrate.

Everything downstream works with small dense complex matrices (at most
4N x 4N with N of order tens), so plain row-major ``numpy`` arrays of
``complex128`` are the value type throughout.  This module adds the few
structured operations the rest of the package needs: Kronecker products,
2x2 operator-valued block matrices, triangular block inversion, the
auxiliary-leg embeddings used by the exchange-relation checks, and
Gauss-Legendre quadrature grids.

All functions are pure and never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SingularBlockError",
    "as_complex_matrix",
    "matmul",
    "kron",
    "dagger",
    "frobenius",
    "identity",
    "BlockOp2",
    "block_inverse_triangular",
    "embed_aux",
    "lift_two_site",
    "gauss_legendre",
]


class SingularBlockError(ValueError):
    """A diagonal block that must be inverted is numerically singular."""


def as_complex_matrix(m) -> np.ndarray:
    """Coerce input to a 2-d complex128 array and reject non-finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit inner-dimension check.

    Raises
    ------
    ValueError
        If ``a.cols != b.rows``.
    """
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product, (a (x) b)[i*rb + k, j*cb + l] = a[i,j] b[k,l]."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def dagger(m) -> np.ndarray:
    """Hermitian conjugate."""
    return as_complex_matrix(m).conj().T


def frobenius(m) -> float:
    """Frobenius norm; the canonical residual norm of the package."""
    return float(np.linalg.norm(np.asarray(m, dtype=complex)))


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


@dataclass(frozen=True)
class BlockOp2:
    """A 2x2 matrix whose entries are N x N operator blocks.

    This is the shape of the triangular operator matrices built from a
    Gauss decomposition: a two-dimensional auxiliary space with quantum
    (operator) entries.  Blocks are stored as a nested tuple
    ``((b00, b01), (b10, b11))`` of complex arrays, all square with the
    same dimension ``dim``.
    """

    blocks: tuple
    dim: int

    @staticmethod
    def from_blocks(b00, b01, b10, b11) -> "BlockOp2":
        blocks = tuple(
            tuple(as_complex_matrix(b) for b in row)
            for row in ((b00, b01), (b10, b11))
        )
        n = blocks[0][0].shape[0]
        for row in blocks:
            for b in row:
                if b.shape != (n, n):
                    raise ValueError(
                        f"all blocks must be square of identical dimension; "
                        f"got {b.shape}, expected {(n, n)}"
                    )
        return BlockOp2(blocks=blocks, dim=n)

    @staticmethod
    def identity(n: int) -> "BlockOp2":
        z = np.zeros((n, n), dtype=complex)
        return BlockOp2.from_blocks(identity(n), z, z, identity(n))

    def __matmul__(self, other: "BlockOp2") -> "BlockOp2":
        if self.dim != other.dim:
            raise ValueError("block dimension mismatch")
        a, b = self.blocks, other.blocks
        return BlockOp2.from_blocks(
            a[0][0] @ b[0][0] + a[0][1] @ b[1][0],
            a[0][0] @ b[0][1] + a[0][1] @ b[1][1],
            a[1][0] @ b[0][0] + a[1][1] @ b[1][0],
            a[1][0] @ b[0][1] + a[1][1] @ b[1][1],
        )

    def as_matrix(self) -> np.ndarray:
        """Flatten to an ordinary 2N x 2N matrix (aux index outermost)."""
        return np.block([[self.blocks[0][0], self.blocks[0][1]],
                         [self.blocks[1][0], self.blocks[1][1]]])


def _safe_inverse(block: np.ndarray, which: str) -> np.ndarray:
    n = block.shape[0]
    try:
        inv = np.linalg.inv(block)
    except np.linalg.LinAlgError as exc:
        raise SingularBlockError(f"{which} diagonal block is singular") from exc
    if not np.all(np.isfinite(inv)) or frobenius(block @ inv - identity(n)) > 1e-8 * n:
        raise SingularBlockError(f"{which} diagonal block is numerically singular")
    return inv


def block_inverse_triangular(m: BlockOp2, shape: str) -> BlockOp2:
    """Invert a block-triangular BlockOp2.

    ``shape`` is ``"lower"`` for [[A, 0], [C, D]] or ``"upper"`` for
    [[A, B], [0, D]].  Uses the closed forms

        [[A, 0], [C, D]]^-1 = [[A^-1, 0], [-D^-1 C A^-1, D^-1]]
        [[A, B], [0, D]]^-1 = [[A^-1, -A^-1 B D^-1], [0, D^-1]]

    The block that must vanish is checked against an absolute tolerance
    scaled by the matrix magnitude.
    """
    if shape not in ("lower", "upper"):
        raise ValueError(f"shape must be 'lower' or 'upper', got {shape!r}")
    b = m.blocks
    scale = max(frobenius(b[i][j]) for i in range(2) for j in range(2))
    tol = 1e-12 * max(1.0, scale)
    zero = np.zeros((m.dim, m.dim), dtype=complex)
    if shape == "lower":
        if frobenius(b[0][1]) > tol:
            raise ValueError("upper-right block must vanish for shape='lower'")
        a_inv = _safe_inverse(b[0][0], "upper-left")
        d_inv = _safe_inverse(b[1][1], "lower-right")
        return BlockOp2.from_blocks(a_inv, zero, -d_inv @ b[1][0] @ a_inv, d_inv)
    if frobenius(b[1][0]) > tol:
        raise ValueError("lower-left block must vanish for shape='upper'")
    a_inv = _safe_inverse(b[0][0], "upper-left")
    d_inv = _safe_inverse(b[1][1], "lower-right")
    return BlockOp2.from_blocks(a_inv, -a_inv @ b[0][1] @ d_inv, zero, d_inv)


def embed_aux(m: BlockOp2, leg: int) -> np.ndarray:
    """Embed a BlockOp2 into the two-auxiliary-leg space.

    With 2x2 matrix units E_ij acting on a pair of auxiliary legs and
    m_ij the operator blocks, returns the 4N x 4N matrix

        leg 1:  sum_ij E_ij (x) I_2 (x) m_ij
        leg 2:  sum_ij I_2 (x) E_ij (x) m_ij

    Index ordering is (aux1, aux2, quantum), row-major.
    """
    if leg not in (1, 2):
        raise ValueError(f"leg must be 1 or 2, got {leg}")
    n = m.dim
    out = np.zeros((4 * n, 4 * n), dtype=complex)
    for i in range(2):
        for j in range(2):
            for s in range(2):
                if leg == 1:
                    r, c = i * 2 + s, j * 2 + s
                else:
                    r, c = s * 2 + i, s * 2 + j
                out[r * n:(r + 1) * n, c * n:(c + 1) * n] = m.blocks[i][j]
    return out


def lift_two_site(op, pair: tuple, n_legs: int = 3, leg_dim: int = 2) -> np.ndarray:
    """Lift a two-site operator to ``n_legs`` tensor legs.

    ``op`` is a (d^2 x d^2) matrix acting on the ordered pair of legs
    ``pair``; identity acts everywhere else.  Used to form the 12/13/23
    placements in Yang-Baxter residuals.
    """
    i, j = pair
    if not (0 <= i < j < n_legs):
        raise ValueError(f"pair must be ordered and within range, got {pair}")
    d = leg_dim
    op4 = as_complex_matrix(op).reshape(d, d, d, d)  # [i_out, j_out, i_in, j_in]
    # build as tensor product with identities, then permute legs into place
    rest = n_legs - 2
    full = op4
    for _ in range(rest):
        full = np.tensordot(full, np.eye(d), axes=0)
    # current leg order: (i, j, extras...) for both out and in indices:
    # axes: out_i, out_j, in_i, in_j, then (out,in) pairs per extra leg
    out_axes = [0, 1] + [4 + 2 * k for k in range(rest)]
    in_axes = [2, 3] + [5 + 2 * k for k in range(rest)]
    full = np.transpose(full, out_axes + in_axes)
    # now axes are (out legs in order (i, j, extras), in legs likewise);
    # permute to the requested global positions
    order = [i, j] + [k for k in range(n_legs) if k not in (i, j)]
    inv = np.argsort(order)
    full = np.transpose(full, list(inv) + [n_legs + k for k in inv])
    return full.reshape(d ** n_legs, d ** n_legs)


def gauss_legendre(n: int, lo: float, hi: float) -> tuple:
    """Gauss-Legendre nodes and weights on (lo, hi); nodes are interior."""
    if n < 1:
        raise ValueError("need at least one quadrature node")
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w
