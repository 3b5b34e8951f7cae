"""qleaf: symplectic leaves of the dual of SU(2) and their quantization.

Classical leaf geometry (charts, brackets, dressing), the classical and
quantum exchange matrices with their structural identities, the
finite-dimensional unitary representations of the deformed algebra built
by mid-point quantization, and a discretized phase-space path integral
that reproduces those representations numerically.
"""

from .numkit import (
    BlockOp2,
    block_inverse_triangular,
    dagger,
    embed_aux,
    frobenius,
    kron,
    matmul,
)
from .leaf import (
    LeafFunction,
    LeafPoint,
    L_matrix,
    PoleError,
    ThetaForm,
    bracket,
    dress,
    leaf_function,
    pole_loop_phase,
    stereo_bracket,
    to_darboux,
)
from .rmatrix import (
    adjoint_invariance_residual,
    classical_r,
    cocommutator,
    quantum_r,
    rtt_check,
    semiclassical_residual,
    verify_cocycle,
    ybe_residual,
)
from .repq import (
    CentralityError,
    HilbertMeta,
    QContext,
    RepSet,
    build_rep,
    casimir,
    classical_limit_scan,
    hilbert,
    ladder_matrix,
    naive_trace,
    verify_chi_algebra,
    verify_jimbo_drinfeld,
    verify_reflection,
    verify_rll,
    verify_su2_algebra,
    weyl_quantize,
)
from .pathint import (
    ConfigTooCoarseError,
    Insertion,
    PathLatticeConfig,
    matrix_element_lattice,
    mode_amplitudes,
    propagator_exact,
    propagator_lattice,
    quantization_scan,
)

__version__ = "0.1.0"
