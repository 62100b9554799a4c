"""Z-eigenpair solvers for real symmetric tensors.

The package bundles a slice QR iteration (with shift and permutation
preconditioning), shifted power-method baselines, a multistart Newton
oracle for ground truth at small dimensions, and a CLI that runs them over
a JSON tensor format with CSV result tables and convergence traces.
"""

from .eigenpairs import (
    EigenSet,
    Eigenpair,
    canonicalize,
    classify_stability,
    dedup,
    residual,
    residual_bound,
    symmetric_matrix_eigen,
)
from .hopm import (
    MultistartResult,
    PowerResult,
    conservative_shift,
    multistart,
    random_start,
    sshopm,
    sshopm_adaptive,
)
from .oracle import OracleConfig, enumerate_eigenpairs, newton_refine
from .pqrst import PermutationPlan, PqrstResult, enumerate_permutations, pqrst
from .qrst import (
    QrstDivergenceError,
    QrstResult,
    SliceOutcome,
    SolverConfig,
    convergence_epsilon,
    heuristic_shift,
    qrst_all,
    qrst_slice,
)
from .tensors import (
    CanonicalIndex,
    SymTensor,
    apply_permutation,
    canonical_indices,
    contract,
    from_unique_entries,
    frobenius_norm,
    identity_tensor,
    inner_product,
    kmode_product,
    labeling_tensor,
    num_unique_entries,
    random_tensor,
    similarity_transform,
    symmetrize,
    vec,
)
from .tensorio import (
    RunManifest,
    TensorFormatError,
    load_tensor,
    save_tensor,
    tensor_digest,
    write_eigen_table,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalIndex",
    "EigenSet",
    "Eigenpair",
    "MultistartResult",
    "OracleConfig",
    "PermutationPlan",
    "PowerResult",
    "PqrstResult",
    "QrstDivergenceError",
    "QrstResult",
    "RunManifest",
    "SliceOutcome",
    "SolverConfig",
    "SymTensor",
    "TensorFormatError",
    "apply_permutation",
    "canonical_indices",
    "canonicalize",
    "classify_stability",
    "conservative_shift",
    "contract",
    "convergence_epsilon",
    "dedup",
    "enumerate_eigenpairs",
    "enumerate_permutations",
    "from_unique_entries",
    "frobenius_norm",
    "heuristic_shift",
    "identity_tensor",
    "inner_product",
    "kmode_product",
    "labeling_tensor",
    "load_tensor",
    "multistart",
    "newton_refine",
    "num_unique_entries",
    "pqrst",
    "qrst_all",
    "qrst_slice",
    "random_start",
    "random_tensor",
    "residual",
    "residual_bound",
    "save_tensor",
    "similarity_transform",
    "sshopm",
    "sshopm_adaptive",
    "symmetric_matrix_eigen",
    "symmetrize",
    "tensor_digest",
    "vec",
    "write_eigen_table",
]
