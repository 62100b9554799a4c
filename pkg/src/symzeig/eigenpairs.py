"""Eigenpair records, residuals, stability labels, and deduplication.

An eigenpair ``(lam, x)`` of a symmetric tensor ``A`` of order ``d``
satisfies ``A x^{d-1} = lam * x`` with ``x`` on the unit sphere.  For odd
``d`` the pairs ``(lam, x)`` and ``(-lam, -x)`` describe the same solution,
for even ``d`` the pairs ``(lam, x)`` and ``(lam, -x)`` do; none of the
functions here treat such mirrored pairs as distinct.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .tensors import SymTensor, contract

__all__ = [
    "EigenSet",
    "Eigenpair",
    "NEGATIVELY_STABLE",
    "POSITIVELY_STABLE",
    "UNDETERMINED",
    "UNSTABLE",
    "canonicalize",
    "classify_stability",
    "dedup",
    "residual",
    "residual_bound",
    "symmetric_matrix_eigen",
]

POSITIVELY_STABLE = "positively-stable"
NEGATIVELY_STABLE = "negatively-stable"
UNSTABLE = "unstable"
UNDETERMINED = "undetermined"

# Two pairs collapse to one when both the eigenvalue and the (canonicalized)
# eigenvector agree within these tolerances.
DEDUP_LAMBDA_RTOL = 1e-6
DEDUP_VECTOR_TOL = 1e-4

_SIGN_EPS = 1e-10


@dataclass(frozen=True, eq=False)
class Eigenpair:
    """A solved eigenpair together with its quality and provenance.

    ``slice_index`` and ``permutation`` are 1-based when present, matching
    the table output convention; ``residual`` is
    ``||A x^{d-1} - lam x||_2`` against the tensor the pair is reported for.
    """

    lam: float
    x: np.ndarray
    residual: float
    stability: str = UNDETERMINED
    solver: str = ""
    slice_index: int | None = None
    permutation: int | None = None
    iterations: int = 0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).copy()
        x.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "residual", float(self.residual))


@dataclass
class EigenSet:
    """Distinct eigenpairs with per-pair occurrence counts."""

    pairs: list[Eigenpair] = field(default_factory=list)
    occurrences: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([p.lam for p in self.pairs])


def residual(t: SymTensor, lam: float, x) -> float:
    """Defect norm ``||A x^{d-1} - lam x||_2``."""
    x = np.asarray(x, dtype=float)
    v = contract(t, x, t.order - 1)
    return float(np.linalg.norm(v - lam * x))


def residual_bound(tol: float, tensor_norm: float) -> float:
    """Largest residual at which a solver may report a pair as converged."""
    return max(1e-8, 10.0 * tol) * max(1.0, tensor_norm)


def symmetric_matrix_eigen(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending.

    Raises on input whose asymmetry exceeds ``1e-8 * ||M||``.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = np.linalg.norm(m)
    if np.linalg.norm(m - m.T) > 1e-8 * max(scale, 1e-300):
        raise ValueError("matrix is not symmetric within tolerance")
    return np.linalg.eigh((m + m.T) / 2.0)


def _hessian_core(t: SymTensor, lam: float, x: np.ndarray) -> np.ndarray:
    d = t.order
    slice_mat = t.array if d == 2 else contract(t, x, d - 2)
    return (d - 1) * slice_mat - lam * np.eye(t.dim)


def _complement_basis(x: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to ``x``."""
    n = x.size
    q, _ = np.linalg.qr(np.column_stack([x, np.eye(n)]))
    return q[:, 1:n]


def classify_stability(t: SymTensor, pair: Eigenpair, theta: float | None = None) -> str:
    """Stability label from the projected Hessian of the sphere-constrained
    Lagrangian at the eigenpair.

    With ``U`` an orthonormal basis of ``x``-orthogonal directions and
    ``C = U^T ((d-1) A x^{d-2} - lam I) U``, the pair is negatively stable
    when ``C`` is negative definite, positively stable when positive
    definite, unstable when indefinite, and undetermined when any projected
    eigenvalue is within ``theta`` of zero or when the residual is too large
    to trust the point.  For odd order the label is evaluated at the
    ``lam >= 0`` member of the mirrored pair, so both members receive the
    label of their equivalence class.
    """
    norm_a = t.norm()
    if theta is None:
        theta = 1e-8 * max(1.0, norm_a)
    if t.dim == 1:
        return UNDETERMINED
    if pair.residual > 1e-6 * max(1.0, norm_a):
        return UNDETERMINED
    lam, x = pair.lam, pair.x
    if t.order % 2 == 1 and lam < 0:
        lam, x = -lam, -x
    u = _complement_basis(np.asarray(x, dtype=float))
    c = u.T @ _hessian_core(t, lam, x) @ u
    evals = np.linalg.eigvalsh((c + c.T) / 2.0)
    if np.any(np.abs(evals) <= theta):
        return UNDETERMINED
    if np.all(evals < 0):
        return NEGATIVELY_STABLE
    if np.all(evals > 0):
        return POSITIVELY_STABLE
    return UNSTABLE


def canonicalize(pair: Eigenpair, order: int) -> Eigenpair:
    """Fix the mirrored-pair ambiguity: flip signs so the first eigenvector
    component of magnitude above 1e-10 is positive (for odd order the
    eigenvalue flips along with the vector)."""
    x = pair.x
    significant = np.flatnonzero(np.abs(x) > _SIGN_EPS)
    if significant.size == 0 or x[significant[0]] > 0:
        return pair
    lam = -pair.lam if order % 2 == 1 else pair.lam
    return replace(pair, lam=lam, x=-x)


def _equivalent(p: Eigenpair, r: Eigenpair, order: int) -> bool:
    lam_tol = DEDUP_LAMBDA_RTOL * max(1.0, abs(r.lam))
    if abs(p.lam - r.lam) <= lam_tol and (
        np.linalg.norm(p.x - r.x) <= DEDUP_VECTOR_TOL
    ):
        return True
    # The canonical sign rule can orient two copies of one pair differently
    # when the leading component sits at the sign threshold, so compare the
    # mirrored form as well.
    mirror_lam = -p.lam if order % 2 == 1 else p.lam
    return abs(mirror_lam - r.lam) <= lam_tol and (
        np.linalg.norm(p.x + r.x) <= DEDUP_VECTOR_TOL
    )


def dedup(pairs, order: int) -> EigenSet:
    """Canonicalize and merge equivalent pairs, counting occurrences.

    Two pairs merge when their eigenvalues agree within
    ``DEDUP_LAMBDA_RTOL * max(1, |lam|)`` and their canonical eigenvectors
    within ``DEDUP_VECTOR_TOL`` in the 2-norm (directly or as mirrored
    pairs); the representative kept is the member with the smallest
    residual.  The result is ordered by decreasing eigenvalue magnitude.
    """
    reps: list[Eigenpair] = []
    occ: list[int] = []
    for pair in pairs:
        p = canonicalize(pair, order)
        for j, r in enumerate(reps):
            if _equivalent(p, r, order):
                occ[j] += 1
                if p.residual < r.residual:
                    reps[j] = p
                break
        else:
            reps.append(p)
            occ.append(1)
    order_idx = sorted(
        range(len(reps)), key=lambda j: (-abs(reps[j].lam), -reps[j].lam)
    )
    return EigenSet([reps[j] for j in order_idx], [occ[j] for j in order_idx])
