"""Slice QR iteration for symmetric tensors.

For each slice index ``i`` the solver alternates a QR factorization of the
(shifted) square slice ``A_k[:, :, i, ..., i]`` with a full change of basis
of the tensor by the Q factor.  The accumulated orthogonal factor collects
the candidate eigenvector in its ``i``-th column; convergence is declared
when ``A_k e_i^{d-1}`` has no component orthogonal to ``e_i`` relative to
the slice's spectral norm.  A shift ``-lambda_min(slice) + delta`` makes the
factored slice positive definite, which is what drives convergence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .eigenpairs import EigenSet, Eigenpair, dedup, residual, residual_bound
from .tensors import SymTensor, _symmetrize_array, multilinear_transform

__all__ = [
    "QrstDivergenceError",
    "QrstResult",
    "QrstTraceRow",
    "SliceIterationState",
    "SliceOutcome",
    "SolverConfig",
    "convergence_epsilon",
    "heuristic_shift",
    "qrst_all",
    "qrst_slice",
]

_EPS_MACH = float(np.finfo(float).eps)


@dataclass
class SolverConfig:
    """Knobs shared by the iterative solvers.

    ``tol`` and ``max_iter`` govern the slice QR iteration, ``delta`` the
    positive-definiteness margin of its shift, ``alpha`` the fixed
    power-method shift, ``adaptive_target`` the curvature floor of the
    adaptive power-method shift, ``lambda_tol`` the power-method
    eigenvalue-difference stop, ``seed`` all random draws and ``perm_cap``
    the size of the permutation preconditioner family.

    ``qr_posdiag`` selects the QR sign convention.  The default (False)
    keeps the raw Householder factors, which for odd orders reproduces the
    reference trajectories of the benchmark labeling tensor; normalizing R
    to a nonnegative diagonal (True) instead makes the accumulated
    orthogonal factor stationary at convergence, which the fixed-point
    identities of the recursion assume.  Both are deterministic.
    """

    tol: float = 1e-13
    max_iter: int = 1000
    delta: float = 1.0
    alpha: float = 0.0
    adaptive_target: float = 1e-2
    lambda_tol: float = 1e-15
    seed: int = 0
    perm_cap: int = 24
    qr_posdiag: bool = False

    def __post_init__(self):
        if self.tol <= 0 or self.delta <= 0 or self.adaptive_target <= 0:
            raise ValueError("tolerances and shift margins must be positive")
        if self.lambda_tol <= 0:
            raise ValueError("lambda_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.perm_cap < 1:
            raise ValueError("perm_cap must be >= 1")


class QrstTraceRow(NamedTuple):
    k: int
    shift: float
    epsilon: float
    slice_lambda_min: float


@dataclass
class SliceIterationState:
    """One iteration of the slice QR recursion (recorded on request)."""

    k: int
    q_k: np.ndarray
    r_k: np.ndarray
    qbar: np.ndarray
    shift: float
    epsilon: float
    a_k: SymTensor


@dataclass
class SliceOutcome:
    """Result of running the iteration for one slice index."""

    slice_index: int  # 1-based, as reported in tables and traces
    converged: bool
    eigenpair: Eigenpair | None
    iterations: int
    final_epsilon: float
    trace: list[QrstTraceRow]
    states: list[SliceIterationState] | None = None
    diverged: bool = False


@dataclass
class QrstResult:
    eigenset: EigenSet
    outcomes: list[SliceOutcome]
    diagnostics: list[tuple[int, float]] = field(default_factory=list)


class QrstDivergenceError(RuntimeError):
    """Non-finite values appeared during the iteration."""

    def __init__(self, slice_index: int, trace: list[QrstTraceRow]):
        super().__init__(
            f"slice {slice_index}: iteration produced non-finite values "
            f"at k={trace[-1].k if trace else 0}"
        )
        self.slice_index = slice_index
        self.trace = trace


def heuristic_shift(slice_mat, delta: float) -> float:
    """Shift that makes ``slice + s I`` positive definite with margin
    ``delta``: ``s = -lambda_min(slice) + delta``."""
    evals = np.linalg.eigvalsh(np.asarray(slice_mat, dtype=float))
    return float(-evals[0] + delta)


def _epsilon(v: np.ndarray, i: int, spectral_norm: float) -> float:
    off = v.copy()
    off[i] = 0.0
    return float(np.linalg.norm(off) / max(_EPS_MACH, spectral_norm))


def convergence_epsilon(t: SymTensor, i: int) -> float:
    """Relative size of the off-axis part of ``A e_i^{d-1}``.

    With ``v = A e_i^{d-1}`` this is ``||v - v_i e_i||_2`` divided by the
    spectral norm of the slice ``A e_i^{d-2}``; it vanishes exactly when
    ``e_i`` is an eigenvector of ``A``.
    """
    d, n = t.order, t.dim
    if not 0 <= i < n:
        raise ValueError(f"slice index {i} out of range 0..{n - 1}")
    arr = t.array
    v = arr[(Ellipsis,) + (i,) * (d - 1)]
    slice_mat = arr[(Ellipsis,) + (i,) * (d - 2)]
    evals = np.linalg.eigvalsh(slice_mat)
    return _epsilon(v, i, float(np.max(np.abs(evals))))


def _qr_posdiag(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """QR factorization normalized to a nonnegative diagonal of R."""
    q, r = np.linalg.qr(m)
    sgn = np.sign(np.diag(r))
    sgn[sgn == 0] = 1.0
    return q * sgn, sgn[:, None] * r


def qrst_slice(
    t: SymTensor,
    i: int,
    cfg: SolverConfig | None = None,
    shifted: bool = True,
    keep_states: bool = False,
) -> SliceOutcome:
    """Run the slice QR iteration for slice index ``i`` (0-based).

    Iterates until the convergence measure drops to ``cfg.tol`` or
    ``cfg.max_iter`` passes are exhausted.  On convergence the eigenvalue is
    the fully contracted diagonal entry of the transformed tensor and the
    eigenvector is column ``i`` of the accumulated orthogonal factor; the
    reported residual is recomputed against the original tensor, and a pair
    whose residual exceeds the solver bound is demoted to non-converged.
    Raises :class:`QrstDivergenceError` when the iteration degenerates.
    """
    cfg = cfg or SolverConfig()
    d, n = t.order, t.dim
    if not 0 <= i < n:
        raise ValueError(f"slice index {i} out of range 0..{n - 1}")
    eye = np.eye(n)
    slice_key = (Ellipsis,) + (i,) * (d - 2)
    column_key = (Ellipsis,) + (i,) * (d - 1)

    a = t.array
    qbar = eye.copy()
    slice_mat = a[slice_key]
    evals = np.linalg.eigvalsh(slice_mat)
    eps = _epsilon(a[column_key], i, float(np.max(np.abs(evals))))
    trace = [QrstTraceRow(0, 0.0, eps, float(evals[0]))]
    states: list[SliceIterationState] | None = [] if keep_states else None

    k = 0
    while eps > cfg.tol and k < cfg.max_iter:
        k += 1
        shift = (-float(evals[0]) + cfg.delta) if shifted else 0.0
        if cfg.qr_posdiag:
            q_k, r_k = _qr_posdiag(slice_mat + shift * eye)
        else:
            q_k, r_k = np.linalg.qr(slice_mat + shift * eye)
        a = _symmetrize_array(multilinear_transform(a, q_k))
        qbar = qbar @ q_k
        slice_mat = a[slice_key]
        evals = np.linalg.eigvalsh(slice_mat)
        eps = _epsilon(a[column_key], i, float(np.max(np.abs(evals))))
        trace.append(QrstTraceRow(k, shift, eps, float(evals[0])))
        if states is not None:
            states.append(
                SliceIterationState(
                    k, q_k, r_k, qbar.copy(), shift, eps, SymTensor._wrap(a.copy())
                )
            )
        if not np.isfinite(eps) or not np.isfinite(a).all():
            raise QrstDivergenceError(i + 1, trace)

    converged = eps <= cfg.tol
    eigenpair = None
    if converged:
        lam = float(a[(i,) * d])
        x = qbar[:, i].copy()
        x /= np.linalg.norm(x)
        res = residual(t, lam, x)
        if res <= residual_bound(cfg.tol, t.norm()):
            eigenpair = Eigenpair(
                lam,
                x,
                res,
                solver="qrst",
                slice_index=i + 1,
                iterations=k,
            )
        else:
            converged = False
    return SliceOutcome(i + 1, converged, eigenpair, k, eps, trace, states)


def qrst_all(
    t: SymTensor, cfg: SolverConfig | None = None, shifted: bool = True
) -> QrstResult:
    """Run :func:`qrst_slice` for every slice and merge the converged pairs.

    Slice failures (no convergence within ``max_iter``, divergence, or a
    residual beyond the solver bound) are reported in ``diagnostics`` as
    ``(slice_index, final_epsilon)`` rather than raised.
    """
    cfg = cfg or SolverConfig()
    outcomes: list[SliceOutcome] = []
    for i in range(t.dim):
        try:
            outcomes.append(qrst_slice(t, i, cfg, shifted))
        except QrstDivergenceError as err:
            outcomes.append(
                SliceOutcome(
                    i + 1,
                    False,
                    None,
                    err.trace[-1].k,
                    float("nan"),
                    err.trace,
                    diverged=True,
                )
            )
    pairs = [o.eigenpair for o in outcomes if o.converged]
    diagnostics = [
        (o.slice_index, o.final_epsilon) for o in outcomes if not o.converged
    ]
    return QrstResult(dedup(pairs, t.order), outcomes, diagnostics)
