"""Power-method baselines: plain, fixed-shift, and adaptive-shift variants.

The update normalizes ``A x^{d-1} + alpha x``; a large enough ``alpha``
makes the underlying objective convex on the sphere, which buys guaranteed
monotone convergence at the price of many iterations.  The adaptive variant
instead picks the smallest shift that keeps the local curvature above a
small floor.  A negative ``alpha`` flips the iteration sign to seek
negatively-curved (minimal) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .eigenpairs import EigenSet, Eigenpair, dedup, residual_bound
from .qrst import SolverConfig
from .tensors import SymTensor, contract

__all__ = [
    "HopmTraceRow",
    "MultistartResult",
    "PowerResult",
    "conservative_shift",
    "multistart",
    "random_start",
    "sshopm",
    "sshopm_adaptive",
]


class HopmTraceRow(NamedTuple):
    k: int
    alpha: float
    lam: float


@dataclass
class PowerResult:
    converged: bool
    eigenpair: Eigenpair | None
    iterations: int
    trace: list[HopmTraceRow]
    lam: float
    x: np.ndarray
    diverged: bool = False


@dataclass
class MultistartResult:
    eigenset: EigenSet
    results: list[PowerResult]

    @property
    def converged_count(self) -> int:
        return sum(r.converged for r in self.results)

    @property
    def median_iterations(self) -> float:
        its = [r.iterations for r in self.results if r.converged]
        return float(np.median(its)) if its else float("nan")


def conservative_shift(t: SymTensor) -> float:
    """Shift that convexifies any tensor: ``(d-1)`` times the sum of the
    absolute values of all ``n^d`` entries."""
    return float((t.order - 1) * np.abs(t.array).sum())


def _power_iterate(
    t: SymTensor,
    x0,
    cfg: SolverConfig,
    shift_fn: Callable[[np.ndarray], float],
    solver_id: str,
) -> PowerResult:
    d = t.order
    x = np.asarray(x0, dtype=float).copy()
    nx = np.linalg.norm(x)
    if nx == 0 or not np.isfinite(nx):
        raise ValueError("start vector must be nonzero and finite")
    x /= nx
    bound = residual_bound(cfg.lambda_tol, t.norm())
    lam_prev = None
    alpha = 0.0
    k = 0
    trace: list[HopmTraceRow] = []
    while True:
        g = contract(t, x, d - 1)
        lam = float(x @ g)
        res = float(np.linalg.norm(g - lam * x))
        trace.append(HopmTraceRow(k, alpha, lam))
        if not np.isfinite(lam) or not np.isfinite(res):
            return PowerResult(False, None, k, trace, lam, x, diverged=True)
        # Acceptance needs a stabilized eigenvalue AND a residual within the
        # solver bound; the eigenvalue alone also stalls below the threshold
        # while crawling through near-stationary saddle regions.
        if lam_prev is not None and abs(lam - lam_prev) <= cfg.lambda_tol and res <= bound:
            return PowerResult(
                True,
                Eigenpair(lam, x, res, solver=solver_id, iterations=k),
                k,
                trace,
                lam,
                x,
            )
        if k >= cfg.max_iter:
            return PowerResult(False, None, k, trace, lam, x)
        alpha = shift_fn(x)
        y = g + alpha * x
        if alpha < 0:
            y = -y
        ny = np.linalg.norm(y)
        if not np.isfinite(ny) or ny < 1e-300:
            return PowerResult(False, None, k + 1, trace, lam, x, diverged=True)
        x = y / ny
        lam_prev = lam
        k += 1


def sshopm(
    t: SymTensor, x0, alpha: float, cfg: SolverConfig | None = None
) -> PowerResult:
    """Fixed-shift power iteration from ``x0``.

    Accepts when consecutive eigenvalue estimates differ by at most
    ``cfg.lambda_tol`` while the residual sits within the solver bound;
    anything else at ``max_iter`` is reported non-converged.
    """
    cfg = cfg or SolverConfig()
    solver_id = "shopm" if alpha == 0 else "sshopm"
    return _power_iterate(t, x0, cfg, lambda _: float(alpha), solver_id)


def sshopm_adaptive(t: SymTensor, x0, cfg: SolverConfig | None = None) -> PowerResult:
    """Power iteration whose shift tracks the local curvature.

    At each step ``alpha = max(0, (tau_a - d(d-1) lambda_min(A x^{d-2})) / d)``
    with ``tau_a = cfg.adaptive_target``, the smallest nonnegative shift that
    keeps the shifted objective's sphere Hessian at least ``tau_a`` positive.
    """
    cfg = cfg or SolverConfig()
    d = t.order

    def shift(x: np.ndarray) -> float:
        h = t.array if d == 2 else contract(t, x, d - 2)
        lam_min = float(np.linalg.eigvalsh(h)[0])
        return max(0.0, (cfg.adaptive_target - d * (d - 1) * lam_min) / d)

    return _power_iterate(t, x0, cfg, shift, "sshopm-adaptive")


def random_start(n: int, rng: np.random.Generator, dist: str = "sphere") -> np.ndarray:
    """Draw a start vector: ``sphere`` normalizes a standard-normal draw,
    ``uniform`` draws componentwise from [-1, 1] before normalizing."""
    if dist == "sphere":
        x = rng.standard_normal(n)
    elif dist == "uniform":
        x = rng.uniform(-1.0, 1.0, n)
    else:
        raise ValueError(f"unknown start distribution {dist!r}")
    norm = np.linalg.norm(x)
    while norm == 0:  # essentially impossible, but stay safe
        x = rng.standard_normal(n)
        norm = np.linalg.norm(x)
    return x / norm


def multistart(
    t: SymTensor,
    n_starts: int,
    cfg: SolverConfig | None = None,
    alpha: float | None = None,
    adaptive: bool = False,
    dist: str = "sphere",
) -> MultistartResult:
    """Restart a power-method variant from ``n_starts`` random vectors.

    ``alpha=None`` with ``adaptive=False`` uses the conservative shift.
    Draws are deterministic given ``cfg.seed``, one stream per restart.
    """
    cfg = cfg or SolverConfig()
    if not adaptive and alpha is None:
        alpha = conservative_shift(t)
    results: list[PowerResult] = []
    for run in range(n_starts):
        rng = np.random.default_rng((cfg.seed, run))
        x0 = random_start(t.dim, rng, dist)
        if adaptive:
            results.append(sshopm_adaptive(t, x0, cfg))
        else:
            results.append(sshopm(t, x0, alpha, cfg))
    pairs = [r.eigenpair for r in results if r.converged]
    return MultistartResult(dedup(pairs, t.order), results)
