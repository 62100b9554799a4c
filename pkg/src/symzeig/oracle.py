"""Brute-force eigenpair enumeration by multistart Newton refinement.

Every eigenpair is a stationary point of ``A x^d`` on the unit sphere, i.e.
a zero of ``F(x) = A x^{d-1} - (A x^d) x``.  Newton steps restricted to the
tangent space of the sphere converge quadratically near any such point, so
enough random starts recover the full (small) solution set of a desk-scale
tensor.  This is ground truth for the iterative solvers, not a certified
enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .eigenpairs import (
    EigenSet,
    Eigenpair,
    classify_stability,
    dedup,
)
from .tensors import SymTensor, contract

__all__ = ["OracleConfig", "RefineResult", "enumerate_eigenpairs", "newton_refine"]


@dataclass
class OracleConfig:
    n_starts: int = 5000
    refine_tol: float = 1e-12
    max_refine: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValueError("n_starts must be >= 1")
        if self.refine_tol <= 0:
            raise ValueError("refine_tol must be positive")


@dataclass
class RefineResult:
    converged: bool
    eigenpair: Eigenpair | None
    iterations: int
    reason: str = ""


def _complement_basis(x: np.ndarray) -> np.ndarray:
    n = x.size
    q, _ = np.linalg.qr(np.column_stack([x, np.eye(n)]))
    return q[:, 1:n]


def newton_refine(t: SymTensor, x0, cfg: OracleConfig | None = None) -> RefineResult:
    """Polish a unit vector into an eigenpair by tangent-space Newton steps.

    Succeeds when ``||A x^{d-1} - lam x||`` drops below
    ``refine_tol * max(1, ||A||_F)``; a singular tangent Jacobian or
    ``max_refine`` exhausted is a failure, not an error.
    """
    cfg = cfg or OracleConfig()
    d, n = t.order, t.dim
    x = np.asarray(x0, dtype=float).copy()
    nx = np.linalg.norm(x)
    if nx == 0 or not np.isfinite(nx):
        raise ValueError("start vector must be nonzero and finite")
    x /= nx
    tol = cfg.refine_tol * max(1.0, t.norm())
    eye = np.eye(n)
    for k in range(cfg.max_refine + 1):
        g = contract(t, x, d - 1)
        lam = float(np.dot(x, g))
        f = g - lam * x
        res = float(np.linalg.norm(f))
        if res <= tol:
            return RefineResult(
                True,
                Eigenpair(lam, x, res, solver="oracle", iterations=k),
                k,
            )
        if k == cfg.max_refine:
            break
        h = t.array if d == 2 else contract(t, x, d - 2)
        jac = (d - 1) * h - lam * eye - d * np.outer(x, g)
        u = _complement_basis(x)
        try:
            step = np.linalg.solve(u.T @ jac @ u, -(u.T @ f))
        except np.linalg.LinAlgError:
            return RefineResult(False, None, k, "singular tangent jacobian")
        x = x + u @ step
        norm = np.linalg.norm(x)
        if not np.isfinite(norm) or norm == 0:
            return RefineResult(False, None, k, "non-finite iterate")
        x /= norm
    return RefineResult(False, None, cfg.max_refine, "max refine iterations")


def enumerate_eigenpairs(t: SymTensor, cfg: OracleConfig | None = None) -> EigenSet:
    """Collect the distinct eigenpairs reached from ``n_starts`` random
    unit vectors, with stability labels on the merged representatives.

    Deterministic given ``cfg.seed`` (one stream per start).  Intended for
    small dimensions where the solution set is tiny and coverage is
    effectively certain.
    """
    cfg = cfg or OracleConfig()
    found: list[Eigenpair] = []
    for run in range(cfg.n_starts):
        rng = np.random.default_rng((cfg.seed, run))
        x0 = rng.standard_normal(t.dim)
        while np.linalg.norm(x0) == 0:
            x0 = rng.standard_normal(t.dim)
        result = newton_refine(t, x0, cfg)
        if result.converged:
            found.append(result.eigenpair)
    eigenset = dedup(found, t.order)
    eigenset.pairs = [
        replace(p, stability=classify_stability(t, p)) for p in eigenset.pairs
    ]
    return eigenset
