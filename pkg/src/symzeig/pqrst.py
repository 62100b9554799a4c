"""Permutation-preconditioned slice QR iteration.

Relabeling the tensor's indices is an orthogonal change of basis, so
running the slice QR solver on every relabeled copy explores different
convergence basins at no analytical cost: an eigenvector found in the
permuted basis pulls back through the permutation.  The full family has
``n!`` members; beyond ``perm_cap`` a deterministic uniform sample (always
containing the identity) is used instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations as _permutations
from math import factorial

import numpy as np

from .eigenpairs import EigenSet, Eigenpair, dedup, residual, residual_bound
from .qrst import SliceOutcome, SolverConfig, qrst_slice
from .tensors import SymTensor, apply_permutation

__all__ = [
    "PermutationPlan",
    "PermutationRun",
    "PqrstResult",
    "enumerate_permutations",
    "pqrst",
]


@dataclass(frozen=True)
class PermutationPlan:
    """The permutations to precondition with; ``mode`` records whether the
    family is the full symmetric group or a sample of it."""

    perms: tuple[tuple[int, ...], ...]
    mode: str  # "exhaustive" | "sampled"


@dataclass
class PermutationRun:
    index: int  # 1-based id used in provenance and traces
    perm: tuple[int, ...]
    outcomes: list[SliceOutcome]


@dataclass
class PqrstResult:
    eigenset: EigenSet
    plan: PermutationPlan
    runs: list[PermutationRun]
    diagnostics: list[tuple[int, int, float]] = field(default_factory=list)


def enumerate_permutations(n: int, cap: int, seed: int = 0) -> PermutationPlan:
    """All ``n!`` permutations of ``range(n)`` in lexicographic order, or a
    deterministic uniform sample of ``cap`` distinct ones (identity always
    included) when the full family is larger than ``cap``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if factorial(n) <= cap:
        return PermutationPlan(tuple(_permutations(range(n))), "exhaustive")
    rng = np.random.default_rng(seed)
    identity = tuple(range(n))
    chosen = [identity]
    seen = {identity}
    while len(chosen) < cap:
        p = tuple(int(v) for v in rng.permutation(n))
        if p not in seen:
            seen.add(p)
            chosen.append(p)
    return PermutationPlan(tuple(chosen), "sampled")


def pqrst(
    t: SymTensor, cfg: SolverConfig | None = None, shifted: bool = True
) -> PqrstResult:
    """Run the slice QR solver over the permutation family and merge results.

    Each converged pair ``(lam, v)`` of a relabeled copy maps back to
    ``(lam, P v)`` on the input tensor; the residual is recomputed there and
    pairs beyond the solver bound join the diagnostics (as do slices that
    never converged), recorded as ``(permutation, slice, final_epsilon)``.
    """
    cfg = cfg or SolverConfig()
    d, n = t.order, t.dim
    plan = enumerate_permutations(n, cfg.perm_cap, cfg.seed)
    bound = residual_bound(cfg.tol, t.norm())

    collected: list[Eigenpair] = []
    runs: list[PermutationRun] = []
    diagnostics: list[tuple[int, int, float]] = []
    for pid, perm in enumerate(plan.perms, start=1):
        ap = apply_permutation(t, perm)
        outcomes: list[SliceOutcome] = []
        for i in range(n):
            try:
                outcome = qrst_slice(ap, i, cfg, shifted)
            except Exception:  # divergence is data at this level
                diagnostics.append((pid, i + 1, float("nan")))
                continue
            outcomes.append(outcome)
            if not outcome.converged:
                diagnostics.append((pid, i + 1, outcome.final_epsilon))
                continue
            pair = outcome.eigenpair
            x = np.empty(n)
            x[list(perm)] = pair.x  # x = P v for P = eye(n)[:, perm]
            res = residual(t, pair.lam, x)
            if res > bound:
                diagnostics.append((pid, i + 1, outcome.final_epsilon))
                continue
            collected.append(
                Eigenpair(
                    pair.lam,
                    x,
                    res,
                    solver="pqrst",
                    slice_index=i + 1,
                    permutation=pid,
                    iterations=outcome.iterations,
                )
            )
        runs.append(PermutationRun(pid, perm, outcomes))
    return PqrstResult(dedup(collected, d), plan, runs, diagnostics)
