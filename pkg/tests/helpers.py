"""Shared test utilities: brute-force oracles and random inputs."""

from itertools import product

import numpy as np

from symzeig import SymTensor, symmetrize


def brute_contract(arr: np.ndarray, x: np.ndarray, m: int):
    """Loop-based contraction of the last m modes, independent of the
    library implementation."""
    d = arr.ndim
    n = arr.shape[-1]
    keep = d - m
    out_shape = arr.shape[:keep]
    out = np.zeros(out_shape if keep else ())
    for idx in product(range(n), repeat=keep):
        total = 0.0
        for rest in product(range(n), repeat=m):
            weight = 1.0
            for r in rest:
                weight *= x[r]
            total += arr[idx + rest] * weight
        if keep:
            out[idx] = total
        else:
            out = out + total
    return out


def random_sym_tensor(order: int, dim: int, rng) -> SymTensor:
    return symmetrize(rng.standard_normal((dim,) * order))


def random_orthogonal(n: int, rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_unit(n: int, rng) -> np.ndarray:
    x = rng.standard_normal(n)
    return x / np.linalg.norm(x)


def same_class(p, q, order: int, lam_tol=None, x_tol=1e-4) -> bool:
    """Pair equality modulo the mirrored-pair relation."""
    if lam_tol is None:
        lam_tol = 1e-6 * max(1.0, abs(q.lam))
    if abs(p.lam - q.lam) <= lam_tol and np.linalg.norm(p.x - q.x) <= x_tol:
        return True
    mlam = -p.lam if order % 2 == 1 else p.lam
    return abs(mlam - q.lam) <= lam_tol and np.linalg.norm(p.x + q.x) <= x_tol
