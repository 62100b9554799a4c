"""Dense symmetric tensors and the multilinear kernels used by the solvers.

A symmetric tensor of order ``d`` and dimension ``n`` is stored as a full
``numpy`` array of shape ``(n,) * d`` whose entries are invariant under any
permutation of the indices.  Symmetry is enforced bit-exactly at
construction, so every downstream slice of a :class:`SymTensor` is itself
exactly symmetric.  General (non-symmetric) dense tensors, which appear as
intermediates of mode products, are plain ``numpy.ndarray`` objects; their
flat vectorization convention (first index fastest) is provided by
:func:`vec`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, permutations

import numpy as np

__all__ = [
    "CanonicalIndex",
    "SymTensor",
    "apply_permutation",
    "canonical_indices",
    "contract",
    "from_unique_entries",
    "frobenius_norm",
    "identity_tensor",
    "inner_product",
    "kmode_product",
    "labeling_tensor",
    "multilinear_transform",
    "num_unique_entries",
    "random_tensor",
    "similarity_transform",
    "symmetrize",
    "vec",
]


def num_unique_entries(order: int, dim: int) -> int:
    """Number of independent entries of a symmetric tensor: C(n+d-1, d)."""
    return math.comb(dim + order - 1, order)


@dataclass(frozen=True)
class CanonicalIndex:
    """One orbit of index permutations, addressed by its sorted representative.

    ``indices`` is the nondecreasing 1-based index tuple; ``multiplicity`` is
    the number of distinct positions in the full array that share its value.
    """

    indices: tuple[int, ...]
    multiplicity: int


@lru_cache(maxsize=None)
def _sym_structure(order: int, dim: int):
    """Index bookkeeping for the symmetry orbits of shape ``(dim,) * order``.

    Returns ``(canon, scatter, first, counts)`` where ``canon`` lists the
    sorted index tuples in lexicographic order, ``scatter`` maps every flat
    position of the full array to its orbit id, ``first`` holds the flat
    position of each orbit's sorted representative and ``counts`` the orbit
    sizes (multinomial multiplicities).
    """
    shape = (dim,) * order
    canon = list(combinations_with_replacement(range(dim), order))
    scatter = np.empty(dim**order, dtype=np.intp)
    first = np.empty(len(canon), dtype=np.intp)
    counts = np.empty(len(canon), dtype=np.intp)
    for cid, idx in enumerate(canon):
        orbit = set(permutations(idx))
        counts[cid] = len(orbit)
        first[cid] = np.ravel_multi_index(idx, shape)
        for pos in orbit:
            scatter[np.ravel_multi_index(pos, shape)] = cid
    return canon, scatter, first, counts


def canonical_indices(order: int, dim: int) -> list[CanonicalIndex]:
    """Canonical (sorted, 1-based) index tuples in lexicographic order."""
    canon, _, _, counts = _sym_structure(order, dim)
    return [
        CanonicalIndex(tuple(i + 1 for i in idx), int(c))
        for idx, c in zip(canon, counts)
    ]


def _as_array(t) -> np.ndarray:
    return t.array if isinstance(t, SymTensor) else np.asarray(t, dtype=float)


def _symmetrize_array(arr: np.ndarray) -> np.ndarray:
    """Average ``arr`` over its symmetry orbits; exact on symmetric input."""
    order, dim = arr.ndim, arr.shape[0]
    _, scatter, _, counts = _sym_structure(order, dim)
    flat = arr.ravel()
    means = np.bincount(scatter, weights=flat, minlength=len(counts)) / counts
    # An orbit whose values are already identical must stay bit-identical,
    # which the summed mean cannot guarantee; patch constant orbits directly.
    low = np.full(len(counts), np.inf)
    high = np.full(len(counts), -np.inf)
    np.minimum.at(low, scatter, flat)
    np.maximum.at(high, scatter, flat)
    const = low == high
    means[const] = low[const]
    return means[scatter].reshape(arr.shape)


class SymTensor:
    """Order-``d`` dimension-``n`` real tensor, exactly symmetric, immutable."""

    __slots__ = ("_array",)

    def __init__(self, array):
        arr = np.array(array, dtype=float)
        if arr.ndim < 2:
            raise ValueError("symmetric tensor needs order >= 2")
        if len(set(arr.shape)) != 1:
            raise ValueError(f"all dimensions must be equal, got shape {arr.shape}")
        _, scatter, first, _ = _sym_structure(arr.ndim, arr.shape[0])
        flat = arr.ravel()
        if not np.array_equal(flat, flat[first[scatter]]):
            raise ValueError(
                "array is not symmetric; use symmetrize() to project it"
            )
        arr.flags.writeable = False
        self._array = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "SymTensor":
        """Adopt an array known to be exactly symmetric (no validation)."""
        obj = object.__new__(cls)
        arr = arr if arr.flags.owndata else arr.copy()
        arr.flags.writeable = False
        obj._array = arr
        return obj

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def order(self) -> int:
        return self._array.ndim

    @property
    def dim(self) -> int:
        return self._array.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self._array))

    def contract(self, x, m: int):
        return contract(self, x, m)

    def unique_entries(self) -> np.ndarray:
        """Canonical entries in lexicographic order (inverse of
        :func:`from_unique_entries`, bit-exact)."""
        _, _, first, _ = _sym_structure(self.order, self.dim)
        return self._array.ravel()[first].copy()

    def __getitem__(self, key):
        return self._array[key]

    def __repr__(self) -> str:
        return f"SymTensor(order={self.order}, dim={self.dim})"


def from_unique_entries(order: int, dim: int, entries) -> SymTensor:
    """Build a symmetric tensor from its canonical entries.

    ``entries`` holds one value per nondecreasing index tuple, in
    lexicographic tuple order; the value is replicated to every permuted
    position, so the result is symmetric bit-exactly.
    """
    entries = np.asarray(entries, dtype=float)
    expected = num_unique_entries(order, dim)
    if entries.shape != (expected,):
        raise ValueError(
            f"expected {expected} unique entries for order {order}, "
            f"dim {dim}; got {entries.size}"
        )
    _, scatter, _, _ = _sym_structure(order, dim)
    return SymTensor._wrap(entries[scatter].reshape((dim,) * order))


def symmetrize(t) -> SymTensor:
    """Project a dense tensor with equal dimensions onto its symmetric part.

    Each canonical entry becomes the mean of the input over all permuted
    positions; symmetric inputs pass through with identical values.
    """
    arr = np.asarray(t, dtype=float)
    if arr.ndim < 2:
        raise ValueError("symmetrize needs order >= 2")
    if len(set(arr.shape)) != 1:
        raise ValueError(f"all dimensions must be equal, got shape {arr.shape}")
    return SymTensor._wrap(_symmetrize_array(arr))


def vec(t) -> np.ndarray:
    """Flatten with the first index fastest (column-major vectorization)."""
    return _as_array(t).ravel(order="F")


def inner_product(a, b) -> float:
    """Sum of elementwise products, ``vec(a)^T vec(b)``."""
    va, vb = _as_array(a), _as_array(b)
    if va.shape != vb.shape:
        raise ValueError(f"shape mismatch: {va.shape} vs {vb.shape}")
    return float(np.dot(va.ravel(), vb.ravel()))


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(_as_array(a)))


def kmode_product(t, matrix, mode: int) -> np.ndarray:
    """Multiply ``matrix`` onto mode ``mode`` (0-based) of a dense tensor.

    For ``U`` of shape ``(p, n_mode)`` the result replaces the mode's extent
    by ``p``: ``out[..., j, ...] = sum_i U[j, i] * t[..., i, ...]``.
    """
    arr = _as_array(t)
    u = np.asarray(matrix, dtype=float)
    if u.ndim != 2:
        raise ValueError("mode product needs a matrix")
    if not 0 <= mode < arr.ndim:
        raise ValueError(f"mode {mode} out of range for order {arr.ndim}")
    if u.shape[1] != arr.shape[mode]:
        raise ValueError(
            f"matrix has {u.shape[1]} columns, mode {mode} has extent "
            f"{arr.shape[mode]}"
        )
    return np.moveaxis(np.tensordot(u, arr, axes=(1, mode)), 0, mode)


def contract(t, x, m: int):
    """Contract the last ``m`` modes with the vector ``x``.

    Returns a dense array of order ``d - m`` (singleton modes squeezed), a
    vector for ``m == d - 1`` or a float for ``m == d``.  For symmetric
    input the result is again exactly symmetric.
    """
    arr = _as_array(t)
    d = arr.ndim
    if not 1 <= m <= d:
        raise ValueError(f"contraction count m={m} out of range 1..{d}")
    x = np.asarray(x, dtype=float)
    if x.shape != (arr.shape[-1],):
        raise ValueError(f"vector length {x.size} != dimension {arr.shape[-1]}")
    out = arr
    for _ in range(m):
        out = out @ x
    return float(out) if m == d else out


def multilinear_transform(t, q) -> np.ndarray:
    """Apply ``q`` to every mode (``out = t x_1 q^T x_2 q^T ... x_d q^T``)
    without re-symmetrizing; the raw array behind
    :func:`similarity_transform`."""
    arr = _as_array(t)
    q = np.asarray(q, dtype=float)
    if q.shape != (arr.shape[0], arr.shape[0]):
        raise ValueError(f"expected a {arr.shape[0]}x{arr.shape[0]} matrix")
    out = arr
    for _ in range(arr.ndim):
        out = np.tensordot(out, q, axes=(0, 0))
    return out


def similarity_transform(t: SymTensor, q) -> SymTensor:
    """Change of basis by ``q`` on every mode, re-symmetrized.

    Orthogonal ``q`` preserves the Frobenius norm and maps eigenpairs
    ``(lam, e_i)`` of the result to ``(lam, q[:, i])`` of the input; the
    re-symmetrization only removes floating-point asymmetry.
    """
    return SymTensor._wrap(_symmetrize_array(multilinear_transform(t, q)))


def apply_permutation(t: SymTensor, perm) -> SymTensor:
    """Relabel indices by a permutation of ``range(n)``, bit-exactly.

    Equals :func:`similarity_transform` with the permutation matrix
    ``np.eye(n)[:, perm]`` but involves no arithmetic.
    """
    perm = np.asarray(perm, dtype=np.intp)
    n = t.dim
    if sorted(perm.tolist()) != list(range(n)):
        raise ValueError(f"not a permutation of range({n}): {perm.tolist()}")
    return SymTensor._wrap(t.array[np.ix_(*([perm] * t.order))].copy())


def identity_tensor(order: int, dim: int) -> SymTensor:
    """Even-order symmetric tensor E with ``E x^{d-1} = x`` on the unit sphere.

    Built by symmetrizing the product of Kronecker deltas over consecutive
    index pairs; no such tensor exists for odd order.
    """
    if order % 2 != 0:
        raise ValueError("identity tensor exists only for even order")
    if order < 2:
        raise ValueError("order must be >= 2")
    eye = np.eye(dim)
    out = eye
    for _ in range(order // 2 - 1):
        out = np.tensordot(out, eye, axes=0)
    return symmetrize(out)


def labeling_tensor(order: int, dim: int) -> SymTensor:
    """Symmetric tensor whose canonical entries are 1, 2, 3, ... in
    lexicographic order; a handy concrete test case."""
    n = num_unique_entries(order, dim)
    return from_unique_entries(order, dim, np.arange(1.0, n + 1.0))


def random_tensor(order: int, dim: int, seed: int = 0) -> SymTensor:
    """Symmetric tensor with standard-normal canonical entries."""
    rng = np.random.default_rng(seed)
    return from_unique_entries(
        order, dim, rng.standard_normal(num_unique_entries(order, dim))
    )
