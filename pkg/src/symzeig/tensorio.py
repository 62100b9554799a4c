"""File formats: tensor JSON, eigenpair tables (CSV/JSON), trace CSVs.

The tensor file is a JSON object with integer fields ``order`` and ``dim``
plus exactly one of ``unique_entries`` (canonical entries, lexicographic
order of the nondecreasing 1-based index tuples) or ``dense_values`` (all
``n^d`` entries, first index fastest).  Table and trace writers format
floats with ``repr`` so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .eigenpairs import EigenSet
from .hopm import PowerResult
from .qrst import SliceOutcome
from .tensors import SymTensor, from_unique_entries, symmetrize

__all__ = [
    "RunManifest",
    "TensorFormatError",
    "eigen_table_header",
    "eigen_table_rows",
    "load_tensor",
    "save_tensor",
    "tensor_digest",
    "write_eigen_table",
    "write_hopm_trace",
    "write_manifest",
    "write_qrst_trace",
]

# Accepted relative asymmetry of a dense_values payload before it is
# rejected instead of symmetrized.
_DENSE_ASYM_RTOL = 1e-8


class TensorFormatError(ValueError):
    """A tensor file that does not follow the documented schema."""


def _require_int(obj: dict, name: str, minimum: int) -> int:
    if name not in obj:
        raise TensorFormatError(f"missing field '{name}'")
    value = obj[name]
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise TensorFormatError(f"field '{name}' must be an integer >= {minimum}")
    return value


def load_tensor(path) -> SymTensor:
    """Read a tensor JSON file; errors name the offending field."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as err:
        raise TensorFormatError(f"not valid JSON: {err}") from err
    if not isinstance(obj, dict):
        raise TensorFormatError("top level must be a JSON object")
    order = _require_int(obj, "order", 2)
    dim = _require_int(obj, "dim", 1)
    has_unique = "unique_entries" in obj
    has_dense = "dense_values" in obj
    if has_unique == has_dense:
        raise TensorFormatError(
            "exactly one of 'unique_entries' or 'dense_values' must be present"
        )
    if has_unique:
        entries = obj["unique_entries"]
        if not isinstance(entries, list):
            raise TensorFormatError("field 'unique_entries' must be an array")
        try:
            return from_unique_entries(order, dim, np.asarray(entries, dtype=float))
        except ValueError as err:
            raise TensorFormatError(f"field 'unique_entries': {err}") from err
    values = obj["dense_values"]
    if not isinstance(values, list):
        raise TensorFormatError("field 'dense_values' must be an array")
    if len(values) != dim**order:
        raise TensorFormatError(
            f"field 'dense_values' must hold {dim ** order} values, got {len(values)}"
        )
    arr = np.asarray(values, dtype=float).reshape((dim,) * order, order="F")
    sym = symmetrize(arr)
    scale = max(sym.norm(), 1e-300)
    if np.max(np.abs(arr - sym.array)) > _DENSE_ASYM_RTOL * scale:
        raise TensorFormatError(
            "field 'dense_values' is not symmetric within tolerance"
        )
    return sym


def save_tensor(path, t: SymTensor, dense: bool = False) -> None:
    """Write the JSON tensor format (canonical entries unless ``dense``)."""
    obj: dict = {"order": t.order, "dim": t.dim}
    if dense:
        obj["dense_values"] = t.array.ravel(order="F").tolist()
    else:
        obj["unique_entries"] = t.unique_entries().tolist()
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def tensor_digest(t: SymTensor) -> str:
    """Content hash of the canonical serialization (order, dim, entries)."""
    payload = f"{t.order}:{t.dim}:" + ",".join(
        repr(v) for v in t.unique_entries().tolist()
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def eigen_table_header(n: int) -> list[str]:
    return (
        ["lambda"]
        + [f"x_{j}" for j in range(1, n + 1)]
        + ["stability", "residual", "iterations", "occurrences", "solver",
           "permutation", "slice"]
    )


def eigen_table_rows(eigenset: EigenSet) -> list[list]:
    rows = []
    for pair, occ in zip(eigenset.pairs, eigenset.occurrences):
        rows.append(
            [pair.lam]
            + [float(v) for v in pair.x]
            + [
                pair.stability,
                pair.residual,
                pair.iterations,
                occ,
                pair.solver,
                pair.permutation,
                pair.slice_index,
            ]
        )
    return rows


def write_eigen_table(path, eigenset: EigenSet) -> None:
    """Write the eigenpair table; format chosen by extension (.csv/.json).

    Columns (and JSON field names): lambda, x_1..x_n, stability, residual,
    iterations, occurrences, solver, permutation, slice.
    """
    path = Path(path)
    n = eigenset.pairs[0].x.size if eigenset.pairs else 0
    header = eigen_table_header(n)
    rows = eigen_table_rows(eigenset)
    if path.suffix.lower() == ".csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    elif path.suffix.lower() == ".json":
        payload = [dict(zip(header, row)) for row in rows]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        raise ValueError(f"unsupported table extension: {path.suffix!r}")


def write_qrst_trace(path, outcomes: list[SliceOutcome]) -> None:
    """Per-iteration trace of slice QR runs.

    Columns: ``slice, k, shift, epsilon, slice_lambda_min``.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["slice", "k", "shift", "epsilon", "slice_lambda_min"])
        for outcome in outcomes:
            for row in outcome.trace:
                writer.writerow(
                    [_fmt(v) for v in (outcome.slice_index, row.k, row.shift,
                                       row.epsilon, row.slice_lambda_min)]
                )


def write_pqrst_trace(path, runs) -> None:
    """Trace of a permutation-family run; adds a leading permutation column."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["permutation", "slice", "k", "shift", "epsilon",
                         "slice_lambda_min"])
        for run in runs:
            for outcome in run.outcomes:
                for row in outcome.trace:
                    writer.writerow(
                        [_fmt(v) for v in (run.index, outcome.slice_index,
                                           row.k, row.shift, row.epsilon,
                                           row.slice_lambda_min)]
                    )


def write_hopm_trace(path, results: list[PowerResult]) -> None:
    """Per-iteration trace of power-method restarts.

    Columns: ``run, k, alpha, lambda``; runs numbered from 1.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run", "k", "alpha", "lambda"])
        for run_id, result in enumerate(results, start=1):
            for row in result.trace:
                writer.writerow(
                    [_fmt(v) for v in (run_id, row.k, row.alpha, row.lam)]
                )


@dataclass
class RunManifest:
    """Everything needed to replay a CLI run bit-identically."""

    solver: str
    config: dict
    input_digest: str
    outputs: list[str] = field(default_factory=list)
    duration_s: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def write_manifest(path, manifest: RunManifest) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
