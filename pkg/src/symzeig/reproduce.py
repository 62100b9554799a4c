"""End-to-end benchmark harness around the order-3 labeling tensor.

The labeling tensor in three dimensions is a published benchmark whose four
widely-cited eigenpairs are embedded below as reference data.  Careful
enumeration (multistart Newton, confirmed by an exact polynomial solve)
shows a fifth, degenerate class the citations omit: ``(0, (0, 1, -1)/√2)``
with a singular projected Hessian; the harness verifies any pair found
beyond the reference four instead of treating it as spurious.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .eigenpairs import EigenSet, Eigenpair, classify_stability
from .hopm import conservative_shift, multistart
from .oracle import OracleConfig, enumerate_eigenpairs
from .pqrst import pqrst
from .qrst import SolverConfig
from .tensors import SymTensor, labeling_tensor, random_tensor
from .tensorio import (
    RunManifest,
    save_tensor,
    tensor_digest,
    write_eigen_table,
    write_hopm_trace,
    write_manifest,
    write_pqrst_trace,
)

__all__ = [
    "CheckResult",
    "REFERENCE_PAIRS",
    "ReproduceReport",
    "match_reference",
    "run_example1",
    "run_example_tensor",
]

# Benchmark eigenpairs of labeling_tensor(3, 3) as usually cited:
# (lambda, eigenvector, stability label).  Orientations are as printed in
# the benchmark tables; for this odd order each pair is equivalent to its
# mirror (-lambda, -x).
REFERENCE_PAIRS = (
    (30.4557, (0.37, 0.61, 0.70), "negatively-stable"),
    (0.4961, (-0.80, -0.34, 0.50), "positively-stable"),
    (0.1688, (0.86, -0.44, -0.23), "positively-stable"),
    (0.1401, (0.78, -0.60, 0.14), "unstable"),
)

# The degenerate fifth class (exact: the entries are in arithmetic
# progression along this direction, so the contraction cancels).
ZERO_PAIR_X = (0.0, 1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0))

LAMBDA_TOL = 5e-4
VECTOR_TOL = 2e-2


def match_reference(
    pair: Eigenpair,
    lam_ref: float,
    x_ref,
    order: int,
    lam_tol: float = LAMBDA_TOL,
    x_tol: float = VECTOR_TOL,
) -> bool:
    """Whether ``pair`` equals the reference pair up to the mirrored-pair
    equivalence, with per-component vector tolerance."""
    x_ref = np.asarray(x_ref, dtype=float)
    x_ref = x_ref / np.linalg.norm(x_ref)
    candidates = [(pair.lam, pair.x)]
    if order % 2 == 1:
        candidates.append((-pair.lam, -pair.x))
    else:
        candidates.append((pair.lam, -pair.x))
    for lam, x in candidates:
        if abs(lam - lam_ref) <= lam_tol and np.max(np.abs(x - x_ref)) <= x_tol:
            return True
    return False


def _reference_hits(eigenset: EigenSet, order: int,
                    lam_tol: float = LAMBDA_TOL) -> dict[float, Eigenpair | None]:
    hits: dict[float, Eigenpair | None] = {}
    for lam_ref, x_ref, _ in REFERENCE_PAIRS:
        hits[lam_ref] = next(
            (p for p in eigenset.pairs
             if match_reference(p, lam_ref, x_ref, order, lam_tol)),
            None,
        )
    return hits


def _extras(eigenset: EigenSet, order: int) -> list[Eigenpair]:
    out = []
    for p in eigenset.pairs:
        if not any(
            match_reference(p, lam_ref, x_ref, order)
            for lam_ref, x_ref, _ in REFERENCE_PAIRS
        ):
            out.append(p)
    return out


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class ReproduceReport:
    example: int
    checks: list[CheckResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    duration_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "example": self.example,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
            "notes": self.notes,
            "outputs": self.outputs,
            "duration_s": self.duration_s,
        }


def _write_report(report: ReproduceReport, out_dir: Path) -> None:
    json_path = out_dir / "report.json"
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
    text_path = out_dir / "report.txt"
    with open(text_path, "w", encoding="utf-8") as fh:
        fh.write(f"example {report.example}: "
                 f"{'PASS' if report.passed else 'FAIL'}\n")
        for c in report.checks:
            fh.write(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}: {c.detail}\n")
        for note in report.notes:
            fh.write(f"  note: {note}\n")
    report.outputs += [str(json_path), str(text_path)]


def _fmt_set(eigenset: EigenSet) -> str:
    return "{" + ", ".join(f"{p.lam:.4f}" for p in eigenset.pairs) + "}"


def run_example1(
    out_dir,
    trace_dir=None,
    figures: bool = True,
    seed: int = 0,
) -> ReproduceReport:
    """Run the full battery on the labeling tensor and compare against the
    embedded reference pairs.

    Writes eigenpair tables, a JSON/text report, optional per-run trace
    CSVs, and convergence figures into ``out_dir``.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t_start = time.perf_counter()
    a = labeling_tensor(3, 3)
    d = a.order
    report = ReproduceReport(example=1)

    # (a) ground-truth enumeration
    oracle_set = enumerate_eigenpairs(a, OracleConfig(seed=seed))
    # (b) fixed-shift power method, 100 restarts
    cfg_power = SolverConfig(max_iter=1000, seed=seed)
    power = multistart(a, 100, cfg_power, alpha=288.0, dist="sphere")
    # (c) unshifted and (d) shifted permutation-QR runs
    cfg_qr = SolverConfig(tol=1e-13, max_iter=5000, delta=1.0, perm_cap=6, seed=seed)
    un = pqrst(a, cfg_qr, shifted=False)
    sh = pqrst(a, cfg_qr, shifted=True)

    for name, es in (
        ("oracle", oracle_set),
        ("sshopm", power.eigenset),
        ("pqrst_unshifted", un.eigenset),
        ("pqrst_shifted", sh.eigenset),
    ):
        if name != "oracle":  # oracle pairs arrive already labeled
            es.pairs = [
                Eigenpair(
                    p.lam, p.x, p.residual,
                    stability=classify_stability(a, p), solver=p.solver,
                    slice_index=p.slice_index, permutation=p.permutation,
                    iterations=p.iterations,
                )
                for p in es.pairs
            ]
        path = out_dir / f"{name}.csv"
        write_eigen_table(path, es)
        report.outputs.append(str(path))

    # checks
    hits = _reference_hits(oracle_set, d, lam_tol=1e-3)
    missing = [lam for lam, p in hits.items() if p is None]
    report.checks.append(CheckResult(
        "oracle-recovers-reference",
        not missing,
        f"found {4 - len(missing)}/4 reference pairs"
        + (f", missing {missing}" if missing else ""),
    ))
    extras = _extras(oracle_set, d)
    bad = [p for p in extras if p.residual > 1e-8 * max(1.0, a.norm())]
    report.checks.append(CheckResult(
        "oracle-extras-verified",
        not bad,
        f"{len(extras)} pair(s) beyond the reference four, all residual-verified"
        if not bad else f"{len(bad)} unverified extra pair(s)",
    ))
    if extras:
        report.notes.append(
            "extra distinct pair(s) "
            + ", ".join(f"lambda={p.lam:.4g}" for p in extras)
            + " are genuine eigenpairs absent from the usual benchmark table "
            "(the degenerate zero class)"
        )

    hits_sh = _reference_hits(sh.eigenset, d)
    missing_sh = [lam for lam, p in hits_sh.items() if p is None]
    report.checks.append(CheckResult(
        "pqrst-shifted-recovers-reference",
        not missing_sh,
        f"found {4 - len(missing_sh)}/4 reference pairs, set {_fmt_set(sh.eigenset)}",
    ))

    power_ref = [
        lam for lam, p in _reference_hits(power.eigenset, d, 1e-3).items()
        if p is not None
    ]
    report.checks.append(CheckResult(
        "sshopm-only-dominant",
        power_ref == [30.4557],
        f"converged {power.converged_count}/100, reference pairs found: {power_ref}",
    ))

    un_ref = [
        lam for lam, p in _reference_hits(un.eigenset, d, 1e-3).items()
        if p is not None
    ]
    report.checks.append(CheckResult(
        "pqrst-unshifted-only-dominant",
        un_ref == [30.4557],
        f"reference pairs found: {un_ref}, set {_fmt_set(un.eigenset)}",
    ))

    unstable_in_shifted = any(
        match_reference(p, 0.1401, REFERENCE_PAIRS[3][1], d)
        for p in sh.eigenset.pairs
    )
    unstable_in_power = any(
        match_reference(p, 0.1401, REFERENCE_PAIRS[3][1], d, 1e-3)
        for p in power.eigenset.pairs
    )
    report.checks.append(CheckResult(
        "unstable-pair-needs-shift",
        unstable_in_shifted and not unstable_in_power,
        "0.1401 found by shifted runs and absent from fixed-shift power runs"
        if unstable_in_shifted and not unstable_in_power else
        f"shifted={unstable_in_shifted}, power={unstable_in_power}",
    ))

    report.notes.append(
        "fixed-shift power restarts that stop short of max_iter all sit at "
        "30.4557; with larger budgets the 0.4961 and 0.1688 attractors also "
        "capture a share of starts"
    )

    if trace_dir is not None:
        trace_dir = Path(trace_dir)
        trace_dir.mkdir(parents=True, exist_ok=True)
        write_pqrst_trace(trace_dir / "pqrst_shifted_trace.csv", sh.runs)
        write_pqrst_trace(trace_dir / "pqrst_unshifted_trace.csv", un.runs)
        write_hopm_trace(trace_dir / "sshopm_trace.csv", power.results)
        report.outputs += [
            str(trace_dir / "pqrst_shifted_trace.csv"),
            str(trace_dir / "pqrst_unshifted_trace.csv"),
            str(trace_dir / "sshopm_trace.csv"),
        ]

    if figures:
        from . import plots

        p1 = plots.plot_slice_traces(
            [(f"perm {run.index}", run.outcomes) for run in sh.runs],
            out_dir / "fig_pqrst_convergence.png",
            "shifted permutation-QR convergence (labeling tensor)",
        )
        p2 = plots.plot_power_traces(
            power.results,
            out_dir / "fig_sshopm_lambda.png",
            "fixed-shift power method, 100 restarts",
        )
        report.outputs += [str(p1), str(p2)]

    report.duration_s = time.perf_counter() - t_start
    manifest = RunManifest(
        solver="reproduce-example1",
        config={"seed": seed, "power": vars(cfg_power), "qr": vars(cfg_qr)},
        input_digest=tensor_digest(a),
        outputs=report.outputs,
        duration_s=report.duration_s,
        diagnostics={"sshopm_converged": power.converged_count},
    )
    write_manifest(out_dir / "manifest.json", manifest)
    report.outputs.append(str(out_dir / "manifest.json"))
    _write_report(report, out_dir)
    return report


def run_example_tensor(
    example: int,
    a: SymTensor | None,
    out_dir,
    figures: bool = True,
    seed: int = 0,
) -> ReproduceReport:
    """Battery for the externally-sourced or randomized examples (2-4).

    Examples 2 and 3 need the tensor supplied by the caller; example 4
    defaults to a random symmetric order-3 dimension-6 tensor drawn from
    this package's own seed.  Checks enforce residual soundness only; the
    found sets and a solver-vs-solver pair count comparison are reported.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t_start = time.perf_counter()
    report = ReproduceReport(example=example)
    if a is None:
        if example != 4:
            raise ValueError(f"example {example} needs an input tensor")
        a = random_tensor(3, 6, seed=seed)
        save_tensor(out_dir / "tensor.json", a)
        report.outputs.append(str(out_dir / "tensor.json"))

    # the conservative shift slows the power method to ~1/alpha steps, so
    # it needs a far larger budget than the QR iteration to say anything
    cfg = SolverConfig(max_iter=20000, seed=seed)
    alpha = conservative_shift(a)
    power = multistart(a, 100, cfg, alpha=alpha, dist="sphere")
    cfg_qr = SolverConfig(tol=1e-13, max_iter=1000, delta=1.0, seed=seed)
    sh = pqrst(a, cfg_qr, shifted=True)

    bound = 1e-8 * max(1.0, a.norm())
    for name, es in (("sshopm", power.eigenset), ("pqrst_shifted", sh.eigenset)):
        es.pairs = [
            Eigenpair(
                p.lam, p.x, p.residual,
                stability=classify_stability(a, p), solver=p.solver,
                slice_index=p.slice_index, permutation=p.permutation,
                iterations=p.iterations,
            )
            for p in es.pairs
        ]
        path = out_dir / f"{name}.csv"
        write_eigen_table(path, es)
        report.outputs.append(str(path))
        bad = [p for p in es.pairs if p.residual > bound]
        report.checks.append(CheckResult(
            f"{name}-residuals",
            not bad,
            f"{len(es.pairs)} distinct pair(s), max residual "
            f"{max((p.residual for p in es.pairs), default=0.0):.2e}",
        ))

    report.notes.append(
        f"distinct pairs: shifted permutation-QR {len(sh.eigenset)} vs "
        f"fixed-shift power method {len(power.eigenset)} "
        f"(alpha={alpha:.4g}); the comparison is reported, not enforced"
    )

    if figures:
        from . import plots

        p1 = plots.plot_slice_traces(
            [(f"perm {run.index}", run.outcomes) for run in sh.runs[:4]],
            out_dir / "fig_pqrst_convergence.png",
            f"shifted permutation-QR convergence (example {example})",
        )
        report.outputs.append(str(p1))

    report.duration_s = time.perf_counter() - t_start
    manifest = RunManifest(
        solver=f"reproduce-example{example}",
        config={"seed": seed, "qr": vars(cfg_qr), "alpha": alpha},
        input_digest=tensor_digest(a),
        outputs=report.outputs,
        duration_s=report.duration_s,
    )
    write_manifest(out_dir / "manifest.json", manifest)
    report.outputs.append(str(out_dir / "manifest.json"))
    _write_report(report, out_dir)
    return report
