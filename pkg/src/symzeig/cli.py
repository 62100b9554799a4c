"""Command-line interface: generate tensors, run solvers, reproduce benchmarks.

Exit codes: 0 success, 1 reproduction checks failed, 2 input error, 3 no
eigenpair converged, 4 reproduction example needs an input file.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from .eigenpairs import classify_stability
from .hopm import conservative_shift, multistart
from .oracle import OracleConfig, enumerate_eigenpairs
from .pqrst import pqrst
from .qrst import SolverConfig, qrst_all
from .reproduce import run_example1, run_example_tensor
from .tensors import identity_tensor, labeling_tensor, random_tensor
from .tensorio import (
    RunManifest,
    TensorFormatError,
    load_tensor,
    save_tensor,
    tensor_digest,
    write_eigen_table,
    write_hopm_trace,
    write_manifest,
    write_pqrst_trace,
    write_qrst_trace,
)

__all__ = ["main"]

METHODS = ("qrst", "pqrst", "shopm", "sshopm", "sshopm-adaptive", "oracle")


def _float(text: str) -> float:
    return float(text)  # accepts scientific notation


def _int(text: str) -> int:
    value = float(text)  # integer flags accept 5e3 style input
    if value != int(value):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symzeig",
        description="Z-eigenpair solvers for real symmetric tensors",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run a solver on a tensor file")
    solve.add_argument("--input", required=True, help="tensor JSON file")
    solve.add_argument("--method", required=True, choices=METHODS)
    shift_group = solve.add_mutually_exclusive_group()
    shift_group.add_argument("--shifted", dest="shifted", action="store_true",
                             default=True, help="use the shifted iteration (default)")
    shift_group.add_argument("--unshifted", dest="shifted", action="store_false",
                             help="disable the shift")
    solve.add_argument("--delta", type=_float, default=1.0,
                       help="positive-definiteness margin of the slice shift")
    solve.add_argument("--tol", type=_float, default=None,
                       help="convergence tolerance (method-specific default)")
    solve.add_argument("--max-iter", type=_int, default=1000)
    solve.add_argument("--alpha", type=_float, default=None,
                       help="power-method shift (default: conservative bound)")
    solve.add_argument("--restarts", type=_int, default=None,
                       help="random starts for power methods / the oracle")
    solve.add_argument("--perm-cap", type=_int, default=24,
                       help="largest permutation family to run")
    solve.add_argument("--seed", type=_int, default=0)
    solve.add_argument("--start-dist", choices=("sphere", "uniform"),
                       default="sphere", help="restart distribution")
    solve.add_argument("--output", required=True,
                       help="eigenpair table (.csv or .json)")
    solve.add_argument("--trace", default=None, help="per-iteration trace CSV")
    solve.set_defaults(func=cmd_solve)

    gen = sub.add_parser("generate", help="write a tensor JSON file")
    gen.add_argument("--kind", required=True,
                     choices=("labeling", "random", "identity"))
    gen.add_argument("--order", type=_int, required=True)
    gen.add_argument("--dim", type=_int, required=True)
    gen.add_argument("--seed", type=_int, default=0)
    gen.add_argument("--output", required=True)
    gen.set_defaults(func=cmd_generate)

    rep = sub.add_parser(
        "reproduce",
        help="rerun the benchmark battery and check the report",
    )
    rep.add_argument("--example", type=_int, required=True, choices=(1, 2, 3, 4))
    rep.add_argument("--input", default=None,
                     help="tensor JSON for examples 2 and 3 (optional for 4)")
    rep.add_argument("--output-dir", default=None,
                     help="report directory (default reproduce-example<N>)")
    rep.add_argument("--trace-dir", default=None,
                     help="also write per-run trace CSVs here")
    rep.add_argument("--seed", type=_int, default=0)
    rep.add_argument("--no-figures", dest="figures", action="store_false",
                     default=True, help="skip figure rendering")
    rep.set_defaults(func=cmd_reproduce)
    return parser


def _labeled(t, eigenset):
    eigenset.pairs = [
        replace(p, stability=classify_stability(t, p)) if p.stability == "undetermined"
        else p
        for p in eigenset.pairs
    ]
    return eigenset


def cmd_solve(args) -> int:
    t = load_tensor(args.input)
    cfg = SolverConfig(
        tol=args.tol if args.tol is not None else 1e-13,
        max_iter=args.max_iter,
        delta=args.delta,
        seed=args.seed,
        perm_cap=args.perm_cap,
    )
    t_start = time.perf_counter()
    trace_writer = None
    non_converged = 0

    if args.method == "qrst":
        result = qrst_all(t, cfg, shifted=args.shifted)
        eigenset = result.eigenset
        non_converged = len(result.diagnostics)
        if args.trace:
            trace_writer = lambda path: write_qrst_trace(path, result.outcomes)
    elif args.method == "pqrst":
        result = pqrst(t, cfg, shifted=args.shifted)
        eigenset = result.eigenset
        non_converged = len(result.diagnostics)
        if args.trace:
            trace_writer = lambda path: write_pqrst_trace(path, result.runs)
    elif args.method in ("shopm", "sshopm", "sshopm-adaptive"):
        restarts = args.restarts if args.restarts is not None else 100
        if args.method == "shopm":
            alpha = 0.0
        elif args.alpha is not None:
            alpha = args.alpha
        else:
            alpha = conservative_shift(t)
        result = multistart(
            t,
            restarts,
            cfg,
            alpha=None if args.method == "sshopm-adaptive" else alpha,
            adaptive=args.method == "sshopm-adaptive",
            dist=args.start_dist,
        )
        eigenset = result.eigenset
        non_converged = restarts - result.converged_count
        if args.trace:
            trace_writer = lambda path: write_hopm_trace(path, result.results)
    else:  # oracle
        ocfg = OracleConfig(
            n_starts=args.restarts if args.restarts is not None else 5000,
            refine_tol=args.tol if args.tol is not None else 1e-12,
            seed=args.seed,
        )
        eigenset = enumerate_eigenpairs(t, ocfg)
        non_converged = ocfg.n_starts - sum(eigenset.occurrences)

    eigenset = _labeled(t, eigenset)
    write_eigen_table(args.output, eigenset)
    outputs = [args.output]
    if args.trace and trace_writer is not None:
        trace_writer(args.trace)
        outputs.append(args.trace)
    duration = time.perf_counter() - t_start

    max_res = max((p.residual for p in eigenset.pairs), default=float("nan"))
    print(
        f"{args.method}: {len(eigenset)} distinct eigenpair(s), "
        f"max residual {max_res:.3e}, {non_converged} non-converged run(s), "
        f"{duration:.2f}s"
    )
    for p, occ in zip(eigenset.pairs, eigenset.occurrences):
        comps = ", ".join(f"{v: .4f}" for v in p.x)
        print(f"  lambda={p.lam: .6g}  x=({comps})  {p.stability}  occ={occ}")

    manifest = RunManifest(
        solver=args.method,
        config={
            "tol": cfg.tol, "max_iter": cfg.max_iter, "delta": cfg.delta,
            "alpha": args.alpha, "restarts": args.restarts,
            "perm_cap": cfg.perm_cap, "seed": cfg.seed,
            "shifted": args.shifted, "start_dist": args.start_dist,
            "method": args.method,
        },
        input_digest=tensor_digest(t),
        outputs=outputs,
        duration_s=duration,
        diagnostics={"non_converged": non_converged},
    )
    write_manifest(str(Path(args.output)) + ".manifest.json", manifest)
    return 0 if len(eigenset) else 3


def cmd_generate(args) -> int:
    if args.kind == "labeling":
        t = labeling_tensor(args.order, args.dim)
    elif args.kind == "random":
        t = random_tensor(args.order, args.dim, seed=args.seed)
    else:
        t = identity_tensor(args.order, args.dim)  # raises on odd order
    save_tensor(args.output, t)
    print(f"wrote {args.kind} tensor (order {t.order}, dim {t.dim}) to {args.output}")
    return 0


_EXTERNAL_EXAMPLES = {
    2: "the order-4 benchmark tensor published as Example 3.5 of "
       "Kolda & Mayo, SIAM J. Matrix Anal. Appl. 32(4), 2011",
    3: "the order-3 benchmark tensor published as Example 3.6 of "
       "Kolda & Mayo, SIAM J. Matrix Anal. Appl. 32(4), 2011",
}


def cmd_reproduce(args) -> int:
    out_dir = args.output_dir or f"reproduce-example{args.example}"
    if args.example == 1:
        report = run_example1(out_dir, trace_dir=args.trace_dir,
                              figures=args.figures, seed=args.seed)
    else:
        tensor = load_tensor(args.input) if args.input else None
        if tensor is None and args.example in _EXTERNAL_EXAMPLES:
            print(
                f"example {args.example} needs --input: its entries are "
                f"{_EXTERNAL_EXAMPLES[args.example]}",
                file=sys.stderr,
            )
            return 4
        report = run_example_tensor(args.example, tensor, out_dir,
                                    figures=args.figures, seed=args.seed)
    for check in report.checks:
        print(f"[{'pass' if check.passed else 'FAIL'}] {check.name}: {check.detail}")
    for note in report.notes:
        print(f"note: {note}")
    print(f"report written to {out_dir} ({report.duration_s:.1f}s)")
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TensorFormatError as err:
        print(f"input error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"input error: {err}", file=sys.stderr)
        return 2
    except np.linalg.LinAlgError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
