"""
Command-line interface of the pclq toolkit.

Subcommands generate systems and datasets, estimate models, solve Riccati
equations, report structure, and run the success-frequency sweep.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from typing import Any, NoReturn

import numpy as np
from pydantic import ValidationError

from pclq import __version__
from pclq.config import get_settings
from pclq.core.exceptions import NumericalError, PclqError
from pclq.core.riccati import solve_dare
from pclq.core.stability import spectral_radius_estimate
from pclq.estimation.base import EstimatorKind
from pclq.estimation.learner import estimate
from pclq.estimation.thresholding import soft_threshold
from pclq.harness.base import ESTIMATOR_TAGS, ExperimentConfig
from pclq.harness.report import emit_csv
from pclq.harness.runner import run_sweep
from pclq.structure.analysis import (
    block_partition_sparsity,
    controllability_matrix,
    linf_block_norm,
    numeric_rank,
    relevant_disturbances_matrix,
    relevant_value_norm,
)
from pclq.structure.subspaces import pc_decompose
from pclq.synth.base import NoiseSpec, PcLqSpec
from pclq.synth.generators import gen_pclq, sample_transitions
from pclq.synth.io import format_yaml, read_dataset, read_system, write_dataset, write_estimate, write_system
from pclq.synth.rng import CounterRng

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

ESTIMATE_KINDS: dict[str, EstimatorKind] = {
    "ols": "ols",
    "moment": "second_moment",
    "semiparam": "semiparametric",
}


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser that exits with the usage-error code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        msg = f"expected comma-separated integers, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from e


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, get_settings().log_level)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def _print(payload: dict[str, Any]) -> None:
    sys.stdout.write(format_yaml(payload))


def _rows(m: np.ndarray) -> list[list[float]]:
    return [[float(x) for x in row] for row in m]


def cmd_gen(args: argparse.Namespace) -> int:
    """Write a synthetic PC-LQ system file."""
    spec = PcLqSpec(
        s_c=args.s_c,
        s_e=args.s_e,
        d=args.d,
        d_u=args.d_u,
        rho1=args.rho1,
        rho2=args.rho2,
        rho3=args.rho3,
        seed=args.seed,
        q_mode=args.q_mode,
        block_norm=args.block_norm,
    )
    generated = gen_pclq(spec)
    if not generated.assumption_holds:
        logger.warning(f"||A_3||_inf = {generated.linf_a3:.4f} >= 1: the irrelevant block is not L-infinity stable")
    metadata = {"seed": spec.seed, "block_norm": spec.block_norm, "linf_a3": float(generated.linf_a3)}
    write_system(args.out, generated.system, generated.blocks, metadata)
    _print({"system": str(args.out), "d": spec.d, "linf_a3": float(generated.linf_a3)})
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    """Sample transitions from a system file and write a dataset file."""
    system, blocks = read_system(args.system)
    noise = NoiseSpec(sigma0=args.sigma0, sigma_u=args.sigma_u, sigma_xi=args.sigma_xi)
    ds = sample_transitions(system, args.n, noise, CounterRng(args.seed))
    write_dataset(args.out, ds, blocks)
    _print({"dataset": str(args.out), "N": ds.n, "d": ds.d})
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    """Estimate and soft-threshold (A, B) from a dataset file."""
    ds, blocks = read_dataset(args.data)
    known_b = read_system(args.known_b)[0].b if args.known_b else None
    result = estimate(ds, ESTIMATE_KINDS[args.kind], known_b)
    a_bar = soft_threshold(result.a_hat, args.eps)
    b_bar = result.b_hat if known_b is not None else soft_threshold(result.b_hat, args.eps)

    report: dict[str, Any] = {
        "kind": args.kind,
        "eps": float(args.eps),
        "N": ds.n,
        "nonzeros": int(np.count_nonzero(a_bar)),
        "failed_entries": result.failed_entries,
    }
    if blocks is not None:
        forced_zero = blocks.zero_mask()
        report["false_positive_zeros"] = int(np.sum(forced_zero & (a_bar != 0.0)))
        report["missed_nonzeros"] = int(np.sum(~forced_zero & (a_bar == 0.0)))
    write_estimate(args.out, a_bar, b_bar, report)
    _print(report)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    """Solve the DARE of a system file and print P, K and the residual."""
    system, _ = read_system(args.system)
    solution = solve_dare(system, method=args.method, tol=args.tol)
    _print(
        {
            "method": args.method,
            "iterations": solution.iterations,
            "residual": float(solution.residual),
            "P": _rows(solution.p),
            "K": _rows(solution.k),
        }
    )
    return EXIT_OK


def cmd_structure(args: argparse.Namespace) -> int:
    """Print controllability and relevance ranks and the PC-LQ block report."""
    system, blocks = read_system(args.system)
    a, b = system.a, system.b
    partition = pc_decompose(a, b)
    rd = relevant_disturbances_matrix(a, partition.p_c)
    if blocks is None:
        blocks = block_partition_sparsity(a, b)
    a3 = a[np.ix_(blocks.block3, blocks.block3)]
    linf_a3 = linf_block_norm(a3)
    if linf_a3 >= 1.0:
        logger.warning(f"||A_3||_inf = {linf_a3:.4f} >= 1: the irrelevant block is not L-infinity stable")

    report: dict[str, Any] = {
        "rank_controllability": numeric_rank(controllability_matrix(a, b)),
        "rank_relevant_disturbances": numeric_rank(rd),
        "s_c": partition.s_c,
        "s_e": partition.s_e,
        "s": partition.s,
        "pc_residual": float(partition.residual),
        "blocks": [len(blocks.block1), len(blocks.block2), len(blocks.block3)],
        "linf_a3": float(linf_a3),
        "a3_stable": spectral_radius_estimate(a3).is_stable if a3.size else True,
    }
    try:
        report["relevant_value_norm"] = relevant_value_norm(system, blocks)
    except NumericalError as e:
        logger.warning(f"Relevant-subsystem DARE failed: {e}")
        report["relevant_value_norm"] = None
    _print(report)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    """Run the success-frequency sweep and write its CSV."""
    overrides = {
        "d_list": args.d_list,
        "n_grid": args.n_grid,
        "trials": args.trials,
        "eps": args.eps,
        "estimators": args.estimators,
        "known_b": args.known_b,
        "base_seed": args.seed,
    }
    if args.config:
        cfg = ExperimentConfig.from_yaml(args.config, **overrides)
    else:
        cfg = ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})
    rows = run_sweep(cfg, workers=args.workers)
    emit_csv(rows, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with all subcommands."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Random seed (default: settings)")
    common.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")

    parser = _ArgumentParser(prog="pclq", description="Learning to control partially controllable LQ systems")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    gen = sub.add_parser("gen", parents=[common], help="Generate a PC-LQ system file")
    gen.add_argument("--s-c", dest="s_c", type=int, default=5)
    gen.add_argument("--s-e", dest="s_e", type=int, default=5)
    gen.add_argument("--d", type=int, default=20)
    gen.add_argument("--d-u", dest="d_u", type=int, default=1)
    gen.add_argument("--rho1", type=float, default=1.0)
    gen.add_argument("--rho2", type=float, default=0.9)
    gen.add_argument("--rho3", type=float, default=0.9)
    gen.add_argument("--q-mode", dest="q_mode", choices=["i_onetwo", "identity"], default="i_onetwo")
    gen.add_argument(
        "--block-norm",
        dest="block_norm",
        choices=["spectral", "singular"],
        default="spectral",
        help="Rescale diagonal blocks by spectral radius or by top singular value",
    )
    gen.add_argument("--out", required=True, help="Output system file")
    gen.set_defaults(handler=cmd_gen)

    sample = sub.add_parser("sample", parents=[common], help="Sample transitions into a dataset file")
    sample.add_argument("--system", required=True, help="System file")
    sample.add_argument("--n", type=int, required=True, help="Number of transitions")
    sample.add_argument("--sigma0", type=float, default=1.0)
    sample.add_argument("--sigma-u", dest="sigma_u", type=float, default=1.0)
    sample.add_argument("--sigma-xi", dest="sigma_xi", type=float, default=1.0)
    sample.add_argument("--out", required=True, help="Output dataset file")
    sample.set_defaults(handler=cmd_sample)

    est = sub.add_parser("estimate", parents=[common], help="Estimate (A, B) from a dataset file")
    est.add_argument("--data", required=True, help="Dataset file")
    est.add_argument("--kind", choices=sorted(ESTIMATE_KINDS), default="moment")
    est.add_argument("--eps", type=float, default=0.1, help="Soft-threshold level")
    est.add_argument("--known-b", dest="known_b", default=None, help="System file whose B is used as known")
    est.add_argument("--out", required=True, help="Output estimate file")
    est.set_defaults(handler=cmd_estimate)

    solve = sub.add_parser("solve", parents=[common], help="Solve the DARE of a system file")
    solve.add_argument("--system", required=True, help="System file")
    solve.add_argument("--method", choices=["value", "policy", "reference"], default="value")
    solve.add_argument("--tol", type=float, default=None, help="Residual tolerance (default: settings)")
    solve.set_defaults(handler=cmd_solve)

    structure = sub.add_parser("structure", parents=[common], help="Report the PC-LQ structure of a system file")
    structure.add_argument("--system", required=True, help="System file")
    structure.set_defaults(handler=cmd_structure)

    exp = sub.add_parser("experiment", parents=[common], help="Run the success-frequency sweep")
    exp.add_argument("--config", default=None, help="Experiment config file (YAML)")
    exp.add_argument("--out", required=True, help="Output CSV file")
    exp.add_argument("--d-list", dest="d_list", type=_int_list, default=None)
    exp.add_argument("--n-grid", dest="n_grid", type=_int_list, default=None)
    exp.add_argument("--trials", type=int, default=None)
    exp.add_argument("--eps", type=float, default=None)
    exp.add_argument("--estimators", nargs="+", choices=sorted(ESTIMATOR_TAGS), default=None)
    exp.add_argument("--known-b", dest="known_b", action=argparse.BooleanOptionalAction, default=None)
    exp.add_argument("--workers", type=int, default=None, help="Process count (default: settings)")
    exp.set_defaults(handler=cmd_experiment)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run the command line.

    Returns:
        int: 0 on success, 1 on usage or input errors, 2 on numerical failure

    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    _configure_logging(args.verbose)
    if args.seed is None:
        args.seed = get_settings().default_seed if args.command != "experiment" else None

    try:
        return args.handler(args)
    except NumericalError:
        logger.exception(f"Numerical failure in '{args.command}'")
        return EXIT_NUMERICAL
    except (ValidationError, PclqError, ValueError, KeyError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
