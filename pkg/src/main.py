"""
Command-line entry point for the q-lab workbench.
Evaluates q-functions, computes double q-Laplace transforms, runs the
verification suites and solves the transform-method equations.
"""

import argparse
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent))

import config
from config import validate_config

from evaluation.report import generate_report, make_record, summarize
from evaluation.suites import SUITES, TRANSFORM_TOL, run_suite
from qapps.models import EquationId, EquationSpec
from qapps.pde import solve_equation
from qcore.combinatorics import INFINITY, q_binomial, q_factorial, q_number, q_pochhammer
from qcore.context import QContext, parse_scalar
from qcore.errors import (
    CatalogMissError,
    DivergenceError,
    DomainError,
    QLabError,
)
from qspecial.exponential import TrigSelector, q_exp_big, q_exp_small, q_trig
from qspecial.gamma import q_gamma_first, q_gamma_second
from qtransform.double import TransformKind, qlap2d_catalog, qlap2d_numeric
from qtransform.grammar import parse_atom, parse_descriptor, render_scalar, scalar
from qtransform.single import default_plan
from utils.debug_logger import DebugLogger
from utils.file_loader import write_records

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_DIVERGENCE = 3
EXIT_CATALOG_MISS = 4

FUNCTIONS = ("qnum", "qfact", "qbinom", "qpoch", "eq", "Eq", "trig", "gamma1", "gamma2")


@dataclass(frozen=True)
class RunConfig:
    """Parsed command-line configuration shared by every command."""

    q: str = "1/2"
    mode: str = "exact"
    tol: Optional[float] = None
    output: str = "json"
    out: Optional[str] = None
    seed: int = config.DEFAULT_SEED
    k_window: Tuple[int, int] = config.K_WINDOW
    verbose: bool = False
    debug: bool = False

    def context(self, mode: Optional[str] = None) -> QContext:
        tol = self.tol if self.tol is not None else config.DEFAULT_TOL
        return QContext.from_text(self.q, mode or self.mode, default_tol=tol)


def log(run: RunConfig, message: str) -> None:
    """Progress lines go to stderr so stdout carries only the report."""
    if run.verbose:
        print(message, file=sys.stderr)


def _banner(run: RunConfig, title: str) -> None:
    log(run, f"\n{'=' * 60}\n{title}\n{'=' * 60}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_eval(function: str, args: List[str], run: RunConfig) -> Dict[str, Any]:
    """
    Evaluate one q-function.

    Business Logic:
    - qnum a, qfact n, qbinom n k, qpoch a n|inf are exact in exact mode
    - eq z, Eq z, trig selector z and non-integer gamma arguments are float
    - the record is {function, args, q, value, value_float}; value_float is the
      float rendering of an exact value

    Raises:
        DomainError: unknown function, wrong arity or unparsable argument
    """
    if function not in FUNCTIONS:
        raise DomainError(f"unknown function {function!r}; choose from {', '.join(FUNCTIONS)}")
    ctx = run.context()
    arity = {"qbinom": 2, "qpoch": 2, "trig": 2}.get(function, 1)
    if len(args) != arity:
        raise DomainError(f"{function} takes {arity} argument(s), got {len(args)}")

    if function == "qnum":
        value = q_number(scalar(args[0]), ctx)
    elif function == "qfact":
        value = q_factorial(scalar(args[0]), ctx)
    elif function == "qbinom":
        value = q_binomial(scalar(args[0]), scalar(args[1]), ctx)
    elif function == "qpoch":
        order = INFINITY if args[1].lower() in ("inf", "infinity", "∞") else scalar(args[1])
        value = q_pochhammer(scalar(args[0]), order, ctx)
    elif function == "eq":
        value = q_exp_small(float(parse_scalar(args[0])), ctx)
    elif function == "Eq":
        value = q_exp_big(float(parse_scalar(args[0])), ctx)
    elif function == "trig":
        try:
            selector = TrigSelector(args[0])
        except ValueError as exc:
            raise DomainError(f"unknown q-trig selector {args[0]!r}") from exc
        value = q_trig(float(parse_scalar(args[1])), selector, ctx)
    elif function == "gamma1":
        value = q_gamma_first(scalar(args[0]), ctx)
    else:
        value = q_gamma_second(scalar(args[0]), ctx)

    return {
        "function": function,
        "args": list(args),
        "q": render_scalar(ctx.q),
        "value": value,
        "value_float": float(value),
    }


def _plans(kind: TransformKind, r, s, ctx: QContext, run: RunConfig):
    """Default lattices, or (None, None) to keep the cached axis sums when the window is the configured one."""
    if tuple(run.k_window) == tuple(config.K_WINDOW):
        return (None, None)
    k_min, k_max = run.k_window
    return (
        default_plan(kind.x_side, float(r), ctx, k_min=k_min, k_max=k_max),
        default_plan(kind.y_side, float(s), ctx, k_min=k_min, k_max=k_max),
    )


def cmd_transform(
    descriptor_text: str,
    kind: str,
    r_text: str,
    s_text: str,
    mode: str,
    run: RunConfig,
) -> Dict[str, Any]:
    """
    Double transform of a descriptor at (r, s): numeric lattice sum, catalog
    closed form, or both with their relative difference.

    Raises:
        DomainError: the descriptor or a scalar does not parse
        DivergenceError: the numeric sum diverges (names the axis)
        CatalogMissError: no closed form for this descriptor and kind
    """
    descriptor = parse_descriptor(descriptor_text)
    kind = TransformKind.of(kind)
    ctx = run.context("exact")
    r, s = scalar(r_text), scalar(s_text)
    tol = run.tol if run.tol is not None else TRANSFORM_TOL
    params = {"f": descriptor_text, "r": r, "s": s}

    numeric = catalog = None
    if mode in ("numeric", "both"):
        log(run, f"Step 1: Lattice sum ({kind.value}, k in [{run.k_window[0]}, {run.k_window[1]}])...")
        numeric = qlap2d_numeric(descriptor, float(r), float(s), kind, ctx, plans=_plans(kind, r, s, ctx, run))
        log(run, f"  → {numeric!r}")
    if mode in ("catalog", "both"):
        log(run, f"Step 2: Catalog lookup ({kind.value})...")
        image = qlap2d_catalog(descriptor, kind, ctx)
        if not image.in_region(r, s):
            log(run, f"  ⚠ ({r}, {s}) is outside the region {[str(c) for c in image.region]}")
        catalog = image.evaluate(r, s)
        log(run, f"  → {image} = {catalog}")
        params["closed_form"] = str(image)

    if numeric is not None and catalog is not None:
        return make_record("transform", kind.value, render_scalar(ctx.q), params, numeric, catalog, tol)
    return {
        "op": "transform",
        "kind": kind.value,
        "q": render_scalar(ctx.q),
        "params": params,
        "value_numeric": numeric,
        "value_catalog": catalog,
        "rel_diff": None,
        "status": "pass",
    }


def cmd_verify(suite: str, full: bool, run: RunConfig, logger: DebugLogger) -> List[Dict[str, Any]]:
    """Run a verification suite and return its rows, logging each stage."""
    ctx = run.context()
    _banner(run, f"Verifying '{suite}' suite (q={run.q}, mode={run.mode}{', full grid' if full else ''})")
    stages = run_suite(suite, ctx, full=full, seed=run.seed)
    rows = []
    for stage, stage_rows in stages.items():
        summary = summarize(stage_rows)
        mark = "✓" if summary["all_passed"] else "✗"
        log(run, f"{mark} {stage}: {summary['passed_rows']}/{summary['total_rows']} rows passed")
        logger.log_stage(stage, stage_rows)
        rows.extend(stage_rows)
    log(run, generate_report(summarize(rows)))
    return rows


def cmd_solve(
    equation: str,
    c: str,
    alpha: str,
    beta: str,
    f_text: Optional[str],
    g_text: Optional[str],
    run: RunConfig,
) -> Dict[str, Any]:
    """Solve one equation and return its report record."""
    spec = EquationSpec(
        id=EquationId(equation),
        c=scalar(c),
        alpha=scalar(alpha),
        beta=scalar(beta),
        f=parse_atom(f_text) if f_text else None,
        g=parse_atom(g_text) if g_text else None,
    )
    ctx = run.context()
    _banner(run, f"Solving {spec.id.value} (q={run.q})")
    report = solve_equation(spec, ctx)
    mark = "✓" if report.inversion_complete else "⚠"
    log(run, f"{mark} inversion {'complete' if report.inversion_complete else 'incomplete'}")
    log(run, f"  residual_max={report.residual_max} over {report.lattice_points_checked} points")
    return report.to_record()


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _common(parser: argparse.ArgumentParser, mode_flag: bool = True) -> None:
    parser.add_argument("--q", default="1/2", help="deformation parameter, e.g. 1/2 or 0.5")
    if mode_flag:
        parser.add_argument("--mode", choices=("exact", "float"), default="exact")
    parser.add_argument("--tol", type=float, default=None, help="tolerance (overrides Q_LAB_TOL)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None, help="report path (default: stdout)")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    parser.add_argument("--verbose", action="store_true", help="progress on stderr")
    parser.add_argument("--debug", action="store_true", help="write per-stage logs under output/debug_logs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="q-lab", description="Double q-Laplace transform workbench")
    commands = parser.add_subparsers(dest="command", required=True)

    p_eval = commands.add_parser("eval", help="evaluate a q-function")
    p_eval.add_argument("function")
    p_eval.add_argument("args", nargs="*")
    _common(p_eval)

    p_transform = commands.add_parser("transform", help="double transform of a descriptor")
    p_transform.add_argument("descriptor")
    p_transform.add_argument("--kind", default="1", choices=("1", "2", "3", "4", "K1", "K2", "K3", "K4"))
    p_transform.add_argument("--r", default="1")
    p_transform.add_argument("--s", default="1")
    p_transform.add_argument("--mode", choices=("numeric", "catalog", "both"), default="both")
    p_transform.add_argument(
        "--k-window",
        nargs=2,
        type=int,
        metavar=("LO", "HI"),
        default=list(config.K_WINDOW),
        help="lattice index window of the numeric sums (default: Q_LAB_K_WINDOW)",
    )
    _common(p_transform, mode_flag=False)

    p_verify = commands.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=SUITES)
    p_verify.add_argument("--full", action="store_true", help="run the whole q grid")
    _common(p_verify)

    p_solve = commands.add_parser("solve", help="solve an equation by the transform method")
    p_solve.add_argument("equation", choices=[e.value for e in EquationId])
    p_solve.add_argument("--c", default="1")
    p_solve.add_argument("--alpha", default="0")
    p_solve.add_argument("--beta", default="0")
    p_solve.add_argument("--f", default=None, help="atom, e.g. mono:2, eq:1/2, const:1, zero")
    p_solve.add_argument("--g", default=None)
    _common(p_solve)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    mode = args.mode if args.command != "transform" else "exact"
    return RunConfig(
        q=args.q,
        mode=mode,
        tol=args.tol,
        output=args.format,
        out=args.out,
        seed=args.seed,
        k_window=tuple(getattr(args, "k_window", config.K_WINDOW)),
        verbose=args.verbose,
        debug=args.debug,
    )


def _fail(message: str, code: int) -> int:
    print(f"✗ {message}", file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point.

    Business Logic:
    - validates the numeric configuration first (exit 2 when unusable)
    - the report goes to --out or stdout; progress goes to stderr with --verbose
    - exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
      3 divergence, 4 catalog miss
    """
    args = build_parser().parse_args(argv)

    is_valid, errors = validate_config()
    if not is_valid:
        return _fail("Configuration errors found:\n" + "\n".join(errors), EXIT_USAGE)

    run = _run_config(args)
    run_name = f"{args.command}_{getattr(args, 'suite', None) or getattr(args, 'equation', None) or 'run'}"
    logger = DebugLogger(str(config.OUTPUT_DIR), run_name, enabled=run.debug)
    logger.log_config({k: v for k, v in asdict(run).items()})

    code = EXIT_OK
    try:
        if args.command == "eval":
            records = cmd_eval(args.function, args.args, run)
        elif args.command == "transform":
            records = cmd_transform(args.descriptor, args.kind, args.r, args.s, args.mode, run)
            if records["status"] != "pass":
                code = EXIT_VERIFICATION
        elif args.command == "verify":
            records = cmd_verify(args.suite, args.full, run, logger)
            if not summarize(records)["all_passed"]:
                code = EXIT_VERIFICATION
        else:
            records = cmd_solve(args.equation, args.c, args.alpha, args.beta, args.f, args.g, run)
        if args.command != "verify":
            logger.log_result(args.command, records)
        write_records(records, run.output, run.out)
    except DivergenceError as exc:
        logger.log_error(args.command, exc)
        code = _fail(str(exc), EXIT_DIVERGENCE)
    except CatalogMissError as exc:
        logger.log_error(args.command, exc)
        code = _fail(str(exc), EXIT_CATALOG_MISS)
    except (DomainError, ValueError) as exc:
        logger.log_error(args.command, exc)
        code = _fail(str(exc), EXIT_USAGE)
    except QLabError as exc:
        logger.log_error(args.command, exc)
        code = _fail(f"{type(exc).__name__}: {exc}", EXIT_VERIFICATION)
    finally:
        logger.save_metadata()

    return code


if __name__ == "__main__":
    sys.exit(main())
