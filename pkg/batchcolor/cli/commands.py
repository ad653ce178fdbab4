"""Subcommand handlers. Each returns a process exit code."""

import functools
import logging
import sys
from argparse import Namespace
from typing import Callable

from batchcolor.cli.io import error_document, load_coloring, load_instance, write_document
from batchcolor.core.errors import BatchColorError
from batchcolor.core.graph import validate_coloring
from batchcolor.core.oracles import exact_optimum
from batchcolor.models.schemas import OracleResult, SolveResult, VerifyResult
from batchcolor.services.engine import run_duel, run_instance, run_trials
from batchcolor.services.registry import build_adversary, build_algorithm, parse_params

logger = logging.getLogger(__name__)


def handles_errors(command: Callable[[Namespace], int]) -> Callable[[Namespace], int]:
    """Turn library errors into an error document on stderr and the error's exit code."""

    @functools.wraps(command)
    def wrapper(args: Namespace) -> int:
        try:
            return command(args)
        except BatchColorError as e:
            logger.error(f"{command.__name__}: {e}")
            sys.stderr.write(error_document(e).model_dump_json(indent=2) + "\n")
            return e.exit_code

    return wrapper


def _algorithm_options(args: Namespace) -> dict:
    return {"schedule": getattr(args, "schedule", None), "seed": getattr(args, "seed", None)}


@handles_errors
def cmd_solve(args: Namespace) -> int:
    instance = load_instance(args.input)
    algorithm = build_algorithm(args.algorithm, **_algorithm_options(args))
    report = run_instance(algorithm, instance, args.objective, k=args.k)
    if not args.diagnostics:
        report.diagnostics = []
    write_document(SolveResult(colors=report.coloring(), report=report), args.out)
    return 0


@handles_errors
def cmd_adversary(args: Namespace) -> int:
    params = parse_params(args.params)
    if args.trials > 1:
        summary = run_trials(args.name, params, args.algorithm, args.trials, _algorithm_options(args),
                             args.objective)
        if not args.diagnostics:
            for t in summary.transcripts:
                t.report.diagnostics = []
        write_document(summary, args.out)
        return 0 if summary.passed == summary.trials else 2
    transcript = run_duel(build_algorithm(args.algorithm, **_algorithm_options(args)),
                          build_adversary(args.name, params), args.objective)
    if not args.diagnostics:
        transcript.report.diagnostics = []
    write_document(transcript, args.out)
    return 0 if transcript.guarantee.passed else 2


@handles_errors
def cmd_oracle(args: Namespace) -> int:
    g = load_instance(args.input).graph()
    cost, coloring = exact_optimum(g, args.objective)
    write_document(OracleResult(objective=args.objective, optimum=cost, colors=dict(coloring)), args.out)
    return 0


@handles_errors
def cmd_verify(args: Namespace) -> int:
    g = load_instance(args.input).graph()
    result = validate_coloring(g, load_coloring(args.coloring).colors)
    write_document(VerifyResult(**result.as_dict()), args.out)
    if not result.ok:
        logger.warning(f"coloring is not proper: {len(result.monochromatic_edges)} monochromatic edges, "
                       f"{len(result.uncolored)} uncolored")
    return 0 if result.ok else 2
