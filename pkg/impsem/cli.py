"""Command-line front end: imp run|vcg|absint|check."""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from .absint import AbEnvFormatError, AnalysisSetupError, Analyzer, IntervalDomain, format_abenv, initial_abenv, parse_abenv
from .assertions import (
    Counterexample, EnvFormatError, PredEnv, Valuation, builtin_pred_env, samples_for, unbound_predicates,
    valid_l_sampled,
)
from .concrete import Done, ExecError, UnboundRead, exec_fuel, format_env, parse_env
from .config import Settings, get_settings
from .hoare_vcg import exec_annotated, pc, vcg
from .models import ConditionReport, CounterexampleReport, Report, RunConfig, Status, ViolationReport
from .syntax import Condition, ParseError, format_path, parse_assert, parse_bare, parse_instr, pretty, true_assert

logger = logging.getLogger(__name__)

INPUT_ERRORS = (ParseError, EnvFormatError, AbEnvFormatError, AnalysisSetupError, ValidationError, OSError)


def _warn_unbound(m: PredEnv, node) -> None:
    for name in unbound_predicates(m, node):
        logger.warning(f"Predicate {name!r} is not defined; it is interpreted as true")


def _check_conditions(m: PredEnv, conditions: List[Condition], cfg: RunConfig):
    """Sampled validity of every condition; returns the condition and counterexample reports"""
    reports = [ConditionReport(hyp=pretty(c.hyp), concl=pretty(c.concl)) for c in conditions]
    if not conditions:
        return reports, []
    samples = samples_for(conditions, cfg.samples, cfg.seed)
    failures = [
        CounterexampleReport(condition=pretty(c), valuation=str(verdict.g))
        for c, verdict in valid_l_sampled(m, conditions, samples)
        if isinstance(verdict, Counterexample)
    ]
    logger.info(f"{len(conditions)} conditions checked on {len(samples)} valuations, {len(failures)} refuted")
    return reports, failures


def _outcome_fields(outcome) -> dict:
    match outcome:
        case Done(env):
            return {"status": Status.DONE, "env": format_env(env), "outcome": "done"}
        case ExecError(reason, at):
            kind = "read" if isinstance(reason, UnboundRead) else "write"
            return {
                "status": Status.RUNTIME_ERROR,
                "outcome": "error",
                "message": f"unbound variable {reason.name} ({kind}) at {format_path(at)}",
            }
    return {"status": Status.OUT_OF_FUEL, "outcome": "out_of_fuel", "message": "fuel exhausted"}


def cmd_run(cfg: RunConfig) -> Report:
    i = parse_bare(cfg.program)
    r = parse_env(cfg.env)
    return Report(command="run", **_outcome_fields(exec_fuel(cfg.fuel, r, i)))


def cmd_vcg(cfg: RunConfig) -> Report:
    m = builtin_pred_env()
    i = parse_instr(cfg.program)
    post = parse_assert(cfg.post) if cfg.post else true_assert
    _warn_unbound(m, i)
    _warn_unbound(m, post)
    conditions = vcg(i, post)
    reports, failures = _check_conditions(m, conditions, cfg)
    return Report(
        command="vcg",
        status=Status.COUNTEREXAMPLE if failures else Status.NO_COUNTEREXAMPLE,
        precondition=pretty(pc(i, post)),
        conditions=reports,
        counterexample=failures,
    )


def cmd_absint(cfg: RunConfig) -> Report:
    domain = IntervalDomain()
    analyzer = Analyzer(domain)
    i = parse_bare(cfg.program)
    l = initial_abenv(i, parse_abenv(cfg.abenv, domain), domain)
    annotated, final = analyzer.abstract_i(i, l)
    final_assert = analyzer.to_a_opt(final)
    report = Report(
        command="absint",
        status=Status.ANALYZED,
        env=format_abenv(final, domain),
        annotated=pretty(annotated),
        final=pretty(final_assert),
    )
    if cfg.verify:
        reports, failures = _check_conditions(builtin_pred_env(), vcg(annotated, final_assert), cfg)
        report.precondition = pretty(pc(annotated, final_assert))
        report.conditions = reports
        report.counterexample = failures
        if failures:
            report.status = Status.COUNTEREXAMPLE
    return report


def cmd_check(cfg: RunConfig) -> Report:
    m = builtin_pred_env()
    i = parse_instr(cfg.program)
    r = parse_env(cfg.env)
    _warn_unbound(m, i)
    outcome, violations = exec_annotated(cfg.fuel, m, Valuation(), r, i)
    report = Report(command="check", **_outcome_fields(outcome))
    if violations:
        report.violations = [ViolationReport(path=format_path(p), assertion=pretty(a)) for p, a in violations]
        report.status = Status.VIOLATIONS
        report.message = f"first violation at {format_path(violations[0][0])}"
    return report


COMMANDS: Dict[str, Callable[[RunConfig], Report]] = {
    "run": cmd_run,
    "vcg": cmd_vcg,
    "absint": cmd_absint,
    "check": cmd_check,
}


def execute(cfg: RunConfig) -> Report:
    """Run one command; malformed input becomes an invalid_input report"""
    logger.info(f"Running {cfg.command} on {cfg.source}")
    try:
        report = COMMANDS[cfg.command](cfg)
    except INPUT_ERRORS as e:
        return Report(command=cfg.command, status=Status.INVALID_INPUT, message=str(e))
    logger.info(f"{cfg.command} finished with status {report.status.value}")
    return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("program", nargs="?", help="program file, or - for standard input")
    common.add_argument("-e", "--expr", help="program text given inline")
    common.add_argument("--env", default="", help="initial environment, e.g. x=0,y=0,n=3")
    common.add_argument("--abenv", default="", help="initial abstract environment, e.g. x=[0,0],n=[-inf,+inf]")
    common.add_argument("--post", help="postcondition assertion (default: true)")
    common.add_argument("--fuel", type=int, help="iteration budget of every loop")
    common.add_argument("--samples", type=int, help="random valuations used for validity checks")
    common.add_argument("--seed", type=int, help="seed of the valuation sampler")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--verify", action="store_true", help="absint: check the annotated result with vcg")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="imp", description="Semantics toolkit for a small while language")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="execute a program")
    sub.add_parser("vcg", parents=[common], help="verification conditions of an annotated program")
    sub.add_parser("absint", parents=[common], help="interval analysis producing an annotated program")
    sub.add_parser("check", parents=[common], help="execute while checking annotations")
    return parser


def _read_program(args: argparse.Namespace) -> tuple:
    if args.expr is not None:
        return args.expr, "<expr>"
    if args.program is None or args.program == "-":
        return sys.stdin.read(), "<stdin>"
    with open(args.program, encoding="utf-8") as f:
        return f.read(), args.program


def _configure_logging(settings: Settings, verbosity: int) -> None:
    level = logging.getLevelName(settings.log_level)
    if not isinstance(level, int):
        level = logging.WARNING
    if verbosity == 1:
        level = min(level, logging.INFO)
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
    except ValidationError as e:
        print(f"error: invalid configuration: {e}", file=sys.stderr)
        return 1
    _configure_logging(settings, args.verbose)

    try:
        program, source = _read_program(args)
        cfg = RunConfig(
            command=args.command,
            program=program,
            source=source,
            env=args.env,
            abenv=args.abenv,
            post=args.post,
            fuel=settings.fuel if args.fuel is None else args.fuel,
            samples=settings.samples if args.samples is None else args.samples,
            seed=settings.seed if args.seed is None else args.seed,
            format=args.format,
            verify=args.verify,
        )
    except INPUT_ERRORS as e:
        report = Report(command=args.command, status=Status.INVALID_INPUT, message=str(e))
    else:
        try:
            report = execute(cfg)
        except Exception as e:
            logger.error(f"Unexpected failure in {args.command}: {str(e)}")
            raise

    if report.status == Status.INVALID_INPUT:
        print(f"error: {report.message}", file=sys.stderr)
    if args.format == "json":
        print(report.to_json())
    elif report.status != Status.INVALID_INPUT:
        print(report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
