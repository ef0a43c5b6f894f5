"""
J-Logic command line

Usage:
    python main.py eval --program P.jl --instance I.json [--freshen]
    python main.py check --program P.jl
    python main.py check-proper --instance I.json
    python main.py check-oo --program P.jl
    python main.py check-containment --left P1.jl --right P2.jl [--proper]
    python main.py chase --sigma S.jl [--Sigma D.jl] [--delta R,S]
    python main.py eliminate-equalities --program P.jl
    python main.py transform --mode properize|depack --program P.jl
    python main.py desugar --program P.jl

Global flags (before the subcommand):
    --config PATH  --limits derived=N,path=N,depth=N  --output-mode pairs|tree|freshened
    --format json|text  --seed N  --verbose

Exit codes: 0 success or positive verdict, 1 negative verdict,
2 static error or unmet precondition, 3 limit exceeded, 4 usage error.
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import structlog

from analysis.containment import decide_program_containment
from analysis.depack import eliminate_packing
from analysis.object_object import decide_object_object
from analysis.properize import properize_intermediates
from chase.dependencies import delta_for_all
from chase.procedure import decide_implication
from engine.evaluator import Evaluator
from language.desugar import desugar
from language.printer import format_program
from models.errors import JLogicError, LimitExceeded
from models.program import Jaegd
from models.validation import (
    Config,
    ContainmentKind,
    EvalLimits,
    ObjectObjectKind,
    OutputMode,
    VerdictFormat,
)
from pipeline.orchestrator import run_checks
from pipeline.reporter import Reporter
from unification.elimination import eliminate_equalities_jaegd, eliminate_equalities_program
from utils.config import get_settings
from utils.data_loaders import dump_instance, load_instance, load_jaegds, load_program
from utils.logging_config import configure_logging

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_STATIC = 2
EXIT_LIMIT = 3
EXIT_USAGE = 4

LIMIT_KEYS = {
    "derived": "max_derived_facts",
    "path": "max_path_length",
    "depth": "max_pack_depth",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_limits(text: str, base: EvalLimits) -> EvalLimits:
    """derived=N,path=N,depth=N; unnamed keys keep their configured value"""
    values = base.model_dump()
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, raw = part.partition("=")
        if not sep or key.strip() not in LIMIT_KEYS:
            raise UsageError(f"invalid --limits entry {part!r}; expected one of {', '.join(LIMIT_KEYS)}=N")
        try:
            values[LIMIT_KEYS[key.strip()]] = int(raw)
        except ValueError:
            raise UsageError(f"invalid --limits value {raw!r}")
    try:
        return EvalLimits(**values)
    except ValueError as e:
        raise UsageError(f"invalid --limits: {e}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jlogic", description="J-Logic: a logic query language for JSON objects")
    parser.add_argument("--config", help="configuration file (default: config.yaml)")
    parser.add_argument("--limits", help="evaluation limits, e.g. derived=1000,path=50,depth=8")
    parser.add_argument("--output-mode", choices=[m.value for m in OutputMode])
    parser.add_argument("--format", dest="verdict_format", choices=[f.value for f in VerdictFormat])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--verbose", "-v", action="count", default=0)

    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = commands.add_parser("eval", help="evaluate a program on an instance")
    p.add_argument("--program", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--freshen", action="store_true", help="replace packed keys by fresh identifiers")

    p = commands.add_parser("check", help="static checks on a program")
    p.add_argument("--program", required=True)

    p = commands.add_parser("check-proper", help="properness of every relation of an instance")
    p.add_argument("--instance", required=True)

    p = commands.add_parser("check-oo", help="does the program map proper instances to proper instances")
    p.add_argument("--program", required=True)

    p = commands.add_parser("check-containment", help="containment of P1 in P2 per output relation")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--proper", action="store_true", help="restrict to proper flat instances")

    p = commands.add_parser("chase", help="implication of jaegds by chasing")
    p.add_argument("--sigma", required=True, help="jaegds to test")
    p.add_argument("--Sigma", dest="sigma_deps", help="dependency jaegds")
    p.add_argument("--delta", help="comma-separated relations whose properness jaegds join the dependencies")

    p = commands.add_parser("eliminate-equalities", help="print the equality-free program")
    p.add_argument("--program", required=True)

    p = commands.add_parser("transform", help="properize intermediates or eliminate packing")
    p.add_argument("--mode", required=True, choices=["properize", "depack"])
    p.add_argument("--program", required=True)

    p = commands.add_parser("desugar", help="print the program without sugar variables")
    p.add_argument("--program", required=True)

    return parser


class JLogicCLI:
    """Routes subcommands to the engine and analyses"""

    def __init__(self, settings: Config):
        self.settings = settings
        self.reporter = Reporter(settings.verdict_format, settings.indent)

    def run(self, args: argparse.Namespace) -> int:
        handler = getattr(self, "cmd_" + args.command.replace("-", "_"))
        logger.info("command_started", command=args.command)
        return handler(args)

    def _emit(self, text: str):
        print(text.rstrip("\n"))

    # -- evaluation ----------------------------------------------------------

    def cmd_eval(self, args) -> int:
        program = load_program(args.program)
        instance = load_instance(args.instance)
        output = Evaluator(self.settings.limits).eval_query(program, instance)
        mode = OutputMode.FRESHENED if args.freshen else self.settings.output_mode
        self._emit(dump_instance(output, mode, self.settings.freshen_prefix, self.settings.indent))
        return EXIT_OK

    # -- static checks -------------------------------------------------------

    def cmd_check(self, args) -> int:
        result = run_checks(program=load_program(args.program), subject=Path(args.program).name)
        self._emit(self.reporter.generate_check_report(result))
        return EXIT_STATIC if result.failed_checks else EXIT_OK

    def cmd_check_proper(self, args) -> int:
        result = run_checks(instance=load_instance(args.instance), subject=Path(args.instance).name)
        self._emit(self.reporter.generate_check_report(result))
        return EXIT_NEGATIVE if result.failed_checks else EXIT_OK

    # -- analyses ------------------------------------------------------------

    def cmd_check_oo(self, args) -> int:
        verdict = decide_object_object(load_program(args.program))
        self._emit(self.reporter.generate_verdict_report("check-oo", {"verdict": verdict}))
        return {
            ObjectObjectKind.YES: EXIT_OK,
            ObjectObjectKind.NO: EXIT_NEGATIVE,
            ObjectObjectKind.UNSUPPORTED: EXIT_STATIC,
        }[verdict.kind]

    def cmd_check_containment(self, args) -> int:
        left, right = load_program(args.left), load_program(args.right)
        verdicts = decide_program_containment(
            left, right, proper=args.proper, extra_lengths=self.settings.containment_extra_lengths
        )
        body = {
            "scope": "proper-flat" if args.proper else "flat",
            "contained": all(v.contained for v in verdicts.values()),
            "relations": verdicts,
        }
        self._emit(self.reporter.generate_verdict_report("check-containment", body))
        kinds = {v.kind for v in verdicts.values()}
        if ContainmentKind.PRECONDITION_FAILED in kinds:
            return EXIT_STATIC
        return EXIT_NEGATIVE if ContainmentKind.NOT_CONTAINED in kinds else EXIT_OK

    def cmd_chase(self, args) -> int:
        sigmas = load_jaegds(args.sigma)
        deps: List[Jaegd] = []
        if args.sigma_deps:
            for j in load_jaegds(args.sigma_deps):
                deps.extend(eliminate_equalities_jaegd(j))
        if args.delta:
            deps.extend(delta_for_all([r.strip() for r in args.delta.split(",") if r.strip()]))

        results = []
        for sigma in sigmas:
            for form in eliminate_equalities_jaegd(sigma):
                results.append(decide_implication(form, deps))
        body = {
            "dependencies": [str(j) for j in deps],
            "implied": all(v.implied for v in results),
            "results": results,
        }
        self._emit(self.reporter.generate_verdict_report("chase", body))
        return EXIT_OK if body["implied"] else EXIT_NEGATIVE

    # -- transformations -----------------------------------------------------

    def cmd_eliminate_equalities(self, args) -> int:
        program = eliminate_equalities_program(desugar(load_program(args.program)))
        self._emit(format_program(program))
        return EXIT_OK

    def cmd_transform(self, args) -> int:
        program = load_program(args.program)
        symbols = self.settings.transform
        if args.mode == "properize":
            transformed = properize_intermediates(program, symbols.properize_marker)
        else:
            transformed = eliminate_packing(program, symbols.pack_markers, symbols.cursor_symbols)
        self._emit(format_program(transformed))
        return EXIT_OK

    def cmd_desugar(self, args) -> int:
        self._emit(format_program(desugar(load_program(args.program))))
        return EXIT_OK


def _settings(args: argparse.Namespace) -> Config:
    settings = get_settings(args.config)
    updates: Dict = {}
    if args.limits:
        updates["limits"] = parse_limits(args.limits, settings.limits)
    if args.output_mode:
        updates["output_mode"] = OutputMode(args.output_mode)
    if args.verdict_format:
        updates["verdict_format"] = VerdictFormat(args.verdict_format)
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.verbose:
        updates["log_level"] = "INFO" if args.verbose == 1 else "DEBUG"
    return settings.model_copy(update=updates)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the exit code"""
    try:
        args = build_parser().parse_args(argv)
        settings = _settings(args)
    except (UsageError, ValueError) as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    configure_logging(settings.log_level, settings.log_json)
    structlog.contextvars.bind_contextvars(seed=settings.seed)

    try:
        return JLogicCLI(settings).run(args)
    except LimitExceeded as e:
        logger.warning("limit_exceeded", kind=e.kind, limit=e.limit)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except (JLogicError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_STATIC
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        structlog.contextvars.clear_contextvars()


if __name__ == "__main__":
    sys.exit(main())
