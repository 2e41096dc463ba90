"""Command-line runner: load a program and a trace, execute instants.

Exit codes: 0 the program terminated, 3 still alive when the run stopped,
4 the program or trace failed to parse or compile, 5 a runtime failure
(uncaught abort, micro-step limit, instantaneous loop).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .core import (
    InstantaneousLoop,
    InstantRecord,
    InstantTrace,
    Limits,
    MicroStepLimitExceeded,
    ReactiveError,
    UncaughtAbort,
)
from .dsl import CompileError, ParseError, compile_expr, parse_program, parse_trace
from .kernel import Environment
from .world import EMPTY_INSTANT, InstantEvents

EXIT_TERMINATED = 0
EXIT_ALIVE = 3
EXIT_INPUT_ERROR = 4
EXIT_RUNTIME_ERROR = 5


@dataclass
class RunConfig:
    program_path: str
    trace_path: str | None = None
    max_instants: int = 1000
    max_micro: int = 10_000
    max_loop_restarts: int = 1_000_000
    format: str = "text"
    run_to_termination: bool = False

    def __post_init__(self) -> None:
        if self.max_instants < 1 or self.max_micro < 1 or self.max_loop_restarts < 1:
            raise ValueError("limits must be positive")
        if self.format not in ("text", "json"):
            raise ValueError(f"unknown format {self.format!r}")


def _error_label(error: ReactiveError) -> str:
    if isinstance(error, UncaughtAbort):
        return f"UncaughtAbort:{error.tag}"
    if isinstance(error, MicroStepLimitExceeded):
        return "MicroStepLimitExceeded"
    if isinstance(error, InstantaneousLoop):
        return "InstantaneousLoop"
    return type(error).__name__


def run(config: RunConfig) -> tuple[InstantTrace, int]:
    """Parse, compile, and react instant by instant.

    Each instant installs the next trace entry (an empty event set when no
    trace is given or the trace is exhausted under --run-to-termination),
    reacts once, and records the outputs and the root status. The run stops
    at termination, at the end of the trace, or at the instant budget.
    """
    ast = parse_program(Path(config.program_path).read_text(encoding="utf-8"))
    events: list[InstantEvents] | None = None
    if config.trace_path is not None:
        events = parse_trace(Path(config.trace_path).read_text(encoding="utf-8"))

    env = Environment(
        limits=Limits(
            max_micro_steps=config.max_micro,
            max_loop_restarts=config.max_loop_restarts,
        )
    )
    root = compile_expr(ast, env)

    trace = InstantTrace()
    for index in range(1, config.max_instants + 1):
        if events is not None and index > len(events):
            if not config.run_to_termination:
                break
            instant = EMPTY_INSTANT
        elif events is not None:
            instant = events[index - 1]
        else:
            instant = EMPTY_INSTANT
        env.world.apply_instant(instant)
        try:
            done = env.react(root)
        except ReactiveError as error:
            trace.error = _error_label(error)
            break
        trace.instants.append(
            InstantRecord(index, env.world.drain_output(), env.statuses[root])
        )
        if done:
            trace.terminated = True
            break

    if trace.terminated:
        code = EXIT_TERMINATED
    elif trace.error is not None:
        code = EXIT_RUNTIME_ERROR
    else:
        code = EXIT_ALIVE
    return trace, code


def format_trace(trace: InstantTrace, format: str = "text") -> str:
    """Render a trace deterministically, one instant per line in text mode."""
    if format == "json":
        payload = {
            "instants": [
                {
                    "instant": record.index,
                    "outputs": record.outputs,
                    "status": record.status.name,
                }
                for record in trace.instants
            ],
            "summary": {
                "terminated": trace.terminated,
                "instants_run": trace.instants_run,
                "error": trace.error,
            },
        }
        return json.dumps(payload, indent=2) + "\n"
    lines = []
    for record in trace.instants:
        if record.outputs:
            lines.append(f"{record.index}: " + "|".join(record.outputs))
        else:
            lines.append(f"{record.index}:")
    if trace.error is not None:
        lines.append(f"error: {trace.error}")
    else:
        lines.append("terminated" if trace.terminated else "alive")
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="instants",
        description="Run a reactive program against a scripted event trace.",
    )
    parser.add_argument("--program", required=True, metavar="FILE", help="program source file")
    parser.add_argument("--trace", metavar="FILE", help="event trace file, one instant per line")
    parser.add_argument("--max-instants", type=int, default=1000, metavar="N")
    parser.add_argument("--max-micro", type=int, default=10_000, metavar="N")
    parser.add_argument("--max-loop-restarts", type=int, default=1_000_000, metavar="N")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument(
        "--run-to-termination",
        action="store_true",
        help="keep reacting with empty instants after the trace ends",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = RunConfig(
            program_path=args.program,
            trace_path=args.trace,
            max_instants=args.max_instants,
            max_micro=args.max_micro,
            max_loop_restarts=args.max_loop_restarts,
            format=args.format,
            run_to_termination=args.run_to_termination,
        )
    except ValueError as error:
        print(f"instants: {error}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        trace, code = run(config)
    except (ParseError, CompileError, OSError) as error:
        print(f"instants: {error}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    sys.stdout.write(format_trace(trace, config.format))
    if trace.error is not None:
        print(f"instants: runtime error: {trace.error}", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
