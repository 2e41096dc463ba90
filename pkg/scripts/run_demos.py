#!/usr/bin/env python3
"""Run every shipped demo program through the CLI and show the results."""
from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from instants.cli import RunConfig, format_trace, run  # noqa: E402

DEMOS = [
    ("merge_pair.rx", None),
    ("suspend_close.rx", None),
    ("keypad.rx", "keypad_enter.trace"),
    ("keypad.rx", "keypad_clear.trace"),
    ("keypad.rx", "keypad_overflow.trace"),
]


def main() -> int:
    demo_dir = REPO / "demos"
    for program, trace in DEMOS:
        label = program if trace is None else f"{program} + {trace}"
        print(f"=== {label}")
        config = RunConfig(
            program_path=str(demo_dir / program),
            trace_path=str(demo_dir / trace) if trace else None,
        )
        result, code = run(config)
        sys.stdout.write(format_trace(result))
        print(f"exit code: {code}")
        print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
