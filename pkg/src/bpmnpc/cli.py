"""Command line: ``bpmnpc validate|convert|trace|parse-term``.

Exit status is 0 on success, 1 on invalid input or failed conversion and 2
when exploration hits its limits.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from .bpmn import BpmnError, parse_diagram
from .calculus.syntax import TermSyntaxError, parse_term, print_term
from .calculus.congruence import normalize
from .config import ConfigError, load_config
from .converter import ConversionError, convert_collaboration
from .emit import render_module
from .harness import close_system
from .semantics import explore, format_trace, maximal_traces
from .validate import validate

EXIT_OK, EXIT_ERROR, EXIT_TRUNCATED = 0, 1, 2


@dataclass(frozen=True)
class CliInvocation:
    command: str
    input_path: str
    config_path: str | None = None
    output_path: str | None = None
    max_states: int = 10_000
    max_depth: int = 1_000
    all_traces: bool = False

    def __post_init__(self) -> None:
        if self.command in ("convert", "trace") and not self.config_path:
            raise ValueError(f"{self.command} requires a configuration file")


def write_atomic(path: str, text: str) -> None:
    """Replace ``path`` with ``text`` so readers never see a partial file."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _convert(inv: CliInvocation):
    diagram = parse_diagram(_read(inv.input_path))
    cfg = load_config(_read(inv.config_path).decode("utf-8"))
    return convert_collaboration(diagram, cfg.conversion), cfg


def _trace(inv: CliInvocation, out: TextIO, err: TextIO) -> int:
    conversion, _ = _convert(inv)
    closures = close_system(conversion)
    total = 0
    for closed in closures:
        graph = explore(closed.system, inv.max_states, inv.max_depth, tau_only=True)
        if graph.truncated:
            err.write(f"exploration truncated after {len(graph.states)} states ({closed.describe()})\n")
            return EXIT_TRUNCATED
        traces = maximal_traces(graph)
        total += len(traces)
        if inv.all_traces:
            out.write(f"# drivers {closed.describe()}: {len(graph.states)} states\n")
            for tr in traces:
                out.write(format_trace(tr) + "\n")
    if not inv.all_traces:
        out.write(f"{total} maximal traces\n")
    return EXIT_OK


def run_cli(inv: CliInvocation, out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Run one command; diagnostics go to ``err`` (standard error by default)."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        if inv.command == "validate":
            violations = validate(parse_diagram(_read(inv.input_path)))
            for v in violations:
                out.write(f"{v}\n")
            return EXIT_ERROR if violations else EXIT_OK
        if inv.command == "convert":
            conversion, cfg = _convert(inv)
            text = render_module(conversion, cfg.emit)
            if inv.output_path:
                write_atomic(inv.output_path, text)
            else:
                out.write(text)
            return EXIT_OK
        if inv.command == "trace":
            return _trace(inv, out, err)
        if inv.command == "parse-term":
            term = parse_term(_read(inv.input_path).decode("utf-8"))
            out.write(print_term(normalize(term)) + "\n")
            return EXIT_OK
        err.write(f"unknown command {inv.command!r}\n")
        return EXIT_ERROR
    except (OSError, UnicodeDecodeError, BpmnError, ConfigError, ConversionError, TermSyntaxError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bpmnpc", description="BPMN to Privacy Calculus converter")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a diagram against the convertible subset")
    v.add_argument("input")

    c = sub.add_parser("convert", help="emit a module for a diagram")
    c.add_argument("input")
    c.add_argument("--config", "-c", required=True)
    c.add_argument("--output", "-o")

    t = sub.add_parser("trace", help="explore the closed system's silent moves")
    t.add_argument("input")
    t.add_argument("--config", "-c", required=True)
    t.add_argument("--max-states", type=int, default=10_000)
    t.add_argument("--max-depth", type=int, default=1_000)
    t.add_argument("--all-traces", action="store_true", help="print every maximal trace, not just the count")

    p = sub.add_parser("parse-term", help="print a term file in normal form")
    p.add_argument("input")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    inv = CliInvocation(
        command=args.command,
        input_path=args.input,
        config_path=getattr(args, "config", None),
        output_path=getattr(args, "output", None),
        max_states=getattr(args, "max_states", 10_000),
        max_depth=getattr(args, "max_depth", 1_000),
        all_traces=getattr(args, "all_traces", False),
    )
    return run_cli(inv)


if __name__ == "__main__":
    sys.exit(main())
