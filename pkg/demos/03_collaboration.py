"""Two pools exchanging one message, from diagram to module text.

Run: python3 demos/03_collaboration.py
"""

from pathlib import Path

from bpmnpc.bpmn import parse_diagram
from bpmnpc.calculus import print_term
from bpmnpc.config import load_config
from bpmnpc.converter import convert_collaboration
from bpmnpc.emit import render_module
from bpmnpc.semantics import explore, format_trace, maximal_traces

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

diagram = parse_diagram((FIXTURES / "collaboration.bpmn").read_bytes())
config = load_config((FIXTURES / "collaboration.json").read_text())
out = convert_collaboration(diagram, config.conversion)

print(print_term(out.system), end="\n\n")
print("declared:", ", ".join(out.declarations.identifiers()))

# No phantom channels here, so the converted system is already closed.
graph = explore(out.system, tau_only=True)
traces = maximal_traces(graph)
print(f"{len(graph.states)} states, {len(traces)} interleavings")
for t in traces:
    print("  ", format_trace(t))

print()
print(render_module(out, config.emit), end="")
