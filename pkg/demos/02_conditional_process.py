"""Convert a process whose branches depend on a received message, then trace it.

The receive task gets a status value on a channel that no diagram element
sends on, so the configuration supplies that channel. Closing the system tries
each status value in turn.

Run: python3 demos/02_conditional_process.py
"""

from pathlib import Path

from bpmnpc.bpmn import parse_diagram
from bpmnpc.calculus import print_term, print_type
from bpmnpc.config import load_config
from bpmnpc.converter import convert_collaboration
from bpmnpc.emit import render_module
from bpmnpc.harness import close_system
from bpmnpc.semantics import explore, format_trace, maximal_traces

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "tests" / "fixtures"

diagram = parse_diagram((FIXTURES / "conditional.bpmn").read_bytes())
config = load_config((FIXTURES / "conditional.json").read_text())
out = convert_collaboration(diagram, config.conversion)

print("system:\n  " + print_term(out.system))
print("context:", ", ".join(f"{k} : {print_type(ty)}" for k, ty in out.context.items()))

for closed in close_system(out):
    graph = explore(closed.system, tau_only=True)
    for trace in maximal_traces(graph):
        print(f"[{closed.describe()}] {len(graph.states)} states: {format_trace(trace)}")

print("\n" + render_module(out, config.emit))
