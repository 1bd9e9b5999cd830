"""Build the control-flow patterns by hand and watch a 2-of-3 join fire.

Run: python3 demos/01_patterns.py
"""

from bpmnpc.calculus import GroupAtom, Name, Par, parse_process, print_term
from bpmnpc.converter import FreshNames, Join, Split, join_pattern, split_pattern
from bpmnpc.semantics import explore, format_trace, maximal_traces

flows = [Name("f1"), Name("f2"), Name("f3")]
cont = parse_process("done!<t>.0")

print("parallel split :", print_term(split_pattern(Split.PARALLEL, flows)))
print("exclusive split:", print_term(split_pattern(Split.EXCLUSIVE, flows)))
print("choice join    :", print_term(join_pattern(Join.CHOICE, flows, cont)))

join = join_pattern(Join.M_OF_N, flows, cont, GroupAtom("G"), FreshNames("h"), m=2)
print("2-of-3 join    :", print_term(join))

# Fire all three incoming flows and follow only internal moves.
harness = Par(join, parse_process("f1!<k>.0 | f2!<k>.0 | f3!<k>.0"))
graph = explore(harness, tau_only=True)
traces = maximal_traces(graph)
print(f"\n{len(graph.states)} states, {len(traces)} maximal silent runs; one of them:")
print("  ", format_trace(traces[0]))
print("a terminal state:", print_term(graph.states[graph.sinks()[0]]))
