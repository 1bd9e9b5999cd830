"""Exhaustive checks of join patterns in a closed harness.

The harness puts one trigger output per incoming flow beside the join. Flow
channels stay free so each state shows which triggers have fired: a flow name
disappears once its trigger and the join's input on it have communicated.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from bpmnpc.calculus import GroupAtom, Name, Out, Par, free_names, parse_process
from bpmnpc.converter import FreshNames, Join, join_pattern
from bpmnpc.semantics import explore, maximal_traces, step

CONT = Name("c")


@dataclass(frozen=True)
class JoinReport:
    states: int
    truncated: bool
    traces: int
    # (fired flow indices, continuation enabled) for every state
    observations: frozenset[tuple[frozenset[int], bool]]

    def enabled_with(self, fired: set[int]) -> bool:
        return (frozenset(fired), True) in self.observations


def harness(kind: Join, n: int, m: int | None = None):
    flows = [Name(f"f{i}") for i in range(1, n + 1)]
    join = join_pattern(kind, flows, parse_process("c!<t>.0"), GroupAtom("G"), FreshNames("h"), m=m)
    triggers = [parse_process(f"f{i}!<k>.0") for i in range(1, n + 1)]
    term = join
    for trig in triggers:
        term = Par(term, trig)
    return term


def run(kind: Join, n: int, m: int | None = None, max_states: int = 1000) -> JoinReport:
    g = explore(harness(kind, n, m), max_states=max_states, tau_only=True)
    obs = set()
    for state in g.states.values():
        live = {x.base for x in free_names(state)}
        fired = frozenset(i for i in range(1, n + 1) if f"f{i}" not in live)
        enabled = any(isinstance(tr.label, Out) and tr.label.chan == CONT for tr in step(state))
        obs.add((fired, enabled))
    traces = 0 if g.truncated else len(maximal_traces(g))
    return JoinReport(len(g.states), g.truncated, traces, frozenset(obs))


def n_of_n_holds(r: JoinReport, n: int) -> bool:
    everything = frozenset(range(1, n + 1))
    only_when_all = all(fired == everything for fired, enabled in r.observations if enabled)
    return only_when_all and r.enabled_with(everything)


def m_of_n_holds(r: JoinReport, n: int, m: int) -> bool:
    silent_below = all(not enabled for fired, enabled in r.observations if len(fired) < m)
    every_subset = all(r.enabled_with(set(s)) for s in combinations(range(1, n + 1), m))
    return silent_below and every_subset
