"""Structural checks restricting diagrams to the convertible BPMN subset."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .bpmn import Diagram, NodeKind, ProcessGraph, TaskKind, reachable_from


class Code(str, enum.Enum):
    START_HAS_IN = "START_HAS_IN"
    END_HAS_OUT = "END_HAS_OUT"
    MISSING_START = "MISSING_START"
    MISSING_END = "MISSING_END"
    TASK_MULTI_IN = "TASK_MULTI_IN"
    TASK_MULTI_MSG = "TASK_MULTI_MSG"
    SUBPROC_MULTI_IN = "SUBPROC_MULTI_IN"
    SUBPROC_MSGFLOW = "SUBPROC_MSGFLOW"
    INTERMEDIATE_MULTI_IN = "INTERMEDIATE_MULTI_IN"
    GATEWAY_DEGENERATE = "GATEWAY_DEGENERATE"
    EXCLUSIVE_NOT_CONVERGING = "EXCLUSIVE_NOT_CONVERGING"
    COND_NOT_FROM_RECEIVE = "COND_NOT_FROM_RECEIVE"
    MSGFLOW_SAME_POOL = "MSGFLOW_SAME_POOL"
    MSGFLOW_NO_NODE = "MSGFLOW_NO_NODE"
    ORPHAN_NODE = "ORPHAN_NODE"
    DEAD_END = "DEAD_END"
    BACKWARD_FLOW = "BACKWARD_FLOW"


@dataclass(frozen=True)
class Violation:
    code: Code
    node_or_flow: str
    message: str

    def __str__(self) -> str:
        return f"{self.code.value} {self.node_or_flow} {self.message}"


# node kinds that must pass their token on
_NEEDS_OUT = (NodeKind.START, NodeKind.CATCH, NodeKind.THROW, NodeKind.TASK)


def _check_graph(g: ProcessGraph, d: Diagram, out: list[Violation]) -> None:
    def report(code: Code, ref: str, msg: str) -> None:
        out.append(Violation(code, ref, msg))

    starts = g.of_kind(NodeKind.START)
    if not starts:
        report(Code.MISSING_START, g.id, "process has no Start Event")
    if not g.of_kind(NodeKind.END):
        report(Code.MISSING_END, g.id, "process has no End Event")

    for nid in sorted(g.nodes):
        node = g.nodes[nid]
        n_in, n_out = len(g.incoming(nid)), len(g.outgoing(nid))
        msg_in, msg_out = d.message_flows_at(nid)
        match node.kind:
            case NodeKind.START if n_in:
                report(Code.START_HAS_IN, nid, f"Start Event has {n_in} incoming sequence flow(s)")
            case NodeKind.END if n_out:
                report(Code.END_HAS_OUT, nid, f"End Event has {n_out} outgoing sequence flow(s)")
            case NodeKind.TASK:
                if n_in != 1:
                    report(Code.TASK_MULTI_IN, nid, f"Task has {n_in} incoming sequence flow(s), expected 1")
                if len(msg_in) > 1 or len(msg_out) > 1:
                    report(Code.TASK_MULTI_MSG, nid,
                           f"Task has {len(msg_in)} incoming and {len(msg_out)} outgoing message flows")
            case NodeKind.SUBPROCESS:
                if n_in != 1:
                    report(Code.SUBPROC_MULTI_IN, nid, f"Sub-Process has {n_in} incoming sequence flow(s)")
                if msg_in or msg_out:
                    report(Code.SUBPROC_MSGFLOW, nid, "message flow attached to a Sub-Process")
            case NodeKind.CATCH | NodeKind.THROW if n_in != 1:
                report(Code.INTERMEDIATE_MULTI_IN, nid, f"Intermediate Event has {n_in} incoming sequence flow(s)")
            case NodeKind.PARALLEL | NodeKind.EXCLUSIVE:
                if not n_in or not n_out:
                    report(Code.GATEWAY_DEGENERATE, nid, f"Gateway has {n_in} incoming and {n_out} outgoing flows")
                if node.kind is NodeKind.EXCLUSIVE and n_out > 1:
                    report(Code.EXCLUSIVE_NOT_CONVERGING, nid, f"Exclusive Gateway has {n_out} outgoing flows")
        if node.kind in _NEEDS_OUT and not n_out:
            report(Code.DEAD_END, nid, "node has no outgoing sequence flow")

    for f in g.sequence_flows:
        if f.condition is None:
            continue
        src = g.nodes[f.source]
        if not (src.kind is NodeKind.TASK and src.task_kind is TaskKind.RECEIVE):
            report(Code.COND_NOT_FROM_RECEIVE, f.id, "conditional flow does not leave a Receive Task")

    if starts:
        seen: set[str] = set()
        for s in starts:
            seen |= reachable_from(g, s.id)
        for nid in sorted(set(g.nodes) - seen):
            report(Code.ORPHAN_NODE, nid, "node is not reachable from any Start Event")

    for fid in _back_edges(g):
        report(Code.BACKWARD_FLOW, fid, "sequence flow closes a cycle")


def _back_edges(g: ProcessGraph) -> list[str]:
    """Flows closing a cycle, found by depth-first search in id order."""
    succ: dict[str, list[tuple[str, str]]] = {n: [] for n in g.nodes}
    for f in g.sequence_flows:
        succ[f.source].append((f.id, f.target))
    state: dict[str, int] = {}
    back: list[str] = []

    def visit(n: str) -> None:
        state[n] = 1
        for fid, m in sorted(succ[n]):
            if state.get(m) == 1:
                back.append(fid)
            elif m not in state:
                visit(m)
        state[n] = 2

    for n in sorted(g.nodes):
        if n not in state:
            visit(n)
    return sorted(back)


def validate(d: Diagram) -> list[Violation]:
    """Every rule violation in ``d``; an empty list means convertible."""
    out: list[Violation] = []
    for _, top in d.top_graphs():
        for g in top.walk():
            _check_graph(g, d, out)
    index = d.node_index()
    for f in d.message_flows:
        if f.source not in index and f.target not in index:
            out.append(Violation(Code.MSGFLOW_NO_NODE, f.id, "message flow connects no Flow Node"))
        if d.pool_of(f.source) == d.pool_of(f.target):
            out.append(Violation(Code.MSGFLOW_SAME_POOL, f.id, "message flow stays within one pool"))
    return out
