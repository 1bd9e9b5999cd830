"""Typed model of the supported BPMN 2.0 subset, with XML reading and writing."""

from __future__ import annotations

import enum
import re
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass
from typing import Iterator

BPMN_NS = "http://www.omg.org/spec/BPMN/20100524/MODEL"


class BpmnError(Exception):
    pass


class MalformedXml(BpmnError):
    pass


class UnresolvedReference(BpmnError):
    def __init__(self, element_id: str, ref: str) -> None:
        super().__init__(f"{element_id} refers to unknown element {ref!r}")
        self.element_id = element_id
        self.ref = ref


class UnsupportedElement(BpmnError):
    def __init__(self, kind: str, element_id: str | None) -> None:
        super().__init__(f"unsupported BPMN element {kind} ({element_id or 'no id'})")
        self.kind = kind
        self.element_id = element_id


class UnknownNode(BpmnError, KeyError):
    pass


class NodeKind(enum.Enum):
    START = "startEvent"
    END = "endEvent"
    CATCH = "intermediateCatchEvent"
    THROW = "intermediateThrowEvent"
    TASK = "task"
    PARALLEL = "parallelGateway"
    EXCLUSIVE = "exclusiveGateway"
    SUBPROCESS = "subProcess"


class TaskKind(enum.Enum):
    ABSTRACT = "task"
    SEND = "sendTask"
    RECEIVE = "receiveTask"
    USER = "userTask"
    MANUAL = "manualTask"


class CondOp(enum.Enum):
    EQ = "=="
    NEQ = "!="


@dataclass(frozen=True)
class Condition:
    op: CondOp
    value: str
    # message name written on the left of the expression, if any
    subject: str | None = None

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("condition value must be non-empty")


@dataclass(frozen=True)
class SequenceFlow:
    id: str
    source: str
    target: str
    condition: Condition | None = None


@dataclass(frozen=True)
class FlowNode:
    id: str
    kind: NodeKind
    name: str | None = None
    is_message: bool = False
    task_kind: TaskKind | None = None
    body: ProcessGraph | None = None
    multi_instance: bool = False

    @property
    def is_gateway(self) -> bool:
        return self.kind in (NodeKind.PARALLEL, NodeKind.EXCLUSIVE)


@dataclass(frozen=True)
class ProcessGraph:
    id: str
    nodes: dict[str, FlowNode]
    sequence_flows: tuple[SequenceFlow, ...] = ()
    parent: str | None = None

    def incoming(self, node_id: str) -> list[SequenceFlow]:
        return sorted((f for f in self.sequence_flows if f.target == node_id), key=lambda f: f.id)

    def outgoing(self, node_id: str) -> list[SequenceFlow]:
        return sorted((f for f in self.sequence_flows if f.source == node_id), key=lambda f: f.id)

    def of_kind(self, kind: NodeKind) -> list[FlowNode]:
        return [self.nodes[k] for k in sorted(self.nodes) if self.nodes[k].kind is kind]

    def walk(self) -> Iterator[ProcessGraph]:
        """This graph followed by every nested Sub-Process body."""
        yield self
        for k in sorted(self.nodes):
            body = self.nodes[k].body
            if body is not None:
                yield from body.walk()


@dataclass(frozen=True)
class Participant:
    id: str
    name: str | None = None
    process: ProcessGraph | None = None  # None for a black-box pool

    @property
    def is_black_box(self) -> bool:
        return self.process is None


@dataclass(frozen=True)
class MessageFlow:
    id: str
    source: str
    target: str
    phantom: bool = False


@dataclass(frozen=True)
class Diagram:
    """Either a single Process or a Collaboration of Participants."""

    process: ProcessGraph | None = None
    participants: tuple[Participant, ...] = ()
    message_flows: tuple[MessageFlow, ...] = ()

    def __post_init__(self) -> None:
        if (self.process is None) == (not self.participants):
            raise ValueError("a diagram is either a single process or a non-empty collaboration")

    @property
    def is_collaboration(self) -> bool:
        return self.process is None

    def top_graphs(self) -> list[tuple[str | None, ProcessGraph]]:
        """(pool id, graph) for every top-level process."""
        if self.process is not None:
            return [(None, self.process)]
        return [(p.id, p.process) for p in self.participants if p.process is not None]

    def node_index(self) -> dict[str, tuple[str | None, ProcessGraph, FlowNode]]:
        """Node id -> (pool id, containing graph, node), nested graphs included."""
        index = {}
        for pool, top in self.top_graphs():
            for g in top.walk():
                for nid, node in g.nodes.items():
                    index[nid] = (pool, g, node)
        return index

    def pool_of(self, ref: str) -> str | None:
        if any(p.id == ref for p in self.participants):
            return ref
        entry = self.node_index().get(ref)
        return entry[0] if entry else None

    def message_flows_at(self, node_id: str) -> tuple[list[MessageFlow], list[MessageFlow]]:
        """(incoming, outgoing) message flows attached to a node, sorted by id."""
        flows = sorted(self.message_flows, key=lambda f: f.id)
        return [f for f in flows if f.target == node_id], [f for f in flows if f.source == node_id]


def reachable_from(p: ProcessGraph, start: str) -> set[str]:
    """Nodes reachable from ``start`` along sequence flows, ``start`` included."""
    if start not in p.nodes:
        raise UnknownNode(start)
    succ: dict[str, list[str]] = {}
    for f in p.sequence_flows:
        succ.setdefault(f.source, []).append(f.target)
    seen = {start}
    queue = deque([start])
    while queue:
        for nxt in succ.get(queue.popleft(), ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


# --- reading ---------------------------------------------------------------

_IGNORED = frozenset({
    "documentation", "extensionElements", "incoming", "outgoing", "textAnnotation",
    "association", "BPMNDiagram", "category", "message", "itemDefinition",
    "conditionExpression", "messageEventDefinition", "multiInstanceLoopCharacteristics",
})
_UNSUPPORTED = frozenset({
    "lane", "laneSet", "dataObject", "dataObjectReference", "dataStore", "dataStoreReference",
    "dataInputAssociation", "dataOutputAssociation", "ioSpecification", "property",
    "boundaryEvent", "complexGateway", "inclusiveGateway", "eventBasedGateway",
    "choreography", "choreographyTask", "subChoreography", "callChoreography",
    "callActivity", "transaction", "adHocSubProcess", "serviceTask", "scriptTask",
    "businessRuleTask", "standardLoopCharacteristics", "participantMultiplicity",
    "timerEventDefinition", "signalEventDefinition", "errorEventDefinition",
    "escalationEventDefinition", "compensateEventDefinition", "conditionalEventDefinition",
    "linkEventDefinition", "terminateEventDefinition", "cancelEventDefinition",
    "implicitThrowEvent",
})
_EVENT_TAGS = {k.value: k for k in (NodeKind.START, NodeKind.END, NodeKind.CATCH, NodeKind.THROW)}
_TASK_TAGS = {k.value: k for k in TaskKind}
_COND_RE = re.compile(r"^\s*([A-Za-z_][\w'\-]*)\s*(==|!=)\s*([A-Za-z_][\w'\-]*)\s*$")


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _children(el: ET.Element, name: str) -> list[ET.Element]:
    return [c for c in el if _local(c.tag) == name]


def parse_condition(text: str, flow_id: str | None = None) -> Condition:
    """Parse ``<msgname> == <value>`` or ``<msgname> != <value>``."""
    m = _COND_RE.match(text or "")
    if not m:
        raise UnsupportedElement(f"conditionExpression {text!r}", flow_id)
    return Condition(CondOp(m.group(2)), m.group(3), m.group(1))


def _check_supported(el: ET.Element) -> None:
    tag = _local(el.tag)
    if tag in _UNSUPPORTED:
        raise UnsupportedElement(tag, el.get("id"))
    if el.get("default"):
        raise UnsupportedElement("default flow", el.get("id"))


def _event(el: ET.Element, kind: NodeKind) -> FlowNode:
    for child in el:
        _check_supported(child)
    is_message = bool(_children(el, "messageEventDefinition"))
    if kind in (NodeKind.CATCH, NodeKind.THROW) and not is_message:
        raise UnsupportedElement(f"non-message {kind.value}", el.get("id"))
    return FlowNode(el.get("id"), kind, el.get("name"), is_message=is_message)


def _subprocess(el: ET.Element, parent: str) -> FlowNode:
    multi = _children(el, "multiInstanceLoopCharacteristics")
    if multi and multi[0].get("isSequential", "false").lower() == "true":
        raise UnsupportedElement("sequential multi-instance", el.get("id"))
    if el.get("triggeredByEvent", "false").lower() == "true":
        raise UnsupportedElement("event sub-process", el.get("id"))
    body = _graph(el, parent=parent)
    return FlowNode(el.get("id"), NodeKind.SUBPROCESS, el.get("name"), body=body, multi_instance=bool(multi))


def _graph(el: ET.Element, parent: str | None = None) -> ProcessGraph:
    gid = el.get("id")
    nodes: dict[str, FlowNode] = {}
    flows: list[SequenceFlow] = []
    for child in el:
        tag = _local(child.tag)
        _check_supported(child)
        cid = child.get("id")
        if tag in _EVENT_TAGS:
            node = _event(child, _EVENT_TAGS[tag])
        elif tag in _TASK_TAGS:
            for sub in child:
                if _local(sub.tag) == "multiInstanceLoopCharacteristics":
                    raise UnsupportedElement("task multiplicity", cid)
                _check_supported(sub)
            node = FlowNode(cid, NodeKind.TASK, child.get("name"), task_kind=_TASK_TAGS[tag])
        elif tag == "parallelGateway":
            node = FlowNode(cid, NodeKind.PARALLEL, child.get("name"))
        elif tag == "exclusiveGateway":
            node = FlowNode(cid, NodeKind.EXCLUSIVE, child.get("name"))
        elif tag == "subProcess":
            node = _subprocess(child, gid)
        elif tag == "sequenceFlow":
            cond_el = _children(child, "conditionExpression")
            cond = parse_condition(cond_el[0].text or "", cid) if cond_el else None
            flows.append(SequenceFlow(cid, child.get("sourceRef"), child.get("targetRef"), cond))
            continue
        elif tag in _IGNORED:
            continue
        else:
            raise UnsupportedElement(tag, cid)
        if not node.id:
            raise MalformedXml(f"{tag} without id")
        if node.id in nodes:
            raise MalformedXml(f"duplicate id {node.id}")
        nodes[node.id] = node
    for f in flows:
        for ref in (f.source, f.target):
            if ref not in nodes:
                raise UnresolvedReference(f.id, ref)
    return ProcessGraph(gid, dict(sorted(nodes.items())), tuple(sorted(flows, key=lambda f: f.id)), parent)


def parse_diagram(xml: bytes | str) -> Diagram:
    """Read a BPMN 2.0 XML document into a :class:`Diagram`."""
    try:
        root = ET.fromstring(xml)
    except ET.ParseError as exc:
        raise MalformedXml(str(exc)) from None
    if _local(root.tag) != "definitions":
        raise MalformedXml(f"root element is {_local(root.tag)!r}, expected 'definitions'")
    processes: dict[str, ProcessGraph] = {}
    collaborations = []
    for child in root:
        tag = _local(child.tag)
        if tag == "process":
            for sub in child:
                if _local(sub.tag) == "laneSet":
                    raise UnsupportedElement("laneSet", sub.get("id"))
            g = _graph(child)
            processes[g.id] = g
        elif tag == "collaboration":
            collaborations.append(child)
        elif tag in ("choreography",):
            raise UnsupportedElement(tag, child.get("id"))

    if not collaborations:
        if len(processes) != 1:
            raise UnsupportedElement(f"{len(processes)} processes without a collaboration", None)
        return Diagram(process=next(iter(processes.values())))
    if len(collaborations) > 1:
        raise UnsupportedElement("multiple collaborations", collaborations[1].get("id"))

    collab = collaborations[0]
    participants = []
    message_flows = []
    for child in collab:
        tag = _local(child.tag)
        _check_supported(child)
        if tag == "participant":
            for sub in child:
                _check_supported(sub)
            ref = child.get("processRef")
            proc = None
            if ref:
                if ref not in processes:
                    raise UnresolvedReference(child.get("id"), ref)
                # editors emit an empty process element for an empty pool
                proc = processes[ref] if processes[ref].nodes else None
            participants.append(Participant(child.get("id"), child.get("name"), proc))
        elif tag == "messageFlow":
            message_flows.append(MessageFlow(child.get("id"), child.get("sourceRef"), child.get("targetRef")))
        elif tag not in _IGNORED:
            raise UnsupportedElement(tag, child.get("id"))
    if not participants:
        raise MalformedXml("collaboration without participants")
    d = Diagram(
        participants=tuple(sorted(participants, key=lambda p: p.id)),
        message_flows=tuple(sorted(message_flows, key=lambda f: f.id)),
    )
    index = d.node_index()
    pools = {p.id for p in participants}
    for f in d.message_flows:
        for ref in (f.source, f.target):
            if ref not in index and ref not in pools:
                raise UnresolvedReference(f.id, ref)
    return d


# --- writing ---------------------------------------------------------------


def _q(tag: str) -> str:
    return f"{{{BPMN_NS}}}{tag}"


def _write_graph(parent: ET.Element, g: ProcessGraph, tag: str, attrs: dict[str, str]) -> None:
    el = ET.SubElement(parent, _q(tag), {"id": g.id, **attrs})
    _write_contents(el, g)


def _write_contents(el: ET.Element, g: ProcessGraph) -> None:
    for nid in sorted(g.nodes):
        _write_node(el, g.nodes[nid])
    for f in g.sequence_flows:
        fe = ET.SubElement(el, _q("sequenceFlow"), {"id": f.id, "sourceRef": f.source, "targetRef": f.target})
        if f.condition is not None:
            c = f.condition
            ce = ET.SubElement(fe, _q("conditionExpression"))
            ce.text = f"{c.subject or 'm'} {c.op.value} {c.value}"


def _write_node(parent: ET.Element, n: FlowNode) -> None:
    attrs = {"id": n.id}
    if n.name is not None:
        attrs["name"] = n.name
    if n.kind is NodeKind.SUBPROCESS:
        assert n.body is not None
        body = ET.SubElement(parent, _q("subProcess"), attrs)
        if n.multi_instance:
            ET.SubElement(body, _q("multiInstanceLoopCharacteristics"))
        _write_contents(body, n.body)
        return
    tag = n.task_kind.value if n.kind is NodeKind.TASK and n.task_kind else n.kind.value
    el = ET.SubElement(parent, _q(tag), attrs)
    if n.is_message:
        ET.SubElement(el, _q("messageEventDefinition"))


def serialize_diagram(d: Diagram) -> bytes:
    """Write ``d`` as BPMN 2.0 XML; :func:`parse_diagram` reads it back equal."""
    ET.register_namespace("bpmn", BPMN_NS)
    root = ET.Element(_q("definitions"), {"id": "Definitions_1"})
    if d.process is not None:
        _write_graph(root, d.process, "process", {"isExecutable": "false"})
    else:
        collab = ET.SubElement(root, _q("collaboration"), {"id": "Collaboration_1"})
        for p in d.participants:
            attrs = {"id": p.id}
            if p.name is not None:
                attrs["name"] = p.name
            if p.process is not None:
                attrs["processRef"] = p.process.id
            ET.SubElement(collab, _q("participant"), attrs)
        for f in d.message_flows:
            ET.SubElement(collab, _q("messageFlow"), {"id": f.id, "sourceRef": f.source, "targetRef": f.target})
        for p in d.participants:
            if p.process is not None:
                _write_graph(root, p.process, "process", {"isExecutable": "false"})
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)
