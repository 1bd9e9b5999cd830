import pytest

from bpmnpc.bpmn import (
    CondOp,
    Condition,
    Diagram,
    FlowNode,
    MalformedXml,
    NodeKind,
    ProcessGraph,
    SequenceFlow,
    TaskKind,
    UnknownNode,
    UnresolvedReference,
    UnsupportedElement,
    parse_condition,
    parse_diagram,
    reachable_from,
    serialize_diagram,
)

NS = 'xmlns:bpmn="http://www.omg.org/spec/BPMN/20100524/MODEL"'


def doc(body: str) -> str:
    return f'<bpmn:definitions {NS} id="d">{body}</bpmn:definitions>'


def graph(edges: str) -> ProcessGraph:
    pairs = [e.split(">") for e in edges.split()]
    ids = sorted({x for p in pairs for x in p})
    nodes = {i: FlowNode(i, NodeKind.TASK, task_kind=TaskKind.ABSTRACT) for i in ids}
    flows = tuple(SequenceFlow(f"f{k}", s, t) for k, (s, t) in enumerate(pairs))
    return ProcessGraph("P", nodes, flows)


class TestParse:
    def test_chain(self, fixtures):
        d = parse_diagram((fixtures / "chain.bpmn").read_bytes())
        assert not d.is_collaboration
        assert len(d.process.nodes) == 3 and len(d.process.sequence_flows) == 2
        assert d.process.nodes["work"].task_kind is TaskKind.ABSTRACT

    def test_collaboration(self, fixtures):
        d = parse_diagram((fixtures / "collaboration.bpmn").read_bytes())
        assert d.is_collaboration
        assert [p.id for p in d.participants] == ["Customer", "Shop"]
        assert [(f.source, f.target) for f in d.message_flows] == [("order", "take")]
        assert d.pool_of("order") == "Customer" and d.pool_of("take") == "Shop"

    def test_message_events(self, fixtures):
        d = parse_diagram((fixtures / "messages.bpmn").read_bytes())
        assert all(n.is_message for n in d.process.nodes.values())
        assert d.process.nodes["catch"].kind is NodeKind.CATCH

    def test_conditions(self, fixtures):
        d = parse_diagram((fixtures / "conditional.bpmn").read_bytes())
        flows = {f.id: f for f in d.process.sequence_flows}
        assert flows["c2"].condition == Condition(CondOp.EQ, "ok", "m")
        assert flows["c3"].condition.op is CondOp.NEQ

    def test_unresolved_flow_target(self):
        xml = doc('<bpmn:process id="P"><bpmn:startEvent id="s"/>'
                  '<bpmn:sequenceFlow id="f" sourceRef="s" targetRef="ghost"/></bpmn:process>')
        with pytest.raises(UnresolvedReference) as err:
            parse_diagram(xml)
        assert (err.value.element_id, err.value.ref) == ("f", "ghost")

    def test_unresolved_message_flow(self):
        xml = doc('<bpmn:collaboration id="C"><bpmn:participant id="A"/>'
                  '<bpmn:messageFlow id="m" sourceRef="A" targetRef="nowhere"/></bpmn:collaboration>')
        with pytest.raises(UnresolvedReference):
            parse_diagram(xml)

    @pytest.mark.parametrize("inner,kind", [
        ('<bpmn:laneSet id="ls"/>', "laneSet"),
        ('<bpmn:dataObject id="do"/>', "dataObject"),
        ('<bpmn:boundaryEvent id="b" attachedToRef="t"/>', "boundaryEvent"),
        ('<bpmn:inclusiveGateway id="g"/>', "inclusiveGateway"),
        ('<bpmn:complexGateway id="g"/>', "complexGateway"),
        ('<bpmn:eventBasedGateway id="g"/>', "eventBasedGateway"),
        ('<bpmn:exclusiveGateway id="g" default="f"/>', "default flow"),
        ('<bpmn:task id="t"><bpmn:standardLoopCharacteristics/></bpmn:task>', "standardLoopCharacteristics"),
        ('<bpmn:task id="t"><bpmn:multiInstanceLoopCharacteristics/></bpmn:task>', "task multiplicity"),
        ('<bpmn:intermediateCatchEvent id="c"><bpmn:timerEventDefinition/></bpmn:intermediateCatchEvent>', "timerEventDefinition"),
        ('<bpmn:subProcess id="sp"><bpmn:multiInstanceLoopCharacteristics isSequential="true"/></bpmn:subProcess>',
         "sequential multi-instance"),
    ])
    def test_unsupported_elements(self, inner, kind):
        with pytest.raises(UnsupportedElement) as err:
            parse_diagram(doc(f'<bpmn:process id="P">{inner}</bpmn:process>'))
        assert err.value.kind == kind

    def test_unsupported_condition_text(self):
        with pytest.raises(UnsupportedElement):
            parse_condition("m > 3")

    def test_malformed(self):
        with pytest.raises(MalformedXml):
            parse_diagram("<not closed")
        with pytest.raises(MalformedXml):
            parse_diagram("<root/>")

    def test_black_box_pool(self):
        xml = doc('<bpmn:collaboration id="C"><bpmn:participant id="A" processRef="PA"/></bpmn:collaboration>'
                  '<bpmn:process id="PA"/>')
        d = parse_diagram(xml)
        assert d.participants[0].is_black_box

    def test_multi_instance_subprocess(self):
        xml = doc('<bpmn:process id="P"><bpmn:subProcess id="sp">'
                  '<bpmn:multiInstanceLoopCharacteristics/><bpmn:startEvent id="a"/></bpmn:subProcess></bpmn:process>')
        sp = parse_diagram(xml).process.nodes["sp"]
        assert sp.multi_instance and sp.body.parent == "P"

    def test_namespace_agnostic(self):
        xml = ('<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">'
               '<process id="P"><startEvent id="s"/></process></definitions>')
        assert "s" in parse_diagram(xml).process.nodes

    def test_diagram_shape_invariant(self):
        with pytest.raises(ValueError):
            Diagram()

    def test_condition_value_non_empty(self):
        with pytest.raises(ValueError):
            Condition(CondOp.EQ, "")


@pytest.mark.parametrize("name", ["chain", "conditional", "messages", "collaboration"])
def test_serialize_roundtrip(fixtures, name):
    d = parse_diagram((fixtures / f"{name}.bpmn").read_bytes())
    assert parse_diagram(serialize_diagram(d)) == d


def test_serialize_roundtrip_invalid_fixtures(fixtures):
    for path in sorted((fixtures / "invalid").glob("*.bpmn")):
        d = parse_diagram(path.read_bytes())
        assert parse_diagram(serialize_diagram(d)) == d, path.name


class TestReachable:
    def test_chain(self):
        assert reachable_from(graph("A>B B>C"), "A") == {"A", "B", "C"}

    def test_diamond(self):
        assert reachable_from(graph("A>B A>C B>D C>D"), "A") == {"A", "B", "C", "D"}

    def test_from_sink(self):
        assert reachable_from(graph("A>B B>C"), "C") == {"C"}

    def test_unknown(self):
        with pytest.raises(UnknownNode):
            reachable_from(graph("A>B"), "Z")

    def test_fixed_point(self):
        g = graph("A>B A>C B>D C>D D>E X>A")
        r = reachable_from(g, "A")
        assert {f.target for f in g.sequence_flows if f.source in r} <= r
