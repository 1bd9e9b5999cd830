import json
import re

import pytest

from bpmnpc.bpmn import parse_diagram
from bpmnpc.calculus import Basic, ContextVar, GroupAtom, GroupType, Name, RoleKind, SNil, union
from bpmnpc.config import ConfigSyntax, DuplicateKey, MissingKey, load_config
from bpmnpc.converter import Declarations, convert_collaboration, empty_output
from bpmnpc.converter.elements import ConversionOutput
from bpmnpc.emit import EmitTemplate, TemplateError, render_module

FIXTURE_NAMES = ["chain", "conditional", "messages", "collaboration"]
BASE = {"token_type_name": "Token", "token_value_name": "t", "fresh_prefix": "h",
        "processes": {"P": {"group": "G", "purpose": "u"}}}


def dump(**over):
    return json.dumps({**BASE, **over})


class TestLoadConfig:
    def test_minimal(self):
        cfg = load_config(dump()).conversion
        assert cfg.token_type == Basic("Token")
        assert cfg.process_meta["P"].group == GroupAtom("G")
        assert cfg.process_meta["P"].purpose == "u"

    def test_user_groups_are_marked(self):
        cfg = load_config(dump(groups={"Alice": "user"},
                               processes={"P": {"group": "Alice+Shop", "purpose": "u"}})).conversion
        g = cfg.process_meta["P"].group
        assert g == union(GroupAtom("Alice", RoleKind.USER), GroupAtom("Shop"))

    def test_messages_and_phantoms(self, fixtures):
        cfg = load_config((fixtures / "conditional.json").read_text()).conversion
        ph = cfg.phantoms["receive"]
        assert (ph.channel, ph.name, ph.type) == ("E", "m", ContextVar("Status", ("ok", "bad")))
        cfg = load_config((fixtures / "collaboration.json").read_text()).conversion
        assert cfg.message_meta["F"].type == Basic("Order")

    def test_group_typed_message(self):
        cfg = load_config(dump(messages={"F": {"name": "x", "type": "G[T]"}})).conversion
        assert cfg.message_meta["F"].type == GroupType(GroupAtom("G"), Basic("T"))

    def test_emit_overrides(self):
        tpl = load_config(dump(emit={"module_name": "SHOP", "sort_names": {"group": "Grp"}})).emit
        assert tpl.module_name == "SHOP" and tpl.sort_names["group"] == "Grp" and tpl.sort_names["type"] == "Type"

    @pytest.mark.parametrize("key", ["token_type_name", "token_value_name", "fresh_prefix", "processes"])
    def test_missing_top_level(self, key):
        doc = dict(BASE)
        del doc[key]
        with pytest.raises(MissingKey) as err:
            load_config(json.dumps(doc))
        assert err.value.path == key

    def test_missing_nested(self):
        with pytest.raises(MissingKey) as err:
            load_config(dump(processes={"P": {"group": "G"}}))
        assert err.value.path == "processes.P.purpose"

    def test_duplicate_key(self):
        text = '{"token_type_name": "Token", "token_type_name": "Tok"}'
        with pytest.raises(DuplicateKey):
            load_config(text)

    @pytest.mark.parametrize("text", [
        "{not json",
        "[]",
        dump(token_value_name="two words"),
        dump(token_value_name=3),
        dump(processes={"P": "G"}),
        dump(processes={"P": {"group": "G[", "purpose": "u"}}),
        dump(groups={"G": "admin"}),
        dump(messages={"F": {"name": "x", "type": "S{a,a}"}}),
        dump(messages={"F": {"name": "x", "type": "S{a,b}"}, "H": {"name": "y", "type": "S{a}"}}),
        dump(emit={"colour": "red"}),
        dump(emit={"sort_names": 3}),
    ])
    def test_syntax_errors(self, text):
        with pytest.raises(ConfigSyntax):
            load_config(text)


def converted(fixtures, name):
    d = parse_diagram((fixtures / f"{name}.bpmn").read_bytes())
    cfg = load_config((fixtures / f"{name}.json").read_text())
    return convert_collaboration(d, cfg.conversion)


def declared_ops(text: str) -> list[str]:
    """Identifiers declared by ``op X : -> Sort .`` lines, minus the two equation symbols."""
    ops = re.findall(r"^\s*op (\S+) : -> \S+ \.", text, flags=re.M)
    return [o for o in ops if o not in ("system", "context")]


class TestRender:
    def test_empty_system(self):
        text = render_module(empty_output())
        assert "  eq system = 0 .\n" in text
        assert "  eq context = emptyContext .\n" in text
        assert declared_ops(text) == []

    def test_union_context_entry(self):
        g = union(GroupAtom("G2"), GroupAtom("G1"))
        out = ConversionOutput(SNil(), {Name("E"): GroupType(g, Basic("T"))}, Declarations())
        assert "  eq context = E : (G1+G2)[T] .\n" in render_module(out)

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_one_op_per_declared_identifier(self, fixtures, name):
        out = converted(fixtures, name)
        ops = declared_ops(render_module(out))
        assert len(ops) == len(set(ops))
        assert sorted(ops) == sorted(out.declarations.identifiers())

    def test_user_groups_annotated(self, fixtures):
        text = render_module(converted(fixtures, "collaboration"))
        assert "  op Alice : -> Group . --- user\n" in text
        assert "  op Shop : -> Group .\n" in text

    def test_context_values_listed(self, fixtures):
        text = render_module(converted(fixtures, "conditional"))
        assert "  eq context = E : Clerk[Status], ok : Status .\n" in text
        assert "  op bad : -> Value .\n" in text

    def test_template_overrides(self, fixtures):
        tpl = EmitTemplate(module_name="X", sort_names={**EmitTemplate().sort_names, "group": "Grp"},
                           header="fmod {module} is", footer="endfm", system_symbol="sys")
        text = render_module(converted(fixtures, "chain"), tpl)
        assert text.startswith("fmod X is\n") and text.endswith("endfm\n")
        assert "  op G : -> Grp .\n" in text and "  eq sys = " in text

    def test_template_requires_all_roles(self):
        with pytest.raises(TemplateError):
            EmitTemplate(sort_names={"group": "Group"})

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_deterministic(self, fixtures, name):
        assert render_module(converted(fixtures, name)) == render_module(converted(fixtures, name))

    def test_black_box_variable_declared(self):
        out = ConversionOutput(SNil(), {}, Declarations(process_vars=("P_G",)))
        assert "  op P_G : -> Process .\n" in render_module(out)
