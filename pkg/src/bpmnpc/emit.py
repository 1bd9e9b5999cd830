"""Rendering a conversion result as a Maude-style module.

The target tool's concrete grammar is not fixed here: sort names, the module
name and the surrounding text all come from an :class:`EmitTemplate`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .calculus.syntax import print_term, print_type
from .converter.elements import ConversionOutput

ROLES = ("group", "purpose", "type", "value", "system", "context")

DEFAULT_SORTS = {
    "group": "Group",
    "purpose": "Purpose",
    "type": "Type",
    "value": "Value",
    "system": "System",
    "context": "Context",
    # black-box participants; not one of the required roles
    "process": "Process",
}


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class EmitTemplate:
    module_name: str = "BPMN-SYSTEM"
    sort_names: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_SORTS))
    header: str = "mod {module} is\n  protecting PRIVACY-CALCULUS ."
    footer: str = "endm"
    system_symbol: str = "system"
    context_symbol: str = "context"
    empty_context: str = "emptyContext"

    def __post_init__(self) -> None:
        missing = [r for r in ROLES if r not in self.sort_names]
        if missing:
            raise TemplateError(f"template lacks sort names for {', '.join(missing)}")

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> EmitTemplate:
        known = {"module_name", "sort_names", "header", "footer", "system_symbol", "context_symbol", "empty_context"}
        unknown = set(raw) - known
        if unknown:
            raise TemplateError(f"unknown emit settings: {', '.join(sorted(unknown))}")
        kwargs = dict(raw)
        if "sort_names" in kwargs:
            kwargs["sort_names"] = {**DEFAULT_SORTS, **kwargs["sort_names"]}
        return cls(**kwargs)


def render_module(out: ConversionOutput, tpl: EmitTemplate = EmitTemplate()) -> str:
    """The module text for ``out``; equal inputs give identical text."""
    sort = {**DEFAULT_SORTS, **tpl.sort_names}
    decl = out.declarations
    lines = [tpl.header.format(module=tpl.module_name)]

    def op(ident: str, role: str) -> None:
        lines.append(f"  op {ident} : -> {sort[role]} .")

    lines.append("  --- groups")
    for g in decl.groups:
        op(g.id, "group")
        if g.role_kind.value == "user":
            lines[-1] += " --- user"
    lines.append("  --- purposes")
    for u in decl.purposes:
        op(u, "purpose")
    lines.append("  --- types")
    for b in decl.basic_types:
        op(b, "type")
    for cv in decl.context_vars:
        op(cv.id, "type")
        lines.append(f"  --- {cv.id} ranges over {' '.join(cv.domain)}")
        for v in cv.domain:
            op(v, "value")
    if decl.process_vars:
        lines.append("  --- process variables")
        for p in decl.process_vars:
            op(p, "process")
    op(tpl.system_symbol, "system")
    op(tpl.context_symbol, "context")
    lines.append(f"  eq {tpl.system_symbol} = {print_term(out.system, domains=False)} .")
    entries = [f"{n} : {print_type(ty, domains=False)}" for n, ty in sorted(out.context.items(), key=lambda kv: str(kv[0]))]
    lines.append(f"  eq {tpl.context_symbol} = {', '.join(entries) or tpl.empty_context} .")
    lines.append(tpl.footer)
    return "\n".join(lines) + "\n"
