"""Reading conversion settings from a JSON document.

Example::

    {
      "token_type_name": "Token",
      "token_value_name": "t",
      "fresh_prefix": "h",
      "groups": {"Alice": "user"},
      "processes": {"Shop": {"group": "Staff+Alice", "purpose": "sell"}},
      "messages": {"F1": {"name": "m", "type": "Status{ok,bad}"}},
      "phantoms": {"recv": {"channel": "E", "name": "m", "type": "Data"}},
      "emit": {"module_name": "SHOP"}
    }

``groups`` optionally marks group identifiers as users; every other group
is a role.  ``messages``, ``phantoms``, ``groups`` and ``emit`` may be omitted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .calculus.syntax import TermSyntaxError, is_identifier, parse_group, parse_type
from .calculus.terms import (
    ContextVar,
    Group,
    GroupAtom,
    GroupType,
    PrivType,
    RoleKind,
    group_atoms,
    union,
)
from .converter.config import ConversionConfig, MessageMeta, PhantomMeta, ProcessMeta
from .emit import EmitTemplate, TemplateError


class ConfigError(ValueError):
    pass


class ConfigSyntax(ConfigError):
    pass


class MissingKey(ConfigError):
    def __init__(self, path: str) -> None:
        super().__init__(f"missing configuration key {path}")
        self.path = path


class DuplicateKey(ConfigError):
    def __init__(self, key: str) -> None:
        super().__init__(f"duplicate configuration key {key!r}")
        self.key = key


@dataclass(frozen=True)
class LoadedConfig:
    conversion: ConversionConfig
    emit: EmitTemplate


def _no_duplicates(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for k, v in pairs:
        if k in out:
            raise DuplicateKey(k)
        out[k] = v
    return out


def _get(obj: dict, key: str, path: str, kind: type = str, required: bool = True) -> Any:
    full = f"{path}.{key}" if path else key
    if key not in obj:
        if required:
            raise MissingKey(full)
        return None
    value = obj[key]
    if not isinstance(value, kind):
        raise ConfigSyntax(f"{full} must be a {kind.__name__}")
    return value


def _ident(obj: dict, key: str, path: str) -> str:
    value = _get(obj, key, path)
    if not is_identifier(value):
        raise ConfigSyntax(f"{path + '.' if path else ''}{key}: {value!r} is not an identifier")
    return value


class _Reader:
    def __init__(self, kinds: dict[str, RoleKind]) -> None:
        self.kinds = kinds

    def _mark(self, g: Group) -> Group:
        return union(*(GroupAtom(a.id, self.kinds.get(a.id, RoleKind.ROLE)) for a in group_atoms(g)))

    def group(self, text: str, path: str) -> Group:
        try:
            return self._mark(parse_group(text))
        except TermSyntaxError as exc:
            raise ConfigSyntax(f"{path}: {exc}") from None

    def type(self, text: str, path: str) -> PrivType:
        try:
            ty = parse_type(text)
        except (TermSyntaxError, ValueError) as exc:
            raise ConfigSyntax(f"{path}: {exc}") from None
        return self._mark_type(ty)

    def _mark_type(self, ty: PrivType) -> PrivType:
        if isinstance(ty, GroupType):
            return GroupType(self._mark(ty.group), self._mark_type(ty.inner))
        return ty


def _section(doc: dict, key: str) -> dict:
    value = _get(doc, key, "", dict, required=False)
    return value if value is not None else {}


def load_config(text: str) -> LoadedConfig:
    """Parse a configuration document; see the module docstring for its shape."""
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ConfigSyntax(str(exc)) from None
    if not isinstance(doc, dict):
        raise ConfigSyntax("configuration must be an object")

    kinds = {}
    for gid, kind in _section(doc, "groups").items():
        try:
            kinds[gid] = RoleKind(kind)
        except ValueError:
            raise ConfigSyntax(f"groups.{gid}: kind must be 'role' or 'user'") from None
    reader = _Reader(kinds)

    processes = _get(doc, "processes", "", dict)
    process_meta = {}
    for pid, entry in processes.items():
        path = f"processes.{pid}"
        if not isinstance(entry, dict):
            raise ConfigSyntax(f"{path} must be an object")
        process_meta[pid] = ProcessMeta(reader.group(_get(entry, "group", path), path + ".group"),
                                        _ident(entry, "purpose", path))

    message_meta = {}
    for fid, entry in _section(doc, "messages").items():
        path = f"messages.{fid}"
        if not isinstance(entry, dict):
            raise ConfigSyntax(f"{path} must be an object")
        message_meta[fid] = MessageMeta(_ident(entry, "name", path), reader.type(_get(entry, "type", path), path))

    phantoms = {}
    for nid, entry in _section(doc, "phantoms").items():
        path = f"phantoms.{nid}"
        if not isinstance(entry, dict):
            raise ConfigSyntax(f"{path} must be an object")
        phantoms[nid] = PhantomMeta(_ident(entry, "channel", path), _ident(entry, "name", path),
                                    reader.type(_get(entry, "type", path), path))

    _check_domains([m.type for m in message_meta.values()] + [p.type for p in phantoms.values()])
    conversion = ConversionConfig(
        token_type_name=_ident(doc, "token_type_name", ""),
        token_value_name=_ident(doc, "token_value_name", ""),
        fresh_prefix=_ident(doc, "fresh_prefix", ""),
        process_meta=process_meta,
        message_meta=message_meta,
        phantoms=phantoms,
    )
    try:
        template = EmitTemplate.from_dict(_section(doc, "emit"))
    except (TemplateError, TypeError) as exc:
        raise ConfigSyntax(f"emit: {exc}") from None
    return LoadedConfig(conversion, template)


def _check_domains(types: list[PrivType]) -> None:
    seen: dict[str, ContextVar] = {}
    for ty in types:
        while isinstance(ty, GroupType):
            ty = ty.inner
        if isinstance(ty, ContextVar) and seen.setdefault(ty.id, ty) != ty:
            raise ConfigSyntax(f"context variable {ty.id} is declared with two different domains")
