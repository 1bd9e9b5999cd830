"""Conversion inputs that BPMN itself does not carry."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..calculus.terms import Basic, Group, PrivType


class ConversionError(Exception):
    pass


class MissingMeta(ConversionError):
    pass


class MissingMessageMeta(MissingMeta):
    pass


class MissingGroup(MissingMeta):
    pass


class UnsupportedNode(ConversionError):
    pass


class NameClash(ConversionError):
    pass


class ValidationRequired(ConversionError):
    def __init__(self, violations) -> None:
        lines = "; ".join(str(v) for v in violations)
        super().__init__(f"diagram fails validation: {lines}")
        self.violations = list(violations)


@dataclass(frozen=True)
class ProcessMeta:
    group: Group
    purpose: str


@dataclass(frozen=True)
class MessageMeta:
    name: str
    type: PrivType


@dataclass(frozen=True)
class PhantomMeta:
    """An assumed message flow for a node that has none drawn."""

    channel: str
    name: str
    type: PrivType


@dataclass(frozen=True)
class ConversionConfig:
    token_type_name: str = "Token"
    token_value_name: str = "t"
    fresh_prefix: str = "h"
    process_meta: dict[str, ProcessMeta] = field(default_factory=dict)
    message_meta: dict[str, MessageMeta] = field(default_factory=dict)
    phantoms: dict[str, PhantomMeta] = field(default_factory=dict)

    @property
    def token_type(self) -> PrivType:
        return Basic(self.token_type_name)
