"""Abstract syntax of the Privacy Calculus.

Terms come in two levels, processes and systems.  Names follow the CINNI
convention: a name is a base identifier plus an index, where index ``n``
skips the ``n`` innermost enclosing binders with the same base.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True, order=True)
class Name:
    base: str
    index: int = 0

    def __post_init__(self) -> None:
        if not self.base:
            raise ValueError("name base must be non-empty")
        if self.index < 0:
            raise ValueError(f"negative CINNI index on {self.base!r}")

    def __str__(self) -> str:
        return self.base if self.index == 0 else f"{self.base}~{self.index}"


class RoleKind(enum.Enum):
    ROLE = "role"
    USER = "user"


@dataclass(frozen=True)
class GroupAtom:
    id: str
    # identity of a group is its id; the user/role flag is declaration metadata
    role_kind: RoleKind = field(default=RoleKind.ROLE, compare=False)


@dataclass(frozen=True)
class GroupUnion:
    left: Group
    right: Group


Group = Union[GroupAtom, GroupUnion]


def group_atoms(g: Group) -> tuple[GroupAtom, ...]:
    """Atoms of ``g`` in left-to-right order, duplicates removed."""
    out: list[GroupAtom] = []

    def walk(h: Group) -> None:
        if isinstance(h, GroupAtom):
            if h not in out:
                out.append(h)
        else:
            walk(h.left)
            walk(h.right)

    walk(g)
    return tuple(out)


def union(*groups: Group) -> Group:
    """Union of groups, flattened, deduplicated and sorted by id.

    ``union(G, G)`` collapses to ``G`` so that equal unions compare equal.
    """
    atoms: dict[str, GroupAtom] = {}
    for g in groups:
        for a in group_atoms(g):
            atoms.setdefault(a.id, a)
    if not atoms:
        raise ValueError("union of no groups")
    ordered = [atoms[k] for k in sorted(atoms)]
    result: Group = ordered[0]
    for a in ordered[1:]:
        result = GroupUnion(result, a)
    return result


@dataclass(frozen=True)
class Basic:
    id: str


@dataclass(frozen=True)
class ContextVar:
    id: str
    domain: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.domain:
            raise ValueError(f"context variable {self.id} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError(f"context variable {self.id} has duplicate values")


@dataclass(frozen=True)
class GroupType:
    group: Group
    inner: PrivType


PrivType = Union[Basic, ContextVar, GroupType]


# --- processes -------------------------------------------------------------


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Input:
    subject: Name
    binder: str
    ty: PrivType
    cont: Process


@dataclass(frozen=True)
class Output:
    subject: Name
    obj: Name
    cont: Process


@dataclass(frozen=True)
class Silent:
    cont: Process


@dataclass(frozen=True)
class New:
    base: str
    ty: PrivType
    cont: Process


@dataclass(frozen=True)
class Par:
    left: Process
    right: Process


@dataclass(frozen=True)
class Choice:
    left: Process
    right: Process


@dataclass(frozen=True)
class Cond:
    """``if scrutinee = value then then_p else else_p``."""

    scrutinee: Name
    value: Name
    then_p: Process
    else_p: Process


@dataclass(frozen=True)
class Repl:
    body: Process


@dataclass(frozen=True)
class Var:
    """Opaque process variable, used for black-box participants."""

    id: str


Process = Union[Nil, Input, Output, Silent, New, Par, Choice, Cond, Repl, Var]
PROCESS_TYPES = (Nil, Input, Output, Silent, New, Par, Choice, Cond, Repl, Var)


# --- systems ---------------------------------------------------------------


@dataclass(frozen=True)
class SNil:
    pass


@dataclass(frozen=True)
class SNew:
    base: str
    ty: PrivType
    cont: System


@dataclass(frozen=True)
class SPar:
    left: System
    right: System


@dataclass(frozen=True)
class GroupBind:
    role: Group
    cont: System


@dataclass(frozen=True)
class Lift:
    group: Group
    purpose: str
    body: Process


System = Union[SNil, SNew, SPar, GroupBind, Lift]
SYSTEM_TYPES = (SNil, SNew, SPar, GroupBind, Lift)

Term = Union[Process, System]


# --- labels ----------------------------------------------------------------


@dataclass(frozen=True)
class Tau:
    pass


@dataclass(frozen=True)
class In:
    """Late input label ``chan(binder)``.

    The target of a transition carrying this label lives under an implicit
    binder of base ``binder``; ``Name(binder, 0)`` there is the received name.
    """

    chan: Name
    binder: str


@dataclass(frozen=True)
class Out:
    chan: Name
    obj: Name


@dataclass(frozen=True)
class BoundOut:
    """Bound output ``chan!(new binder:ty)``; target scoped as for :class:`In`."""

    chan: Name
    binder: str
    ty: PrivType


Label = Union[Tau, In, Out, BoundOut]


def is_process(t: object) -> bool:
    return isinstance(t, PROCESS_TYPES)


def is_system(t: object) -> bool:
    return isinstance(t, SYSTEM_TYPES)


# --- n-ary helpers ---------------------------------------------------------


def par(*ps: Process) -> Process:
    """Right-nested parallel composition; the empty product is ``0``."""
    if not ps:
        return Nil()
    result = ps[-1]
    for p in reversed(ps[:-1]):
        result = Par(p, result)
    return result


def choice(*ps: Process) -> Process:
    if not ps:
        raise ValueError("empty choice")
    result = ps[-1]
    for p in reversed(ps[:-1]):
        result = Choice(p, result)
    return result


def spar(*ss: System) -> System:
    if not ss:
        return SNil()
    result = ss[-1]
    for s in reversed(ss[:-1]):
        result = SPar(s, result)
    return result


def news(bindings: list[tuple[str, PrivType]], body: Process) -> Process:
    """Wrap ``body`` in restrictions, first binding outermost."""
    for base, ty in reversed(bindings):
        body = New(base, ty, body)
    return body


def snews(bindings: list[tuple[str, PrivType]], body: System) -> System:
    for base, ty in reversed(bindings):
        body = SNew(base, ty, body)
    return body
