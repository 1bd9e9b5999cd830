"""Closing a converted system so that its τ-moves can be explored.

Phantom channels are free in a converted system.  Each incoming one gets a
driver that sends one value; each outgoing one gets a sink that swallows one
message.  Context-variable message types are enumerated value by value, giving
one closed system per combination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .calculus.terms import ContextVar, Input, Lift, Name, New, Nil, Output, PrivType, Process, System, spar
from .converter.elements import ConversionOutput, PhantomUse


@dataclass(frozen=True)
class ClosedSystem:
    # (channel, value) for every enumerated driver, in channel order
    assignment: tuple[tuple[str, str], ...]
    system: System

    def describe(self) -> str:
        return " ".join(f"{ch}={v}" for ch, v in self.assignment) or "-"


def _driver(chan: str, ty: PrivType, value: str | None) -> Process:
    if value is not None:
        return Output(Name(chan), Name(value), Nil())
    fresh = "w" if chan == "v" else "v"
    return New(fresh, ty, Output(Name(chan), Name(fresh), Nil()))


def _sink(chan: str, ty: PrivType) -> Process:
    return Input(Name(chan), "x", ty, Nil())


def close_system(out: ConversionOutput) -> list[ClosedSystem]:
    """Every closure of ``out.system`` by phantom drivers and sinks."""
    seen: dict[tuple[str, bool], PhantomUse] = {}
    for use in out.phantoms:
        seen.setdefault((use.channel, use.incoming), use)
    uses = [seen[k] for k in sorted(seen)]
    drivers = [u for u in uses if u.incoming]
    sinks = [Lift(u.group, u.purpose, _sink(u.channel, u.type)) for u in uses if not u.incoming]
    choices = [list(u.type.domain) if isinstance(u.type, ContextVar) else [None] for u in drivers]
    closed = []
    for values in itertools.product(*choices):
        parts = [Lift(u.group, u.purpose, _driver(u.channel, u.type, v)) for u, v in zip(drivers, values)]
        assignment = tuple((u.channel, v) for u, v in zip(drivers, values) if v is not None)
        closed.append(ClosedSystem(assignment, spar(out.system, *parts, *sinks)))
    return closed
