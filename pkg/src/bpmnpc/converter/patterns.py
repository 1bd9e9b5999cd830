"""Control-flow patterns as term combinators.

Every pattern passes tokens along channels; ``token`` is the binder base used
for received tokens and ``token_type`` their type.
"""

from __future__ import annotations

import enum
from typing import Iterable, Sequence

from ..calculus.terms import (
    Basic,
    Group,
    GroupType,
    Input,
    Name,
    New,
    Nil,
    Output,
    PrivType,
    Process,
    choice,
    par,
)


class PatternError(ValueError):
    pass


class EmptyFlows(PatternError):
    pass


class BadM(PatternError):
    pass


class Split(enum.Enum):
    PARALLEL = "parallel"
    EXCLUSIVE = "exclusive"


class Join(enum.Enum):
    CHOICE = "choice"
    N_OF_N = "n-of-n"
    M_OF_N = "m-of-n"


class FreshNames:
    """Issues ``prefix1``, ``prefix2``, ... skipping identifiers in ``avoid``."""

    def __init__(self, prefix: str, avoid: Iterable[str] = ()) -> None:
        self.prefix = prefix
        self.avoid = set(avoid)
        self.counter = 0

    def __call__(self) -> str:
        while True:
            self.counter += 1
            candidate = f"{self.prefix}{self.counter}"
            if candidate not in self.avoid:
                self.avoid.add(candidate)
                return candidate


def fresh_name(prefix: str, avoid: Iterable[str] = (), state: FreshNames | None = None) -> Name:
    source = state if state is not None else FreshNames(prefix, avoid)
    source.avoid.update(avoid)
    return Name(source())


def sequence_out(flow: Name, token: str = "t") -> Process:
    return Output(flow, Name(token), Nil())


def sequence_in(flow: Name, cont: Process, token: str = "t", token_type: PrivType = Basic("Token")) -> Process:
    return Input(flow, token, token_type, cont)


def split_pattern(kind: Split, outflows: Sequence[Name], token: Name | str = "t") -> Process:
    """Parallel split (``|``) or exclusive choice (``+``) of token outputs."""
    if not outflows:
        raise EmptyFlows("split needs at least one outgoing flow")
    tok = token if isinstance(token, Name) else Name(token)
    outs = [Output(f, tok, Nil()) for f in outflows]
    return par(*outs) if kind is Split.PARALLEL else choice(*outs)


def synchronisation(inflows: Sequence[Name], cont: Process, token: str = "t",
                    token_type: PrivType = Basic("Token")) -> Process:
    """Wait for every incoming flow in the listed order.

    Kept for completeness; element conversion uses :func:`join_pattern`.
    """
    if not inflows:
        raise EmptyFlows("synchronisation needs at least one incoming flow")
    for f in reversed(inflows):
        cont = Input(f, token, token_type, cont)
    return cont


def _inputs(chan: Name, k: int, cont: Process, token: str, ty: PrivType) -> Process:
    for _ in range(k):
        cont = Input(chan, token, ty, cont)
    return cont


def join_pattern(
    kind: Join,
    inflows: Sequence[Name],
    cont: Process,
    group: Group | None = None,
    fresh: FreshNames | None = None,
    m: int | None = None,
    token: str = "t",
    token_type: PrivType = Basic("Token"),
) -> Process:
    """Merge incoming token flows before continuing as ``cont``.

    ``N_OF_N`` and ``M_OF_N`` create private counter channels typed
    ``group[token_type]``, named by ``fresh``; the caller guarantees those
    names are not free in ``cont``.
    """
    n = len(inflows)
    if not n:
        raise EmptyFlows("join needs at least one incoming flow")
    tok = Name(token)
    if kind is Join.CHOICE:
        return choice(*(Input(f, token, token_type, cont) for f in inflows))
    if kind is Join.N_OF_N and n == 1:
        return Input(inflows[0], token, token_type, cont)
    if group is None or fresh is None:
        raise PatternError(f"{kind.value} join needs a group and a fresh-name source")
    chan_type = GroupType(group, token_type)
    h = fresh()
    hn = Name(h)
    triggers = [Input(f, token, token_type, Output(hn, tok, Nil())) for f in inflows]
    if kind is Join.N_OF_N:
        return New(h, chan_type, par(_inputs(hn, n, cont, token, token_type), *triggers))
    if m is None or not 1 <= m <= n:
        raise BadM(f"m must satisfy 1 <= m <= {n}, got {m}")
    r = fresh()
    rn = Name(r)
    counter = _inputs(hn, m, Output(rn, tok, _inputs(hn, n - m, Nil(), token, token_type)), token, token_type)
    body = par(Input(rn, token, token_type, cont), *triggers, counter)
    return New(h, chan_type, New(r, chan_type, body))
