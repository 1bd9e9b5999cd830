"""Hypothesis strategies for random calculus terms."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from bpmnpc.calculus import (
    Basic,
    Choice,
    Cond,
    ContextVar,
    GroupAtom,
    GroupBind,
    GroupType,
    Input,
    Lift,
    Name,
    New,
    Nil,
    Output,
    Par,
    Repl,
    SNew,
    SNil,
    SPar,
    Silent,
    Var,
    union,
)

BASES = ["a", "b", "x", "y"]
bases = st.sampled_from(BASES)
names = st.builds(Name, bases, st.integers(0, 2))
values = st.builds(Name, st.sampled_from(["a", "x", "ok"]))
types = st.sampled_from([
    Basic("T"),
    Basic("U"),
    ContextVar("S", ("ok", "no")),
    GroupType(GroupAtom("G"), Basic("T")),
    GroupType(union(GroupAtom("G"), GroupAtom("H")), Basic("T")),
])
groups = st.sampled_from([GroupAtom("G"), GroupAtom("H"), union(GroupAtom("G"), GroupAtom("H"))])


def processes(max_leaves: int = 8, with_var: bool = True) -> st.SearchStrategy:
    leaf = st.just(Nil())
    if with_var:
        leaf = st.one_of(leaf, st.just(Var("P_G")))

    def grow(ch):
        return st.one_of(
            st.builds(Input, names, bases, types, ch),
            st.builds(Output, names, names, ch),
            st.builds(Silent, ch),
            st.builds(New, bases, types, ch),
            st.builds(Par, ch, ch),
            st.builds(Choice, ch, ch),
            st.builds(Cond, names, values, ch, ch),
            st.builds(Repl, ch),
        )

    return st.recursive(leaf, grow, max_leaves=max_leaves)


def systems(max_leaves: int = 6) -> st.SearchStrategy:
    leaf = st.one_of(
        st.just(SNil()),
        st.builds(Lift, groups, st.sampled_from(["u", "v"]), processes(max_leaves=4, with_var=False)),
    )

    def grow(ch):
        return st.one_of(
            st.builds(SNew, bases, types, ch),
            st.builds(SPar, ch, ch),
            st.builds(GroupBind, groups, ch),
        )

    return st.recursive(leaf, grow, max_leaves=max_leaves)


terms = st.one_of(processes(), systems())


def shuffle(t, rnd: random.Random):
    """A congruent variant of ``t``: reordered and regrouped operands plus inert zeros."""
    match t:
        case Par() | Choice() | SPar():
            ctor = type(t)
            items = _flatten(t, ctor)
            items = [shuffle(x, rnd) for x in items]
            if ctor is Choice and rnd.random() < 0.3:
                items.append(rnd.choice(items))
            if ctor is not Choice and rnd.random() < 0.3:
                items.append(Nil() if ctor is Par else SNil())
            rnd.shuffle(items)
            return _regroup(items, ctor, rnd)
        case Input(x, a, ty, p):
            return Input(x, a, ty, shuffle(p, rnd))
        case Output(x, y, p):
            return Output(x, y, shuffle(p, rnd))
        case Silent(p):
            return Silent(shuffle(p, rnd))
        case New(a, ty, p):
            return New(a, ty, shuffle(p, rnd))
        case SNew(a, ty, s):
            return SNew(a, ty, shuffle(s, rnd))
        case Cond(x, v, p, q):
            return Cond(x, v, shuffle(p, rnd), shuffle(q, rnd))
        case Repl(p):
            return Repl(shuffle(p, rnd))
        case GroupBind(g, s):
            return GroupBind(g, shuffle(s, rnd))
        case Lift(g, u, p):
            return Lift(g, u, shuffle(p, rnd))
    return t


def _flatten(t, ctor):
    if isinstance(t, ctor):
        return _flatten(t.left, ctor) + _flatten(t.right, ctor)
    return [t]


def _regroup(items, ctor, rnd):
    if len(items) == 1:
        return items[0]
    cut = rnd.randint(1, len(items) - 1)
    return ctor(_regroup(items[:cut], ctor, rnd), _regroup(items[cut:], ctor, rnd))
