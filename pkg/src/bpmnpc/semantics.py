"""Late labelled transition semantics, bounded exploration and traces.

Transitions carrying an input or bound-output label leave their target under
an implicit binder named by the label (see :class:`~bpmnpc.calculus.In`).
Where a rule's side condition would let that binder capture a free name of a
passive component, the binder is α-renamed first, which is what (Congr)
licenses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

from .calculus.cinni import (
    bound_names,
    free_names,
    fresh_base,
    instantiate,
    map_label,
    rename_binder,
)
from .calculus.congruence import normalize
from .calculus.syntax import print_label, print_term
from .calculus.terms import (
    BoundOut,
    Choice,
    Cond,
    GroupBind,
    In,
    Input,
    Label,
    Lift,
    Name,
    New,
    Nil,
    Out,
    Output,
    Par,
    PrivType,
    Repl,
    SNew,
    SNil,
    SPar,
    Silent,
    Tau,
    Term,
    Var,
)

Step = tuple[Label, Term]


class GraphCyclic(ValueError):
    pass


class GraphTruncated(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    label: Label
    target: Term

    def __str__(self) -> str:
        return f"--{print_label(self.label)}--> {print_term(self.target)}"


def _free_bases(t: Term) -> frozenset[str]:
    return frozenset(n.base for n in free_names(t))


def _rebind(lab: Label, new: str) -> Label:
    if isinstance(lab, In):
        return In(lab.chan, new)
    assert isinstance(lab, BoundOut)
    return BoundOut(lab.chan, new, lab.ty)


def _avoid_capture(lab: Label, target: Term, passive: Term) -> Step:
    """Enforce bn(l) ∩ fn(passive) = ∅ by renaming the label binder."""
    bn = bound_names(lab)
    if not bn:
        return lab, target
    (b,) = bn
    clash = _free_bases(passive)
    if b not in clash:
        return lab, target
    new = fresh_base(b, clash | _free_bases(target))
    return _rebind(lab, new), rename_binder(target, b, new)


def _down(n: Name, base: str) -> Name:
    return Name(base, n.index - 1) if n.base == base and n.index > 0 else n


def _restrict(base: str, ty: PrivType, body: tuple[Step, ...], ctor: Callable) -> Iterator[Step]:
    """(Open) and (ResN) for ``(new base:ty)`` over a body with steps ``body``."""
    here = Name(base, 0)
    for lab, tgt in body:
        if isinstance(lab, Out) and lab.obj == here:
            if lab.chan != here:
                # the restriction's binder becomes the label's binder
                yield BoundOut(_down(lab.chan, base), base, ty), tgt
            continue
        if here in free_names(lab):
            continue
        if base in bound_names(lab):
            new = fresh_base(base, _free_bases(tgt))
            lab, tgt = _rebind(lab, new), rename_binder(tgt, base, new)
        yield map_label(lab, lambda n: _down(n, base)), ctor(base, ty, tgt)


def _communicate(recv: tuple[Step, ...], send: tuple[Step, ...], join: Callable, new_ctor: Callable) -> Iterator[Step]:
    """(Comm) and (Close); ``join(receiver', sender')`` places the residues."""
    for l1, t1 in recv:
        if not isinstance(l1, In):
            continue
        for l2, t2 in send:
            if l2.__class__ is Out and l2.chan == l1.chan:
                yield Tau(), join(instantiate(t1, l1.binder, l2.obj), t2)
            elif isinstance(l2, BoundOut) and l2.chan == l1.chan:
                b = l2.binder
                yield Tau(), new_ctor(b, l2.ty, join(rename_binder(t1, l1.binder, b), t2))


def _parallel(p: Term, q: Term, par: Callable, new_ctor: Callable) -> tuple[Step, ...]:
    ps, qs = _derive(p), _derive(q)
    out: list[Step] = []
    for lab, tgt in ps:
        lab, tgt = _avoid_capture(lab, tgt, q)
        out.append((lab, par(tgt, q)))
    for lab, tgt in qs:
        lab, tgt = _avoid_capture(lab, tgt, p)
        out.append((lab, par(p, tgt)))
    out.extend(_communicate(ps, qs, par, new_ctor))
    out.extend(_communicate(qs, ps, lambda r, s: par(s, r), new_ctor))
    return tuple(out)


def derive(t: Term) -> list[Step]:
    """One-step transitions of ``t`` by the structural rules, targets raw.

    (Congr) is not used here; :func:`step` gets it by deriving from the
    normal form.
    """
    return list(_derive(t))


@lru_cache(maxsize=1 << 15)
def _derive(t: Term) -> tuple[Step, ...]:
    match t:
        case Nil() | SNil() | Var():
            return ()
        case Input(x, a, _, p):
            return ((In(x, a), p),)
        case Output(x, y, p):
            return ((Out(x, y), p),)
        case Silent(p):
            return ((Tau(), p),)
        case Repl(p):
            out = []
            for lab, tgt in _derive(p):
                lab, tgt = _avoid_capture(lab, tgt, t)
                out.append((lab, Par(tgt, t)))
            return tuple(out)
        case Choice(p, q):
            return _derive(p) + _derive(q)
        case Cond(x, v, p, q):
            return _derive(p) if x == v else _derive(q)
        case New(a, ty, p):
            return tuple(_restrict(a, ty, _derive(p), New))
        case SNew(a, ty, s):
            return tuple(_restrict(a, ty, _derive(s), SNew))
        case Par(p, q):
            return _parallel(p, q, Par, New)
        case SPar(s1, s2):
            return _parallel(s1, s2, SPar, SNew)
        case GroupBind(g, s):
            return tuple((lab, GroupBind(g, tgt)) for lab, tgt in _derive(s))
        case Lift(g, u, p):
            return tuple((lab, Lift(g, u, tgt)) for lab, tgt in _derive(p))
    raise TypeError(f"not a term: {t!r}")


@lru_cache(maxsize=1 << 14)
def step(t: Term) -> frozenset[Transition]:
    """Every one-step transition of ``t``, targets in normal form."""
    return frozenset(Transition(lab, normalize(tgt)) for lab, tgt in _derive(normalize(t)))


def transition_key(tr: Transition, reserved: str = "_bound") -> tuple[Label, Term]:
    """Comparison key identifying transitions up to α on the label binder."""
    lab, tgt = tr.label, tr.target
    if bound_names(lab):
        (b,) = bound_names(lab)
        lab, tgt = _rebind(lab, reserved), rename_binder(tgt, b, reserved)
    return lab, normalize(tgt)


# --- exploration -----------------------------------------------------------


@dataclass
class TransitionGraph:
    """States keyed by the printed normal form, in discovery order."""

    states: dict[str, Term]
    edges: list[tuple[str, Label, str]]
    root: str
    truncated: bool

    def successors(self, key: str) -> list[tuple[Label, str]]:
        return [(lab, dst) for src, lab, dst in self.edges if src == key]

    def sinks(self) -> list[str]:
        has_out = {src for src, _, _ in self.edges}
        return [k for k in self.states if k not in has_out]


def explore(t: Term, max_states: int = 10_000, max_depth: int = 1_000, tau_only: bool = False) -> TransitionGraph:
    """Breadth-first closure of :func:`step` from ``t``.

    Stops expanding at ``max_depth`` and refuses new states beyond
    ``max_states``; either event marks the graph truncated.
    """
    if max_states < 1 or max_depth < 1:
        raise ValueError("exploration limits must be positive")
    root = normalize(t)
    rkey = print_term(root)
    states = {rkey: root}
    depth = {rkey: 0}
    edges: dict[tuple[str, Label, str], None] = {}
    truncated = False
    queue = deque([rkey])
    while queue:
        key = queue.popleft()
        moves = [tr for tr in step(states[key]) if not tau_only or isinstance(tr.label, Tau)]
        if depth[key] >= max_depth:
            truncated = truncated or bool(moves)
            continue
        for tr in sorted(moves, key=lambda m: (print_label(m.label), print_term(m.target))):
            tkey = print_term(tr.target)
            if tkey not in states:
                if len(states) >= max_states:
                    truncated = True
                    continue
                states[tkey] = tr.target
                depth[tkey] = depth[key] + 1
                queue.append(tkey)
            edges[(key, tr.label, tkey)] = None
    return TransitionGraph(states, list(edges), rkey, truncated)


def maximal_traces(g: TransitionGraph) -> list[tuple[Label, ...]]:
    """Label sequences of all root-to-sink paths, ordered by printed labels."""
    if g.truncated:
        raise GraphTruncated("graph exploration was truncated")
    succ: dict[str, list[tuple[Label, str]]] = {k: [] for k in g.states}
    for src, lab, dst in g.edges:
        succ[src].append((lab, dst))

    # colour-based cycle check before enumerating paths
    colour: dict[str, int] = {}
    stack: list[tuple[str, int]] = [(g.root, 0)]
    while stack:
        node, i = stack.pop()
        if i == 0:
            if colour.get(node) == 2:
                continue
            colour[node] = 1
        if i < len(succ[node]):
            stack.append((node, i + 1))
            nxt = succ[node][i][1]
            if colour.get(nxt) == 1:
                raise GraphCyclic(f"cycle through state {nxt}")
            if colour.get(nxt) != 2:
                stack.append((nxt, 0))
        else:
            colour[node] = 2

    @lru_cache(maxsize=None)
    def paths(node: str) -> tuple[tuple[Label, ...], ...]:
        if not succ[node]:
            return ((),)
        return tuple((lab,) + rest for lab, dst in succ[node] for rest in paths(dst))

    traces = list(paths(g.root))
    traces.sort(key=lambda tr: [print_label(lab) for lab in tr])
    return traces


def format_trace(trace: tuple[Label, ...]) -> str:
    return ",".join(print_label(lab) for lab in trace)
