"""CINNI index arithmetic: free names, substitution and shifting."""

from __future__ import annotations

from collections import Counter
from typing import Callable

from .terms import (
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
    Repl,
    SNew,
    SNil,
    SPar,
    Silent,
    Tau,
    Term,
    Var,
)

# (name, binder counts of the enclosing scope inside the term) -> name
NameFn = Callable[[Name, Counter], Name]


def map_names(t: Term, fn: NameFn, counts: Counter | None = None) -> Term:
    """Rebuild ``t`` applying ``fn`` to every name occurrence.

    ``fn`` receives the multiset of binder bases enclosing the occurrence, so
    it can tell free occurrences (``index >= counts[base]``) from bound ones.
    """
    return _map(t, fn, Counter() if counts is None else counts)


def _bind(base: str, counts: Counter) -> Counter:
    inner = counts.copy()
    inner[base] += 1
    return inner


def _map(t: Term, fn: NameFn, c: Counter) -> Term:
    match t:
        case Nil() | SNil() | Var():
            return t
        case Input(x, a, ty, p):
            return Input(fn(x, c), a, ty, _map(p, fn, _bind(a, c)))
        case Output(x, y, p):
            return Output(fn(x, c), fn(y, c), _map(p, fn, c))
        case Silent(p):
            return Silent(_map(p, fn, c))
        case New(a, ty, p):
            return New(a, ty, _map(p, fn, _bind(a, c)))
        case Par(p, q):
            return Par(_map(p, fn, c), _map(q, fn, c))
        case Choice(p, q):
            return Choice(_map(p, fn, c), _map(q, fn, c))
        case Cond(x, v, p, q):
            return Cond(fn(x, c), fn(v, c), _map(p, fn, c), _map(q, fn, c))
        case Repl(p):
            return Repl(_map(p, fn, c))
        case SNew(a, ty, s):
            return SNew(a, ty, _map(s, fn, _bind(a, c)))
        case SPar(s1, s2):
            return SPar(_map(s1, fn, c), _map(s2, fn, c))
        case GroupBind(g, s):
            return GroupBind(g, _map(s, fn, c))
        case Lift(g, u, p):
            return Lift(g, u, _map(p, fn, c))
    raise TypeError(f"not a term: {t!r}")


def map_label(lab: Label, fn: Callable[[Name], Name]) -> Label:
    match lab:
        case Tau():
            return lab
        case In(x, a):
            return In(fn(x), a)
        case Out(x, y):
            return Out(fn(x), fn(y))
        case BoundOut(x, a, ty):
            return BoundOut(fn(x), a, ty)
    raise TypeError(f"not a label: {lab!r}")


def free_names(t: Term | Label) -> frozenset[Name]:
    """Free names of a term or label, indexed as seen from outside ``t``."""
    if isinstance(t, (Tau, In, Out, BoundOut)):
        match t:
            case Tau():
                return frozenset()
            case Out(x, y):
                return frozenset((x, y))
            case _:
                return frozenset((t.chan,))
    found: set[Name] = set()

    def collect(n: Name, c: Counter) -> Name:
        k = c[n.base]
        if n.index >= k:
            found.add(Name(n.base, n.index - k))
        return n

    map_names(t, collect)
    return frozenset(found)


def bound_names(lab: Label) -> frozenset[str]:
    """Binder bases introduced by a label (input and bound output)."""
    if isinstance(lab, (In, BoundOut)):
        return frozenset((lab.binder,))
    return frozenset()


def all_bases(t: Term) -> frozenset[str]:
    """Every base identifier occurring in ``t``, free or bound."""
    found: set[str] = set()

    def collect(n: Name, c: Counter) -> Name:
        found.add(n.base)
        return n

    map_names(t, collect)
    _walk_binders(t, found)
    return frozenset(found)


def _walk_binders(t: Term, acc: set[str]) -> None:
    match t:
        case Input(_, a, _, p) | New(a, _, p):
            acc.add(a)
            _walk_binders(p, acc)
        case SNew(a, _, s):
            acc.add(a)
            _walk_binders(s, acc)
        case Output(_, _, p) | Silent(p) | Repl(p) | Lift(_, _, p):
            _walk_binders(p, acc)
        case GroupBind(_, s):
            _walk_binders(s, acc)
        case Par(p, q) | Choice(p, q) | Cond(_, _, p, q) | SPar(p, q):
            _walk_binders(p, acc)
            _walk_binders(q, acc)


def lift(n: Name, base: str, by: int = 1) -> Name:
    return Name(n.base, n.index + by) if n.base == base else n


def subst(t: Term, a: Name, b: Name) -> Term:
    """Replace every free occurrence of ``a`` in ``t`` with ``b``.

    Both names are read in the scope surrounding ``t``; crossing a binder of
    base ``a`` (resp. ``b``) raises the tracked index of ``a`` (resp. ``b``).
    """

    def fn(n: Name, c: Counter) -> Name:
        if n.base == a.base and n.index == a.index + c[a.base]:
            return Name(b.base, b.index + c[b.base])
        return n

    return map_names(t, fn)


def shift_up(t: Term, base: str) -> Term:
    """Increment the index of every free occurrence of ``base``."""

    def fn(n: Name, c: Counter) -> Name:
        if n.base == base and n.index >= c[base]:
            return Name(base, n.index + 1)
        return n

    return map_names(t, fn)


def shift_down(t: Term | Label, base: str) -> Term | Label:
    """Decrement the index of every free occurrence of ``base``, flooring at 0."""
    if isinstance(t, (Tau, In, Out, BoundOut)):
        return map_label(t, lambda n: Name(base, n.index - 1) if n.base == base and n.index > 0 else n)

    def fn(n: Name, c: Counter) -> Name:
        if n.base == base and n.index > c[base]:
            return Name(base, n.index - 1)
        return n

    return map_names(t, fn)


def instantiate(body: Term, base: str, value: Name) -> Term:
    """Remove an (implicit) binder of ``base`` enclosing ``body``.

    Occurrences bound by it become ``value``; occurrences of outer names of the
    same base lose one index.  This is the CINNI substitution ``[base := value]``
    used when an input prefix receives ``value``.
    """

    def fn(n: Name, c: Counter) -> Name:
        if n.base != base:
            return n
        k = c[base]
        if n.index == k:
            return Name(value.base, value.index + c[value.base])
        if n.index > k:
            return Name(base, n.index - 1)
        return n

    return map_names(body, fn)


def rename_binder(body: Term, old: str, new: str) -> Term:
    """α-rename the implicit binder ``old`` enclosing ``body`` to ``new``."""
    if old == new:
        return body
    return instantiate(shift_up(body, new), old, Name(new, 0))


def fresh_base(base: str, avoid: frozenset[str] | set[str]) -> str:
    """``base`` primed until it avoids ``avoid``."""
    candidate = base + "'"
    while candidate in avoid:
        candidate += "'"
    return candidate
