"""α-canonical forms and the structural congruence decision procedure."""

from __future__ import annotations

from functools import lru_cache

from .syntax import print_term
from .terms import (
    Choice,
    Cond,
    GroupBind,
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
    Term,
    Var,
    is_process,
    is_system,
)

CANON_PREFIX = "_"


class LevelMismatch(TypeError):
    """Raised when a process is compared with a system."""


def canon_base(depth: int) -> str:
    return f"{CANON_PREFIX}{depth}"


def alpha_canonical(t: Term) -> Term:
    """Rename every binder to ``_<d>``, ``d`` being its binder depth.

    Binders on the same root path get distinct names, so every bound
    occurrence ends up with index 0.  Free names whose base clashes with a
    canonical binder in scope are lifted past it, keeping the term's meaning.
    Depth naming (rather than a global counter) keeps the result stable when
    parallel or choice operands are reordered.
    """
    return _canon(t, {}, 0)


def _canon(t: Term, env: dict[str, tuple[str, ...]], depth: int) -> Term:
    # env: original base -> stack of canonical names, innermost last

    def name(n: Name) -> Name:
        stack = env.get(n.base, ())
        if n.index < len(stack):
            return Name(stack[-1 - n.index], 0)
        outer = n.index - len(stack)
        shadowing = sum(1 for s in env.values() for c in s if c == n.base)
        return Name(n.base, outer + shadowing)

    def bind(base: str) -> tuple[str, dict[str, tuple[str, ...]]]:
        c = canon_base(depth)
        inner = dict(env)
        inner[base] = env.get(base, ()) + (c,)
        return c, inner

    match t:
        case Nil() | SNil() | Var():
            return t
        case Input(x, a, ty, p):
            c, inner = bind(a)
            return Input(name(x), c, ty, _canon(p, inner, depth + 1))
        case Output(x, y, p):
            return Output(name(x), name(y), _canon(p, env, depth))
        case Silent(p):
            return Silent(_canon(p, env, depth))
        case New(a, ty, p):
            c, inner = bind(a)
            return New(c, ty, _canon(p, inner, depth + 1))
        case SNew(a, ty, s):
            c, inner = bind(a)
            return SNew(c, ty, _canon(s, inner, depth + 1))
        case Par(p, q):
            return Par(_canon(p, env, depth), _canon(q, env, depth))
        case Choice(p, q):
            return Choice(_canon(p, env, depth), _canon(q, env, depth))
        case Cond(x, v, p, q):
            return Cond(name(x), name(v), _canon(p, env, depth), _canon(q, env, depth))
        case Repl(p):
            return Repl(_canon(p, env, depth))
        case SPar(s1, s2):
            return SPar(_canon(s1, env, depth), _canon(s2, env, depth))
        case GroupBind(g, s):
            return GroupBind(g, _canon(s, env, depth))
        case Lift(g, u, p):
            return Lift(g, u, _canon(p, env, depth))
    raise TypeError(f"not a term: {t!r}")


def _flatten(t: Term, ctor: type) -> list[Term]:
    if isinstance(t, ctor):
        return _flatten(t.left, ctor) + _flatten(t.right, ctor)  # type: ignore[attr-defined]
    return [t]


def _rebuild(items: list[Term], ctor: type, empty: Term) -> Term:
    if not items:
        return empty
    result = items[-1]
    for item in reversed(items[:-1]):
        result = ctor(item, result)
    return result


def _sorted(items: list[Term]) -> list[Term]:
    return sorted(items, key=print_term)


@lru_cache(maxsize=1 << 16)
def _simplify(t: Term) -> Term:
    match t:
        case Nil() | SNil() | Var():
            return t
        case Input(x, a, ty, p):
            return Input(x, a, ty, _simplify(p))
        case Output(x, y, p):
            return Output(x, y, _simplify(p))
        case Silent(p):
            return Silent(_simplify(p))
        case New(a, ty, p):
            body = _simplify(p)
            return Nil() if isinstance(body, Nil) else New(a, ty, body)
        case SNew(a, ty, s):
            body = _simplify(s)
            return SNil() if isinstance(body, SNil) else SNew(a, ty, body)
        case Par():
            ops = [_simplify(x) for x in _flatten(t, Par)]
            flat = [y for x in ops for y in _flatten(x, Par) if not isinstance(y, Nil)]
            return _rebuild(_sorted(flat), Par, Nil())
        case SPar():
            ops = [_simplify(x) for x in _flatten(t, SPar)]
            flat = [y for x in ops for y in _flatten(x, SPar) if not isinstance(y, SNil)]
            return _rebuild(_sorted(flat), SPar, SNil())
        case Choice():
            ops = [_simplify(x) for x in _flatten(t, Choice)]
            flat = [y for x in ops for y in _flatten(x, Choice)]
            unique = list(dict.fromkeys(flat))
            return _rebuild(_sorted(unique), Choice, Nil())
        case Cond(x, v, p, q):
            return Cond(x, v, _simplify(p), _simplify(q))
        case Repl(p):
            body = _simplify(p)
            return Nil() if isinstance(body, Nil) else Repl(body)
        case GroupBind(g, s):
            body = _simplify(s)
            return SNil() if isinstance(body, SNil) else GroupBind(g, body)
        case Lift(g, u, p):
            body = _simplify(p)
            return SNil() if isinstance(body, Nil) else Lift(g, u, body)
    raise TypeError(f"not a term: {t!r}")


def normalize(t: Term) -> Term:
    """Normal form modulo structural congruence.

    α-canonicalize, then bottom-up: flatten ``|``/``+``/``||`` chains, drop
    inert ``0`` operands and ``0``-bodied binders, replications, group binds
    and lifts, deduplicate choice operands, and sort operands by their
    printed form.
    """
    return _simplify(alpha_canonical(t))


def congruent(t: Term, u: Term) -> bool:
    if is_process(t) != is_process(u) or is_system(t) != is_system(u):
        raise LevelMismatch("cannot compare a process with a system")
    return normalize(t) == normalize(u)


def alpha_equivalent(t: Term, u: Term) -> bool:
    return alpha_canonical(t) == alpha_canonical(u)
