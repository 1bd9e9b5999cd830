"""Concrete syntax for terms: a printer and a recursive-descent parser.

Grammar (``docs/grammar.md`` has the EBNF)::

    P ::= 0 | x(y:T).P | x!<y>.P | tau.P | (new x:T)P | P | P | P + P
        | if x=v then P else P | !P | X
    S ::= 0 | (new x:T)S | S || S | (group G)S | [G,u]{P}

Prefixes bind tighter than ``|`` and ``+``; a chain of one operator nests to
the right and mixing ``|`` with ``+`` requires parentheses.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .terms import (
    Basic,
    BoundOut,
    Choice,
    Cond,
    ContextVar,
    Group,
    GroupAtom,
    GroupBind,
    GroupType,
    GroupUnion,
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
    Process,
    Repl,
    SNew,
    SNil,
    SPar,
    Silent,
    System,
    Tau,
    Term,
    Var,
    group_atoms,
    union,
)

KEYWORDS = frozenset({"tau", "new", "if", "then", "else", "group"})
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_'\-]*")


class TermSyntaxError(ValueError):
    def __init__(self, message: str, pos: int) -> None:
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def is_identifier(s: str) -> bool:
    return bool(IDENT_RE.fullmatch(s)) and s not in KEYWORDS


# --- printing --------------------------------------------------------------


def print_group(g: Group) -> str:
    return "+".join(a.id for a in group_atoms(g))


def print_type(ty: PrivType, domains: bool = True) -> str:
    match ty:
        case Basic(i):
            return i
        case ContextVar(i, dom):
            return f"{i}{{{','.join(dom)}}}" if domains else i
        case GroupType(g, inner):
            gs = print_group(g)
            if isinstance(g, GroupUnion):
                gs = f"({gs})"
            return f"{gs}[{print_type(inner, domains)}]"
    raise TypeError(f"not a type: {ty!r}")


def print_label(lab: Label) -> str:
    match lab:
        case Tau():
            return "tau"
        case In(x, a):
            return f"{x}?{a}"
        case Out(x, y):
            return f"{x}!{y}"
        case BoundOut(x, a, ty):
            return f"{x}!(new {a}:{print_type(ty)})"
    raise TypeError(f"not a label: {lab!r}")


@lru_cache(maxsize=1 << 16)
def print_term(t: Term, domains: bool = True) -> str:
    """Render a process or system in the concrete grammar."""
    return _pp(t, domains)


def _unary(t: Term, d: bool) -> str:
    s = _pp(t, d)
    if isinstance(t, (Par, Choice, SPar)):
        return f"({s})"
    return s


def _pp(t: Term, d: bool) -> str:
    match t:
        case Nil() | SNil():
            return "0"
        case Var(i):
            return i
        case Input(x, a, ty, p):
            return f"{x}({a}:{print_type(ty, d)}).{_unary(p, d)}"
        case Output(x, y, p):
            return f"{x}!<{y}>.{_unary(p, d)}"
        case Silent(p):
            return f"tau.{_unary(p, d)}"
        case New(a, ty, p) | SNew(a, ty, p):
            return f"(new {a}:{print_type(ty, d)}){_unary(p, d)}"
        case Repl(p):
            return f"!{_unary(p, d)}"
        case Cond(x, v, p, q):
            return f"if {x}={v} then {_unary(p, d)} else {_unary(q, d)}"
        case Par(p, q):
            left = _unary(p, d)
            right = _pp(q, d) if isinstance(q, Par) else _unary(q, d)
            return f"{left} | {right}"
        case Choice(p, q):
            left = _unary(p, d)
            right = _pp(q, d) if isinstance(q, Choice) else _unary(q, d)
            return f"{left} + {right}"
        case SPar(s1, s2):
            left = _unary(s1, d)
            right = _pp(s2, d) if isinstance(s2, SPar) else _unary(s2, d)
            return f"{left} || {right}"
        case GroupBind(g, s):
            return f"(group {print_group(g)}){_unary(s, d)}"
        case Lift(g, u, p):
            return f"[{print_group(g)},{u}]{{{_pp(p, d)}}}"
    raise TypeError(f"not a term: {t!r}")


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<index>~\d+)|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_'\-]*)"
    r"|(?P<op>\|\||[|+.()!<>\[\]{},:=?]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks: list[tuple[str, str, int]] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        assert kind is not None
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0

    # token helpers
    def peek(self, k: int = 0) -> tuple[str, str, int]:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value: str, k: int = 0) -> bool:
        kind, v, _ = self.peek(k)
        return v == value and kind in ("op", "ident", "num")

    def next(self) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, v, pos = self.next()
        if v != value:
            raise TermSyntaxError(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def error(self, msg: str) -> TermSyntaxError:
        return TermSyntaxError(msg, self.peek()[2])

    def ident(self) -> str:
        kind, v, pos = self.next()
        if kind != "ident" or v in KEYWORDS:
            raise TermSyntaxError(f"expected identifier, found {v or 'end of input'!r}", pos)
        return v

    def name(self) -> Name:
        base = self.ident()
        if self.peek()[0] == "index":
            return Name(base, int(self.next()[1][1:]))
        return Name(base, 0)

    def done(self) -> None:
        kind, v, pos = self.peek()
        if kind != "eof":
            raise TermSyntaxError(f"unexpected {v!r}", pos)

    # groups and types
    def group_atoms(self) -> Group:
        atoms: list[Group] = [GroupAtom(self.ident())]
        while self.at("+"):
            self.next()
            atoms.append(GroupAtom(self.ident()))
        return union(*atoms)

    def type_(self) -> PrivType:
        if self.at("("):
            self.next()
            g = self.group_atoms()
            self.expect(")")
            return self._group_type(g)
        ident = self.ident()
        if self.at("+"):
            self.i -= 1
            return self._group_type(self.group_atoms())
        if self.at("["):
            return self._group_type(GroupAtom(ident))
        if self.at("{"):
            self.next()
            values = [self.ident()]
            while self.at(","):
                self.next()
                values.append(self.ident())
            self.expect("}")
            try:
                return ContextVar(ident, tuple(values))
            except ValueError as exc:
                raise self.error(str(exc)) from None
        return Basic(ident)

    def _group_type(self, g: Group) -> PrivType:
        self.expect("[")
        inner = self.type_()
        self.expect("]")
        return GroupType(g, inner)

    # processes
    def process(self) -> Process:
        first = self.punary()
        if self.at("|") or self.at("+"):
            op = self.peek()[1]
            items = [first]
            while self.at(op):
                self.next()
                items.append(self.punary())
            if self.at("|") or self.at("+"):
                raise self.error("mixing '|' and '+' requires parentheses")
            ctor = Par if op == "|" else Choice
            result = items[-1]
            for p in reversed(items[:-1]):
                result = ctor(p, result)
            return result
        return first

    def punary(self) -> Process:
        kind, v, pos = self.peek()
        if kind == "num":
            if v != "0":
                raise TermSyntaxError(f"unexpected number {v}", pos)
            self.next()
            return Nil()
        if v == "tau" and kind == "ident":
            self.next()
            self.expect(".")
            return Silent(self.punary())
        if v == "!" and kind == "op":
            self.next()
            return Repl(self.punary())
        if v == "if" and kind == "ident":
            self.next()
            x = self.name()
            self.expect("=")
            val = self.name()
            self.expect("then")
            p = self.punary()
            self.expect("else")
            q = self.punary()
            return Cond(x, val, p, q)
        if v == "(":
            if self.at("new", 1):
                self.next()
                self.next()
                base = self.ident()
                self.expect(":")
                ty = self.type_()
                self.expect(")")
                return New(base, ty, self.punary())
            self.next()
            p = self.process()
            self.expect(")")
            return p
        if kind == "ident" and v not in KEYWORDS:
            subject = self.name()
            if self.at("("):
                self.next()
                binder = self.ident()
                self.expect(":")
                ty = self.type_()
                self.expect(")")
                self.expect(".")
                return Input(subject, binder, ty, self.punary())
            if self.at("!") and self.at("<", 1):
                self.next()
                self.next()
                obj = self.name()
                self.expect(">")
                self.expect(".")
                return Output(subject, obj, self.punary())
            if subject.index != 0:
                raise TermSyntaxError("process variable cannot carry an index", pos)
            return Var(subject.base)
        raise TermSyntaxError(f"unexpected {v or 'end of input'!r}", pos)

    # systems
    def system(self) -> System:
        items = [self.sunary()]
        while self.at("||"):
            self.next()
            items.append(self.sunary())
        result = items[-1]
        for s in reversed(items[:-1]):
            result = SPar(s, result)
        return result

    def sunary(self) -> System:
        kind, v, pos = self.peek()
        if kind == "num" and v == "0":
            self.next()
            return SNil()
        if v == "[":
            self.next()
            g = self.group_atoms()
            self.expect(",")
            purpose = self.ident()
            self.expect("]")
            self.expect("{")
            body = self.process()
            self.expect("}")
            return Lift(g, purpose, body)
        if v == "(":
            if self.at("new", 1):
                self.next()
                self.next()
                base = self.ident()
                self.expect(":")
                ty = self.type_()
                self.expect(")")
                return SNew(base, ty, self.sunary())
            if self.at("group", 1):
                self.next()
                self.next()
                g = self.group_atoms()
                self.expect(")")
                return GroupBind(g, self.sunary())
            self.next()
            s = self.system()
            self.expect(")")
            return s
        raise TermSyntaxError(f"unexpected {v or 'end of input'!r} in system", pos)


def _looks_like_system(text: str) -> bool:
    toks = _tokenize(text)
    for (k1, v1, _), (k2, v2, _) in zip(toks, toks[1:]):
        if v1 == "||" or (k1 == "ident" and v1 == "group"):
            return True
        if v1 == "]" and v2 == "{":
            return True
    return False


def parse_process(text: str) -> Process:
    parser = _Parser(text)
    p = parser.process()
    parser.done()
    return p


def parse_system(text: str) -> System:
    parser = _Parser(text)
    s = parser.system()
    parser.done()
    return s


def parse_term(text: str) -> Term:
    """Parse a process, or a system if the text uses system-only syntax."""
    if _looks_like_system(text):
        return parse_system(text)
    return parse_process(text)


def parse_type(text: str) -> PrivType:
    parser = _Parser(text)
    ty = parser.type_()
    parser.done()
    return ty


def parse_label(text: str) -> Label:
    """Inverse of :func:`print_label`: ``tau``, ``x?b``, ``x!y`` or ``x!(new b:T)``."""
    parser = _Parser(text)
    if parser.at("tau"):
        parser.next()
        parser.done()
        return Tau()
    chan = parser.name()
    if parser.at("?"):
        parser.next()
        lab: Label = In(chan, parser.ident())
    else:
        parser.expect("!")
        if parser.at("("):
            parser.next()
            parser.expect("new")
            binder = parser.ident()
            parser.expect(":")
            ty = parser.type_()
            parser.expect(")")
            lab = BoundOut(chan, binder, ty)
        else:
            lab = Out(chan, parser.name())
    parser.done()
    return lab


def parse_group(text: str) -> Group:
    parser = _Parser(text)
    g = parser.group_atoms()
    parser.done()
    return g
