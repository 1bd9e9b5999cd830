"""Flow Node, Process and Collaboration conversion."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterator

from ..bpmn import Condition, CondOp, Diagram, FlowNode, NodeKind, ProcessGraph, TaskKind, reachable_from
from ..calculus.cinni import free_names
from ..calculus.syntax import is_identifier
from ..calculus.terms import (
    Basic,
    Cond,
    ContextVar,
    Group,
    GroupAtom,
    GroupBind,
    GroupType,
    Input,
    Lift,
    Name,
    New,
    Nil,
    Output,
    PrivType,
    Process,
    Repl,
    Silent,
    SNil,
    System,
    Term,
    Var,
    choice,
    group_atoms,
    news,
    par,
    snews,
    spar,
    union,
)
from ..validate import validate
from .config import (
    ConversionConfig,
    ConversionError,
    MissingGroup,
    MissingMessageMeta,
    NameClash,
    ProcessMeta,
    UnsupportedNode,
    ValidationRequired,
)
from .patterns import FreshNames, Join, Split, join_pattern, split_pattern


class GuardError(ConversionError):
    pass


@dataclass(frozen=True)
class MessageBinding:
    channel: str
    name: str
    type: PrivType
    phantom: bool = False


@dataclass
class NodeContext:
    """Everything :func:`convert_node` needs to know about a node's surroundings."""

    incoming: list[str]
    outgoing: list[tuple[str, Condition | None]]
    group: Group
    fresh: FreshNames
    msg_in: list[MessageBinding] = field(default_factory=list)
    msg_out: list[MessageBinding] = field(default_factory=list)
    token: str = "t"
    token_type: PrivType = Basic("Token")
    # split over a Sub-Process's outgoing flows, for End Events in its body
    continuation: Process | None = None
    # converted body, for Sub-Processes
    body: Process | None = None


@dataclass(frozen=True)
class PhantomUse:
    node_id: str
    channel: str
    type: PrivType
    incoming: bool
    group: Group
    purpose: str


@dataclass(frozen=True)
class Declarations:
    groups: tuple[GroupAtom, ...] = ()
    purposes: tuple[str, ...] = ()
    basic_types: tuple[str, ...] = ()
    context_vars: tuple[ContextVar, ...] = ()
    process_vars: tuple[str, ...] = ()

    def identifiers(self) -> list[str]:
        ids = [g.id for g in self.groups] + list(self.purposes) + list(self.basic_types)
        for cv in self.context_vars:
            ids.append(cv.id)
            ids.extend(cv.domain)
        return ids + list(self.process_vars)


@dataclass(frozen=True)
class ConversionOutput:
    system: System
    context: dict[Name, PrivType]
    declarations: Declarations
    phantoms: tuple[PhantomUse, ...] = ()


# --- single nodes ----------------------------------------------------------


def _guard(node: FlowNode, cond: Condition, ctx: NodeContext, out: Process) -> Process:
    if not ctx.msg_in:
        raise GuardError(f"{node.id}: conditional flow without a received message")
    m = ctx.msg_in[0]
    if cond.subject is not None and cond.subject != m.name:
        raise GuardError(f"{node.id}: condition tests {cond.subject!r} but the message is {m.name!r}")
    if not isinstance(m.type, ContextVar) or cond.value not in m.type.domain:
        raise GuardError(f"{node.id}: value {cond.value!r} is not in the domain of the message type")
    # a same-named outgoing message binder sits between the guard and m
    index = 1 if ctx.msg_out and ctx.msg_out[0].name == m.name else 0
    x, v = Name(m.name, index), Name(cond.value)
    return Cond(x, v, out, Nil()) if cond.op is CondOp.EQ else Cond(x, v, Nil(), out)


def _send(m: MessageBinding, cont: Process) -> Process:
    return New(m.name, m.type, Output(Name(m.channel), Name(m.name), cont))


def _receive(m: MessageBinding, cont: Process) -> Process:
    return Input(Name(m.channel), m.name, m.type, cont)


def _split(ctx: NodeContext) -> Process:
    return split_pattern(Split.PARALLEL, [Name(f) for f, _ in ctx.outgoing], ctx.token)


def _join(ctx: NodeContext, cont: Process, kind: Join = Join.N_OF_N) -> Process:
    return join_pattern(kind, [Name(f) for f in ctx.incoming], cont, ctx.group, ctx.fresh,
                        token=ctx.token, token_type=ctx.token_type)


def _single_in(node: FlowNode, ctx: NodeContext, cont: Process) -> Process:
    if len(ctx.incoming) != 1:
        raise ValidationRequired([f"{node.id} needs exactly one incoming sequence flow"])
    return Input(Name(ctx.incoming[0]), ctx.token, ctx.token_type, cont)


def _message_end(ctx: NodeContext) -> Process:
    cont = ctx.continuation
    if len(ctx.msg_out) == 1:
        return _send(ctx.msg_out[0], cont if cont is not None else Nil())
    parts = [_send(m, Nil()) for m in ctx.msg_out]
    if cont is not None:
        parts.append(cont)
    return par(*parts)


def convert_node(node: FlowNode, ctx: NodeContext) -> Process:
    """The term for one Flow Node given its incident flows and messages."""
    tok = ctx.token
    match node.kind:
        case NodeKind.START:
            body = New(tok, ctx.token_type, _split(ctx))
            if ctx.msg_in:
                return choice(*(_receive(m, body) for m in ctx.msg_in))
            return body
        case NodeKind.END:
            return _join(ctx, _message_end(ctx))
        case NodeKind.CATCH:
            if len(ctx.msg_in) != 1:
                raise MissingMessageMeta(f"{node.id}: catch event needs exactly one message")
            return _single_in(node, ctx, _receive(ctx.msg_in[0], _split(ctx)))
        case NodeKind.THROW:
            if len(ctx.msg_out) != 1:
                raise MissingMessageMeta(f"{node.id}: throw event needs exactly one message")
            return _single_in(node, ctx, _send(ctx.msg_out[0], _split(ctx)))
        case NodeKind.PARALLEL:
            return _join(ctx, _split(ctx))
        case NodeKind.EXCLUSIVE:
            if len(ctx.outgoing) != 1:
                raise ValidationRequired([f"{node.id}: exclusive gateway must have one outgoing flow"])
            return _join(ctx, Output(Name(ctx.outgoing[0][0]), Name(tok), Nil()), Join.CHOICE)
        case NodeKind.TASK:
            return _single_in(node, ctx, _task_body(node, ctx))
        case NodeKind.SUBPROCESS:
            if ctx.body is None:
                raise ConversionError(f"{node.id}: sub-process body was not converted")
            return _single_in(node, ctx, Repl(ctx.body) if node.multi_instance else ctx.body)
    raise UnsupportedNode(f"{node.id}: {node.kind}")


def _task_body(node: FlowNode, ctx: NodeContext) -> Process:
    tok = Name(ctx.token)
    outs = []
    for fid, cond in ctx.outgoing:
        out = Output(Name(fid), tok, Nil())
        outs.append(out if cond is None else _guard(node, cond, ctx, out))
    body = par(*outs)
    if ctx.msg_out:
        body = _send(ctx.msg_out[0], body)
    if node.task_kind not in (TaskKind.SEND, TaskKind.RECEIVE):
        body = Silent(body)
    if ctx.msg_in:
        body = _receive(ctx.msg_in[0], body)
    return body


# --- processes -------------------------------------------------------------


def _needs_message(node: FlowNode) -> tuple[bool, bool]:
    """(needs an incoming message, needs an outgoing message)."""
    k, tk = node.kind, node.task_kind
    wants_in = k is NodeKind.CATCH or (k is NodeKind.START and node.is_message) or tk is TaskKind.RECEIVE
    wants_out = k is NodeKind.THROW or (k is NodeKind.END and node.is_message) or tk is TaskKind.SEND
    return wants_in, wants_out


def message_bindings(node: FlowNode, d: Diagram, cfg: ConversionConfig) -> tuple[list[MessageBinding], list[MessageBinding]]:
    """Messages received and sent by ``node``, with a phantom flow filling a gap."""

    def real(fid: str) -> MessageBinding:
        meta = cfg.message_meta.get(fid)
        if meta is None:
            raise MissingMessageMeta(f"no message name/type configured for message flow {fid}")
        return MessageBinding(fid, meta.name, meta.type)

    flows_in, flows_out = d.message_flows_at(node.id)
    ins, outs = [real(f.id) for f in flows_in], [real(f.id) for f in flows_out]
    wants_in, wants_out = _needs_message(node)
    for wanted, have in ((wants_in, ins), (wants_out, outs)):
        if wanted and not have:
            ph = cfg.phantoms.get(node.id)
            if ph is None:
                raise MissingMessageMeta(f"{node.id} has no message flow and no phantom channel configured")
            have.append(MessageBinding(ph.channel, ph.name, ph.type, phantom=True))
    if node.kind is NodeKind.END and len({m.name for m in outs}) != len(outs):
        raise NameClash(f"{node.id}: end event messages need distinct names")
    return ins, outs


@dataclass
class _Run:
    """Shared state of one conversion."""

    d: Diagram
    cfg: ConversionConfig
    fresh: FreshNames
    phantoms: list[tuple[str, MessageBinding, bool]] = field(default_factory=list)


def _convert_graph(p: ProcessGraph, run: _Run, group: Group, continuation: Process | None) -> Process:
    starts = p.of_kind(NodeKind.START)
    if not starts:
        raise ValidationRequired([f"{p.id} has no Start Event"])
    summands = []
    used: set[str] = set()
    for s in starts:
        reach = sorted(reachable_from(p, s.id))
        used.update(reach)
        summands.append(par(*(_convert_in(p, p.nodes[n], run, group, continuation) for n in reach)))
    flows = [f.id for f in p.sequence_flows if f.source in used and f.target in used]
    chan = GroupType(group, run.cfg.token_type)
    return news([(f, chan) for f in flows], choice(*summands))


def _convert_in(p: ProcessGraph, node: FlowNode, run: _Run, group: Group, continuation: Process | None) -> Process:
    cfg = run.cfg
    ins, outs = message_bindings(node, run.d, cfg)
    for m in ins:
        if m.phantom:
            run.phantoms.append((node.id, m, True))
    for m in outs:
        if m.phantom:
            run.phantoms.append((node.id, m, False))
    ctx = NodeContext(
        incoming=[f.id for f in p.incoming(node.id)],
        outgoing=[(f.id, f.condition) for f in p.outgoing(node.id)],
        group=group,
        fresh=run.fresh,
        msg_in=ins,
        msg_out=outs,
        token=cfg.token_value_name,
        token_type=cfg.token_type,
        continuation=continuation if node.kind is NodeKind.END else None,
    )
    if node.kind is NodeKind.SUBPROCESS:
        assert node.body is not None
        after = _split(ctx) if ctx.outgoing else None
        ctx.body = _convert_graph(node.body, run, group, after)
    return convert_node(node, ctx)


def _meta(cfg: ConversionConfig, *keys: str) -> ProcessMeta:
    for k in keys:
        if k in cfg.process_meta:
            return cfg.process_meta[k]
    raise MissingGroup(f"no group/purpose configured for {' or '.join(keys)}")


def _identifiers(d: Diagram) -> set[str]:
    ids: set[str] = set()
    for p in d.participants:
        ids.add(p.id)
    for _, top in d.top_graphs():
        for g in top.walk():
            ids.add(g.id)
            ids.update(g.nodes)
            ids.update(f.id for f in g.sequence_flows)
    ids.update(f.id for f in d.message_flows)
    return ids


def _check_names(d: Diagram, cfg: ConversionConfig) -> set[str]:
    """Reject configurations whose binders could capture channel names."""
    diagram_ids = _identifiers(d)
    channels = {f.id for _, top in d.top_graphs() for g in top.walk() for f in g.sequence_flows}
    channels |= {f.id for f in d.message_flows} | {ph.channel for ph in cfg.phantoms.values()}
    messages = {m.name for m in cfg.message_meta.values()} | {ph.name for ph in cfg.phantoms.values()}
    values = {v for ty in _config_types(cfg) if isinstance(ty, ContextVar) for v in ty.domain}
    for ident in sorted(channels | messages | values | {cfg.token_value_name}):
        if not is_identifier(ident):
            raise NameClash(f"{ident!r} cannot be used as a name")
    binders = messages | {cfg.token_value_name}
    if cfg.token_value_name in diagram_ids | channels | messages | values:
        raise NameClash(f"token value name {cfg.token_value_name!r} is already used by another element")
    for clash in sorted(binders & (channels | values)):
        raise NameClash(f"message name {clash!r} collides with a channel or value")
    for clash in sorted(values & channels):
        raise NameClash(f"value {clash!r} collides with a channel")
    return diagram_ids | channels | messages | values | {cfg.token_value_name}


def _config_types(cfg: ConversionConfig) -> Iterator[PrivType]:
    for m in cfg.message_meta.values():
        yield m.type
    for ph in cfg.phantoms.values():
        yield ph.type


def convert_process(
    p: ProcessGraph,
    cfg: ConversionConfig,
    top_level: bool = True,
    *,
    diagram: Diagram | None = None,
    group: Group | None = None,
    continuation: Process | None = None,
) -> Term:
    """Convert one Process; lifted to a system when ``top_level``.

    ``group`` overrides the configured group; it is required when the process
    has no configuration entry and is not top level.
    """
    d = diagram if diagram is not None else Diagram(process=p)
    if diagram is None and top_level:
        violations = validate(d)
        if violations:
            raise ValidationRequired(violations)
    meta = None
    if top_level or group is None:
        meta = _meta(cfg, p.id)
    run = _Run(d, cfg, FreshNames(cfg.fresh_prefix, _check_names(d, cfg)))
    body = _convert_graph(p, run, group if group is not None else meta.group, continuation)
    return Lift(meta.group, meta.purpose, body) if top_level else body


# --- collaborations --------------------------------------------------------


def _walk(t: object) -> Iterator[object]:
    yield t
    if dataclasses.is_dataclass(t) and not isinstance(t, type):
        for f in dataclasses.fields(t):
            yield from _walk(getattr(t, f.name))
    elif isinstance(t, tuple):
        for x in t:
            yield from _walk(x)


def _declarations(system: System, context: dict[Name, PrivType]) -> Declarations:
    groups: dict[str, GroupAtom] = {}
    purposes: set[str] = set()
    basics: set[str] = set()
    cvars: dict[str, ContextVar] = {}
    pvars: set[str] = set()
    for x in list(_walk(system)) + [y for ty in context.values() for y in _walk(ty)]:
        match x:
            case GroupAtom(gid):
                groups.setdefault(gid, x)
            case Lift(_, u, _):
                purposes.add(u)
            case Basic(bid):
                basics.add(bid)
            case ContextVar(cid, _):
                prev = cvars.setdefault(cid, x)
                if prev != x:
                    raise ConversionError(f"context variable {cid} declared with two domains")
            case Var(vid):
                pvars.add(vid)
    return Declarations(
        tuple(groups[k] for k in sorted(groups)),
        tuple(sorted(purposes)),
        tuple(sorted(basics)),
        tuple(cvars[k] for k in sorted(cvars)),
        tuple(sorted(pvars)),
    )


def _context(system: System, uses: list[PhantomUse], cfg: ConversionConfig) -> dict[Name, PrivType]:
    known: dict[str, PrivType] = {}
    for ty in _config_types(cfg):
        if isinstance(ty, ContextVar):
            for v in ty.domain:
                known[v] = ty
    for use in uses:
        ty = GroupType(use.group, use.type)
        if known.setdefault(use.channel, ty) != ty:
            raise ConversionError(f"phantom channel {use.channel} is used with two different types")
    context = {}
    for n in sorted(free_names(system)):
        if n.index or n.base not in known:
            raise ConversionError(f"free name {n} has no known type")
        context[n] = known[n.base]
    return context


def black_box_var(group: Group) -> str:
    return "P_" + "_".join(a.id for a in group_atoms(group))


def convert_collaboration(d: Diagram, cfg: ConversionConfig) -> ConversionOutput:
    """Convert a whole diagram into a system with its typing context."""
    violations = validate(d)
    if violations:
        raise ValidationRequired(violations)
    run = _Run(d, cfg, FreshNames(cfg.fresh_prefix, _check_names(d, cfg)))
    uses: list[PhantomUse] = []

    def lifted(keys: tuple[str, ...], graph: ProcessGraph | None) -> Lift:
        meta = _meta(cfg, *keys)
        before = len(run.phantoms)
        body = Var(black_box_var(meta.group)) if graph is None else _convert_graph(graph, run, meta.group, None)
        for node_id, m, incoming in run.phantoms[before:]:
            uses.append(PhantomUse(node_id, m.channel, m.type, incoming, meta.group, meta.purpose))
        return Lift(meta.group, meta.purpose, body)

    if d.process is not None:
        system: System = lifted((d.process.id,), d.process)
    else:
        pools = {p.id: lifted((p.id,) + ((p.process.id,) if p.process else ()), p.process) for p in d.participants}
        group_of = {pid: lift.group for pid, lift in pools.items()}
        index = d.node_index()

        def owner(ref: str) -> Group:
            return group_of[ref] if ref in group_of else group_of[index[ref][0]]

        binders: list[tuple[str, PrivType]] = []
        unions: list[Group] = []
        for f in d.message_flows:
            meta = cfg.message_meta.get(f.id)
            if meta is None:
                raise MissingMessageMeta(f"no message name/type configured for message flow {f.id}")
            g = union(owner(f.source), owner(f.target))
            binders.append((f.id, GroupType(g, meta.type)))
            if g not in unions:
                unions.append(g)
        system = snews(binders, spar(*(pools[k] for k in sorted(pools))))
        for g in reversed(unions):
            system = GroupBind(g, system)

    context = _context(system, uses, cfg)
    return ConversionOutput(system, context, _declarations(system, context), tuple(uses))


def empty_output() -> ConversionOutput:
    return ConversionOutput(SNil(), {}, Declarations())
