"""BPMN to Privacy Calculus conversion."""

from .config import (
    ConversionConfig,
    ConversionError,
    MessageMeta,
    MissingGroup,
    MissingMessageMeta,
    MissingMeta,
    NameClash,
    PhantomMeta,
    ProcessMeta,
    UnsupportedNode,
    ValidationRequired,
)
from .elements import (
    ConversionOutput,
    Declarations,
    GuardError,
    MessageBinding,
    NodeContext,
    PhantomUse,
    black_box_var,
    convert_collaboration,
    convert_node,
    convert_process,
    empty_output,
    message_bindings,
)
from .patterns import (
    BadM,
    EmptyFlows,
    FreshNames,
    Join,
    PatternError,
    Split,
    fresh_name,
    join_pattern,
    sequence_in,
    sequence_out,
    split_pattern,
    synchronisation,
)
