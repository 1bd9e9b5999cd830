"""Privacy Calculus terms, CINNI name handling, congruence and syntax."""

from .cinni import (
    all_bases,
    bound_names,
    free_names,
    instantiate,
    rename_binder,
    shift_down,
    shift_up,
    subst,
)
from .congruence import (
    LevelMismatch,
    alpha_canonical,
    alpha_equivalent,
    congruent,
    normalize,
)
from .syntax import (
    TermSyntaxError,
    parse_group,
    parse_label,
    parse_process,
    parse_system,
    parse_term,
    parse_type,
    print_group,
    print_label,
    print_term,
    print_type,
)
from .terms import *  # noqa: F401,F403
