"""Red Hot Potato bijection between ordered forest tuples, with exact
determinant checks of the Dodgson/Muir identity."""

from .errors import *  # noqa: F401,F403
from .forest import (
    BLACK,
    RED,
    Color,
    ColoredEdge,
    CycleKind,
    CycleRecord,
    ForestTuple,
    FunctionalGraph,
    MembershipTag,
    MetaEdge,
    SetName,
    classify,
    find_forbidden_meta_cycles,
    find_ordinary_cycles,
    in_set,
    sign_of,
    trace_meta_edge,
    weight_multiset,
)
from .poly import EdgePolynomial

__version__ = "0.1.0"
