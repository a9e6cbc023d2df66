"""Colored functional graphs, ordered forest tuples and signed-set membership.

A tuple holds ``k`` directed graphs on the node set ``{0, ..., n}``.  Nodes
``0..k`` are *special*, nodes ``k+1..n`` are *non-special*.  Every graph is
functional: a node has at most one out-edge.  Edges are black or red; red
marks a cycle (or forbidden meta-cycle) that is represented off-diagonal.

Graph slots
-----------
In S1 every special out-edge sits in graph 0.  In S2/S3 each graph holds
exactly one special out-edge: graph 0 holds the edge out of ``k`` and graph
``g >= 1`` holds the edge out of ``g``.  This is the layout the bijection
produces, because the edge out of ``k`` never leaves graph 0.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, NamedTuple

from .errors import NoOutEdge, ShapeMismatch


class Color(str, Enum):
    BLACK = "black"
    RED = "red"

    def toggled(self) -> "Color":
        return Color.RED if self is Color.BLACK else Color.BLACK


BLACK = Color.BLACK
RED = Color.RED


class ColoredEdge(NamedTuple):
    src: int
    dst: int
    color: Color = Color.BLACK

    @property
    def pair(self) -> tuple[int, int]:
        return (self.src, self.dst)

    def recolored(self, color: Color) -> "ColoredEdge":
        return ColoredEdge(self.src, self.dst, color)

    def __repr__(self) -> str:
        mark = "" if self.color is Color.BLACK else "*"
        return f"{self.src}->{self.dst}{mark}"


class FunctionalGraph:
    """A directed graph with at most one out-edge per node, keyed by source."""

    __slots__ = ("out",)

    def __init__(self, edges: Iterable[ColoredEdge] = ()):
        self.out: dict[int, ColoredEdge] = {}
        for e in edges:
            self.add(e)

    def add(self, edge: ColoredEdge) -> None:
        if not isinstance(edge, ColoredEdge):
            edge = ColoredEdge(*edge)
        if edge.src == edge.dst:
            raise ValueError(f"self-loop {edge.src}->{edge.dst}")
        if edge.src in self.out:
            raise ValueError(f"node {edge.src} already has an out-edge")
        self.out[edge.src] = edge

    def pop(self, src: int) -> ColoredEdge:
        return self.out.pop(src)

    def get(self, src: int) -> ColoredEdge | None:
        return self.out.get(src)

    def succ(self, src: int) -> int | None:
        e = self.out.get(src)
        return None if e is None else e.dst

    def edges(self) -> list[ColoredEdge]:
        return sorted(self.out.values(), key=lambda e: (e.src, e.dst))

    def sources(self) -> set[int]:
        return set(self.out)

    def copy(self) -> "FunctionalGraph":
        g = FunctionalGraph()
        g.out = dict(self.out)
        return g

    def key(self) -> tuple:
        return tuple((e.src, e.dst, e.color.value) for e in self.edges())

    def __contains__(self, src: int) -> bool:
        return src in self.out

    def __len__(self) -> int:
        return len(self.out)

    def __iter__(self) -> Iterator[ColoredEdge]:
        return iter(self.edges())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionalGraph):
            return NotImplemented
        return self.out == other.out

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return "{" + ", ".join(map(repr, self.edges())) + "}"


@dataclass(eq=False)
class ForestTuple:
    """An ordered list of ``k`` functional graphs on nodes ``{0..n}``."""

    n: int
    k: int
    graphs: list[FunctionalGraph] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if not self.graphs:
            self.graphs = [FunctionalGraph() for _ in range(self.k)]
        if len(self.graphs) != self.k:
            raise ValueError(f"expected {self.k} graphs, got {len(self.graphs)}")

    @classmethod
    def from_edges(cls, n: int, k: int, graphs: Iterable[Iterable]) -> "ForestTuple":
        """Build from per-graph edge lists.

        Each edge is ``(src, dst)`` or ``(src, dst, color)`` where color is a
        :class:`Color` or its string value.
        """
        gs = []
        for edges in graphs:
            g = FunctionalGraph()
            for e in edges:
                src, dst, *rest = e
                color = Color(rest[0]) if rest else Color.BLACK
                g.add(ColoredEdge(int(src), int(dst), color))
            gs.append(g)
        return cls(n, k, gs)

    def is_special(self, v: int) -> bool:
        return v <= self.k

    @property
    def nodes(self) -> range:
        return range(self.n + 1)

    @property
    def special_nodes(self) -> range:
        return range(self.k + 1)

    @property
    def nonspecial_nodes(self) -> range:
        return range(self.k + 1, self.n + 1)

    def copy(self) -> "ForestTuple":
        return ForestTuple(self.n, self.k, [g.copy() for g in self.graphs])

    def key(self) -> tuple:
        return (self.n, self.k, tuple(g.key() for g in self.graphs))

    def holder_of(self, v: int) -> list[int]:
        """Indices of the graphs containing an out-edge of ``v``."""
        return [i for i, g in enumerate(self.graphs) if v in g]

    def edges(self) -> Iterator[tuple[int, ColoredEdge]]:
        for i, g in enumerate(self.graphs):
            for e in g.edges():
                yield i, e

    def is_all_black(self) -> bool:
        return all(e.color is Color.BLACK for _, e in self.edges())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ForestTuple):
            return NotImplemented
        return self.key() == other.key()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = " | ".join(repr(g) for g in self.graphs)
        return f"ForestTuple(n={self.n}, k={self.k}: {body})"

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "graphs": [
                {"edges": [[e.src, e.dst, e.color.value] for e in g.edges()]}
                for g in self.graphs
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ForestTuple":
        return cls.from_edges(
            int(data["n"]), int(data["k"]), [g["edges"] for g in data["graphs"]]
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ForestTuple":
        return cls.from_dict(json.loads(text))


def slot_node(g: int, k: int) -> int:
    """Special node whose out-edge graph ``g`` holds in S2/S3."""
    return k if g == 0 else g


def slot_of(v: int, k: int) -> int:
    """Graph index that holds special node ``v`` in S2/S3 (inverse of :func:`slot_node`)."""
    return 0 if v == k else v


def positional_to_slots(t: ForestTuple) -> ForestTuple:
    """Reorder a tuple whose graph ``i`` holds node ``i+1`` into the S2/S3 slot layout."""
    k = t.k
    graphs = [None] * k
    for i, g in enumerate(t.graphs):
        graphs[slot_of(i + 1, k)] = g.copy()
    return ForestTuple(t.n, k, graphs)


def slots_to_positional(t: ForestTuple) -> ForestTuple:
    k = t.k
    return ForestTuple(t.n, k, [t.graphs[slot_of(i + 1, k)].copy() for i in range(k)])


# -- meta-edges and cycles ------------------------------------------------


@dataclass(frozen=True)
class MetaEdge:
    start: int
    end: int
    path: tuple[ColoredEdge, ...]
    cyclic: bool = False

    @property
    def nodes(self) -> tuple[int, ...]:
        return (self.start,) + tuple(e.dst for e in self.path)


def trace_meta_edge(t: ForestTuple, graph_index: int, start: int) -> MetaEdge:
    """Follow out-edges of one graph from ``start`` until a node with none.

    If the walk re-enters a node it has already seen, the path stops right
    after that repetition and is flagged ``cyclic``.
    """
    g = t.graphs[graph_index]
    if start not in g:
        raise NoOutEdge(f"node {start} has no out-edge in graph {graph_index}")
    path = []
    seen = {start}
    cur = start
    while cur in g:
        e = g.out[cur]
        path.append(e)
        cur = e.dst
        if cur in seen:
            return MetaEdge(start, cur, tuple(path), cyclic=True)
        seen.add(cur)
    return MetaEdge(start, cur, tuple(path))


class CycleKind(str, Enum):
    ORDINARY = "ordinary"
    FORBIDDEN = "forbidden"


@dataclass(frozen=True)
class CycleRecord:
    kind: CycleKind
    edges: tuple[tuple[int, ColoredEdge], ...]
    nodes: frozenset[int]
    max_node: int

    @property
    def color(self) -> Color | None:
        """Shared color of the edges, or ``None`` when mixed."""
        colors = {e.color for _, e in self.edges}
        return colors.pop() if len(colors) == 1 else None

    @property
    def graph_indices(self) -> frozenset[int]:
        return frozenset(g for g, _ in self.edges)

    def sort_key(self) -> tuple:
        # ties on max_node only occur between forbidden meta-cycles that share
        # a non-special path node; fall back to the full descending node list
        return (self.max_node, tuple(sorted(self.nodes, reverse=True)))


def find_ordinary_cycles(graph: FunctionalGraph, graph_index: int = 0) -> list[CycleRecord]:
    """All directed cycles of a single functional graph, ascending by largest node."""
    state: dict[int, int] = {}  # 1 = on current path, 2 = finished
    records = []
    for s in sorted(graph.out):
        if s in state:
            continue
        path = []
        cur = s
        while cur is not None and cur not in state:
            state[cur] = 1
            path.append(cur)
            cur = graph.succ(cur)
        if cur is not None and state.get(cur) == 1:
            cyc = path[path.index(cur):]
            edges = tuple((graph_index, graph.out[v]) for v in cyc)
            nodes = frozenset(cyc)
            records.append(CycleRecord(CycleKind.ORDINARY, edges, nodes, max(nodes)))
        for v in path:
            state[v] = 2
    records.sort(key=lambda c: c.max_node)
    return records


def all_ordinary_cycles(t: ForestTuple) -> list[list[CycleRecord]]:
    return [find_ordinary_cycles(g, i) for i, g in enumerate(t.graphs)]


def find_forbidden_meta_cycles(t: ForestTuple) -> list[CycleRecord]:
    """Meta-cycles through special nodes whose meta-edges lie in different graphs.

    Requires at most one special out-node per graph.  A special node whose
    meta-edge returns to itself inside its own graph lies on an ordinary
    cycle, not on a forbidden meta-cycle.
    """
    owner: dict[int, int] = {}
    for gi, g in enumerate(t.graphs):
        specials = [v for v in g.out if v <= t.k]
        if len(specials) > 1:
            raise ShapeMismatch(f"graph {gi} has special out-nodes {sorted(specials)}")
        if specials:
            owner[specials[0]] = gi

    succ: dict[int, int] = {}
    meta: dict[int, MetaEdge] = {}
    for i, gi in owner.items():
        g = t.graphs[gi]
        path = []
        cur = i
        seen = {i}
        while True:
            e = g.out[cur]
            path.append(e)
            cur = e.dst
            if cur <= t.k or cur not in g or cur in seen:
                break
            seen.add(cur)
        if cur <= t.k and cur != i:
            succ[i] = cur
            meta[i] = MetaEdge(i, cur, tuple(path))

    records = []
    done: set[int] = set()
    for s in sorted(succ):
        if s in done:
            continue
        chain = []
        cur = s
        while cur in succ and cur not in chain and cur not in done:
            chain.append(cur)
            cur = succ[cur]
        done.update(chain)
        if cur in chain:
            cyc = chain[chain.index(cur):]
            edges = tuple((owner[i], e) for i in cyc for e in meta[i].path)
            nodes = frozenset(v for i in cyc for v in meta[i].nodes)
            records.append(CycleRecord(CycleKind.FORBIDDEN, edges, nodes, max(nodes)))
    records.sort(key=CycleRecord.sort_key)
    return records


# -- signed-set membership -------------------------------------------------


class SetName(str, Enum):
    S0 = "S0"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    INVALID = "Invalid"


@dataclass(frozen=True)
class MembershipTag:
    set: SetName
    sign: int = 1


def _structurally_valid(t: ForestTuple) -> bool:
    for g in t.graphs:
        if 0 in g:
            return False
        for e in g.out.values():
            if not (0 <= e.src <= t.n and 0 <= e.dst <= t.n) or e.src == e.dst:
                return False
    return True


def has_s1_shape(t: ForestTuple) -> bool:
    """Graph 0 has out-edges on ``1..n``; every other graph exactly on ``k+1..n``."""
    if not _structurally_valid(t):
        return False
    full = set(range(1, t.n + 1))
    rest = set(t.nonspecial_nodes)
    return t.graphs[0].sources() == full and all(
        g.sources() == rest for g in t.graphs[1:]
    )


def has_s2_shape(t: ForestTuple) -> bool:
    """Graph ``g`` has out-edges on its slot node and on ``k+1..n``."""
    if not _structurally_valid(t):
        return False
    rest = set(t.nonspecial_nodes)
    return all(
        g.sources() == rest | {slot_node(i, t.k)} for i, g in enumerate(t.graphs)
    )


def _coloring_sign(t: ForestTuple, cycles: list[CycleRecord]) -> int | None:
    """Sign from red-cycle parity, or ``None`` if the coloring is illegal."""
    on_cycle = set()
    red = 0
    for c in cycles:
        color = c.color
        if color is None:
            return None
        if color is Color.RED:
            red += 1
        on_cycle.update((gi, e.src) for gi, e in c.edges)
    for gi, e in t.edges():
        if e.color is Color.RED and (gi, e.src) not in on_cycle:
            return None
    return -1 if red % 2 else 1


def s1_cycles(t: ForestTuple) -> list[CycleRecord]:
    return [c for cs in all_ordinary_cycles(t) for c in cs]


def s2_cycles(t: ForestTuple) -> list[CycleRecord]:
    return s1_cycles(t) + find_forbidden_meta_cycles(t)


def classify(t: ForestTuple) -> MembershipTag:
    """Which of S0..S3 the tuple belongs to, with its sign.

    S0 and S3 are reported in preference to S1 and S2 (they are subsets).
    For ``k == 1`` the S1 and S2 shapes coincide and the S0/S1 reading wins.
    """
    if has_s1_shape(t):
        cycles = s1_cycles(t)
        sign = _coloring_sign(t, cycles)
        if sign is None:
            return MembershipTag(SetName.INVALID, 1)
        return MembershipTag(SetName.S1 if cycles else SetName.S0, sign)
    if has_s2_shape(t):
        cycles = s2_cycles(t)
        sign = _coloring_sign(t, cycles)
        if sign is None:
            return MembershipTag(SetName.INVALID, 1)
        return MembershipTag(SetName.S2 if cycles else SetName.S3, sign)
    return MembershipTag(SetName.INVALID, 1)


def in_set(t: ForestTuple, which: SetName | str) -> bool:
    """Membership test that respects S0 ⊂ S1 and S3 ⊂ S2."""
    which = SetName(which)
    if which in (SetName.S0, SetName.S1):
        if not has_s1_shape(t):
            return False
        cycles = s1_cycles(t)
        if _coloring_sign(t, cycles) is None:
            return False
        return which is SetName.S1 or not cycles
    if which in (SetName.S2, SetName.S3):
        if not has_s2_shape(t):
            return False
        cycles = s2_cycles(t)
        if _coloring_sign(t, cycles) is None:
            return False
        return which is SetName.S2 or not cycles
    return classify(t).set is SetName.INVALID


def sign_of(t: ForestTuple) -> int:
    """``(-1) ** (number of red cycles)``, forbidden meta-cycles included."""
    if has_s1_shape(t):
        cycles = s1_cycles(t)
    elif has_s2_shape(t):
        cycles = s2_cycles(t)
    else:
        raise ShapeMismatch("tuple has neither the S1 nor the S2 shape")
    sign = _coloring_sign(t, cycles)
    if sign is None:
        raise ShapeMismatch("red edges off cycles or a mixed-color cycle")
    return sign


def weight_multiset(t: ForestTuple) -> Counter:
    """Multiset of ``(src, dst)`` pairs over all graphs; colors ignored."""
    return Counter(e.pair for _, e in t.edges())


def monomial_key(t: ForestTuple) -> tuple[tuple[int, int], ...]:
    """Canonical sorted edge list, the key used by :class:`rhp.poly.EdgePolynomial`."""
    return tuple(sorted(e.pair for _, e in t.edges()))
