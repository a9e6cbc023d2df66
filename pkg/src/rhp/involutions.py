"""Sign-reversing involutions on S0-S1, S1-S2, S2-S3 and the bijection S0 <-> S3.

``phi0`` and ``phi2`` recolor one cycle.  ``phi1`` is built from pairwise
steps ``phi1_i`` between graph 0 (which always holds the edge out of ``k``)
and graph ``i``; a step either moves a black pivot edge or runs the crabwalk,
which redistributes red meta-edges between the two graphs.

The drivers chain the involutions the way the Garsia-Milne involution
principle prescribes and record every sub-step in a :class:`TraceLog`.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .enumeration import DEFAULT_CAP
from .errors import MalformedState, NonTermination, PrecondViolation, ShapeMismatch
from .forest import (
    Color,
    ColoredEdge,
    CycleRecord,
    ForestTuple,
    all_ordinary_cycles,
    find_forbidden_meta_cycles,
    has_s1_shape,
    has_s2_shape,
    in_set,
    slot_node,
)

DEFAULT_STEP_BOUND = 4 * DEFAULT_CAP


def step_bound_from_env(default: int = DEFAULT_STEP_BOUND) -> int:
    value = os.environ.get("RHP_STEP_BOUND")
    return int(value) if value else default


# -- trace ---------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeMove:
    edge: ColoredEdge
    from_graph: int
    to_graph: int


@dataclass
class TraceStep:
    involution: str
    sub_step: str
    edge_moves: list[EdgeMove]
    color_changes: list[CycleRecord]
    snapshot: ForestTuple

    def to_dict(self) -> dict:
        return {
            "involution": self.involution,
            "sub_step": self.sub_step,
            "edge_moves": [
                [m.edge.src, m.edge.dst, m.edge.color.value, m.from_graph, m.to_graph]
                for m in self.edge_moves
            ],
            "color_changes": [
                {
                    "kind": c.kind.value,
                    "edges": [[g, e.src, e.dst] for g, e in sorted(c.edges, key=lambda x: (x[0], x[1].src))],
                    "to": (c.color or Color.BLACK).toggled().value,
                }
                for c in self.color_changes
            ],
            "snapshot": self.snapshot.to_dict(),
        }


@dataclass
class TraceLog:
    initial: ForestTuple
    steps: list[TraceStep] = field(default_factory=list)

    def record(self, involution, sub_step, t, moves=(), colors=()):
        self.steps.append(TraceStep(involution, sub_step, list(moves), list(colors), t.copy()))

    def snapshots(self) -> list[ForestTuple]:
        return [s.snapshot for s in self.steps]

    def changed_snapshots(self) -> list[ForestTuple]:
        """Initial tuple followed by every snapshot that differs from its predecessor."""
        out = [self.initial]
        for s in self.steps:
            if s.snapshot != out[-1]:
                out.append(s.snapshot)
        return out

    def replay(self) -> list[ForestTuple]:
        """Rebuild every snapshot from the initial tuple and the recorded deltas."""
        cur = self.initial.copy()
        states = []
        for step in self.steps:
            cur = cur.copy()
            for m in step.edge_moves:
                cur.graphs[m.from_graph].out.pop(m.edge.src)
            for m in step.edge_moves:
                if m.edge.src in cur.graphs[m.to_graph].out:
                    raise MalformedState(f"replay collision at {m.edge}")
                cur.graphs[m.to_graph].out[m.edge.src] = m.edge
            for c in step.color_changes:
                for gi, e in c.edges:
                    old = cur.graphs[gi].out[e.src]
                    cur.graphs[gi].out[e.src] = old.recolored(old.color.toggled())
            states.append(cur)
        return states

    def to_manifest(self) -> dict:
        return {
            "initial": self.initial.to_dict(),
            "steps": [dict(index=i, **s.to_dict()) for i, s in enumerate(self.steps)],
        }

    def manifest_json(self) -> str:
        return json.dumps(self.to_manifest(), indent=1, sort_keys=True) + "\n"

    def write(self, out_dir: str | Path) -> list[Path]:
        """Write ``step_000.dot`` (the initial tuple), one DOT file per step, and ``trace.json``."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = []
        states = [("initial", self.initial)] + [
            (f"{s.involution} {s.sub_step}".strip(), s.snapshot) for s in self.steps
        ]
        for i, (label, t) in enumerate(states):
            p = out_dir / f"step_{i:03d}.dot"
            p.write_text(to_dot(t, name=f"step_{i:03d}", label=label))
            paths.append(p)
        p = out_dir / "trace.json"
        p.write_text(self.manifest_json())
        paths.append(p)
        return paths


def to_dot(t: ForestTuple, name: str = "tuple", label: str = "") -> str:
    """Graphviz source with one cluster per graph; red edges dashed."""
    lines = [f"digraph {name} {{"]
    if label:
        lines.append(f'  label="{label}";')
    lines.append("  node [shape=circle];")
    for gi, g in enumerate(t.graphs):
        lines.append(f"  subgraph cluster_{gi} {{")
        lines.append(f'    label="graph {gi + 1}";')
        for v in t.nodes:
            lines.append(f'    g{gi}_{v} [label="{v}"];')
        for e in g.edges():
            style = " [color=red style=dashed]" if e.color is Color.RED else ""
            lines.append(f"    g{gi}_{e.src} -> g{gi}_{e.dst}{style};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- phi0 / phi2 -------------------------------------------------------------


def _toggle(t: ForestTuple, cycle: CycleRecord) -> ForestTuple:
    out = t.copy()
    for gi, e in cycle.edges:
        cur = out.graphs[gi].out[e.src]
        out.graphs[gi].out[e.src] = cur.recolored(cur.color.toggled())
    return out


def select_phi0_cycle(t: ForestTuple) -> CycleRecord | None:
    """First graph by position with a cycle; its cycle with the largest node."""
    for cycles in all_ordinary_cycles(t):
        if cycles:
            return cycles[-1]
    return None


def select_phi2_cycle(t: ForestTuple) -> CycleRecord | None:
    """Cycle recolored by ``phi2``.

    Graphs are scanned in the order of the special node they hold (the graph
    with the edge out of 1 first, graph 0 with the edge out of ``k`` last).
    Ordinary cycles anywhere take precedence over forbidden meta-cycles.
    """
    per_graph = all_ordinary_cycles(t)
    order = sorted(range(t.k), key=lambda g: slot_node(g, t.k))
    for g in order:
        if per_graph[g]:
            return per_graph[g][-1]
    forbidden = find_forbidden_meta_cycles(t)
    return forbidden[-1] if forbidden else None


def phi0(t: ForestTuple, log: TraceLog | None = None) -> ForestTuple:
    if not in_set(t, "S1"):
        raise ShapeMismatch("phi0 needs an element of S0 or S1")
    cycle = select_phi0_cycle(t)
    if cycle is None:
        if log is not None:
            log.record("phi0", "identity", t)
        return t.copy()
    out = _toggle(t, cycle)
    if log is not None:
        log.record("phi0", "toggle", out, colors=[cycle])
    return out


def phi2(t: ForestTuple, log: TraceLog | None = None) -> ForestTuple:
    if not in_set(t, "S2"):
        raise ShapeMismatch("phi2 needs an element of S2 or S3")
    cycle = select_phi2_cycle(t)
    if cycle is None:
        if log is not None:
            log.record("phi2", "identity", t)
        return t.copy()
    out = _toggle(t, cycle)
    if log is not None:
        log.record("phi2", "toggle", out, colors=[cycle])
    return out


# -- crabwalk ----------------------------------------------------------------


@dataclass(frozen=True)
class CrabwalkContext:
    F_index: int
    R_index: int
    A_index: int
    B_index: int
    m: int
    v: int | None = None

    def __post_init__(self):
        if {self.F_index, self.R_index} != {self.A_index, self.B_index} or self.F_index == self.R_index:
            raise PrecondViolation("F/R and A/B must name the same two graphs")


@dataclass
class CrabwalkResult:
    tuple: ForestTuple
    moves: list[EdgeMove]
    end_index: int  # graph the last traversed edge came from


def _rooted_at(t: ForestTuple, graph_index: int, m: int) -> int:
    """Special node reached from ``m`` in one graph (``m`` itself on a cycle back to ``m``)."""
    g = t.graphs[graph_index]
    cur = m
    seen = {m}
    while True:
        e = g.get(cur)
        if e is None:
            raise MalformedState(f"path from {m} stops at non-special node {cur}")
        cur = e.dst
        if cur <= t.k:
            return cur
        if cur in seen:
            raise MalformedState(f"path from {m} enters a cycle avoiding {m}")
        seen.add(cur)


def _red_in(g_out: dict[int, int]) -> dict[int, int]:
    rin: dict[int, int] = {}
    for s, d in g_out.items():
        if d in rin:
            raise MalformedState(f"node {d} has two red in-edges in one graph")
        rin[d] = s
    return rin


def crabwalk_detail(t: ForestTuple, ctx: CrabwalkContext) -> CrabwalkResult:
    F = t.graphs[ctx.F_index]
    R = t.graphs[ctx.R_index]
    pivot = t.graphs[ctx.A_index].get(ctx.m)
    if pivot is None or pivot.color is not Color.RED:
        raise PrecondViolation(f"edge out of pivot {ctx.m} is not red")

    dark = {s: e.dst for s, e in F.out.items() if e.color is Color.RED}
    light = {s: e.dst for s, e in R.out.items() if e.color is Color.RED}
    dark_in = _red_in(dark)
    light_in = _red_in(light)

    to_R: list[int] = []  # sources of dark edges recolored light
    to_F: list[int] = []  # sources of light edges recolored dark
    walk: list[tuple[int, bool]] = []  # (source, forward) in traversal order
    used_dark: set[int] = set()
    used_light: set[int] = set()

    if ctx.A_index == ctx.F_index:
        cur, forward = ctx.m, True
    else:
        if ctx.v is None:
            raise PrecondViolation("pivot held by R needs its root v")
        cur, forward = ctx.v, False

    while True:
        if forward:
            if cur not in dark or cur in used_dark:
                raise MalformedState(f"no dark edge out of {cur}")
            used_dark.add(cur)
            to_R.append(cur)
            walk.append((cur, True))
            cur = dark[cur]
            end = ctx.F_index
            if cur <= t.k:
                break
            forward = not (cur in light_in and light_in[cur] not in used_light)
        else:
            if cur not in light_in or light_in[cur] in used_light:
                raise MalformedState(f"no light edge into {cur}")
            src = light_in[cur]
            used_light.add(src)
            to_F.append(src)
            walk.append((src, False))
            cur = src
            end = ctx.R_index
            if cur <= t.k:
                break
            forward = cur in dark and cur not in used_dark

    out = t.copy()
    nF = out.graphs[ctx.F_index]
    nR = out.graphs[ctx.R_index]
    moves: list[EdgeMove] = []
    red_to_R = {s: nF.pop(s) for s in to_R}
    red_to_F = {s: nR.pop(s) for s in to_F}
    for s, fwd in walk:
        if fwd:
            moves.append(EdgeMove(red_to_R[s], ctx.F_index, ctx.R_index))
        else:
            moves.append(EdgeMove(red_to_F[s], ctx.R_index, ctx.F_index))
    swaps = []
    for s, e in red_to_R.items():
        if s in nR.out:
            b = nR.pop(s)
            if b.color is Color.RED:
                raise MalformedState(f"red edge {b} displaced by the crabwalk")
            swaps.append((b, ctx.R_index, ctx.F_index))
        nR.out[s] = e
    for s, e in red_to_F.items():
        if s in nF.out:
            b = nF.pop(s)
            if b.color is Color.RED:
                raise MalformedState(f"red edge {b} displaced by the crabwalk")
            swaps.append((b, ctx.F_index, ctx.R_index))
        nF.out[s] = e
    for b, src_g, dst_g in swaps:
        out.graphs[dst_g].out[b.src] = b
        moves.append(EdgeMove(b, src_g, dst_g))
    return CrabwalkResult(out, moves, end)


def crabwalk(t: ForestTuple, ctx: CrabwalkContext) -> ForestTuple:
    """Run the crabwalk on graphs ``F`` and ``R``; only those two graphs change."""
    return crabwalk_detail(t, ctx).tuple


# -- phi1 ----------------------------------------------------------------------


@dataclass
class StepInfo:
    """What one ``phi1_i`` application did."""

    pivot: int
    moved: bool  # pivot's out-edge changed graphs
    ended_in_A: bool
    moves: list[EdgeMove]


def crabwalk_context(t: ForestTuple, pi_index: int, tau_index: int) -> CrabwalkContext:
    k = t.k
    P, T = t.graphs[pi_index], t.graphs[tau_index]
    if k not in P:
        raise PrecondViolation(f"graph {pi_index} does not hold the edge out of {k}")
    m = next((v for v in range(1, k + 1) if v in P or v in T), None)
    if m is None:
        raise PrecondViolation("no special out-edge in either graph")
    A, B = (pi_index, tau_index) if m in P else (tau_index, pi_index)
    v = None
    if A == tau_index and T.out[m].color is Color.RED:
        v = _rooted_at(t, tau_index, m)
    return CrabwalkContext(pi_index, tau_index, A, B, m, v)


def phi1_step(t: ForestTuple, pi_index: int, tau_index: int) -> tuple[ForestTuple, StepInfo]:
    ctx = crabwalk_context(t, pi_index, tau_index)
    e = t.graphs[ctx.A_index].out[ctx.m]
    if e.color is Color.BLACK:
        out = t.copy()
        out.graphs[ctx.A_index].pop(ctx.m)
        out.graphs[ctx.B_index].add(e)
        return out, StepInfo(ctx.m, True, True, [EdgeMove(e, ctx.A_index, ctx.B_index)])
    res = crabwalk_detail(t, ctx)
    moved = ctx.m not in res.tuple.graphs[ctx.A_index]
    return res.tuple, StepInfo(ctx.m, moved, res.end_index == ctx.A_index, res.moves)


def phi1_i(t: ForestTuple, pi_index: int, tau_index: int) -> tuple[ForestTuple, bool]:
    """One pairwise step; returns the new tuple and whether the pivot edge moved."""
    out, info = phi1_step(t, pi_index, tau_index)
    return out, info.moved


def phi1_detail(t: ForestTuple, log: TraceLog | None = None) -> tuple[ForestTuple, list[StepInfo]]:
    k = t.k
    if k == 1:
        return t.copy(), []
    infos: list[StepInfo] = []

    def step(cur, i, phase):
        out, info = phi1_step(cur, 0, i)
        infos.append(info)
        if log is not None:
            log.record("phi1", f"phi1^{i} {phase}", out, moves=info.moves)
        return out

    cur = t
    if has_s1_shape(t):
        for i in range(1, k):
            cur = step(cur, i, "forward")
    elif has_s2_shape(t):
        for j in range(k - 1, 0, -1):
            cur = step(cur, j, "backward")
            if not infos[-1].moved:
                for i in range(j + 1, k):
                    cur = step(cur, i, "forward")
                break
    else:
        raise ShapeMismatch("phi1 needs an S1- or S2-shaped tuple")
    return cur.copy(), infos


def phi1(t: ForestTuple, log: TraceLog | None = None) -> ForestTuple:
    """The involution on S1 - S2.  Graph positions never change."""
    return phi1_detail(t, log)[0]


# -- drivers -----------------------------------------------------------------


def _check_tuple(t: ForestTuple, which: str) -> None:
    if not in_set(t, which):
        raise ShapeMismatch(f"input is not in {which}")


def _phi1_side(t: ForestTuple, side: str, log: TraceLog | None) -> tuple[ForestTuple, str]:
    out = phi1(t, log)
    if t.k == 1:
        # S1 and S2 share one shape; phi1 is the identity crossing
        return out, "S2" if side == "S1" else "S1"
    return out, "S1" if has_s1_shape(out) else "S2"


def _drive(t: ForestTuple, start: str, goal: str, bound: int) -> tuple[ForestTuple, TraceLog]:
    log = TraceLog(t.copy())
    # identity crossing from the starting set into its signed neighbour
    if start == "S0":
        cur, side = phi0(t, log), "S1"
    else:
        cur, side = phi2(t, log), "S2"
    for _ in range(bound):
        cur, side = _phi1_side(cur, side, log)
        if side == "S1":
            if in_set(cur, "S0"):
                if goal != "S0":
                    raise MalformedState("walk returned to S0")
                phi0(cur, log)
                return cur, log
            cur = phi0(cur, log)
        else:
            if in_set(cur, "S3"):
                if goal != "S3":
                    raise MalformedState("walk returned to S3")
                phi2(cur, log)
                return cur, log
            cur = phi2(cur, log)
    raise NonTermination(f"no {goal} element after {bound} phi1 applications")


def garsia_milne_forward(t: ForestTuple, step_bound: int | None = None) -> tuple[ForestTuple, TraceLog]:
    """Map an element of S0 to its partner in S3."""
    _check_tuple(t, "S0")
    bound = step_bound if step_bound is not None else step_bound_from_env()
    return _drive(t, "S0", "S3", bound)


def garsia_milne_backward(t: ForestTuple, step_bound: int | None = None) -> tuple[ForestTuple, TraceLog]:
    """Map an element of S3 back to its partner in S0."""
    _check_tuple(t, "S3")
    bound = step_bound if step_bound is not None else step_bound_from_env()
    return _drive(t, "S3", "S0", bound)
