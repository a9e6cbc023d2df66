"""Exhaustive generation of rooted forests, the signed sets S0..S3 and R^sigma.

Everything is generated in lexicographic edge-list order so the output is
reproducible.  Colorings of S1/S2 shapes are emitted by ascending bitmask
over the shape's cycles (bit ``j`` set means cycle ``j`` is red), cycles
taken in the order ordinary-by-graph, then forbidden meta-cycles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .errors import InstanceTooLarge, InvalidSpec
from .forest import (
    Color,
    ColoredEdge,
    CycleRecord,
    ForestTuple,
    FunctionalGraph,
    SetName,
    find_forbidden_meta_cycles,
    find_ordinary_cycles,
    monomial_key,
    slot_node,
)
from .poly import EdgePolynomial

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class RootedForestSpec:
    roots: frozenset[int]
    required_meta_edge: tuple[int, int] | None = None

    def __init__(self, roots, required_meta_edge=None):
        object.__setattr__(self, "roots", frozenset(roots))
        object.__setattr__(
            self, "required_meta_edge", tuple(required_meta_edge) if required_meta_edge else None
        )
        if not self.roots:
            raise InvalidSpec("roots must be nonempty")
        if self.required_meta_edge and self.required_meta_edge[0] in self.roots:
            raise InvalidSpec("a required meta-edge cannot start at a root")


@dataclass(frozen=True)
class PermutationK:
    """A permutation of ``{1..k}`` stored as its one-line images."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @classmethod
    def parse(cls, text: str) -> "PermutationK":
        """``"231"`` or ``"2,3,1"``."""
        parts = text.split(",") if "," in text else list(text)
        return cls(tuple(int(p) for p in parts))

    @classmethod
    def identity(cls, k: int) -> "PermutationK":
        return cls(tuple(range(1, k + 1)))

    @property
    def k(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, 1))

    def inversion_count(self) -> int:
        im = self.images
        return sum(1 for a in range(len(im)) for b in range(a + 1, len(im)) if im[a] > im[b])

    def __str__(self) -> str:
        if self.k < 10:
            return "".join(map(str, self.images))
        return ",".join(map(str, self.images))


def all_permutations(k: int) -> list[PermutationK]:
    return [PermutationK(p) for p in itertools.permutations(range(1, k + 1))]


def inversion_sign(sigma: PermutationK) -> int:
    return -1 if sigma.inversion_count() % 2 else 1


def cycle_count(sigma: PermutationK, nontrivial: bool = True) -> int:
    seen = set()
    count = 0
    for i in range(1, sigma.k + 1):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = sigma(j)
            length += 1
        if length > 1 or not nontrivial:
            count += 1
    return count


def forest_sign(sigma: PermutationK) -> int:
    """Sign an ``R^sigma`` tuple carries in the determinant expansion.

    This is ``inversion_sign(sigma)`` times ``(-1)`` per moved point (each
    off-diagonal Laplacian entry is ``-a_ij``), which reduces to ``-1`` per
    non-trivial cycle of ``sigma``.
    """
    return -1 if cycle_count(sigma) % 2 else 1


# -- size guard ------------------------------------------------------------


def s1_shape_count(n: int, k: int) -> int:
    """Number of uncolored S1 shapes, the lower bound used by the size guard."""
    return n**n * n ** ((n - k) * (k - 1))


def check_size(n: int, k: int, cap: int = DEFAULT_CAP) -> None:
    if not 1 <= k <= n:
        raise InvalidSpec(f"need 1 <= k <= n, got n={n}, k={k}")
    size = s1_shape_count(n, k)
    if size > cap:
        raise InstanceTooLarge(f"(n={n}, k={k}) has {size} S1 shapes, cap is {cap}")


# -- functional graphs -----------------------------------------------------


def _functional_graphs(n: int, sources: Sequence[int]) -> Iterator[FunctionalGraph]:
    """Every black graph on ``{0..n}`` with one out-edge exactly on ``sources``."""
    sources = sorted(sources)
    choices = [[d for d in range(n + 1) if d != s] for s in sources]
    for targets in itertools.product(*choices):
        g = FunctionalGraph()
        g.out = {s: ColoredEdge(s, d, Color.BLACK) for s, d in zip(sources, targets)}
        yield g


def _is_acyclic(g: FunctionalGraph) -> bool:
    state: dict[int, int] = {}
    for s in g.out:
        path = []
        cur = s
        while cur in g.out and cur not in state:
            state[cur] = 1
            path.append(cur)
            cur = g.out[cur].dst
        if state.get(cur) == 1 and cur in g.out:
            return False
        for v in path:
            state[v] = 2
    return True


def _reaches(g: FunctionalGraph, src: int, dst: int) -> bool:
    cur = src
    seen = set()
    while cur in g.out and cur not in seen:
        seen.add(cur)
        cur = g.out[cur].dst
        if cur == dst:
            return True
    return False


def enumerate_forests(n: int, spec: RootedForestSpec) -> list[FunctionalGraph]:
    """All rooted forests on ``{0..n}`` whose roots are exactly ``spec.roots``."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    if not spec.roots <= set(range(n + 1)):
        raise InvalidSpec(f"roots {sorted(spec.roots)} not within 0..{n}")
    sources = [v for v in range(n + 1) if v not in spec.roots]
    out = []
    for g in _functional_graphs(n, sources):
        if not _is_acyclic(g):
            continue
        if spec.required_meta_edge and not _reaches(g, *spec.required_meta_edge):
            continue
        out.append(g)
    return out


# -- signed sets -------------------------------------------------------------


def _s1_sources(n: int, k: int) -> list[list[int]]:
    rest = list(range(k + 1, n + 1))
    return [list(range(1, n + 1))] + [rest] * (k - 1)


def _s2_sources(n: int, k: int) -> list[list[int]]:
    rest = list(range(k + 1, n + 1))
    return [sorted([slot_node(g, k)] + rest) for g in range(k)]


def _shapes(n: int, k: int, sources: list[list[int]], acyclic: bool) -> Iterator[ForestTuple]:
    per_graph = []
    for src in sources:
        gs = list(_functional_graphs(n, src))
        if acyclic:
            gs = [g for g in gs if _is_acyclic(g)]
        per_graph.append(gs)
    for combo in itertools.product(*per_graph):
        yield ForestTuple(n, k, [g.copy() for g in combo])


def _colorings(t: ForestTuple, cycles: list[CycleRecord]) -> Iterator[ForestTuple]:
    for mask in range(1 << len(cycles)):
        if mask == 0:
            yield t
            continue
        c = t.copy()
        for j, cyc in enumerate(cycles):
            if mask >> j & 1:
                for gi, e in cyc.edges:
                    c.graphs[gi].out[e.src] = e.recolored(Color.RED)
        yield c


def _shape_cycles(t: ForestTuple, with_forbidden: bool) -> list[CycleRecord]:
    cycles = [c for i, g in enumerate(t.graphs) for c in find_ordinary_cycles(g, i)]
    if with_forbidden:
        cycles += find_forbidden_meta_cycles(t)
    return cycles


def enumerate_set(
    n: int,
    k: int,
    which: SetName | str,
    *,
    colorings: bool = True,
    cap: int = DEFAULT_CAP,
) -> Iterator[ForestTuple]:
    """Stream every element of S0, S1, S2 or S3 exactly once.

    With ``colorings=False`` the S1/S2 streams yield one all-black tuple per
    shape instead of every legal coloring.
    """
    which = SetName(which)
    check_size(n, k, cap)
    if which is SetName.S0:
        yield from _shapes(n, k, _s1_sources(n, k), acyclic=True)
    elif which is SetName.S1:
        for t in _shapes(n, k, _s1_sources(n, k), acyclic=False):
            if colorings:
                yield from _colorings(t, _shape_cycles(t, False))
            else:
                yield t
    elif which is SetName.S2:
        for t in _shapes(n, k, _s2_sources(n, k), acyclic=False):
            if colorings:
                yield from _colorings(t, _shape_cycles(t, True))
            else:
                yield t
    elif which is SetName.S3:
        for t in _shapes(n, k, _s2_sources(n, k), acyclic=True):
            if not find_forbidden_meta_cycles(t):
                yield t
    else:
        raise InvalidSpec(f"cannot enumerate {which}")


def enumerate_R_sigma(n: int, k: int, sigma: PermutationK) -> list[ForestTuple]:
    """Tuples whose graph ``i`` is a forest rooted at ``{0..k} - {i+1}``.

    Graph ``i`` (0-based) must contain a path from ``i+1`` to ``sigma(i+1)``
    whenever ``sigma`` moves ``i+1``.  Graph order here is positional, not the
    S2/S3 slot layout.
    """
    if not 1 <= k <= n:
        raise InvalidSpec(f"need 1 <= k <= n, got n={n}, k={k}")
    if sigma.k != k:
        raise InvalidSpec(f"sigma acts on {sigma.k} points, k={k}")
    factors = []
    for i in range(1, k + 1):
        roots = set(range(k + 1)) - {i}
        req = (i, sigma(i)) if sigma(i) != i else None
        factors.append(enumerate_forests(n, RootedForestSpec(roots, req)))
    return [ForestTuple(n, k, [g.copy() for g in combo]) for combo in itertools.product(*factors)]


def forbidden_breakdown(n: int, k: int) -> dict[str, int]:
    """``|R^sigma|`` for every non-identity ``sigma``, keyed by one-line notation."""
    return {
        str(s): len(enumerate_R_sigma(n, k, s)) for s in all_permutations(k) if not s.is_identity()
    }


def signed_rhs_sum(
    n: int, k: int, cap: int = DEFAULT_CAP, sign: Callable[[PermutationK], int] | None = None
) -> EdgePolynomial:
    """Sum over sigma of ``sign(sigma)`` times the forest monomials of ``R^sigma``.

    ``sign`` defaults to :func:`forest_sign`.  Passing :func:`inversion_sign`
    gives the bare permutation sign, which does not cancel once ``k >= 3``.
    """
    sign = sign or forest_sign
    check_size(n, k, cap)
    if math.factorial(k) * s1_shape_count(n, k) > cap * 10:
        raise InstanceTooLarge(f"signed sum over S_{k} at n={n} is too large")
    total = EdgePolynomial()
    for sigma in all_permutations(k):
        part = EdgePolynomial.sum_of_monomials(monomial_key(t) for t in enumerate_R_sigma(n, k, sigma))
        total = total + part * sign(sigma)
    return total


def set_monomial_sum(n: int, k: int, which: SetName | str, cap: int = DEFAULT_CAP) -> EdgePolynomial:
    """Plain sum of weight monomials over S0 or S3."""
    return EdgePolynomial.sum_of_monomials(monomial_key(t) for t in enumerate_set(n, k, which, cap=cap))
