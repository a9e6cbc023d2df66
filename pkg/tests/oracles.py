"""Independent brute-force references.  Nothing here imports the code under test
except for data types needed to compare results."""

from __future__ import annotations

import itertools

import sympy


def brute_cycles(out: dict[int, int]) -> list[frozenset[int]]:
    """Cycles of a partial map by walking at most len(out) steps from every node."""
    found = set()
    for start in out:
        cur, steps = start, 0
        while cur in out and steps <= len(out):
            cur = out[cur]
            steps += 1
            if cur == start:
                cyc = {start}
                x = out[start]
                while x != start:
                    cyc.add(x)
                    x = out[x]
                found.add(frozenset(cyc))
                break
    return sorted(found, key=max)


def leibniz(entries) -> int:
    n = len(entries)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = sign
        for r, c in enumerate(perm):
            term *= entries[r][c]
        total += term
    return total


def sym(i: int, j: int) -> sympy.Symbol:
    return sympy.Symbol(f"a_{i}_{j}")


def sympy_laplacian(n: int) -> sympy.Matrix:
    def entry(i, j):
        if i != j:
            return -sym(i, j)
        return sum(sym(i, m) for m in range(n + 1) if m != i)

    return sympy.Matrix(n + 1, n + 1, entry)


def to_sympy(p) -> sympy.Expr:
    """EdgePolynomial -> sympy expression."""
    expr = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = sympy.Integer(c)
        for i, j in mono:
            term *= sym(i, j)
        expr += term
    return sympy.expand(expr)


def rooted_forest_count(n: int, roots: set[int]) -> int:
    """Count maps non-roots -> nodes with no fixed point and no cycle."""
    movers = [v for v in range(n + 1) if v not in roots]
    count = 0
    for targets in itertools.product(range(n + 1), repeat=len(movers)):
        f = dict(zip(movers, targets))
        if any(f[v] == v for v in movers):
            continue
        if not brute_cycles(f):
            count += 1
    return count
