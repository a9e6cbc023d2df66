"""Exact determinants, the edge-weight Laplacian, and identity checks.

Integer matrices go through fraction-free (Bareiss) elimination.  Matrices
with :class:`~rhp.poly.EdgePolynomial` entries use Laplace expansion along
rows, memoized on the set of columns still available.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .enumeration import (
    DEFAULT_CAP,
    PermutationK,
    RootedForestSpec,
    all_permutations,
    enumerate_forests,
    inversion_sign,
    set_monomial_sum,
    signed_rhs_sum,
)
from .errors import DimTooLarge, LabelMismatch, SizeMismatch
from .poly import EdgePolynomial, Scalar

SYMBOLIC_CAP = 8
INTEGER_CAP = 12


@dataclass
class SquareMatrix:
    entries: list[list[Scalar]]
    row_labels: list[int] = field(default_factory=list)
    col_labels: list[int] = field(default_factory=list)

    def __post_init__(self):
        d = len(self.entries)
        if any(len(r) != d for r in self.entries):
            raise SizeMismatch("matrix is not square")
        if not self.row_labels:
            self.row_labels = list(range(1, d + 1))
        if not self.col_labels:
            self.col_labels = list(range(1, d + 1))
        if len(self.row_labels) != d or len(self.col_labels) != d:
            raise SizeMismatch("label count does not match dimension")
        if len(set(self.row_labels)) != d or len(set(self.col_labels)) != d:
            raise LabelMismatch("labels must be distinct")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def is_integer(self) -> bool:
        return all(isinstance(x, int) for r in self.entries for x in r)

    def __getitem__(self, rc: tuple[int, int]) -> Scalar:
        """Entry by (row label, column label)."""
        r, c = rc
        return self.entries[self.row_labels.index(r)][self.col_labels.index(c)]

    @classmethod
    def from_json(cls, text: str) -> "SquareMatrix":
        data = json.loads(text)
        entries = [[int(x) for x in row] for row in data["entries"]]
        if "dim" in data and int(data["dim"]) != len(entries):
            raise SizeMismatch(f"dim {data['dim']} but {len(entries)} rows")
        return cls(entries)

    def to_json(self) -> str:
        if not self.is_integer():
            raise TypeError("only integer matrices serialize to JSON")
        return json.dumps({"dim": self.dim, "entries": self.entries})


def symbolic_matrix(dim: int) -> SquareMatrix:
    """A fully generic matrix whose ``(i, j)`` entry is the indeterminate ``a_ij`` (1-based)."""
    return SquareMatrix(
        [[EdgePolynomial.var(i, j) for j in range(1, dim + 1)] for i in range(1, dim + 1)]
    )


def random_integer_matrix(dim: int, rng: random.Random, lo: int = -9, hi: int = 9) -> SquareMatrix:
    return SquareMatrix([[rng.randint(lo, hi) for _ in range(dim)] for _ in range(dim)])


def laplacian(n: int) -> SquareMatrix:
    """Out-degree Laplacian of the complete digraph on ``{0..n}`` with weights ``a_ij``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    nodes = range(n + 1)
    rows = []
    for i in nodes:
        row = []
        for j in nodes:
            if i == j:
                diag = EdgePolynomial()
                for kk in nodes:
                    if kk != i:
                        diag = diag + EdgePolynomial.var(i, kk)
                row.append(diag)
            else:
                row.append(-EdgePolynomial.var(i, j))
        rows.append(row)
    return SquareMatrix(rows, list(nodes), list(nodes))


def minor(M: SquareMatrix, keep_rows: Iterable[int], keep_cols: Iterable[int]) -> SquareMatrix:
    """Submatrix on the given row/column labels, in ascending label order."""
    rows = sorted(set(keep_rows))
    cols = sorted(set(keep_cols))
    if len(rows) != len(cols):
        raise SizeMismatch(f"{len(rows)} rows but {len(cols)} columns")
    missing = [r for r in rows if r not in M.row_labels] + [c for c in cols if c not in M.col_labels]
    if missing:
        raise LabelMismatch(f"labels {missing} not in matrix")
    ri = [M.row_labels.index(r) for r in rows]
    ci = [M.col_labels.index(c) for c in cols]
    return SquareMatrix([[M.entries[r][c] for c in ci] for r in ri], rows, cols)


def bareiss_det(a: Sequence[Sequence[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for i in range(n - 1):
        if m[i][i] == 0:
            for r in range(i + 1, n):
                if m[r][i] != 0:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return 0
        p = m[i][i]
        for r in range(i + 1, n):
            mri = m[r][i]
            row_r, row_i = m[r], m[i]
            for c in range(i + 1, n):
                row_r[c] = (row_r[c] * p - mri * row_i[c]) // prev
        prev = p
    return sign * m[n - 1][n - 1]


def laplace_det(entries: Sequence[Sequence[Scalar]]) -> EdgePolynomial:
    n = len(entries)
    if n == 0:
        return EdgePolynomial.const(1)
    rows = [[EdgePolynomial.coerce(x) for x in r] for r in entries]

    @lru_cache(maxsize=None)
    def sub(row: int, mask: int) -> EdgePolynomial:
        if row == n:
            return EdgePolynomial.const(1)
        total = EdgePolynomial()
        pos = 0
        for c in range(n):
            if not mask >> c & 1:
                continue
            x = rows[row][c]
            if x:
                term = x * sub(row + 1, mask & ~(1 << c))
                total = total - term if pos & 1 else total + term
            pos += 1
        return total

    return sub(0, (1 << n) - 1)


def det_exact(M: SquareMatrix, symbolic_cap: int = SYMBOLIC_CAP, integer_cap: int = INTEGER_CAP) -> Scalar:
    """Exact determinant: an int for integer matrices, else an EdgePolynomial."""
    if M.is_integer():
        if M.dim > integer_cap:
            raise DimTooLarge(f"integer dimension {M.dim} exceeds cap {integer_cap}")
        return bareiss_det(M.entries)
    if M.dim > symbolic_cap:
        raise DimTooLarge(f"symbolic dimension {M.dim} exceeds cap {symbolic_cap}")
    return laplace_det(M.entries)


def leibniz_det(entries: Sequence[Sequence[Scalar]]) -> Scalar:
    """Permutation-sum determinant; slow, kept as an independent cross-check."""
    n = len(entries)
    total: Scalar = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term: Scalar = -1 if inv % 2 else 1
        for r, c in enumerate(perm):
            term = term * entries[r][c]
        total = total + term
    return total


# -- Dodgson/Muir ----------------------------------------------------------------


@dataclass
class DodgsonMuirSides:
    lhs: Scalar
    rhs: Scalar
    per_sigma: list[tuple[PermutationK, Scalar]]

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def dodgson_muir_sides(M: SquareMatrix, k: int, **caps) -> DodgsonMuirSides:
    """Both sides of the Dodgson/Muir identity for ``M`` and ``1 <= k <= dim``.

    Rows and columns are addressed by position: the tail block is positions
    ``k..dim-1`` and the bordered minor for ``(i, j)`` adds row ``i`` and column
    ``j`` in front of it.  ``per_sigma`` lists the signed product of every
    permutation, including the zero ones.
    """
    d = M.dim
    if not 1 <= k <= d:
        raise SizeMismatch(f"need 1 <= k <= {d}, got {k}")
    R, C = M.row_labels, M.col_labels
    tail_r, tail_c = R[k:], C[k:]
    full = det_exact(M, **caps)
    tail = det_exact(minor(M, tail_r, tail_c), **caps)
    lhs = full * tail ** (k - 1)

    def bordered(i: int, j: int) -> SquareMatrix:
        rows = [R[i]] + tail_r
        cols = [C[j]] + tail_c
        ri = [R.index(x) for x in rows]
        ci = [C.index(x) for x in cols]
        return SquareMatrix([[M.entries[r][c] for c in ci] for r in ri], rows, cols)

    D = [[det_exact(bordered(i, j), **caps) for j in range(k)] for i in range(k)]
    per_sigma = []
    rhs: Scalar = 0
    for sigma in all_permutations(k):
        term: Scalar = inversion_sign(sigma)
        for i in range(k):
            term = term * D[i][sigma(i + 1) - 1]
        per_sigma.append((sigma, term))
        rhs = rhs + term
    if isinstance(lhs, EdgePolynomial) or isinstance(rhs, EdgePolynomial):
        lhs, rhs = EdgePolynomial.coerce(lhs), EdgePolynomial.coerce(rhs)
    return DodgsonMuirSides(lhs, rhs, per_sigma)


def reduced_laplacian(n: int) -> SquareMatrix:
    """The Laplacian with row and column 0 removed."""
    return minor(laplacian(n), range(1, n + 1), range(1, n + 1))


def gendodgson_sides(n: int, k: int) -> DodgsonMuirSides:
    """Dodgson/Muir applied to the reduced Laplacian of the complete digraph."""
    return dodgson_muir_sides(reduced_laplacian(n), k)


def substitute(M: SquareMatrix, values) -> SquareMatrix:
    return SquareMatrix(
        [[EdgePolynomial.coerce(x).evaluate(values) for x in r] for r in M.entries],
        list(M.row_labels),
        list(M.col_labels),
    )


def random_edge_weights(n: int, rng: random.Random, lo: int = -9, hi: int = 9) -> dict:
    return {(i, j): rng.randint(lo, hi) for i in range(n + 1) for j in range(n + 1) if i != j}


def gendodgson_numeric(n: int, k: int, trials: int = 3, seed: int = 0) -> bool:
    """Check the Laplacian form of the identity under random integer edge weights."""
    rng = random.Random(seed)
    A = reduced_laplacian(n)
    for _ in range(max(trials, 3)):
        M = substitute(A, random_edge_weights(n, rng))
        if not dodgson_muir_sides(M, k).holds:
            return False
    return True


# -- matrix tree and cancellation ------------------------------------------------


def forest_polynomial(n: int, roots: Iterable[int]) -> EdgePolynomial:
    forests = enumerate_forests(n, RootedForestSpec(roots))
    return EdgePolynomial.sum_of_monomials([e.pair for e in g.edges()] for g in forests)


def principal_minor_det(n: int, roots: Iterable[int]) -> EdgePolynomial:
    roots = set(roots)
    keep = [v for v in range(n + 1) if v not in roots]
    return EdgePolynomial.coerce(det_exact(minor(laplacian(n), keep, keep)))


def matrix_tree_check(n: int, roots: Iterable[int]) -> bool:
    """Principal minor of the Laplacian equals the sum over forests rooted at ``roots``."""
    roots = set(roots)
    return principal_minor_det(n, roots) == forest_polynomial(n, roots)


def cancellation_check(n: int, k: int, cap: int = DEFAULT_CAP) -> bool:
    """Signed sum over ``R^sigma`` equals the plain sum over S3."""
    return signed_rhs_sum(n, k, cap) == set_monomial_sum(n, k, "S3", cap)
