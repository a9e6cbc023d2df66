"""Exact multivariate polynomials in edge indeterminates ``a_ij``.

A monomial is a sorted tuple of ``(i, j)`` pairs (repeats allowed), so the
product ``a_10 * a_21 * a_10`` is ``((1, 0), (1, 0), (2, 1))``.  The empty tuple
is the constant monomial.  Coefficients are Python ints.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Mapping, Union

Monomial = tuple[tuple[int, int], ...]


def _merge(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


class EdgePolynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self.terms: dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    key = tuple(sorted(tuple(p) for p in m))
                    self.terms[key] = self.terms.get(key, 0) + c
            self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def const(cls, c: int) -> "EdgePolynomial":
        return cls({(): c}) if c else cls()

    @classmethod
    def var(cls, i: int, j: int) -> "EdgePolynomial":
        return cls({((i, j),): 1})

    @classmethod
    def monomial(cls, edges: Iterable[tuple[int, int]], coeff: int = 1) -> "EdgePolynomial":
        return cls({tuple(sorted(edges)): coeff})

    @classmethod
    def sum_of_monomials(cls, monomials: Iterable[Iterable[tuple[int, int]]]) -> "EdgePolynomial":
        """Sum with multiplicity; repeated monomials accumulate."""
        counts = Counter(tuple(sorted(m)) for m in monomials)
        p = cls()
        p.terms = dict(counts)
        return p

    @staticmethod
    def coerce(x: "EdgePolynomial | int") -> "EdgePolynomial":
        if isinstance(x, EdgePolynomial):
            return x
        if isinstance(x, int):
            return EdgePolynomial.const(x)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = EdgePolynomial.coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        p = EdgePolynomial()
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = EdgePolynomial()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        other = EdgePolynomial.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return EdgePolynomial()
            p = EdgePolynomial()
            p.terms = {m: c * other for m, c in self.terms.items()}
            return p
        other = EdgePolynomial.coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _merge(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        p = EdgePolynomial()
        p.terms = {m: c for m, c in out.items() if c}
        return p

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = EdgePolynomial.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = EdgePolynomial.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant(self) -> int:
        return self.terms.get((), 0)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def variables(self) -> set[tuple[int, int]]:
        return {p for m in self.terms for p in m}

    def evaluate(self, values: Mapping[tuple[int, int], int] | None = None, default: int | None = None) -> int:
        """Substitute integers for the indeterminates."""
        total = 0
        for m, c in self.terms.items():
            term = c
            for p in m:
                v = values.get(p, default) if values is not None else default
                if v is None:
                    raise KeyError(f"no value for a{p}")
                term *= v
            total += term
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            mono = "*".join(f"a{i}{j}" if i < 10 and j < 10 else f"a[{i},{j}]" for i, j in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


Scalar = Union[int, EdgePolynomial]
