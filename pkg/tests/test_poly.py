from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import to_sympy
from rhp.poly import EdgePolynomial

pairs = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda p: p[0] != p[1])
polys = st.dictionaries(
    st.lists(pairs, max_size=3).map(lambda m: tuple(sorted(m))),
    st.integers(-5, 5),
    max_size=4,
).map(EdgePolynomial)


def test_zero_coefficients_are_dropped():
    p = EdgePolynomial.var(1, 0) - EdgePolynomial.var(1, 0)
    assert p.is_zero() and p.terms == {} and p == 0


def test_constant_term_uses_empty_key():
    assert EdgePolynomial.const(3).terms == {(): 3}
    assert (EdgePolynomial.var(1, 2) + 4).constant() == 4


def test_monomials_are_sorted_multisets():
    a, b = EdgePolynomial.var(2, 1), EdgePolynomial.var(1, 0)
    assert (a * b * b).terms == {((1, 0), (1, 0), (2, 1)): 1}


def test_sum_of_monomials_keeps_multiplicity():
    p = EdgePolynomial.sum_of_monomials([[(1, 0)], [(1, 0)], [(2, 0)]])
    assert p.terms == {((1, 0),): 2, ((2, 0),): 1}


def test_evaluate_and_degree():
    p = EdgePolynomial.var(1, 0) * EdgePolynomial.var(2, 1) * 3 - 2
    assert p.degree() == 2
    assert p.evaluate({(1, 0): 2, (2, 1): 5}) == 28
    assert p.variables() == {(1, 0), (2, 1)}


def test_repr():
    assert repr(EdgePolynomial.var(1, 0) - EdgePolynomial.var(2, 3) * 2) == "a10 - 2*a23"


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert p - p == 0


@settings(max_examples=80, deadline=None)
@given(polys, polys, st.integers(0, 3))
def test_agrees_with_sympy(p, q, e):
    assert to_sympy(p * q + q**e) == (to_sympy(p) * to_sympy(q) + to_sympy(q) ** e).expand()
