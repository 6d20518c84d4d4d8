from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from ddpoly.errors import DegreeExceedsCap, EmptySet, NotEventuallyPolynomial, NotNumerical, WindowTooSmall
from ddpoly.numpoly import (
    MultiNumericalPolynomial,
    NumericalPolynomial,
    binom_shifted,
    compare_eventual,
    eval_multi,
    eval_poly,
    interpolate,
    invariants,
    maximal_index_set,
    multi_invariants,
    shifted_binomial,
    to_binomial_basis,
    to_dense,
    to_multi_binomial_basis,
)

P = NumericalPolynomial
coeff_lists = st.lists(st.integers(-20, 20), max_size=5)


def test_eval_examples():
    assert eval_poly(P([0, 0, 1]), 3) == 10
    assert eval_poly(P(), 17) == 0
    assert eval_poly(P([-1, 2]), 5) == 11


def test_binomials_at_negative_arguments():
    # C(t+2,2) = (t+1)(t+2)/2
    assert binom_shifted(-1, 2) == 0
    assert binom_shifted(-3, 2) == 1
    assert binom_shifted(-4, 3) == -1


def test_to_binomial_basis_examples():
    assert to_binomial_basis([1, 1]) == P([0, 1])
    assert to_binomial_basis([1, Fraction(3, 2), Fraction(1, 2)]) == P([0, 0, 1])
    assert to_binomial_basis([0, 0, 1]) == P([1, -3, 2])


def test_to_binomial_basis_rejects_non_numerical():
    with pytest.raises(NotNumerical):
        to_binomial_basis([0, Fraction(1, 3)])


@given(coeff_lists)
def test_dense_roundtrip(cs):
    p = P(cs)
    assert to_binomial_basis(to_dense(p)) == p


@given(coeff_lists, st.integers(-10, 30))
def test_dense_and_binomial_evaluate_alike(cs, r):
    p = P(cs)
    dense = to_dense(p)
    assert sum(c * r ** j for j, c in enumerate(dense)) == p(r)


def test_zero_polynomial_degree():
    assert P().degree == -1
    assert P([0, 0]).degree == -1
    assert P([3, 0, 0]).coeffs == (3,)


def test_text_roundtrip():
    p = P([-2, 1, 3])
    assert p.to_text() == "3*C(t+2,2) + 1*C(t+1,1) - 2"
    assert P.from_text(p.to_text()) == p
    assert P.from_text("0") == P()


@given(coeff_lists)
def test_json_roundtrip(cs):
    p = P(cs)
    assert P.from_json(p.to_json()) == p
    assert P.from_text(p.to_text()) == p


def test_interpolate_examples():
    assert interpolate([(5, 6), (6, 7), (7, 8)], 1) == P([0, 1])
    with pytest.raises(NotEventuallyPolynomial):
        interpolate([(4, 2), (5, 2), (6, 3), (7, 3)], 1)
    vals = [(r, 3 * comb(r + 2, 2)) for r in range(10, 15)]
    assert interpolate(vals, 2) == P([0, 0, 3])


def test_interpolate_window_too_small():
    with pytest.raises(WindowTooSmall):
        interpolate([(0, 1), (1, 2)], 1)
    with pytest.raises(WindowTooSmall):
        interpolate([(0, 1), (1, 2), (3, 4)], 1)


@given(coeff_lists, st.integers(0, 10))
def test_interpolate_recovers(cs, start):
    p = P(cs)
    bound = max(p.degree, 0)
    vals = [(r, p(r)) for r in range(start, start + bound + 3)]
    assert interpolate(vals, bound) == p


def test_invariants_examples():
    assert invariants(P([0, 1, 3]), 1, 1) == (2, 3, 3)
    assert invariants(P([0, 5]), 2, 1) == (1, 5, 0)
    assert invariants(P([0, 0, 1]), 1, 1) == (2, 1, 1)
    with pytest.raises(DegreeExceedsCap):
        invariants(P([0, 0, 1]), 1, 0)


def test_compare_eventual():
    assert compare_eventual(P([0, 1]), P([100])) == 1
    assert compare_eventual(P([5]), P([5])) == 0
    assert compare_eventual(P([0, 0, -1]), P([0, 3])) == -1


def test_maximal_index_set_examples():
    A = {(1, 1, 1), (2, 3, 0), (0, 2, 3), (2, 0, 5), (3, 3, 1), (4, 1, 1), (2, 3, 3)}
    assert maximal_index_set(A) == {(2, 0, 5), (3, 3, 1), (4, 1, 1), (2, 3, 3)}
    assert maximal_index_set({(1, 2)}) == {(1, 2)}
    assert maximal_index_set({(0, 0), (1, 1), (2, 2)}) == {(2, 2)}
    with pytest.raises(EmptySet):
        maximal_index_set(set())


def test_shifted_binomial_counts_lattice_points():
    # points of N^2 above (c, 0) with total order <= r
    for c in range(4):
        q = shifted_binomial(c, 2)
        for r in range(c, c + 6):
            brute = sum(1 for a in range(r + 1) for b in range(r + 1) if a + b <= r and a >= c)
            assert q(r) == brute


def test_multi_examples():
    phi = MultiNumericalPolynomial((1, 1), {(1, 1): 1})
    inv = multi_invariants(phi)
    assert inv["d"] == 2 and inv["a_caps"] == 1 and inv["E_prime"] == {(1, 1)}
    assert eval_multi(phi, (2, 3)) == 12
    with pytest.raises(EmptySet):
        multi_invariants(MultiNumericalPolynomial((1, 1)))
    two = MultiNumericalPolynomial((1, 1), {(1, 1): 2})
    assert all(two(a, b) == 2 * (a + 1) * (b + 1) for a in range(4) for b in range(4))


def test_multi_text_and_json():
    phi = MultiNumericalPolynomial((1, 2), {(1, 1): 3, (0, 2): -1, (0, 0): 4})
    assert phi.to_text() == "3*C(t1+1,1)*C(t2+1,1) - 1*C(t2+2,2) + 4"
    assert MultiNumericalPolynomial.from_json(phi.to_json()) == phi


def test_to_multi_binomial_basis():
    # t1*t2 = (C(t1+1,1) - 1)(C(t2+1,1) - 1)
    P2 = to_multi_binomial_basis({(1, 1): 1}, (1, 1))
    assert P2.coeffs == {(1, 1): 1, (1, 0): -1, (0, 1): -1, (0, 0): 1}
    with pytest.raises(DegreeExceedsCap):
        MultiNumericalPolynomial((1, 1), {(2, 0): 1})
