from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ddpoly.errors import InversiveUnsupported
from ddpoly.monoid import PartitionSpec, Signature, divides, enumerate_exponents
from ddpoly.numpoly import MultiNumericalPolynomial, NumericalPolynomial
from ddpoly.staircase import LeadSet, complement_count, complement_polynomial, count_exact, count_table, staircase_polynomial

S11 = Signature(1, 1)


def test_count_exact_examples():
    L = LeadSet(S11, [[(2, 0), (0, 2)]])
    for r in range(4, 9):
        assert count_exact(L, r) == comb(r + 2, 2) - 4
    assert count_exact(LeadSet(S11, [[(0, 0)]]), 5) == comb(7, 2)
    L2 = LeadSet(Signature(1, 0), [[], [(1,)]])
    assert count_exact(L2, 3) == 3


def test_complement_polynomial_examples():
    poly, thr = complement_polynomial(LeadSet(S11, [[(2, 0), (0, 2)]]))
    assert poly == NumericalPolynomial([4]) and thr == 4
    poly, thr = complement_polynomial(LeadSet(S11, [[]]))
    assert poly == NumericalPolynomial([0, 0, 1]) and thr == 0
    poly, thr = complement_polynomial(LeadSet(S11, [[(1, 0)]]))
    assert poly == NumericalPolynomial([0, 1]) and thr == 1


def test_antichain_minimalization():
    L = LeadSet(S11, [[(1, 0), (2, 0), (1, 1)]])
    assert L.sorted_component(0) == [(1, 0)]


def test_inversive_rejected():
    sig = Signature(0, 1, True)
    with pytest.raises(InversiveUnsupported):
        complement_polynomial(LeadSet(sig, [[(1,)]]))


def test_multivariate_free_and_single_lead():
    part = PartitionSpec((1,), (1,))
    poly, thr = complement_polynomial(LeadSet(S11, [[], []]), part=part)
    assert poly == MultiNumericalPolynomial((1, 1), {(1, 1): 2}) and thr == (0, 0)
    poly, thr = complement_polynomial(LeadSet(S11, [[(1, 0)]]), part=part)
    assert poly == MultiNumericalPolynomial((1, 1), {(0, 1): 1}) and thr == (1, 0)


leads_st = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2)), min_size=0, max_size=4)


@given(leads_st)
def test_polynomial_matches_enumeration(leads):
    sig = Signature(2, 1)
    L = LeadSet(sig, [leads])
    poly, thr = complement_polynomial(L)
    for r in range(thr, thr + 3):
        brute = sum(1 for e in enumerate_exponents(sig, r) if not any(divides(a, e, sig) for a in leads))
        assert poly(r) == brute == complement_count(L, r)


@given(leads_st)
def test_blockwise_polynomial_matches_enumeration(leads):
    sig = Signature(2, 1)
    part = PartitionSpec((2,), (1,))
    L = LeadSet(sig, [leads])
    poly, thr = staircase_polynomial(L, part)
    for r1 in range(thr[0], thr[0] + 2):
        for r2 in range(thr[1], thr[1] + 2):
            assert poly(r1, r2) == count_exact(L, (r1, r2), part)


@given(leads_st)
def test_table_matches_pointwise(leads):
    L = LeadSet(Signature(2, 1), [leads])
    tab = count_table(L, 5)
    assert tab == [count_exact(L, r) for r in range(6)]
    assert all(a <= b for a, b in zip(tab, tab[1:]))


def test_leads_array_dtype():
    L = LeadSet(S11, [[(2, 0)]])
    assert L.leads_array(0).dtype == np.int64
