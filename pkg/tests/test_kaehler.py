from math import comb

import pytest

from ddpoly.errors import AmbientNotFree, NonMonomialGenerator, NotSigmaDeltaClosed, OracleMismatch, TransitionNotInvertible
from ddpoly.kaehler import (
    ExtensionPresentation,
    IntermediateFieldSpec,
    chi_extension,
    chi_intermediate,
    compare_generator_sets,
    quasi_polynomial_probe,
    regenerate,
)
from ddpoly.monoid import PartitionSpec
from ddpoly.numpoly import NumericalPolynomial
from ddpoly.opalg import OreAlgebra, parse_element
from ddpoly.oracle import TruncationWindow, dim_intersection

from corpus import CORPUS


def field(alg, s, *texts, closed=True):
    return IntermediateFieldSpec(tuple(parse_element(t, alg, s) for t in texts), closed)


@pytest.mark.parametrize("m,n,s", [(1, 0, 1), (1, 1, 1), (0, 2, 2), (2, 1, 3)])
def test_free_extension(m, n, s):
    rep = chi_extension(ExtensionPresentation.free(OreAlgebra.constants(m, n), s))
    assert rep.threshold == 0
    assert all(rep.polynomial(r) == s * comb(r + m + n, m + n) for r in range(8))
    assert rep.triple() == (m + n, s, s)


def test_relation_leaves_constant(const10):
    X = ExtensionPresentation(const10, 1, (parse_element("d1^2*e1", const10, 1),))
    rep = chi_extension(X, verify=6)
    assert rep.polynomial == NumericalPolynomial([2])
    assert rep.oracle.agrees


def test_free_multivariate(const11):
    X = ExtensionPresentation.free(const11, 2)
    rep = chi_extension(X, PartitionSpec((1,), (1,)))
    assert all(rep.polynomial(a, b) == 2 * (a + 1) * (b + 1) for a in range(5) for b in range(5))
    assert rep.invariants["a_caps"] == 2


def test_intermediate_whole_field_matches_extension(const11):
    X = ExtensionPresentation.free(const11, 2)
    F = field(const11, 2, "e1", "e2")
    assert chi_intermediate(X, F).polynomial == chi_extension(X).polynomial


def test_intermediate_second_derivative(const10):
    X = ExtensionPresentation.free(const10, 1)
    rep = chi_intermediate(X, field(const10, 1, "d1^2*e1"), verify=8)
    assert rep.polynomial == NumericalPolynomial([-2, 1])
    assert rep.threshold == 2
    assert rep.filtration_check is True


def test_intermediate_multiples_of_delta(const11):
    X = ExtensionPresentation.free(const11, 1)
    rep = chi_intermediate(X, field(const11, 1, "d1*e1"), verify=8)
    # multiples of delta among power products of order <= r
    assert [rep.polynomial(r) for r in range(9)] == [comb(r + 1, 2) for r in range(9)]
    assert rep.oracle.agrees


def test_closure_flag_required(const10):
    X = ExtensionPresentation.free(const10, 1)
    with pytest.raises(NotSigmaDeltaClosed):
        chi_intermediate(X, field(const10, 1, "d1*e1", closed=False))


def test_mismatch_is_raised(const10, monkeypatch):
    from ddpoly import kaehler

    X = ExtensionPresentation.free(const10, 1)
    real = kaehler.oracle.dim_intersection

    def off_by_one(*a, **kw):
        tab = real(*a, **kw)
        tab.values[3] += 1
        return tab

    monkeypatch.setattr(kaehler.oracle, "dim_intersection", off_by_one)
    with pytest.raises(OracleMismatch):
        chi_extension(X, verify=4)


def test_probe_half(const10):
    X = ExtensionPresentation.free(const10, 1)
    rep = quasi_polynomial_probe(X, [(0, (2 * k,)) for k in range(1, 7)], 12)
    assert [rep.values[r] for r in range(13)] == [r // 2 for r in range(13)]
    assert rep.verdict == "not_eventually_polynomial"
    assert rep.witness is not None


def test_probe_log(const10):
    X = ExtensionPresentation.free(const10, 1)
    rep = quasi_polynomial_probe(X, [(0, (2 ** k,)) for k in range(1, 5)], 16, r_min=2)
    assert [rep.values[r] for r in range(2, 17)] == [r.bit_length() - 1 for r in range(2, 17)]
    assert rep.verdict == "not_eventually_polynomial"


def test_probe_closed_set_matches(const10):
    X = ExtensionPresentation.free(const10, 1)
    rep = quasi_polynomial_probe(X, [(0, (k,)) for k in range(1, 12)], 10)
    chi = chi_intermediate(X, field(const10, 1, "d1*e1"))
    assert rep.verdict == "polynomial"
    assert rep.polynomial == chi.polynomial


def test_probe_rejects(const10):
    X = ExtensionPresentation.free(const10, 1)
    with pytest.raises(NonMonomialGenerator):
        quasi_polynomial_probe(X, [parse_element("d1*e1 + e1", const10, 1)], 4)
    Y = ExtensionPresentation(const10, 1, (parse_element("d1*e1", const10, 1),))
    with pytest.raises(AmbientNotFree):
        quasi_polynomial_probe(Y, [(0, (1,))], 4)


def test_identity_transition(qx):
    X = ExtensionPresentation(qx, 2, (parse_element("d1*e1 - x*e2", qx, 2),))
    rep = compare_generator_sets(X, [[1, 0], [0, 1]], [[1, 0], [0, 1]])
    assert rep.equal
    assert rep.first.polynomial == rep.second.polynomial


def test_swap(const11):
    X = ExtensionPresentation.free(const11, 2)
    rep = compare_generator_sets(X, [[0, 1], [1, 0]], [[0, 1], [1, 0]])
    assert rep.equal and rep.first.triple() == (2, 2, 2)


def test_shear_with_operator(qx):
    X = ExtensionPresentation(qx, 2, (parse_element("d1^2*e1 - a1*e2", qx, 2),))
    d = qx.delta(1)
    rep = compare_generator_sets(X, [[1, 0], [d, 1]], [[1, 0], [-d, 1]], verify=4)
    assert rep.equal


def test_delta_plus_one_is_not_a_unit(const10):
    X = ExtensionPresentation.free(const10, 1)
    P = const10.delta(1) + 1
    with pytest.raises(TransitionNotInvertible):
        regenerate(X, [[P]], [[1]])
    # the submodule it generates still has the same invariants
    a = chi_extension(X)
    b = chi_intermediate(X, IntermediateFieldSpec((P * const10.basis(1, 1),), True))
    assert a.triple()[:2] == b.triple()[:2] == (1, 1)


def test_explicit_second_presentation(qx):
    X = ExtensionPresentation(qx, 2, (parse_element("d1*e1 - e2", qx, 2),))
    X2 = ExtensionPresentation(qx, 2, (parse_element("d1*e2 - e1", qx, 2),))
    rep = compare_generator_sets(X, [[0, 1], [1, 0]], [[0, 1], [1, 0]], X2)
    assert rep.equal
    bad = ExtensionPresentation(qx, 2, (parse_element("d1*e2 - x*e1", qx, 2),))
    with pytest.raises(TransitionNotInvertible):
        compare_generator_sets(X, [[0, 1], [1, 0]], [[0, 1], [1, 0]], bad)


def test_monotone_in_submodule(const11):
    X = ExtensionPresentation.free(const11, 1)
    small = chi_intermediate(X, field(const11, 1, "d1^2*e1"))
    big = chi_intermediate(X, field(const11, 1, "d1*e1", "a1^2*e1"))
    start = max(small.threshold, big.threshold)
    assert all(small.polynomial(r) <= big.polynomial(r) for r in range(start, start + 10))


@pytest.mark.parametrize("case", CORPUS, ids=lambda c: c.name)
def test_rank_and_degree(case):
    rep = chi_intermediate(case.X, case.F) if case.F else chi_extension(case.X)
    top = case.m + case.n
    assert rep.polynomial.degree <= top
    assert rep.invariants["c_top"] == rep.invariants["module_rank"]
    whole = chi_extension(case.X)
    assert rep.invariants["c_top"] <= whole.invariants["c_top"]
    if case.part:
        multi = chi_intermediate(case.X, case.F, case.part) if case.F else chi_extension(case.X, case.part)
        caps = multi.polynomial.caps
        assert all(i <= c for idx in multi.polynomial.support() for i, c in zip(idx, caps))


@pytest.mark.parametrize("case", CORPUS, ids=lambda c: c.name)
def test_table_matches_polynomial_from_threshold(case):
    rep = chi_intermediate(case.X, case.F, r_table=8) if case.F else chi_extension(case.X, r_table=8)
    assert all(rep.polynomial(r) == v for r, v in rep.table.items() if r >= rep.threshold)
    tab = dim_intersection(case.oracle_gens(), case.X, TruncationWindow(6))
    assert all(rep.table[r] == tab[r] for r in range(7))
