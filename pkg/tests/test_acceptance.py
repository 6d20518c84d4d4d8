"""End-to-end acceptance checks, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary (see
``conftest.py``).  Time budgets are asserted inside each test.
"""

import itertools
import random
import time
from math import comb, prod

import pytest

from ddpoly.chains import audit, dim_bound_report, theorem5_chain
from ddpoly.errors import NotEventuallyPolynomial
from ddpoly.kaehler import (
    ExtensionPresentation,
    chi_extension,
    chi_intermediate,
    compare_generator_sets,
    quasi_polynomial_probe,
)
from ddpoly.monoid import PartitionSpec
from ddpoly.numpoly import interpolate, maximal_index_set
from ddpoly.opalg import ModuleElement, OreAlgebra, groebner, is_member, op_mul, parse_element, parse_operator
from ddpoly.oracle import TruncationWindow, dim_intersection, dim_intersection_blockwise, in_span

from corpus import CORPUS, algebra
from helpers import random_element, random_operator


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


def test_criterion_1_maximal_index_set():
    A = [(1, 1, 1), (2, 3, 0), (0, 2, 3), (2, 0, 5), (3, 3, 1), (4, 1, 1), (2, 3, 3)]
    with Budget(1):
        got = maximal_index_set(A)
    assert got == {(2, 0, 5), (3, 3, 1), (4, 1, 1), (2, 3, 3)}


def test_criterion_2_quasi_polynomial_counterexamples():
    X = ExtensionPresentation.free(OreAlgebra.constants(1, 0), 1)
    with Budget(1):
        half = quasi_polynomial_probe(X, [(0, (2 * k,)) for k in range(1, 7)], 12)
        logs = quasi_polynomial_probe(X, [(0, (2 ** k,)) for k in range(1, 5)], 16, r_min=2)
        assert [half.values[r] for r in range(13)] == [r // 2 for r in range(13)]
        assert [logs.values[r] for r in range(2, 17)] == [r.bit_length() - 1 for r in range(2, 17)]
        assert half.verdict == logs.verdict == "not_eventually_polynomial"
        for rep in (half, logs):
            with pytest.raises(NotEventuallyPolynomial):
                interpolate(sorted(rep.values.items()), 1)


def _corpus_check():
    out = []
    for case in CORPUS:
        rep = chi_intermediate(case.X, case.F) if case.F else chi_extension(case.X)
        r0 = rep.threshold
        tab = dim_intersection(case.oracle_gens(), case.X, TruncationWindow(r0 + 4))
        out.append((case, rep, tab))
    return out


def test_criterion_3_corpus_matches_oracle():
    assert len(CORPUS) >= 12
    assert all(c.m + c.n <= 3 and c.s <= 2 for c in CORPUS)
    with Budget(60):
        results = _corpus_check()
    for case, rep, tab in results:
        r0 = rep.threshold
        assert [rep.polynomial(r) for r in range(r0, r0 + 5)] == [tab[r] for r in range(r0, r0 + 5)], case.name
        assert rep.polynomial.degree <= case.m + case.n


def test_criterion_4_generator_invariance():
    c11 = OreAlgebra.constants(1, 1)
    qx = algebra(1, 1, rational=True)
    d, a = c11.delta(1), c11.alpha(1)
    dq = qx.delta(1)
    x = parse_operator("x", qx)
    rel = ExtensionPresentation(qx, 2, (parse_element("x*d1*e1 - a1*e2", qx, 2),
                                        parse_element("d1^2*e2 + e2", qx, 2)))
    free2 = ExtensionPresentation.free(c11, 2)
    cases = [
        (free2, [[0, 1], [1, 0]], [[0, 1], [1, 0]]),  # swap
        (free2, [[1, 0], [d, 1]], [[1, 0], [-d, 1]]),  # (eta1, eta2 + d eta1)
        (free2, [[1, 0], [a * a, 1]], [[1, 0], [-(a * a), 1]]),
        (free2, [[2, 0], [0, -3]], [[parse_operator("1/2", c11), 0], [0, parse_operator("-1/3", c11)]]),
        (rel, [[0, 1], [1, x]], [[-x, 1], [1, 0]]),
        (rel, [[x, 0], [dq, 1]], [[parse_operator("1/x", qx), 0], [parse_operator("-d1*(1/x)", qx), 1]]),
        (ExtensionPresentation(c11, 2, (parse_element("d1*e1 - a1*e2", c11, 2),)),
         [[1, 1], [0, 1]], [[1, -1], [0, 1]]),
    ]
    with Budget(30):
        reports = [compare_generator_sets(X, T, U) for X, T, U in cases]
    assert len(reports) >= 5
    for rep in reports:
        assert rep.equal, (rep.first.triple(), rep.second.triple())


def test_criterion_5_free_closed_form():
    with Budget(1):
        for m, n, s in itertools.product(range(5), range(5), range(1, 4)):
            if not 1 <= m + n <= 4:
                continue
            rep = chi_extension(ExtensionPresentation.free(OreAlgebra.constants(m, n), s))
            assert rep.threshold == 0
            assert all(rep.polynomial(r) == s * comb(r + m + n, m + n) for r in range(12))


def test_criterion_6_polynomial_from_threshold():
    for case in CORPUS:
        rep = chi_intermediate(case.X, case.F, r_table=10) if case.F else chi_extension(case.X, r_table=10)
        tab = dim_intersection(case.oracle_gens(), case.X, TruncationWindow(rep.threshold + 4))
        for r in range(rep.threshold, max(rep.table) + 1):
            assert rep.table[r] == rep.polynomial(r), (case.name, r)
        for r in range(rep.threshold, rep.threshold + 5):
            assert tab[r] == rep.polynomial(r), (case.name, r)


def test_criterion_7_descending_chains():
    with Budget(60):
        for m, n in [(1, 0), (0, 1), (1, 1), (2, 1)]:
            X = ExtensionPresentation.free(OreAlgebra.constants(m, n), 1)
            for caps in itertools.product(range(3), repeat=m + n):
                a = audit(theorem5_chain(X, caps))
                assert a.strict, (m, n, caps, a.gaps)
                assert (a.polynomials[0] - a.polynomials[-1]).degree == m + n
            for k in range(1, 4):
                rep = dim_bound_report(ExtensionPresentation.free(OreAlgebra.constants(m, n), k), k)
                assert rep.dim == k and rep.drops == [1] * k


def test_criterion_8_multivariate():
    with Budget(120):
        for (mb, nb), s in itertools.product([((1,), (1,)), ((2,), (1,)), ((1, 1), (1,)), ((1,), (2,))], (1, 2)):
            part = PartitionSpec(mb, nb)
            X = ExtensionPresentation.free(OreAlgebra.constants(sum(mb), sum(nb)), s)
            poly = chi_extension(X, part).polynomial
            caps = list(mb) + list(nb)
            for r in itertools.product(range(4), repeat=len(caps)):
                assert poly(*r) == s * prod(comb(t + c, c) for t, c in zip(r, caps))
        checked = 0
        for case in CORPUS:
            if case.part is None or len(case.part.m_blocks) + len(case.part.n_blocks) != 2:
                continue
            rep = chi_intermediate(case.X, case.F, case.part, r_table=5) if case.F else \
                chi_extension(case.X, case.part, r_table=5)
            tab = dim_intersection_blockwise(case.oracle_gens(), case.X, case.part, (5, 5))
            for r, v in tab.values.items():
                assert rep.table[r] == v, (case.name, r)
                if all(a >= b for a, b in zip(r, rep.threshold)):
                    assert rep.polynomial(*r) == v, (case.name, r)
            checked += 1
        assert checked >= 6


def _membership_instances(rng, alg, count):
    for i in range(count):
        rank = rng.choice((1, 2))
        gens = [random_element(rng, alg, rank, terms=2, max_ord=1) for _ in range(rng.choice((1, 2)))]
        gens = [g for g in gens if not g.is_zero()] or [alg.basis(rank, 1)]
        v = ModuleElement(alg, rank, {})
        for g in gens:
            v = v + random_operator(rng, alg, terms=2, max_ord=1) * g
        if i % 2:  # perturb half of them off the submodule (usually)
            v = v + random_element(rng, alg, rank, terms=1, max_ord=2)
        yield gens, v


def test_criterion_9_operator_soundness():
    qx = algebra(1, 1, rational=True)
    with Budget(60):
        d, x = qx.delta(1), parse_operator("x", qx)
        assert op_mul(d, x) - op_mul(x, d) == qx.scalar(1)
        rng = random.Random(2024)
        for _ in range(200):
            A, B, C = (random_operator(rng, qx) for _ in range(3))
            assert op_mul(op_mul(A, B), C) == op_mul(A, op_mul(B, C))
        agree = 0
        members = 0
        for gens, v in _membership_instances(random.Random(7), qx, 50):
            gb_says = is_member(v, groebner(gens))
            oracle_says = in_span(v, gens, 3)
            assert gb_says == oracle_says, (gens, v)
            agree += 1
            members += gb_says
        assert agree == 50 and 0 < members < 50
