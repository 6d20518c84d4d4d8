"""Random operators and elements shared by several test modules."""

import random
from fractions import Fraction

from ddpoly.opalg import ModuleElement, Operator


def random_coeff(rng: random.Random, alg):
    F = alg.field
    c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
    if F.is_constant:
        return c
    x = F.gen(F.indeterminates[0])
    pick = rng.randrange(4)
    if pick == 0:
        return F.coerce(c)
    if pick == 1:
        return c * x + rng.randint(-2, 2)
    if pick == 2:
        return x ** 2 - c
    return F.one() / (x + rng.randint(1, 3))


def random_exponent(rng, sig, max_ord):
    e = [0] * sig.nvars
    for _ in range(rng.randint(0, max_ord)):
        e[rng.randrange(sig.nvars)] += 1
    return tuple(e)


def random_operator(rng, alg, terms=3, max_ord=2) -> Operator:
    return Operator(alg, {random_exponent(rng, alg.sig, max_ord): random_coeff(rng, alg) for _ in range(terms)})


def random_element(rng, alg, rank, terms=3, max_ord=2) -> ModuleElement:
    return ModuleElement(alg, rank, {
        (rng.randrange(rank), random_exponent(rng, alg.sig, max_ord)): random_coeff(rng, alg)
        for _ in range(terms)
    })
