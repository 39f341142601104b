import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from shalika_padic.local_reps import (
    SatakeParams, b_ordinary_check, brute_force_charpoly, gaussian_binomial,
    l_beta_defining, l_beta_membership, parahoric_cosets, q_ordinary_tau, q_regular_check, simple_root,
    up_charpoly,
)
from shalika_padic.weights import PrimePartition, Weight

X = sympy.Symbol("X")


def _expand(roots):
    poly = sympy.Poly(sympy.prod([X - r for r in roots]), X)
    return [Fraction(str(c)) for c in reversed(poly.all_coeffs())]


def test_charpoly_gl2_is_quadratic():
    P = SatakeParams(1, 3, (Fraction(2), Fraction(5, 7)))
    assert up_charpoly(P) == _expand([sympy.Integer(2), sympy.Rational(5, 7)])


def test_charpoly_gl4_subset_oracle():
    P = SatakeParams(2, 2, (1, 2, 3, 4))
    roots = [sympy.Rational(a * b, 2) for a, b in combinations([1, 2, 3, 4], 2)]
    assert up_charpoly(P) == _expand(roots)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_brute_force_charpoly_gl2(q):
    rng = random.Random(q)
    for _ in range(3):
        al = tuple(Fraction(rng.randint(1, 30), rng.randint(1, 9)) for _ in range(2))
        P = SatakeParams(1, q, al)
        assert [Fraction(x) for x in brute_force_charpoly(P)] == up_charpoly(P)


def test_brute_force_charpoly_gl4():
    P = SatakeParams(2, 2, (Fraction(3), Fraction(1, 2), Fraction(5), Fraction(7, 3)))
    assert [Fraction(x) for x in brute_force_charpoly(P)] == up_charpoly(P)


def test_q_ordinary_subset_sum():
    mu = Weight.single((2, 1, 0, -1))
    part = PrimePartition.rational(2)
    P = SatakeParams(2, 2, None, (3, 2, 0, 0))
    assert q_ordinary_tau(P, mu, part, "2", strip=False) == (3, 4)


def test_q_ordinary_none_for_units():
    mu = Weight.single((3, 1, 0, -2))
    part = PrimePartition.rational(5)
    # target is 1 + (0 - 2) = -1: not attained by unit parameters
    P = SatakeParams(2, 5, (1, 2, 3, 4))
    assert q_ordinary_tau(P, mu, part, "5") is None


def test_q_ordinary_strip_rejects_equal_valuations():
    mu = Weight.single((0, 0))
    part = PrimePartition.rational(3)
    # target 0 is hit by both parameters, but neither lies strictly outside the strip
    P = SatakeParams(1, 3, None, (0, 0))
    assert q_ordinary_tau(P, mu, part, "3", strip=False) == (1,)
    assert q_ordinary_tau(P, mu, part, "3") is None


def test_q_regular_examples():
    P = SatakeParams(2, 2, (1, 2, 3, 4))
    assert not q_regular_check(P, (3, 4), 1)
    P = SatakeParams(2, 2, (1, 2, 4, 8))
    assert q_regular_check(P, (3, 4), 1)
    P = SatakeParams(2, 2, (2, 2, 2, 8))
    assert not q_regular_check(P, (3, 4), 2)
    assert not simple_root(SatakeParams(1, 2, (3, 3)), (1,))


def test_b_ordinary_gl2():
    mu = Weight.single((0, 0))
    part = PrimePartition.rational(5)
    assert b_ordinary_check(SatakeParams(1, 5, (10, 3)), mu, part, "5") == [0, 1]
    assert b_ordinary_check(SatakeParams(1, 5, (3, 10)), mu, part, "5") == [1, 0]
    assert b_ordinary_check(SatakeParams(1, 5, (3, 2)), mu, part, "5") is None


@pytest.mark.parametrize("n,q", [(1, 2), (1, 3), (1, 5)])
def test_cosets_small(n, q):
    rep = parahoric_cosets(q, n)
    assert rep["ok"] and rep["cosets"] == q ** (n * n)


def test_gaussian_binomial():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(2, 1, 3) == 4


def test_l_beta():
    one = [[1]]
    assert l_beta_membership(3, 1, 1, one, one)
    assert l_beta_membership(3, 1, 1, [[1]], [[4]])
    assert not l_beta_membership(3, 1, 1, [[1]], [[2]])
    for beta in (1, 2, 3):
        for h1, h2 in (([[1]], [[1]]), ([[1]], [[4]]), ([[1]], [[2]]), ([[5]], [[5 + 27]])):
            assert l_beta_membership(3, 1, beta, h1, h2) == l_beta_defining(3, 1, beta, h1, h2)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_l_beta_criteria_agree_gl4(seed):
    rng = random.Random(seed)
    h1 = [[rng.randint(0, 8) for _ in range(2)] for _ in range(2)]
    delta = [[rng.choice((0, 0, 3, 6, 9)) for _ in range(2)] for _ in range(2)]
    h2 = [[h1[i][j] + delta[i][j] for j in range(2)] for i in range(2)]
    if (h1[0][0] * h1[1][1] - h1[0][1] * h1[1][0]) % 3 == 0:
        return
    assert l_beta_membership(3, 2, 1, h1, h2) == l_beta_defining(3, 2, 1, h1, h2)


def test_satake_round_trip():
    P = SatakeParams(2, 3, (1, Fraction(2, 3), 9, 5))
    assert SatakeParams.from_dict(P.to_dict()) == P
    assert P.valuations == (0, -1, 2, 0)
