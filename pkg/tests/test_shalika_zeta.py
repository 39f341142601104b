import random
from fractions import Fraction

import pytest

from shalika_padic.exactnum import CyclotomicElement, all_characters, gauss_sum, primitive_characters
from shalika_padic.local_reps import SatakeParams
from shalika_padic.shalika_zeta import (
    LocalShalikaFunction, f0_eigen_check, local_zeta_twisted, localbirch_rhs, spherical_whittaker,
    sqrt_q_power, zeta_check,
)


def test_spherical_values():
    P = SatakeParams(1, 3, (Fraction(2), Fraction(5)))
    assert spherical_whittaker(P, 0) == CyclotomicElement.rational(1)
    assert spherical_whittaker(P, 1) == CyclotomicElement.rational(7) * sqrt_q_power(3, -1)
    assert spherical_whittaker(P, -1).is_zero()


def test_spherical_equal_parameters_limit():
    P = SatakeParams(1, 5, (Fraction(3), Fraction(3)))
    assert spherical_whittaker(P, 4) == CyclotomicElement.rational(5 * 81) * sqrt_q_power(5, -4)


def test_spherical_recursion_oracle():
    # Hecke recursion W(m+1) = q^(-1/2)(a+b) W(m) - q^-1 ab W(m-1)
    a, b, q = Fraction(3, 2), Fraction(7), 5
    P = SatakeParams(1, q, (a, b))
    for m in range(1, 8):
        lhs = spherical_whittaker(P, m + 1)
        rhs = (spherical_whittaker(P, m) * CyclotomicElement.rational(a + b) * sqrt_q_power(q, -1)
               - spherical_whittaker(P, m - 1) * CyclotomicElement.rational(a * b / q))
        assert lhs == rhs


def test_localbirch_exponents():
    g = gauss_sum(primitive_characters(5)[0])
    w = CyclotomicElement.rational(Fraction(3, 2))
    assert localbirch_rhs(5, 1, 1, 0, 0, g, w) == g * w
    assert localbirch_rhs(5, 1, 2, 1, 3, g, w) == g * w * CyclotomicElement.rational(5 ** 9)
    assert localbirch_rhs(5, 2, 1, 0, 1, g, w) == g * g * w


def test_rejects_trivial_and_imprimitive():
    P = SatakeParams(1, 3, (2, 5))
    W = LocalShalikaFunction.spherical(P)
    triv = all_characters(3)[0]
    with pytest.raises(ValueError):
        local_zeta_twisted(W, triv, 0, 1)
    imprim = next(c for c in all_characters(9) if not c.is_primitive() and not c.is_trivial())
    with pytest.raises(ValueError):
        local_zeta_twisted(W, imprim, 0, 2)


@pytest.mark.parametrize("q,beta,delta,kind", [(3, 1, 0, "spherical"), (5, 2, 0, "spherical"),
                                              (3, 2, 1, "eigen"), (5, 1, 1, "eigen")])
def test_zeta_matches_closed_form(q, beta, delta, kind):
    rng = random.Random(q * 10 + beta)
    al = (Fraction(rng.randint(1, 20), rng.randint(1, 5)), Fraction(rng.randint(1, 20), rng.randint(1, 5)))
    P = SatakeParams(1, q, al)
    for j in range(3):
        assert zeta_check(P, beta, j, delta, kind)["ok"]


def test_zeta_complex_oracle():
    # direct floating evaluation of the shell sum for one character
    q, beta, j = 5, 1, 2
    P = SatakeParams(1, q, (Fraction(2), Fraction(3)))
    W = LocalShalikaFunction.spherical(P)
    chi = primitive_characters(q)[1]
    import cmath
    total = 0
    for m in range(-beta, 10):
        w = W(m + beta).to_complex()
        inner = sum(cmath.exp(2j * cmath.pi * ((chi.value_index(u) / chi.order)
                                               + (u * Fraction(q) ** m % 1)))
                    for u in range(1, q))
        total += w * inner * q ** (-m * j)
    assert abs(local_zeta_twisted(W, chi, j, beta).to_complex() - total) < 1e-6


@pytest.mark.parametrize("n,q", [(1, 2), (1, 3), (2, 2)])
def test_f0_eigenvector(n, q):
    al = (Fraction(3), Fraction(1, 2), Fraction(5), Fraction(7))[:2 * n]
    rep = f0_eigen_check(SatakeParams(n, q, al))
    assert rep["eigen"] and rep["support_preserved"] and rep["normalised"]


def test_f0_eigenvalue_gl2_is_second_parameter():
    rep = f0_eigen_check(SatakeParams(1, 3, (Fraction(4), Fraction(9))))
    assert Fraction(rep["eigenvalue"]) == 9


def test_f0_bound():
    with pytest.raises(ValueError):
        f0_eigen_check(SatakeParams(1, 5, (1, 2)))
