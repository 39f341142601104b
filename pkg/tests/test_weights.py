from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shalika_padic.weights import (
    PrimeData, PrimePartition, Weight, WeightError, crit_set, cuspidal_top_degree, mu_vee_on_tp,
    purity_weight, two_critical,
)


def test_purity_weight_examples():
    assert purity_weight(Weight.single((10, 0))) == 10
    assert purity_weight(Weight.single((3, 1, 0, -2))) == 1


def test_impure_weight_names_first_violation():
    with pytest.raises(WeightError, match=r"weight not pure: first violation at \(sigma, 2\)"):
        purity_weight(Weight.single((3, 1, 0, 0)))


def test_non_dominant_rejected():
    with pytest.raises(WeightError):
        Weight.single((0, 1))


def test_crit_sets():
    c = crit_set(Weight.single((10, 0)))
    assert c.values() == list(range(11)) and c.center_critical
    assert crit_set(Weight.single((3, 1, 0, -2))).values() == [0, 1]
    assert crit_set(Weight.single((0, 0))).values() == [0]
    assert two_critical(Weight.single((3, 1, 0, -2)))
    assert not two_critical(Weight.single((0, 0)))


def test_mu_vee_values():
    part5 = PrimePartition.rational(5)
    assert mu_vee_on_tp(Weight.single((10, 0)), part5, 3) == 1
    assert mu_vee_on_tp(Weight.single((6, 4)), part5, 1) == Fraction(1, 5 ** 4)
    assert mu_vee_on_tp(Weight.single((3, 1, 0, -2)), part5, 2) == 5 ** 4


def test_mu_vee_per_prime_exponents():
    mu = Weight(1, ("s1", "s2"), ((4, 2), (5, 1)))
    part = PrimePartition(3, (PrimeData("P1", 3, 0, ("s1",)), PrimeData("P2", 9, 0, ("s2",))))
    assert mu_vee_on_tp(mu, part, {"P1": 1, "P2": 2}) == Fraction(1, 3 ** (2 + 2))
    assert part.residue_degree("P2") == 2


def test_partition_rejects_wrong_prime_power():
    with pytest.raises(WeightError):
        PrimePartition(3, (PrimeData("P", 10, 0, ("s",)),))


def test_top_degree():
    assert cuspidal_top_degree(1, 1) == 1
    assert cuspidal_top_degree(2, 3) == 15


def test_weight_round_trip():
    mu = Weight(2, ("a", "b"), ((3, 1, 0, -2), (2, 2, -1, -1)))
    assert Weight.from_dict(mu.to_dict()) == mu


@given(st.integers(-5, 5), st.lists(st.integers(0, 4), min_size=2, max_size=2), st.integers(1, 4))
def test_pure_weights_have_symmetric_crit(w, gaps, beta):
    # build (a, b, w-b, w-a) with a >= b >= w-b
    b = (w + 1) // 2 + gaps[0]
    a = b + gaps[1]
    mu = Weight.single((a, b, w - b, w - a))
    assert purity_weight(mu) == w
    c = crit_set(mu)
    assert [w - j for j in c.values()][::-1] == c.values()
    assert mu_vee_on_tp(mu, PrimePartition.rational(3), beta) == Fraction(3) ** (-beta * (2 * w - a - b))
