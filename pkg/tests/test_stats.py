from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twisted_rabbit import InvalidParameterError, PolyClass, sigma
from twisted_rabbit.errors import BudgetExceededError
from twisted_rabbit.stats import (
    ANY_AIRPLANE,
    BUDGET_ENV,
    empirical_counts,
    exact_distribution,
    probability,
    sigma_set_bounds,
)


@pytest.mark.parametrize(
    "cls, p",
    [(PolyClass.rabbit(5), Fraction(1, 10)), (PolyClass.airplane(5, 2), Fraction(1, 5)), (ANY_AIRPLANE, Fraction(4, 5))],
)
def test_probability_examples(cls, p):
    assert probability(5, 1, cls) == p


def test_probability_errors():
    with pytest.raises(InvalidParameterError):
        probability(5, 1, PolyClass.rabbit(4))
    with pytest.raises(InvalidParameterError):
        probability(5, 0, PolyClass.rabbit(5))


def test_probabilities_sum_to_one():
    for d in range(2, 9):
        for S in range(1, 5):
            total = sum(probability(d, S, c) for c in PolyClass.all(d))
            assert total == 1
            airplanes = sum(probability(d, S, c) for c in PolyClass.all(d) if c.is_airplane)
            assert airplanes == probability(d, S, ANY_AIRPLANE)


@pytest.mark.parametrize("d, S, bounds", [(5, 1, (-25, 24)), (2, 1, (-4, 3)), (2, 2, (-16, 15))])
def test_sigma_set_bounds(d, S, bounds):
    assert sigma_set_bounds(d, S) == bounds


@pytest.mark.parametrize("d, S", [(2, 1), (2, 2), (3, 1), (5, 1)])
def test_interval_equals_sigma_definition(d, S):
    lo, hi = sigma_set_bounds(d, S)
    window = range(lo - 3 * d**2, hi + 3 * d**2)
    assert [m for m in window if sigma(m, d) <= S] == list(range(lo, hi + 1))


def test_empirical_examples():
    c = empirical_counts(5, 1).counts
    assert c[PolyClass.rabbit(5)] == 5 and c[PolyClass.corabbit(5)] == 5
    assert all(c[PolyClass.airplane(5, i)] == 10 for i in range(1, 5))
    c2 = empirical_counts(2, 1).counts
    assert c2 == {PolyClass.rabbit(2): 2, PolyClass.corabbit(2): 2, PolyClass.airplane(2, 1): 4}


@pytest.mark.parametrize("d, S", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 2), (5, 1), (5, 2)])
def test_exact_match(d, S):
    emp = empirical_counts(d, S)
    assert emp.counts == exact_distribution(d, S).counts
    assert emp.counts[PolyClass.rabbit(d)] == d**S
    airplane_counts = {n for c, n in emp.counts.items() if c.is_airplane}
    assert len(airplane_counts) == 1
    assert sum(emp.counts.values()) == emp.total


@given(st.integers(1, 7))
def test_partition_independent(chunks):
    assert empirical_counts(3, 2, chunks=chunks).counts == empirical_counts(3, 2).counts


def test_budget(monkeypatch):
    with pytest.raises(BudgetExceededError, match="2000000"):
        empirical_counts(10, 3, budget=1000)
    monkeypatch.setenv(BUDGET_ENV, "10")
    with pytest.raises(BudgetExceededError):
        empirical_counts(2, 2)


def test_rabbit_probability_strictly_decreases():
    for d in range(2, 8):
        ps = [probability(d, S, PolyClass.rabbit(d)) for S in range(1, 6)]
        assert all(a > b for a, b in zip(ps, ps[1:]))
