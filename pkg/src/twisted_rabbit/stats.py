"""Exact class probabilities over Sigma_S and the exhaustive check of them."""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .classify import PolyClass, classify
from .errors import BudgetExceededError, InvalidParameterError, check_degree

BUDGET_ENV = "TWISTED_RABBIT_ENUM_BUDGET"
DEFAULT_BUDGET = 10**7
ANY_AIRPLANE = "any-airplane"


@dataclass(frozen=True)
class ClassDistribution:
    d: int
    S: int
    counts: dict[PolyClass, int]
    probabilities: dict[PolyClass, Fraction]

    @property
    def total(self) -> int:
        return 2 * self.d ** (2 * self.S)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "S": self.S,
            "total": self.total,
            "classes": [
                {
                    "class": c.name(ascii_only=True),
                    "count": self.counts[c],
                    "probability": str(self.probabilities[c]),
                }
                for c in PolyClass.all(self.d)
            ],
        }


def _check_S(S) -> None:
    if isinstance(S, bool) or not isinstance(S, int) or S < 1:
        raise InvalidParameterError(f"S must be a positive integer, got {S!r}")


def probability(d: int, S: int, cls: PolyClass | str) -> Fraction:
    check_degree(d)
    _check_S(S)
    dS = d**S
    if cls == ANY_AIRPLANE:
        return 1 - Fraction(1, dS)
    if not isinstance(cls, PolyClass) or cls.degree != d:
        raise InvalidParameterError(f"{cls!r} is not a class of degree {d}")
    if cls.is_airplane:
        return Fraction(1, d - 1) - Fraction(1, (d - 1) * dS)
    return Fraction(1, 2 * dS)


def exact_distribution(d: int, S: int) -> ClassDistribution:
    """The closed-form distribution, scaled to integer counts."""
    probs = {c: probability(d, S, c) for c in PolyClass.all(d)}
    total = 2 * d ** (2 * S)
    counts = {}
    for c, p in probs.items():
        scaled = p * total
        assert scaled.denominator == 1
        counts[c] = int(scaled)
    return ClassDistribution(d, S, counts, probs)


def sigma_set_bounds(d: int, S: int) -> tuple[int, int]:
    """Sigma_S as the closed interval [-d^(2S), d^(2S) - 1]."""
    check_degree(d)
    _check_S(S)
    n = d ** (2 * S)
    return -n, n - 1


def enumeration_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def tally(d: int, lo: int, hi: int) -> Counter:
    """Class counts over the integer interval [lo, hi]."""
    return Counter(classify(m, d) for m in range(lo, hi + 1))


def empirical_counts(d: int, S: int, budget: int | None = None, chunks: int = 1) -> ClassDistribution:
    """Classify every m in Sigma_S and tally.

    ``chunks`` splits the interval; tallies merge by addition, so the result
    does not depend on the split.
    """
    lo, hi = sigma_set_bounds(d, S)
    size = hi - lo + 1
    budget = enumeration_budget() if budget is None else budget
    if size > budget:
        raise BudgetExceededError(
            f"Sigma_{S} for d={d} has {size} elements, over the budget of {budget} "
            f"(raise {BUDGET_ENV} to allow it)"
        )
    total: Counter = Counter()
    step = -(-size // max(1, chunks))
    for start in range(lo, hi + 1, step):
        total += tally(d, start, min(hi, start + step - 1))
    counts = {c: total.get(c, 0) for c in PolyClass.all(d)}
    probs = {c: Fraction(n, size) for c, n in counts.items()}
    return ClassDistribution(d, S, counts, probs)
