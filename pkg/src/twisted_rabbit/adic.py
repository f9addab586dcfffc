"""Base-d^2 digit expansions of integers.

Digits are stored least-significant first. A negative integer carries the
repeating digit d^2 - 1 to the left of its finite part, a non-negative one
carries 0; there is no separate sign.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidIndexError, MalformedExpansionError, check_degree


@dataclass(frozen=True)
class DigitExpansion:
    base_degree: int
    digits: tuple[int, ...]
    repeating: int

    @property
    def base(self) -> int:
        return self.base_degree * self.base_degree

    @property
    def negative(self) -> bool:
        return self.repeating != 0

    def display(self) -> str:
        """Most-significant first, parenthesized, e.g. ``(1)(12)(12)(0)``.

        Negative expansions are prefixed with the overlined repeating digit,
        written ``[24]...``.
        """
        body = "".join(f"({m})" for m in reversed(self.digits))
        if self.negative:
            return f"[{self.repeating}]..." + body
        return body or "(0)"

    def to_json(self) -> dict:
        return {
            "d": self.base_degree,
            "digits": list(self.digits),
            "repeating": self.repeating,
        }


def normalize(e: DigitExpansion) -> DigitExpansion:
    digits = list(e.digits)
    while digits and digits[-1] == e.repeating:
        digits.pop()
    return DigitExpansion(e.base_degree, tuple(digits), e.repeating)


def expand(m: int, d: int) -> DigitExpansion:
    check_degree(d)
    base = d * d
    repeating = base - 1 if m < 0 else 0
    terminal = -1 if m < 0 else 0
    digits = []
    while m != terminal:
        # floor division keeps every digit in [0, base) for negative m too
        m, r = divmod(m, base)
        digits.append(r)
    return DigitExpansion(d, tuple(digits), repeating)


def evaluate(e: DigitExpansion) -> int:
    check_degree(e.base_degree)
    base = e.base
    if e.repeating not in (0, base - 1):
        raise MalformedExpansionError(f"repeating digit {e.repeating} is neither 0 nor {base - 1}")
    value = -1 if e.repeating else 0
    for m_i in reversed(e.digits):
        if not 0 <= m_i < base:
            raise MalformedExpansionError(f"digit {m_i} outside [0, {base - 1}]")
        value = value * base + m_i
    return value


def sigma(m: int, d: int) -> int:
    """Number of non-repeating digits of ``m`` in base d^2."""
    return len(expand(m, d).digits)


def digit(m: int, d: int, i: int) -> int:
    """The digit m_i (1-indexed), extended by the repeating digit."""
    if i < 1:
        raise InvalidIndexError(f"digit index must be >= 1, got {i}")
    check_degree(d)
    base = d * d
    # floor division drags the sign along, so the repeating digit comes for free
    return (m // base ** (i - 1)) % base
