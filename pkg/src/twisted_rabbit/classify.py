"""Closed-form classification of D_x^m R_d from the base-d^2 digits of m."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .adic import expand
from .errors import InvalidParameterError, check_degree

RABBIT = "rabbit"
CORABBIT = "corabbit"
AIRPLANE = "airplane"


@dataclass(frozen=True, order=True)
class PolyClass:
    """One of the d+1 classes: Rabbit, Corabbit or Airplane(index).

    ``degree`` is part of the value, so classes of different degrees never
    compare equal.
    """

    degree: int
    kind: str
    index: int = 0

    def __post_init__(self):
        check_degree(self.degree)
        if self.kind == AIRPLANE:
            if not 1 <= self.index <= self.degree - 1:
                raise InvalidParameterError(
                    f"airplane index {self.index} outside [1, {self.degree - 1}]"
                )
        elif self.kind in (RABBIT, CORABBIT):
            if self.index != 0:
                raise InvalidParameterError(f"{self.kind} takes no index")
        else:
            raise InvalidParameterError(f"unknown class kind {self.kind!r}")

    @classmethod
    def rabbit(cls, d: int) -> "PolyClass":
        return cls(d, RABBIT)

    @classmethod
    def corabbit(cls, d: int) -> "PolyClass":
        return cls(d, CORABBIT)

    @classmethod
    def airplane(cls, d: int, i: int) -> "PolyClass":
        return cls(d, AIRPLANE, i)

    @classmethod
    def all(cls, d: int) -> list["PolyClass"]:
        return [cls.rabbit(d), cls.corabbit(d)] + [cls.airplane(d, i) for i in range(1, d)]

    @classmethod
    def parse(cls, text: str) -> "PolyClass":
        """Inverse of :meth:`name` (ASCII forms) and :meth:`label`."""
        text = text.strip()
        if text.startswith("A_{") and text.endswith("}"):
            d, i = text[3:-1].split(",")
            return cls.airplane(int(d), int(i))
        if text.startswith("cR_"):
            return cls.corabbit(int(text[3:]))
        if text.startswith("R̄_"):
            return cls.corabbit(int(text[3:]))
        if text.startswith("R_"):
            return cls.rabbit(int(text[2:]))
        raise InvalidParameterError(f"cannot parse class name {text!r}")

    @property
    def is_airplane(self) -> bool:
        return self.kind == AIRPLANE

    def name(self, ascii_only: bool = False) -> str:
        d = self.degree
        if self.kind == RABBIT:
            return f"R_{d}"
        if self.kind == CORABBIT:
            return f"cR_{d}" if ascii_only else f"R̄_{d}"
        return f"A_{{{d},{self.index}}}"

    def __str__(self) -> str:
        return self.name()


def dual(c: PolyClass) -> PolyClass:
    """Image of a class under m -> -1 - m (complex conjugation of the class)."""
    if c.kind == RABBIT:
        return PolyClass.corabbit(c.degree)
    if c.kind == CORABBIT:
        return PolyClass.rabbit(c.degree)
    return PolyClass.airplane(c.degree, c.degree - c.index)


def airplane_from_digit(m_i: int, d: int) -> PolyClass:
    ell, n = divmod(m_i, d)
    if n > ell:
        return PolyClass.airplane(d, n - ell)
    if n < ell:
        return PolyClass.airplane(d, d - (ell - n))
    raise InvalidParameterError(f"digit {m_i} is divisible by {d + 1}")


def classify(m: int, d: int) -> PolyClass:
    check_degree(d)
    expansion = expand(m, d)
    for m_i in expansion.digits:
        if m_i % (d + 1):
            return airplane_from_digit(m_i, d)
    # digits past sigma are 0 or d^2 - 1 = (d-1)(d+1), so the scan can stop here
    return PolyClass.rabbit(d) if m >= 0 else PolyClass.corabbit(d)


def classify_batch(ms: Iterable[int], d: int) -> list[tuple[int, PolyClass]]:
    check_degree(d)
    return [(m, classify(m, d)) for m in ms]
