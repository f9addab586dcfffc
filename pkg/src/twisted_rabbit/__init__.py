"""Classification of twisted degree-d rabbit maps D_x^m R_d."""

from .adic import DigitExpansion, digit, evaluate, expand, sigma
from .classify import PolyClass, classify, classify_batch, dual
from .errors import (
    AlreadyReducedError,
    BudgetExceededError,
    IncompleteProfileError,
    InvalidDegreeError,
    InvalidIndexError,
    InvalidParameterError,
    InvalidViewportError,
    LiftFailureError,
    MalformedExpansionError,
    MultiplicityError,
    NotABaseCaseError,
    RootFinderError,
    TwistedRabbitError,
)
from .reduce import ReductionTrace, TwistedForm, base_case, decompose, reduce_full, reduce_once

__version__ = "0.1.0"

__all__ = [
    "AlreadyReducedError",
    "BudgetExceededError",
    "DigitExpansion",
    "IncompleteProfileError",
    "InvalidDegreeError",
    "InvalidIndexError",
    "InvalidParameterError",
    "InvalidViewportError",
    "LiftFailureError",
    "MalformedExpansionError",
    "MultiplicityError",
    "NotABaseCaseError",
    "PolyClass",
    "ReductionTrace",
    "RootFinderError",
    "TwistedForm",
    "TwistedRabbitError",
    "base_case",
    "classify",
    "classify_batch",
    "decompose",
    "digit",
    "dual",
    "evaluate",
    "expand",
    "reduce_full",
    "reduce_once",
    "sigma",
]
