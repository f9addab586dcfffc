"""Step-by-step reduction of D_x^m R_d to a base case.

This is deliberately independent of :mod:`classify`: it never reads a digit
expansion. It repeatedly writes ``m = d^2 k + d l + n`` and applies the
three rewrite cases (the case-3 ladder uses the lantern relation once per
rung), recording every rewrite so a trace can be audited and replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classify import PolyClass
from .errors import AlreadyReducedError, InvalidParameterError, NotABaseCaseError, check_degree

X, Y, YX = "X", "Y", "YX"


@dataclass(frozen=True)
class TwistedForm:
    """A map of the form D_x^m R_d, D_y^j R_d or D_y^a D_x^b R_d.

    ``y_shift`` is only used by YX forms: it is the d*k part of the D_y
    power, which lifts trivially once the ladder finishes.
    """

    kind: str
    degree: int
    power: int
    ladder: int = 0
    y_shift: int = 0

    def __post_init__(self):
        check_degree(self.degree)
        d = self.degree
        if self.kind == Y and not 1 <= abs(self.power) <= d - 1:
            raise InvalidParameterError(f"Y power {self.power} outside 1 <= |j| <= {d - 1}")
        if self.kind == YX and not 1 <= self.ladder <= d - 1:
            raise InvalidParameterError(f"YX ladder {self.ladder} outside [1, {d - 1}]")
        if self.kind not in (X, Y, YX):
            raise InvalidParameterError(f"unknown form kind {self.kind!r}")

    @property
    def is_base_case(self) -> bool:
        return self.kind == Y or (self.kind == X and self.power in (0, -1))

    def __str__(self) -> str:
        if self.kind == YX:
            return f"YX({self.power},{self.ladder})"
        return f"{self.kind}({self.power})"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "power": self.power}
        if self.kind == YX:
            out["ladder"] = self.ladder
            out["y_shift"] = self.y_shift
        return out

    @classmethod
    def from_json(cls, obj: dict, d: int) -> "TwistedForm":
        return cls(obj["kind"], d, obj["power"], obj.get("ladder", 0), obj.get("y_shift", 0))


def Xf(m: int, d: int) -> TwistedForm:
    return TwistedForm(X, d, m)


def Yf(j: int, d: int) -> TwistedForm:
    return TwistedForm(Y, d, j)


@dataclass(frozen=True)
class Erasure:
    """A twist whose lift is trivial because d does not divide ``intersection``."""

    twist: str
    intersection: int

    def to_json(self) -> dict:
        return {"twist": self.twist, "intersection": self.intersection, "justification": "trivial lift"}


@dataclass(frozen=True)
class Step:
    source: TwistedForm
    rule: str
    witness: str
    target: TwistedForm
    intermediates: tuple[str, ...] = ()
    erasures: tuple[Erasure, ...] = ()

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "rule": self.rule,
            "witness": self.witness,
            "target": self.target.to_json(),
            "intermediates": list(self.intermediates),
            "erasures": [e.to_json() for e in self.erasures],
        }


@dataclass(frozen=True)
class ReductionTrace:
    degree: int
    steps: tuple[Step, ...] = field(default_factory=tuple)

    @property
    def forms(self) -> list[TwistedForm]:
        if not self.steps:
            return []
        return [self.steps[0].source] + [s.target for s in self.steps if s.rule != "base-case"]

    @property
    def final(self) -> TwistedForm:
        return self.steps[-1].target

    def x_powers(self) -> list[int]:
        return [f.power for f in self.forms if f.kind == X]

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        return {"d": self.degree, "steps": [s.to_json() for s in self.steps]}

    @classmethod
    def from_json(cls, obj: dict) -> "ReductionTrace":
        d = obj["d"]
        steps = []
        for s in obj["steps"]:
            steps.append(
                Step(
                    TwistedForm.from_json(s["source"], d),
                    s["rule"],
                    s["witness"],
                    TwistedForm.from_json(s["target"], d),
                    tuple(s.get("intermediates", ())),
                    tuple(Erasure(e["twist"], e["intersection"]) for e in s.get("erasures", ())),
                )
            )
        return cls(d, tuple(steps))


def decompose(m: int, d: int) -> tuple[int, int, int]:
    """Unique ``(k, l, n)`` with ``m = d^2 k + d l + n`` and ``0 <= l, n < d``."""
    check_degree(d)
    k, rest = divmod(m, d * d)
    ell, n = divmod(rest, d)
    return k, ell, n


def lift_endpoint(j: int, i: int, d: int) -> int:
    """Sector of the far endpoint of a path lift starting in sector ``j``."""
    check_degree(d)
    if not 0 <= j <= d - 1:
        raise InvalidParameterError(f"sector {j} outside [0, {d - 1}]")
    return (j - abs(i)) % d


def has_nontrivial_lift(i: int, d: int) -> bool:
    """Whether some preimage component of a curve with intersection ``i`` is essential."""
    check_degree(d)
    return i % d == 0


def _erase(twist: str, intersection: int, d: int) -> Erasure:
    # an erasure is only sound when the lifted curve is trivial
    assert not has_nontrivial_lift(intersection, d), (twist, intersection)
    return Erasure(twist, intersection)


def _collapse_y(source: TwistedForm, rule: str, witness: str, y_power: int, k: int,
                d: int, extra: tuple[str, ...] = (), erasures: tuple[Erasure, ...] = ()) -> Step:
    """Reduce D_y^{d k + r} R_d (with ``y_power = d k + r``) to X(k) or Y(r)."""
    r = y_power - d * k
    if r == 0:
        # D_y^{dk} -> D_z^k -> D_x^k
        return Step(source, rule, witness, Xf(k, d),
                    extra + (f"D_y^{{{d * k}}}", f"D_z^{{{k}}}"), erasures)
    if k != 0:
        erasures = erasures + (_erase(f"D_{{D_y^{{{-r}}}(z)}}^{{{k}}}", abs(r), d),)
    return Step(source, rule, witness, Yf(r, d),
                extra + (f"D_y^{{{y_power}}}", f"D_z^{{{k}}}D_y^{{{r}}}"), erasures)


def lemma_steps(f: TwistedForm) -> list[Step]:
    """The rewrite steps of one application of the reduction lemma to ``f``.

    For X(m) this runs the whole lemma (entering and finishing the case-3
    ladder when n != 0); for a YX form it performs one ladder rung.
    """
    d = f.degree
    if f.is_base_case:
        raise AlreadyReducedError(f"{f} is already a base case")
    if f.kind == YX:
        return [_ladder_rung(f)]
    k, ell, n = decompose(f.power, d)
    if n == 0:
        if ell == 0:
            return [_collapse_y(f, "case-1", "id", d * k, k, d)]
        return [_collapse_y(f, "case-2", f"D_y^{{{ell}}}", d * k + ell, k, d)]
    entry = Step(f, "case-3-entry", f"D_x^{{{n}}}",
                 TwistedForm(YX, d, d * k + ell, n, d * k),
                 (f"D_y^{{{d * k + ell}}}D_x^{{{n}}}",))
    steps = [entry]
    while steps[-1].target.kind == YX:
        steps.append(_ladder_rung(steps[-1].target))
    return steps


def _ladder_rung(f: TwistedForm) -> Step:
    d, a, b = f.degree, f.power, f.ladder
    witness = f"D_y^{{{a - 1}}}D_x^{{{b - 1}}}"
    # lantern relation: D_y^a D_x^b = D_y^{a-1} D_x^{-1} D_z^{-1} D_x^b
    erasure = _erase(f"D_{{D_x^{{{-b}}}(z)}}^{{-1}}", b, d)
    if b > 1:
        target = TwistedForm(YX, d, a - 1, b - 1, f.y_shift)
        return Step(f, "case-3-ladder", witness, target, (), (erasure,))
    return _collapse_y(f, "case-3-ladder", witness, a - 1, f.y_shift // d, d,
                       erasures=(erasure,))


def reduce_once(f: TwistedForm) -> TwistedForm:
    return lemma_steps(f)[-1].target


def base_case(f: TwistedForm) -> PolyClass:
    d = f.degree
    if f.kind == Y:
        j = f.power
        return PolyClass.airplane(d, -j) if j < 0 else PolyClass.airplane(d, d - j)
    if f.kind == X and f.power == 0:
        return PolyClass.rabbit(d)
    if f.kind == X and f.power == -1:
        return PolyClass.corabbit(d)
    raise NotABaseCaseError(f"{f} is not a base case")


def reduce_full(m: int, d: int) -> tuple[PolyClass, ReductionTrace]:
    check_degree(d)
    form = Xf(m, d)
    steps: list[Step] = []
    while not form.is_base_case:
        batch = lemma_steps(form)
        steps.extend(batch)
        form = batch[-1].target
    steps.append(Step(form, "base-case", "id", form))
    return base_case(form), ReductionTrace(d, tuple(steps))


def replay(trace: ReductionTrace) -> PolyClass:
    """Re-derive every step of ``trace`` and return its final class.

    Raises InvalidParameterError if any recorded step disagrees with the rules.
    """
    steps = list(trace.steps)
    if not steps or steps[-1].rule != "base-case":
        raise InvalidParameterError("trace does not end in a base case")
    for prev, nxt in zip(steps, steps[1:]):
        if prev.target != nxt.source:
            raise InvalidParameterError(f"trace breaks between {prev.target} and {nxt.source}")
    i = 0
    while i < len(steps) - 1:
        expected = lemma_steps(steps[i].source)
        got = steps[i:i + len(expected)]
        if [s.target for s in got] != [s.target for s in expected]:
            raise InvalidParameterError(f"step from {steps[i].source} does not follow the rules")
        i += len(expected)
    last = steps[-1]
    if last.source != last.target or i != len(steps) - 1:
        raise InvalidParameterError("malformed base-case step")
    return base_case(last.target)
