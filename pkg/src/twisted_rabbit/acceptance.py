"""Exit criteria, runnable from pytest and from ``twisted-rabbit selftest``.

Each check returns a :class:`CheckResult`; none of them raise on failure.
"""

from __future__ import annotations

import random
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .adic import digit, evaluate, expand, sigma
from .classify import PolyClass, classify, classify_batch, dual
from .families import critical_orbit_roots, lambda_solutions, omega_orbits, f3
from .reduce import reduce_full
from .render import RenderConfig, escape_counts, read_ppm, render_julia, write_image
from .stats import empirical_counts, exact_distribution
from .treelift import (
    CCW,
    CW,
    h_minus,
    h_minus_profiles,
    h_plus,
    h_plus_profiles,
    lift_marked_tree,
    load_fixture,
    tree_isomorphic,
    _p0_angle,
)

SEED = 20240601
RABBIT_C = complex(-0.122561, 0.744862)

# Table 1 for d = 5, m = 0..24: 0 for the rabbit, otherwise the airplane index
TABLE_1 = [0, 1, 2, 3, 4, 4, 0, 1, 2, 3, 3, 4, 0, 1, 2, 2, 3, 4, 0, 1, 1, 2, 3, 4, 0]


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _table_class(m: int) -> PolyClass:
    i = TABLE_1[m]
    return PolyClass.rabbit(5) if i == 0 else PolyClass.airplane(5, i)


def check_table1() -> tuple[bool, str]:
    rows = classify_batch(range(25), 5)
    mismatches = [m for m, c in rows if c != _table_class(m)]
    return not mismatches, f"{len(mismatches)} mismatches over m=0..24"


def check_corabbit_positions() -> tuple[bool, str]:
    hits = [m for m, c in classify_batch(range(-25, 0), 5) if c == PolyClass.corabbit(5)]
    return sorted(hits) == [-25, -19, -13, -7, -1], f"corabbit at {sorted(hits)}"


def _random_big(rng: random.Random, d: int, max_digits: int) -> int:
    base = d * d
    n = rng.randint(1, max_digits)
    value = rng.randrange(base ** (n - 1), base**n)
    return value if rng.random() < 0.5 else -value - 1


def check_oracle_equivalence(limit: int = 10**5, samples: int = 10**4) -> tuple[bool, str]:
    mismatches = 0
    checked = 0
    for d in range(2, 11):
        for m in range(-limit, limit + 1):
            if reduce_full(m, d)[0] != classify(m, d):
                mismatches += 1
            checked += 1
    rng = random.Random(SEED)
    for _ in range(samples):
        d = rng.randint(2, 10)
        m = _random_big(rng, d, 200)
        if reduce_full(m, d)[0] != classify(m, d):
            mismatches += 1
        checked += 1
    return mismatches == 0, f"{mismatches} mismatches over {checked} (m, d) pairs"


def check_worked_example() -> tuple[bool, str]:
    cls, trace = reduce_full(23425, 5)
    forms = [f for f in trace.forms if f.kind != "YX"]
    visited = [str(f) for f in forms]
    expected = ["X(23425)", "X(937)", "X(37)", "X(1)", "Y(-1)"]
    ok = visited == expected and cls == PolyClass.airplane(5, 1)
    return ok, f"visited {' -> '.join(visited)}, class {cls}"


def check_next_rabbit() -> tuple[bool, str]:
    m = 25
    while classify(m, 5) != PolyClass.rabbit(5):
        m += 1
    return m == 150, f"least m > 24 giving R_5 is {m}"


def check_corollary() -> tuple[bool, str]:
    cases = [(d, S) for d in (2, 3, 5) for S in (1, 2)] + [(5, 3)]
    bad = []
    for d, S in cases:
        emp = empirical_counts(d, S)
        exact = exact_distribution(d, S)
        if emp.counts != exact.counts:
            bad.append((d, S))
    c51 = empirical_counts(5, 1).counts
    named = c51[PolyClass.rabbit(5)] == 5 and c51[PolyClass.corabbit(5)] == 5 and all(
        c51[PolyClass.airplane(5, i)] == 10 for i in range(1, 5)
    )
    return not bad and named, f"{len(cases) - len(bad)}/{len(cases)} (d, S) cases exact; (5,1) rabbit/corabbit 5, airplanes 10: {named}"


def check_duality(samples: int = 10**5) -> tuple[bool, str]:
    rng = random.Random(SEED + 1)
    failures = 0
    for _ in range(samples):
        d = rng.randint(2, 10)
        m = _random_big(rng, d, 40)
        if classify(-1 - m, d) != dual(classify(m, d)):
            failures += 1
    return failures == 0, f"{failures} failures over {samples} pairs"


def check_tree_invariance() -> tuple[bool, str]:
    failures = []
    for d in range(2, 13):
        for i in range(-(d - 1), 0):
            tree = h_minus(d, i)
            res = lift_marked_tree(tree, h_minus_profiles(d, i), d)
            if not (tree_isomorphic(res.tree, tree) and _p0_angle(res.tree) == Fraction(-i, d)
                    and res.tree.edge_towards("p0", "p2") in res.straight_edges):
                failures.append(("H-", d, i))
        for i in range(1, d):
            tree = h_plus(d, i)
            res = lift_marked_tree(tree, h_plus_profiles(d, i), d)
            if not (tree_isomorphic(res.tree, tree) and _p0_angle(res.tree) == 1 - Fraction(i, d)):
                failures.append(("H+", d, i))
        for name, orientation in (("corabbit_tripod", CW), ("rabbit_tripod", CCW)):
            tree, profiles = load_fixture(name)
            res = lift_marked_tree(tree, profiles, d)
            centre = next(v for v in res.tree.rotation if len(res.tree.rotation[v]) == 3)
            if not (tree_isomorphic(res.tree, tree) and res.orientation == orientation
                    and all(a == Fraction(1, 3) for a in res.tree.angles[centre])):
                failures.append((name, d))
    return not failures, f"failures: {failures}" if failures else "all H-, H+, corabbit and rabbit lifts invariant for d=2..12"


def check_counting() -> tuple[bool, str]:
    problems = []
    for d in range(2, 8):
        try:
            roots = critical_orbit_roots(d, tol=1e-10, distinct=1e-6)
            lams = lambda_solutions(d, tol=1e-10, distinct=1e-6)
        except Exception as exc:  # report, don't raise
            problems.append(f"d={d}: {exc}")
            continue
        arr = np.array(roots)
        diff = np.abs(arr[:, None] - arr[None, :])
        np.fill_diagonal(diff, np.inf)
        if len(roots) != d * d - 1 or diff.min() <= 1e-6:
            problems.append(f"d={d}: {len(roots)} roots, min separation {diff.min():.2e}")
        if max(abs(f3(c, d)) for c in roots) >= 1e-10:
            problems.append(f"d={d}: residual too large")
        if len(omega_orbits(roots, d)) != d + 1:
            problems.append(f"d={d}: wrong orbit count")
        if len(lams) != d + 1:
            problems.append(f"d={d}: {len(lams)} lambda solutions")
    near = min(abs(c - RABBIT_C) for c in critical_orbit_roots(2))
    if near >= 1e-5:
        problems.append(f"rabbit parameter off by {near:.2e}")
    return not problems, "; ".join(problems) or f"all counts match for d=2..7; rabbit c within {near:.1e}"


def check_round_trip(samples: int = 10**5) -> tuple[bool, str]:
    rng = random.Random(SEED + 2)
    failures = 0
    for _ in range(samples):
        d = rng.randint(2, 16)
        m = _random_big(rng, d, 60)
        e = expand(m, d)
        s = sigma(m, d)
        ok = evaluate(e) == m and all(0 <= x < d * d for x in e.digits)
        if s > 0:
            ok = ok and digit(m, d, s) != e.repeating
        ok = ok and all(digit(m, d, t) == e.repeating for t in range(s + 1, s + 4))
        failures += not ok
    return failures == 0, f"{failures} failures over {samples} samples"


def check_render() -> tuple[bool, str]:
    cfg = RenderConfig(c=RABBIT_C, d=2, pixels_wide=128, pixels_high=96)
    with tempfile.TemporaryDirectory() as tmp:
        a = write_image(render_julia(cfg), Path(tmp) / "a.ppm", cfg.max_iter).read_bytes()
        b = write_image(render_julia(cfg), Path(tmp) / "b.ppm", cfg.max_iter).read_bytes()
        w, h, _ = read_ppm(Path(tmp) / "a.ppm")
    same = a == b and (w, h) == (128, 96)
    symmetric = True
    for d in (2, 3, 4, 5):
        sq = RenderConfig(c=0j, d=d, pixels_wide=256, pixels_high=256)
        grid = render_julia(sq)
        rotated = escape_counts(sq.grid() * np.exp(2j * np.pi / d), 0j, d, sq.max_iter, sq.radius)
        symmetric &= bool((grid == rotated).all())
        if d in (2, 4):
            symmetric &= bool((grid == np.rot90(grid, 4 // d)).all())
    return same and symmetric, f"byte-identical and valid P6: {same}; c=0 rotation symmetry at 256x256: {symmetric}"


CHECKS = [
    (1, "Table 1 reproduction", check_table1),
    (2, "Corabbit positions", check_corabbit_positions),
    (3, "Oracle equivalence", check_oracle_equivalence),
    (4, "Worked example trace", check_worked_example),
    (5, "Next rabbit after 24", check_next_rabbit),
    (6, "Corollary exactness", check_corollary),
    (7, "Duality", check_duality),
    (8, "Tree invariance", check_tree_invariance),
    (9, "Counting claims", check_counting),
    (10, "Expansion round-trip", check_round_trip),
    (11, "Render format", check_render),
]

TIME_LIMITS = {1: 1.0, 2: 1.0, 3: 120.0, 6: 30.0, 8: 10.0, 9: 30.0}


def run_check(number: int) -> CheckResult:
    _, name, fn = next(c for c in CHECKS if c[0] == number)
    start = time.perf_counter()
    passed, detail = fn()
    seconds = time.perf_counter() - start
    limit = TIME_LIMITS.get(number)
    if limit is not None and seconds >= limit:
        passed = False
        detail += f"; exceeded {limit:g}s limit"
    return CheckResult(number, name, passed, detail, seconds)


def run_all(skip: set[int] = frozenset()) -> list[CheckResult]:
    return [run_check(n) for n, _, _ in CHECKS if n not in skip]
