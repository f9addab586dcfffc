"""The d+1 classes, their Hubbard-tree descriptors, and the counting checks.

Two numeric counts are cross-checked: the d^2 - 1 parameters c with
f_c^3(0) = 0, c != 0 (grouped into affine-conjugacy orbits c -> w c,
w^(d-1) = 1) and the nonzero lambda with p_lambda^3(0) = 0 for
p_lambda(z) = lambda (1 + z/d)^d.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classify import CORABBIT, RABBIT, PolyClass
from .errors import InvalidParameterError, MultiplicityError, RootFinderError, check_degree
from .treelift import CCW, CW, NA, PlanarTree, corabbit_tripod, path_tree, rabbit_tripod

MAX_ITER = 1000
CONVERGENCE_TOL = 1e-12
DISTINCT_TOL = 1e-6


@dataclass(frozen=True)
class PolySpec:
    poly_class: PolyClass
    tree: PlanarTree
    dynamics: tuple[str, ...]
    orientation: str
    angle: Fraction | None

    def to_json(self) -> dict:
        return {
            "class": self.poly_class.name(ascii_only=True),
            "tree": self.tree.to_json(),
            "dynamics": list(self.dynamics),
            "orientation": self.orientation,
            "angle": None if self.angle is None else [self.angle.numerator, self.angle.denominator],
        }


@dataclass(frozen=True)
class RayCount:
    d: int
    total: int
    main: int
    components: int
    classes: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.total, self.main, self.components, self.classes


def enumerate_classes(d: int) -> list[PolySpec]:
    check_degree(d)
    dyn = ("p0", "p1", "p2", "p0")
    specs = []
    for cls in PolyClass.all(d):
        if cls.kind == RABBIT:
            specs.append(PolySpec(cls, rabbit_tripod(), dyn, CCW, None))
        elif cls.kind == CORABBIT:
            specs.append(PolySpec(cls, corabbit_tripod(), dyn, CW, None))
        else:
            angle = Fraction(cls.index, d)
            specs.append(PolySpec(cls, path_tree("e1", angle), dyn, NA, angle))
    return specs


def ray_counts(d: int) -> RayCount:
    check_degree(d)
    total = d**3 - 1
    main = d - 1
    # d rays land on each period-3 component
    components = (total - main) // d
    classes = components // (d - 1)
    return RayCount(d, total, main, components, classes)


# --- exact integer polynomials, coefficients lowest degree first ----------


def poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_pow(a: list[int], n: int) -> list[int]:
    out = [1]
    for _ in range(n):
        out = poly_mul(out, a)
    return out


def poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)]


def critical_orbit_poly(d: int) -> list[int]:
    """Integer coefficients of ((c^d + c)^d + c) / c, degree d^2 - 1."""
    check_degree(d)
    inner = [0, 1] + [0] * (d - 2) + [1]  # c + c^d
    full = poly_add(poly_pow(inner, d), [0, 1])
    assert full[0] == 0
    return full[1:]


def lambda_poly(d: int) -> list[int]:
    """Integer coefficients of lambda (lambda + d)^d + d^(d+1).

    Its roots are the nonzero solutions of p_lambda^3(0) = 0, since
    p^3(0) = lambda (1 + lambda (1 + lambda/d)^d / d)^d.
    """
    check_degree(d)
    return poly_add(poly_mul([0, 1], poly_pow([d, 1], d)), [d ** (d + 1)])


def horner(coeffs, z):
    """Value and derivative of a polynomial (lowest degree first) at ``z``."""
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for a in reversed(coeffs):
        dp = dp * z + p
        p = p * z + a
    return p, dp


def aberth(coeffs: list[int], max_iter: int = MAX_ITER, tol: float = CONVERGENCE_TOL) -> np.ndarray:
    """All roots of a polynomial by Aberth-Ehrlich simultaneous iteration.

    Starting points sit on a slightly rotated circle whose radius comes from
    the Cauchy-type bound, so no two start on a symmetry axis.
    """
    c = [complex(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    n = len(c) - 1
    if n < 1:
        raise InvalidParameterError("polynomial has no roots")
    lead = c[-1]
    radius = max(abs(a / lead) ** (1.0 / (n - k)) for k, a in enumerate(c[:-1]) if a) if any(c[:-1]) else 1.0
    z = radius * np.exp(2j * np.pi * (np.arange(n) + 0.25) / n + 0.4j)
    coeffs_arr = np.array(c, dtype=complex)
    for _ in range(max_iter):
        p, dp = horner(coeffs_arr, z)
        ratio = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        repulsion = (1.0 / diff).sum(axis=1) - 1.0  # drop the diagonal 1/1 term
        step = ratio / (1.0 - ratio * repulsion)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
            break
    else:
        raise RootFinderError(f"Aberth iteration did not converge in {max_iter} steps")
    # one Newton polish step per root
    p, dp = horner(coeffs_arr, z)
    return z - p / dp


def _normalized(roots) -> list[complex]:
    return sorted((complex(r) for r in roots), key=lambda r: (round(cmath.phase(r), 9), abs(r)))


def _assert_distinct(roots: np.ndarray, expected: int, threshold: float) -> float:
    if len(roots) != expected:
        raise MultiplicityError(f"expected {expected} roots, found {len(roots)}")
    diff = np.abs(roots[:, None] - roots[None, :])
    np.fill_diagonal(diff, np.inf)
    sep = float(diff.min()) if len(roots) > 1 else math.inf
    if sep <= threshold:
        raise MultiplicityError(f"two roots closer than {threshold}: separation {sep:.3e}")
    return sep


def f3(c, d):
    """f_c^3(0) = (c^d + c)^d + c."""
    return (c**d + c) ** d + c


def p_lambda3(lam, d):
    """p_lambda^3(0) for p_lambda(z) = lambda (1 + z/d)^d."""
    z = lam
    z = lam * (1 + z / d) ** d
    return lam * (1 + z / d) ** d


def critical_orbit_roots(d: int, tol: float = 1e-10, distinct: float = DISTINCT_TOL) -> list[complex]:
    check_degree(d)
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")
    roots = aberth(critical_orbit_poly(d))
    _assert_distinct(roots, d * d - 1, distinct)
    bad = [r for r in roots if abs(f3(r, d)) >= tol]
    if bad:
        raise RootFinderError(f"{len(bad)} roots fail the residual test, worst {max(abs(f3(r, d)) for r in bad):.3e}")
    if np.min(np.abs(roots)) <= distinct:
        raise MultiplicityError("a root coincides with c = 0 (period 1)")
    orbits = omega_orbits(list(roots), d, distinct)
    if len(orbits) != d + 1 or any(len(o) != d - 1 for o in orbits):
        raise MultiplicityError(f"expected {d + 1} orbits of size {d - 1}, got sizes {[len(o) for o in orbits]}")
    return _normalized(roots)


def omega_orbits(roots: list[complex], d: int, distinct: float = DISTINCT_TOL) -> list[list[complex]]:
    """Group parameters c into classes {w^j c}, w = exp(2 pi i / (d - 1))."""
    omega = cmath.exp(2j * math.pi / (d - 1))
    remaining = list(roots)
    orbits = []
    while remaining:
        seed = remaining.pop(0)
        orbit = [seed]
        for j in range(1, d - 1):
            target = seed * omega**j
            k = min(range(len(remaining)), key=lambda t: abs(remaining[t] - target), default=None)
            if k is None or abs(remaining[k] - target) > distinct:
                raise MultiplicityError(f"orbit of {seed} is not closed under multiplication by w")
            orbit.append(remaining.pop(k))
        orbits.append(orbit)
    return orbits


def lambda_solutions(d: int, tol: float = 1e-10, distinct: float = DISTINCT_TOL) -> list[complex]:
    """Nonzero lambda with p_lambda^3(0) = 0, cross-checked against the c roots."""
    check_degree(d)
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")
    lams = aberth(lambda_poly(d))
    _assert_distinct(lams, d + 1, distinct)
    bad = [lam for lam in lams if abs(p_lambda3(lam, d)) >= tol]
    if bad:
        raise RootFinderError(f"{len(bad)} lambda values fail the residual test")
    images = [d * c ** (d - 1) for c in critical_orbit_roots(d, tol, distinct)]
    hits = [0] * len(lams)
    for w in images:
        k = int(np.argmin(np.abs(lams - w)))
        if abs(lams[k] - w) > distinct * max(1.0, abs(w)):
            raise MultiplicityError(f"d c^(d-1) = {w} matches no lambda solution")
        hits[k] += 1
    if hits != [d - 1] * len(lams):
        raise MultiplicityError(f"c -> d c^(d-1) is not (d-1)-to-1: {hits}")
    return _normalized(lams)
