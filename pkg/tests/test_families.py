import cmath
import math

import numpy as np
import pytest
import sympy

from twisted_rabbit import PolyClass
from twisted_rabbit.families import (
    aberth,
    critical_orbit_poly,
    critical_orbit_roots,
    enumerate_classes,
    f3,
    lambda_poly,
    lambda_solutions,
    omega_orbits,
    p_lambda3,
    ray_counts,
)
from twisted_rabbit.treelift import CCW, CW, NA

RABBIT_C = complex(-0.122561, 0.744862)


@pytest.mark.parametrize("d, n", [(2, 3), (3, 4), (5, 6)])
def test_enumerate_classes_count(d, n):
    specs = enumerate_classes(d)
    assert len(specs) == n
    assert {s.poly_class for s in specs} == set(PolyClass.all(d))


def test_class_descriptors():
    for spec in enumerate_classes(5):
        tree = spec.tree
        if spec.poly_class.is_airplane:
            p0 = tree.vertex("p0")
            assert len(tree.rotation[p0]) == 2
            assert spec.angle * 5 == spec.poly_class.index
            assert spec.orientation == NA
        else:
            centre = next(v for v in tree.rotation if len(tree.rotation[v]) == 3)
            assert tree.angles[centre] == tuple([spec.tree.angles[centre][0]] * 3)
            assert spec.orientation == (CCW if spec.poly_class.kind == "rabbit" else CW)


@pytest.mark.parametrize("d, expected", [(5, (124, 4, 24, 6)), (2, (7, 1, 3, 3)), (3, (26, 2, 8, 4))])
def test_ray_counts(d, expected):
    assert ray_counts(d).as_tuple() == expected


def test_ray_counts_by_enumeration():
    # count angles i/(d^3-1) with d^3 i = i mod (d^3-1) excluded from the d-1 fixed ones
    for d in range(2, 7):
        n = d**3 - 1
        main = [i for i in range(n) if (d * i) % n == i]
        assert len(main) == d - 1 == ray_counts(d).main


def test_critical_orbit_poly_against_sympy():
    c = sympy.symbols("c")
    for d in range(2, 6):
        expr = sympy.expand(sympy.cancel(((c**d + c) ** d + c) / c))
        assert sympy.Poly(expr, c).all_coeffs()[::-1] == critical_orbit_poly(d)


def test_lambda_poly_against_sympy():
    lam = sympy.symbols("lam")
    d = 2
    expr = lam * (1 + lam * (1 + lam / 2) ** 2 / 2) ** 2
    factored = sympy.factor(expr)
    assert sympy.expand(lam**3 + 4 * lam**2 + 4 * lam + 8) == sympy.expand(sympy.Poly(lambda_poly(2)[::-1], lam).as_expr())
    assert sympy.simplify(expr - lam * (lam**3 + 4 * lam**2 + 4 * lam + 8) ** 2 / 64) == 0
    assert factored != 0
    for d in range(3, 6):
        expr = lam * (1 + lam * (1 + lam / d) ** d / d) ** d
        inner = sympy.Poly(lambda_poly(d)[::-1], lam).as_expr()
        assert sympy.simplify(expr - lam * (inner / d ** (d + 1)) ** d) == 0


def test_aberth_matches_numpy_roots():
    for d in range(2, 8):
        coeffs = critical_orbit_poly(d)
        ours = aberth(coeffs)
        ref = np.roots(coeffs[::-1])
        assert len(ours) == len(ref)
        # nearest-neighbour matching in both directions
        dist = np.abs(ours[:, None] - ref[None, :])
        assert dist.min(axis=1).max() < 1e-8
        assert dist.min(axis=0).max() < 1e-8


def test_degree_two_roots():
    roots = critical_orbit_roots(2)
    assert len(roots) == 3
    assert min(abs(r - RABBIT_C) for r in roots) < 1e-5
    orbits = omega_orbits(roots, 2)
    assert len(orbits) == 3 and all(len(o) == 1 for o in orbits)


def test_degree_five_roots():
    roots = critical_orbit_roots(5)
    orbits = omega_orbits(roots, 5)
    assert len(roots) == 24
    assert len(orbits) == 6 and all(len(o) == 4 for o in orbits)


@pytest.mark.parametrize("d", range(2, 8))
def test_root_properties(d):
    roots = critical_orbit_roots(d)
    omega = cmath.exp(2j * math.pi / (d - 1))
    for c in roots:
        assert abs(f3(c, d)) < 1e-10
        assert abs(c) > 1e-6
        assert min(abs(c * omega - r) for r in roots) < 1e-6


def test_lambda_solutions_degree_two():
    lams = lambda_solutions(2)
    assert len(lams) == 3
    ref = np.roots([1, 4, 4, 8])
    assert all(min(abs(x - r) for r in ref) < 1e-9 for x in lams)
    assert min(abs(x - 2 * RABBIT_C) for x in lams) < 1e-4


@pytest.mark.parametrize("d", range(2, 8))
def test_count_consistency(d):
    lams = lambda_solutions(d)
    assert len(critical_orbit_roots(d)) // (d - 1) == len(lams) == len(enumerate_classes(d)) == ray_counts(d).classes == d + 1
    assert all(abs(p_lambda3(x, d)) < 1e-10 for x in lams)
    assert all(abs(x) > 1e-6 for x in lams)


def test_lambda_zero_is_excluded():
    assert p_lambda3(0, 5) == 0
    assert all(abs(x) > 1 for x in lambda_solutions(5))


def test_output_order_is_normalized():
    roots = critical_orbit_roots(4)
    key = [(round(cmath.phase(r), 9), abs(r)) for r in roots]
    assert key == sorted(key)
