import json
from fractions import Fraction

import pytest

from twisted_rabbit import IncompleteProfileError, InvalidParameterError, LiftFailureError
from twisted_rabbit.reduce import Yf, base_case
from twisted_rabbit.treelift import (
    CCW,
    CW,
    CRIT,
    ArcProfile,
    PlanarTree,
    corabbit_tripod,
    fixture_from_json,
    h_minus,
    h_minus_profiles,
    h_plus,
    h_plus_profiles,
    lift_marked_tree,
    load_fixture,
    path_tree,
    preimage_graph,
    rabbit_tripod,
    tree_isomorphic,
    verify_corabbit,
    verify_Hminus,
    verify_Hplus,
    verify_rabbit,
    _hull,
    _p0_angle,
)

DEGREES = range(2, 13)


def test_h_minus_lift_example():
    res = lift_marked_tree(h_minus(5, -1), h_minus_profiles(5, -1), 5)
    assert tree_isomorphic(res.tree, h_minus(5, -1))
    assert _p0_angle(res.tree) == Fraction(1, 5)


def test_rabbit_lift_rotates_counterclockwise():
    tree, profiles = load_fixture("rabbit_tripod")
    res = lift_marked_tree(tree, profiles, 5)
    assert tree_isomorphic(res.tree, tree)
    assert res.orientation == CCW
    centre = next(v for v in res.tree.rotation if len(res.tree.rotation[v]) == 3)
    assert res.tree.angles[centre] == (Fraction(1, 3),) * 3


def test_corabbit_lift_rotates_clockwise():
    tree, profiles = load_fixture("corabbit_tripod")
    res = lift_marked_tree(tree, profiles, 5)
    assert tree_isomorphic(res.tree, tree)
    assert res.orientation == CW


@pytest.mark.parametrize("d, i", [(5, -2), (2, -1), (12, -11)])
def test_verify_h_minus_examples(d, i):
    assert verify_Hminus(d, i)


@pytest.mark.parametrize("d, i", [(5, 3), (2, 1), (12, 1)])
def test_verify_h_plus_examples(d, i):
    assert verify_Hplus(d, i)


@pytest.mark.parametrize("d", [5, 2, 12])
def test_verify_corabbit_examples(d):
    assert verify_corabbit(d)


def test_all_base_trees_invariant():
    for d in DEGREES:
        assert all(verify_Hminus(d, i) for i in range(-(d - 1), 0))
        assert all(verify_Hplus(d, i) for i in range(1, d))
        assert verify_corabbit(d) and verify_rabbit(d)


@pytest.mark.parametrize("fn, d, i", [(verify_Hminus, 5, 0), (verify_Hminus, 5, 1), (verify_Hminus, 5, -5),
                                      (verify_Hplus, 5, 0), (verify_Hplus, 5, 5)])
def test_out_of_range_index(fn, d, i):
    with pytest.raises(InvalidParameterError):
        fn(d, i)


def test_cross_validation_with_base_cases():
    for d in DEGREES:
        for i in range(-(d - 1), 0):
            res = lift_marked_tree(h_minus(d, i), h_minus_profiles(d, i), d)
            assert _p0_angle(res.tree) * d == base_case(Yf(i, d)).index
        for i in range(1, d):
            res = lift_marked_tree(h_plus(d, i), h_plus_profiles(d, i), d)
            assert _p0_angle(res.tree) * d == base_case(Yf(i, d)).index


def test_wrong_twist_direction_is_not_invariant():
    # clockwise crossings on H_- move the far end the other way round p0
    d, i = 5, -1
    profiles = dict(h_minus_profiles(d, i), e2=ArcProfile("e2", (-1,), "p0"))
    res = lift_marked_tree(h_minus(d, i), profiles, d)
    assert not tree_isomorphic(res.tree, h_minus(d, i))


def test_untwisted_corabbit_tree_is_not_invariant():
    obj = json.loads(
        __import__("importlib.resources", fromlist=["files"]).files("twisted_rabbit.data")
        .joinpath("corabbit_tripod.json").read_text()
    )
    tree = PlanarTree.from_json(obj["tree"])
    profiles = {e: ArcProfile(e, tuple(p["word"]), p["start"]) for e, p in obj["untwisted_profiles"].items()}
    for d in range(2, 7):
        res = lift_marked_tree(tree, profiles, d)
        assert not tree_isomorphic(res.tree, tree)


def test_rabbit_tree_twisted_by_x_is_not_invariant():
    tree = rabbit_tripod()
    profiles = {
        "E0": ArcProfile("E0", (), "c"),
        "E1": ArcProfile("E1", (-1,), "c"),
        "E2": ArcProfile("E2", (-1,), "c"),
    }
    res = lift_marked_tree(tree, profiles, 5)
    assert not tree_isomorphic(res.tree, tree)


def test_isomorphism_examples():
    a = path_tree("e1", Fraction(1, 5))
    assert tree_isomorphic(a, a)
    assert not tree_isomorphic(a, path_tree("e1", Fraction(2, 5)))
    # the two tripods differ only in orientation
    assert not tree_isomorphic(rabbit_tripod(), corabbit_tripod())
    assert tree_isomorphic(rabbit_tripod(), corabbit_tripod(), allow_reflection=True)
    # reflection still separates distinct airplane angles
    assert tree_isomorphic(a, path_tree("e1", Fraction(4, 5)), allow_reflection=True)
    assert not tree_isomorphic(a, path_tree("e1", Fraction(4, 5)))


def test_isomorphism_ignores_names():
    a = rabbit_tripod()
    renamed = PlanarTree(
        labels={"x": None, "p0": "p0", "p1": "p1", "p2": "p2"},
        edges={"a": ("x", "p0"), "b": ("x", "p1"), "c": ("x", "p2")},
        rotation={"x": ("b", "c", "a"), "p0": ("a",), "p1": ("b",), "p2": ("c",)},
        angles={"x": (Fraction(1, 3),) * 3, "p0": (Fraction(1),), "p1": (Fraction(1),), "p2": (Fraction(1),)},
    )
    assert tree_isomorphic(a, renamed)


def test_missing_profile():
    with pytest.raises(IncompleteProfileError):
        lift_marked_tree(h_minus(5, -1), {"e1": ArcProfile("e1", (), "p0")}, 5)


def test_invalid_tree_rejected():
    with pytest.raises(InvalidParameterError):
        PlanarTree(
            labels={"p0": "p0", "p1": "p1", "p2": "p2"},
            edges={"a": ("p0", "p1"), "b": ("p0", "p2")},
            rotation={"p0": ("a", "b"), "p1": ("a",), "p2": ("b",)},
            angles={"p0": (Fraction(1, 2), Fraction(1, 3)), "p1": (Fraction(1),), "p2": (Fraction(1),)},
        )
    with pytest.raises(InvalidParameterError):
        PlanarTree(
            labels={"p0": "p0", "p1": "p1", "p2": "p2", "u": None},
            edges={"a": ("p0", "p1"), "b": ("p0", "p2"), "c": ("p0", "u")},
            rotation={"p0": ("a", "b", "c"), "p1": ("a",), "p2": ("b",), "u": ("c",)},
            angles={"p0": (Fraction(1, 3),) * 3, "p1": (Fraction(1),), "p2": (Fraction(1),), "u": (Fraction(1),)},
        )


def test_hull_rejects_cyclic_preimage():
    g = preimage_graph(h_minus(3, -1), h_minus_profiles(3, -1), 3)
    # glue an extra piece between two lifts of p0 to close a cycle
    g.edges[("extra", 0)] = (("p0", 1), ("p0", 2))
    g.rotation[("p0", 1)] += (("extra", 0),)
    g.rotation[("p0", 2)] += (("extra", 0),)
    with pytest.raises(LiftFailureError):
        _hull(g)


def _all_lifts():
    for d in range(2, 8):
        for i in range(-(d - 1), 0):
            yield d, h_minus(d, i), h_minus_profiles(d, i)
        for i in range(1, d):
            yield d, h_plus(d, i), h_plus_profiles(d, i)
        for name in ("rabbit_tripod", "corabbit_tripod"):
            yield (d,) + load_fixture(name)


def test_angle_conservation():
    for d, tree, profiles in _all_lifts():
        res = lift_marked_tree(tree, profiles, d)
        for v, ang in res.tree.angles.items():
            assert sum(ang) == 1


def test_critical_value_splitting():
    for d, tree, profiles in _all_lifts():
        g = preimage_graph(tree, profiles, d)
        assert g.angles[CRIT] == (Fraction(1, d),) * d


def test_hull_correctness():
    # brute force: an edge of the preimage lies in the hull iff deleting it
    # separates two marked points
    for d, tree, profiles in _all_lifts():
        g = preimage_graph(tree, profiles, d)
        res = lift_marked_tree(tree, profiles, d)
        kept = {p for chain in res.correspondence.values() for p in chain}
        marked = set(g.marked.values())
        for piece in g.edges:
            adj = {}
            for other, (a, b) in g.edges.items():
                if other != piece:
                    adj.setdefault(a, set()).add(b)
                    adj.setdefault(b, set()).add(a)
            start = next(iter(marked))
            seen, stack = set(), [start]
            while stack:
                v = stack.pop()
                if v not in seen:
                    seen.add(v)
                    stack.extend(adj.get(v, ()))
            separates = not marked <= seen
            assert (piece in kept) == separates


def test_correspondence_is_total():
    for d, tree, profiles in _all_lifts():
        res = lift_marked_tree(tree, profiles, d)
        assert set(res.correspondence) == set(res.tree.edges)
        assert res.dynamics == ("p0", "p1", "p2", "p0")


def test_profile_intersections():
    prof = h_minus_profiles(7, -3)["e2"]
    assert prof.algebraic == -3 * -1 and prof.geometric == 3
    with pytest.raises(InvalidParameterError):
        ArcProfile("e", (2,), "p0")


def test_fixture_json_round_trip():
    tree, profiles = load_fixture("corabbit_tripod")
    obj = {"tree": tree.to_json(),
           "profiles": {e: {"word": list(p.word), "start": p.start} for e, p in profiles.items()}}
    again, again_profiles = fixture_from_json(json.loads(json.dumps(obj)))
    assert again == tree and again_profiles == profiles
