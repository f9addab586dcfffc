"""Combinatorial lifting of marked planar trees under the degree-d rabbit.

Sector model. The branch cut ``b`` runs from the critical value p1 to
infinity; its preimage is d rays out of the critical point, cutting the plane
into sectors 0..d-1 counterclockwise, with sector 0 holding p1 and p2. A
vertex ``v`` other than p1 has one preimage ``(v, j)`` per sector; p1 has the
single preimage p0. An edge whose crossing word with ``b`` sums to ``s``
(+1 per counterclockwise crossing) lifts, from the preimage of its start in
sector ``j``, to a path ending at the preimage of its end in sector ``j + s``.

Angles are exact fractions of a full turn throughout.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Mapping

from .errors import (
    IncompleteProfileError,
    InvalidParameterError,
    LiftFailureError,
    check_degree,
)

MARKED = ("p0", "p1", "p2")
CCW, CW, NA = "counterclockwise", "clockwise", "not-applicable"
CRIT = "crit"


@dataclass(frozen=True)
class PlanarTree:
    """A marked tree with a rotation system and an angle assignment.

    ``rotation[v]`` lists the edges at ``v`` counterclockwise and
    ``angles[v][k]`` is the corner from ``rotation[v][k]`` to the next edge.
    """

    labels: Mapping[str, str | None]
    edges: Mapping[str, tuple[str, str]]
    rotation: Mapping[str, tuple[str, ...]]
    angles: Mapping[str, tuple[Fraction, ...]]

    def __post_init__(self):
        problems = tree_problems(self)
        if problems:
            raise InvalidParameterError("invalid planar tree: " + "; ".join(problems))

    def vertex(self, label: str) -> str:
        return next(v for v, lab in self.labels.items() if lab == label)

    def other_end(self, eid: str, v: str) -> str:
        a, b = self.edges[eid]
        return b if a == v else a

    def neighbours(self, v: str) -> list[str]:
        return [self.other_end(e, v) for e in self.rotation[v]]

    def corner(self, v: str, e_from: str, e_to: str) -> Fraction:
        """Counterclockwise angle at ``v`` swept from edge ``e_from`` to ``e_to``."""
        rot = self.rotation[v]
        k = rot.index(e_from)
        total = Fraction(0)
        for step in range(len(rot)):
            total += self.angles[v][(k + step) % len(rot)]
            if rot[(k + step + 1) % len(rot)] == e_to:
                return total
        raise KeyError(e_to)

    def edge_towards(self, v: str, w: str) -> str:
        return next(e for e in self.rotation[v] if self.other_end(e, v) == w)

    def to_json(self) -> dict:
        return {
            "vertices": dict(self.labels),
            "edges": {e: list(uv) for e, uv in self.edges.items()},
            "rotation": {v: list(r) for v, r in self.rotation.items()},
            "angles": {v: [[a.numerator, a.denominator] for a in self.angles[v]] for v in self.angles},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PlanarTree":
        return cls(
            labels=dict(obj["vertices"]),
            edges={e: tuple(uv) for e, uv in obj["edges"].items()},
            rotation={v: tuple(r) for v, r in obj["rotation"].items()},
            angles={v: tuple(Fraction(n, q) for n, q in a) for v, a in obj["angles"].items()},
        )


def tree_problems(t: PlanarTree) -> list[str]:
    problems = []
    verts = set(t.labels)
    found = sorted(lab for lab in t.labels.values() if lab is not None)
    if found != sorted(MARKED):
        problems.append(f"marked labels {found} are not exactly p0, p1, p2")
    incident: dict[str, list[str]] = {v: [] for v in verts}
    for e, (a, b) in t.edges.items():
        if a not in verts or b not in verts or a == b:
            problems.append(f"edge {e} has bad endpoints {a}, {b}")
            continue
        incident[a].append(e)
        incident[b].append(e)
    for v in verts:
        rot = t.rotation.get(v, ())
        if sorted(rot) != sorted(incident[v]):
            problems.append(f"rotation at {v} does not list its incident edges")
        ang = t.angles.get(v, ())
        if len(ang) != len(rot):
            problems.append(f"angles at {v} do not match its rotation")
        elif rot and sum(ang, Fraction(0)) != 1:
            problems.append(f"angles at {v} sum to {sum(ang, Fraction(0))}, not 1")
        if len(rot) == 1 and t.labels[v] is None:
            problems.append(f"leaf {v} is unmarked")
    if len(t.edges) != len(verts) - 1 or not _connected(verts, t.edges):
        problems.append("graph is not a tree")
    return problems


def _connected(verts, edges) -> bool:
    if not verts:
        return False
    adj = {v: set() for v in verts}
    for a, b in edges.values():
        if a in adj and b in adj:
            adj[a].add(b)
            adj[b].add(a)
    seen, stack = set(), [next(iter(verts))]
    while stack:
        v = stack.pop()
        if v not in seen:
            seen.add(v)
            stack.extend(adj[v] - seen)
    return seen == set(verts)


@dataclass(frozen=True)
class ArcProfile:
    """Signed crossings of one (twisted) edge with the branch cut, read from ``start``."""

    edge: str
    word: tuple[int, ...]
    start: str

    def __post_init__(self):
        if any(w not in (1, -1) for w in self.word):
            raise InvalidParameterError(f"crossing word entries must be +1 or -1: {self.word}")

    @property
    def algebraic(self) -> int:
        return sum(self.word)

    @property
    def geometric(self) -> int:
        return len(self.word)


@dataclass
class PreimageGraph:
    """Full preimage of a tree, before taking the hull."""

    degree: int
    edges: dict[tuple, tuple]  # (orig edge, sector) -> (start vertex, end vertex)
    words: dict[tuple, tuple[int, ...]]
    rotation: dict
    angles: dict
    sector: dict  # vertex -> sector index; the critical point has none
    marked: dict  # label -> vertex


@dataclass(frozen=True)
class LiftResult:
    tree: PlanarTree
    correspondence: Mapping[str, tuple[tuple[str, int], ...]]
    dynamics: tuple[str, ...]
    orientation: str
    straight_edges: frozenset = field(default_factory=frozenset)
    preimage: PreimageGraph | None = None


def preimage_graph(tree: PlanarTree, profiles: Mapping[str, ArcProfile], d: int,
                   cut_corner: int = 0) -> PreimageGraph:
    """Every path lift of every edge, with rotations and lifted angles.

    ``cut_corner`` is the index of the corner at p1 through which the branch
    cut leaves; it only matters when p1 is not a leaf.
    """
    check_degree(d)
    missing = [e for e in tree.edges if e not in profiles]
    if missing:
        raise IncompleteProfileError(f"no arc profile for edges {missing}")
    cv = tree.vertex("p1")

    def lift(v, j):
        return CRIT if v == cv else (v, j % d)

    edges, words, crit_sector = {}, {}, {}
    oriented = {}
    for e, (a, b) in tree.edges.items():
        prof = profiles[e]
        if prof.start not in (a, b):
            raise InvalidParameterError(f"profile start {prof.start} is not an end of {e}")
        u, v = (a, b) if prof.start == a else (b, a)
        oriented[e] = (u, v, prof.algebraic)
        for j in range(d):
            edges[(e, j)] = (lift(u, j), lift(v, j + prof.algebraic))
            words[(e, j)] = prof.word
            if u == cv:
                crit_sector[(e, j)] = j
            elif v == cv:
                crit_sector[(e, j)] = (j + prof.algebraic) % d

    def piece_at(e, w, j):
        # the lift of e having its end at (w, j)
        u, v, s = oriented[e]
        return (e, j) if w == u else (e, (j - s) % d)

    rotation, angles, sector = {}, {}, {}
    for w in tree.labels:
        if w == cv:
            continue
        for j in range(d):
            rotation[(w, j)] = tuple(piece_at(e, w, j) for e in tree.rotation[w])
            angles[(w, j)] = tuple(tree.angles[w])
            sector[(w, j)] = j

    # the critical point: sectors 0..d-1 counterclockwise, each holding one
    # copy of the ends at p1 in rotation order starting just after the cut
    rot_cv, ang_cv = tree.rotation[cv], tree.angles[cv]
    n = len(rot_cv)
    order = [(cut_corner + 1 + k) % n for k in range(n)]
    crit_rot, crit_ang = [], []
    for t in range(d):
        for k in order:
            e = rot_cv[k]
            piece = next(p for p in crit_sector if p[0] == e and crit_sector[p] == t)
            crit_rot.append(piece)
            crit_ang.append(ang_cv[k] / d)
    rotation[CRIT] = tuple(crit_rot)
    angles[CRIT] = tuple(crit_ang)

    marked = {"p0": CRIT, "p1": (tree.vertex("p2"), 0), "p2": (tree.vertex("p0"), 0)}
    return PreimageGraph(d, edges, words, rotation, angles, sector, marked)


def _drop_end(rotation, angles, v, piece):
    rot, ang = list(rotation[v]), list(angles[v])
    k = rot.index(piece)
    if len(rot) > 1:
        # the two corners on either side of the removed end merge
        ang[k - 1] += ang[k]
    del rot[k]
    del ang[k]
    rotation[v], angles[v] = tuple(rot), tuple(ang)


def _hull(g: PreimageGraph):
    """Prune to the hull of the marked points, then suppress unmarked valence-2 vertices.

    Returns ``(edges, rotation, angles, chains)`` where each surviving edge is
    keyed by an integer and ``chains`` gives its pieces oriented start to end.
    """
    verts = set(g.rotation)
    if len(g.edges) != len(verts) - 1 or not _connected(verts, g.edges):
        raise LiftFailureError("preimage of the tree is not a tree")
    rotation, angles = dict(g.rotation), dict(g.angles)
    edges = dict(g.edges)
    marked = set(g.marked.values())
    changed = True
    while changed:
        changed = False
        for v in list(rotation):
            if v in marked or len(rotation[v]) > 1:
                continue
            for piece in rotation[v]:
                a, b = edges.pop(piece)
                _drop_end(rotation, angles, b if a == v else a, piece)
            del rotation[v], angles[v]
            changed = True

    # each surviving piece becomes a chain; then splice chains through
    # unmarked valence-2 vertices
    chains = {}
    ends = {}
    ids = {}
    for n, (piece, (a, b)) in enumerate(sorted(edges.items(), key=repr)):
        chains[n] = [(piece, +1)]
        ends[n] = (a, b)
        ids[piece] = n
    rotation = {v: tuple(ids[p] for p in r) for v, r in rotation.items()}
    for v in list(rotation):
        if v in marked or len(rotation[v]) != 2:
            continue
        e, f = rotation[v]
        a = ends[e][0] if ends[e][1] == v else ends[e][1]
        b = ends[f][0] if ends[f][1] == v else ends[f][1]
        ce = chains.pop(e) if ends[e][1] == v else _reverse(chains.pop(e))
        cf = chains.pop(f) if ends[f][0] == v else _reverse(chains.pop(f))
        new = max(list(chains) + [e, f]) + 1
        chains[new] = ce + cf
        del ends[e], ends[f]
        ends[new] = (a, b)
        rotation[a] = tuple(new if x == e else x for x in rotation[a])
        rotation[b] = tuple(new if x == f else x for x in rotation[b])
        del rotation[v], angles[v]
    return ends, rotation, angles, chains


def _reverse(chain):
    return [(p, -sign) for p, sign in reversed(chain)]


def lift_marked_tree(tree: PlanarTree, profiles: Mapping[str, ArcProfile], d: int,
                     cut_corner: int = 0) -> LiftResult:
    g = preimage_graph(tree, profiles, d, cut_corner)
    ends, rotation, angles, chains = _hull(g)
    inverse_mark = {v: lab for lab, v in g.marked.items()}
    missing = [lab for lab, v in g.marked.items() if v not in rotation]
    if missing:
        raise LiftFailureError(f"marked points {missing} fell out of the hull")

    def name(v):
        return inverse_mark.get(v) or f"{v[0]}~{v[1]}"

    labels = {name(v): inverse_mark.get(v) for v in rotation}
    edge_name = {n: f"L{k}" for k, n in enumerate(sorted(ends))}
    lifted = PlanarTree(
        labels=labels,
        edges={edge_name[n]: (name(a), name(b)) for n, (a, b) in ends.items()},
        rotation={name(v): tuple(edge_name[n] for n in r) for v, r in rotation.items()},
        angles={name(v): tuple(a) for v, a in angles.items()},
    )
    correspondence = {edge_name[n]: tuple(p for p, _ in chains[n]) for n in chains}

    def in_closed_sector0(v):
        return v == CRIT or g.sector[v] == 0

    straight = frozenset(
        edge_name[n]
        for n, chain in chains.items()
        if all(not g.words[p] for p, _ in chain) and all(in_closed_sector0(v) for v in ends[n])
    )
    orientation = _orientation(lifted, correspondence, tree)
    return LiftResult(lifted, correspondence, ("p0", "p1", "p2", "p0"), orientation, straight, g)


def _orientation(lifted: PlanarTree, correspondence, original: PlanarTree) -> str:
    """Rotation sense of the induced edge map at the trivalent vertex, if any."""
    centres = [v for v in lifted.rotation if len(lifted.rotation[v]) == 3]
    if len(centres) != 1 or any(lifted.labels[v] is None for v in lifted.neighbours(centres[0])):
        return NA
    t = centres[0]
    around = [lifted.labels[w] for w in lifted.neighbours(t)]
    image = {}
    for e, w in zip(lifted.rotation[t], lifted.neighbours(t)):
        first_piece = correspondence[e][0] if lifted.edges[e][0] == t else correspondence[e][-1]
        a, b = original.edges[first_piece[0]]
        image[lifted.labels[w]] = original.labels[a] or original.labels[b]
    succ = {around[k]: around[(k + 1) % 3] for k in range(3)}
    pred = {around[k]: around[k - 1] for k in range(3)}
    if all(image[lab] == succ[lab] for lab in around):
        return CCW
    if all(image[lab] == pred[lab] for lab in around):
        return CW
    return NA


def _cyclic_equal(xs, ys) -> bool:
    if len(xs) != len(ys):
        return False
    return not xs or any(xs[k:] + xs[:k] == ys for k in range(len(xs)))


def tree_isomorphic(a: PlanarTree, b: PlanarTree, allow_reflection: bool = False) -> bool:
    """Label-preserving isomorphism respecting rotations and angles.

    With ``allow_reflection`` an orientation-reversing match is also accepted.
    """
    if len(a.labels) != len(b.labels) or len(a.edges) != len(b.edges):
        return False
    fixed = {a.vertex(lab): b.vertex(lab) for lab in MARKED}
    free_a = [v for v in a.labels if a.labels[v] is None]
    free_b = [v for v in b.labels if b.labels[v] is None]
    if len(free_a) != len(free_b):
        return False
    for perm in itertools.permutations(free_b):
        phi = dict(fixed, **dict(zip(free_a, perm)))
        for reflect in (False, True) if allow_reflection else (False,):
            if all(_vertex_match(a, b, v, phi, reflect) for v in a.labels):
                return True
    return False


def _vertex_match(a, b, v, phi, reflect) -> bool:
    nbrs, ang = a.neighbours(v), list(a.angles[v])
    if reflect:
        seq = [(phi[nbrs[k]], ang[k - 1]) for k in reversed(range(len(nbrs)))]
    else:
        seq = [(phi[w], x) for w, x in zip(nbrs, ang)]
    target = list(zip(b.neighbours(phi[v]), b.angles[phi[v]]))
    return _cyclic_equal(seq, target)


# --- the base-case trees -------------------------------------------------


def path_tree(first: str, angle: Fraction) -> PlanarTree:
    """Path p1 - p0 - p2 with edges ``first`` (p0p1) and ``e2`` (p0p2).

    ``angle`` is the counterclockwise corner at p0 from ``first`` to ``e2``.
    """
    angle = Fraction(angle)
    return PlanarTree(
        labels={"p0": "p0", "p1": "p1", "p2": "p2"},
        edges={first: ("p0", "p1"), "e2": ("p0", "p2")},
        rotation={"p0": (first, "e2"), "p1": (first,), "p2": ("e2",)},
        angles={"p0": (angle, 1 - angle), "p1": (Fraction(1),), "p2": (Fraction(1),)},
    )


def h_minus(d: int, i: int) -> PlanarTree:
    _check_range(d, i, negative=True)
    return path_tree("e1", Fraction(-i, d))


def h_plus(d: int, i: int) -> PlanarTree:
    _check_range(d, i, negative=False)
    return path_tree("e1'", 1 - Fraction(i, d))


def h_minus_profiles(d: int, i: int) -> dict[str, ArcProfile]:
    """Profiles of the edges of D_y^{-i}(H_-): e2 winds |i| times counterclockwise."""
    _check_range(d, i, negative=True)
    return {"e1": ArcProfile("e1", (), "p0"), "e2": ArcProfile("e2", (1,) * -i, "p0")}


def h_plus_profiles(d: int, i: int) -> dict[str, ArcProfile]:
    """Profiles of D_y^{-i}(H_+): both edges cross the cut i times clockwise."""
    _check_range(d, i, negative=False)
    return {"e1'": ArcProfile("e1'", (-1,) * i, "p0"), "e2": ArcProfile("e2", (-1,) * i, "p0")}


def _check_range(d: int, i: int, negative: bool) -> None:
    check_degree(d)
    ok = -(d - 1) <= i <= -1 if negative else 1 <= i <= d - 1
    if not ok:
        raise InvalidParameterError(f"index {i} out of range for degree {d}")


def load_fixture(name: str) -> tuple[PlanarTree, dict[str, ArcProfile]]:
    """Load a tree and its twisted-edge profiles from the packaged JSON fixtures."""
    text = resources.files("twisted_rabbit.data").joinpath(f"{name}.json").read_text()
    return fixture_from_json(json.loads(text))


def fixture_from_json(obj: dict) -> tuple[PlanarTree, dict[str, ArcProfile]]:
    tree = PlanarTree.from_json(obj["tree"])
    profiles = {
        e: ArcProfile(e, tuple(p["word"]), p["start"]) for e, p in obj["profiles"].items()
    }
    return tree, profiles


def rabbit_tripod() -> PlanarTree:
    return load_fixture("rabbit_tripod")[0]


def corabbit_tripod() -> PlanarTree:
    return load_fixture("corabbit_tripod")[0]


def _p0_angle(t: PlanarTree) -> Fraction:
    """Counterclockwise corner at p0 from the edge towards p1 to the edge towards p2."""
    p0 = t.vertex("p0")
    towards = {}
    for e, w in zip(t.rotation[p0], t.neighbours(p0)):
        towards[t.labels[w]] = e
    return t.corner(p0, towards["p1"], towards["p2"])


def verify_Hminus(d: int, i: int) -> bool:
    tree = h_minus(d, i)
    res = lift_marked_tree(tree, h_minus_profiles(d, i), d)
    p2_edge = res.tree.edge_towards("p0", "p2")
    return (
        tree_isomorphic(res.tree, tree)
        and _p0_angle(res.tree) == Fraction(-i, d)
        and p2_edge in res.straight_edges
    )


def verify_Hplus(d: int, i: int) -> bool:
    tree = h_plus(d, i)
    res = lift_marked_tree(tree, h_plus_profiles(d, i), d)
    return tree_isomorphic(res.tree, tree) and _p0_angle(res.tree) == 1 - Fraction(i, d)


def _verify_tripod(name: str, d: int, orientation: str) -> bool:
    check_degree(d)
    tree, profiles = load_fixture(name)
    res = lift_marked_tree(tree, profiles, d)
    centre = next(v for v in res.tree.rotation if len(res.tree.rotation[v]) == 3)
    return (
        tree_isomorphic(res.tree, tree)
        and all(a == Fraction(1, 3) for a in res.tree.angles[centre])
        and res.orientation == orientation
    )


def verify_corabbit(d: int) -> bool:
    return _verify_tripod("corabbit_tripod", d, CW)


def verify_rabbit(d: int) -> bool:
    return _verify_tripod("rabbit_tripod", d, CCW)
