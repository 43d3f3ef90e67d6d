import itertools
import random

import pytest

from webrw.agraph import AbstractGraph, MARKER
from webrw.smap import (ORIENTED, UNORIENTED, SurfaceWeb, WebError, build_web,
                        framing_webs, read_webg, write_webg)


def theta_sphere():
    # two trivalent vertices joined by three edges, all faces disks
    return build_web(
        UNORIENTED,
        internal={"u": ("t3", [(0, 0), (1, 0), (2, 0)]),
                  "w": ("t3", [(2, 1), (1, 1), (0, 1)])},
        external={},
        edges=[("u", "0", "w", "0", 0), ("u", "0", "w", "0", 0),
               ("u", "0", "w", "0", 0)],
        boundary=[])


def free_circle(twist, category=UNORIENTED, boundaries=2, group=True):
    regions = []
    if group and boundaries == 2:
        regions = [([("dart", (0, 0), 0), ("bnd", 0)], 0, 0),
                   ([("dart", (0, 0), 1), ("bnd", 1)], 0, 0)]
    elif group and boundaries == 1:
        regions = [([("dart", (0, 0), 1), ("bnd", 0)], 0, 0)]
    return build_web(category, internal={}, external={},
                     edges=[("m", "0", "m", "0", twist)],
                     boundary=[(0, {})] * boundaries,
                     regions=regions, markers=["m"])


def test_theta_euler():
    w = theta_sphere()
    assert w.validate() == []
    assert w.euler() == 2
    faces = w.faces()
    assert len(faces) == 3
    assert all(f["kind"] == "n-gon" for f in faces)


def test_odd_twist_cycle_violates_orientability():
    w = build_web(ORIENTED,
                  internal={"u": ("t3", [(0, 0), (0, 1), (1, 0)]),
                            "w": ("t3", [(1, 1), (2, 0), (2, 1)])},
                  external={},
                  edges=[("u", "0", "u", "0", 1), ("u", "0", "w", "0", 0),
                         ("w", "0", "w", "0", 0)],
                  boundary=[])
    assert "orientability" in w.validate()


def test_annulus_circle():
    w = free_circle(0)
    assert w.validate() == []
    assert w.euler() == 0
    kinds = sorted(f["kind"] for f in w.faces())
    assert kinds == ["boundary-annulus", "boundary-annulus"]
    assert w.is_simple()


def test_mobius_circle():
    # one-sided core circle of the Moebius band: a single walk around both
    # sides, grouped with the lone boundary circle into an annulus face
    w = build_web(UNORIENTED, internal={}, external={},
                  edges=[("m", "0", "m", "0", 1)],
                  boundary=[(0, {})],
                  regions=[([("dart", (0, 0), 0), ("bnd", 0)], 0, 0)],
                  markers=["m"])
    assert len(w.walks()) == 2
    assert w.validate() == []
    assert w.euler() == 0


def test_fake_four_gon():
    # annulus web whose middle face is bounded by E1,E2,E3,E2
    w = build_web(
        UNORIENTED,
        internal={"u": ("t3", [(0, 0), (0, 1), (1, 0)]),
                  "w": ("t3", [(1, 1), (2, 0), (2, 1)])},
        external={},
        edges=[("u", "0", "u", "0", 0), ("u", "0", "w", "0", 0),
               ("w", "0", "w", "0", 0)],
        boundary=[(0, {}), (0, {})],
        regions=[([("dart", (0, 0), 0), ("bnd", 0)], 0, 0),
                 ([("dart", (2, 0), 0), ("bnd", 1)], 0, 0)])
    assert w.validate() == []
    assert w.euler() == 0
    fours = [f for f in w.faces() if f["kind"] == "n-gon" and f["n"] == 4]
    assert len(fours) == 1 and fours[0]["true"] is False


def test_circle_in_disk():
    w = free_circle(0, boundaries=1)
    assert w.validate() == []
    assert w.euler() == 1
    kinds = sorted(f["kind"] for f in w.faces())
    assert kinds == ["0-gon", "boundary-annulus"]
    assert w.is_simple()


def test_circle_on_genus_face_not_simple():
    w = build_web(UNORIENTED, internal={}, external={},
                  edges=[("m", "0", "m", "0", 0)],
                  boundary=[],
                  regions=[([("dart", (0, 0), 0)], 1, 0),
                           ([("dart", (0, 0), 1)], 0, 0)],
                  markers=["m"])
    assert not w.is_simple()
    assert w.euler() == 2 - 2  # torus


def test_square_pattern_faces():
    # 4-cycle with 4 legs in a disk: one true 4-gon
    rot = {}
    edges = []
    for i in range(4):
        edges.append(("v%d" % i, "0", "v%d" % ((i + 1) % 4), "0", 0))  # cycle
    for i in range(4):
        edges.append(("v%d" % i, "0", "x%d" % i, "0", 0))  # legs
    internal = {}
    for i in range(4):
        internal["v%d" % i] = ("t3", [(i, 0), ((i - 1) % 4, 1), (4 + i, 0)])
    ext = {"x%d" % i: (0, i) for i in range(4)}
    w = build_web(UNORIENTED, internal, ext, edges, [(4, {})])
    assert w.validate() == []
    assert w.euler() == 1
    fours = [f for f in w.faces() if f["kind"] == "n-gon"]
    assert len(fours) == 1 and fours[0]["n"] == 4 and fours[0]["true"]


# -- framings ---------------------------------------------------------------

def test_circle_framings():
    g = AbstractGraph({"m": "int"}, {"m": MARKER},
                      {"d": "m", "e": "m"}, {"d": "0", "e": "0"},
                      {"d": "e", "e": "d"})
    assert len(framing_webs(g, UNORIENTED)) == 2
    assert len(framing_webs(g, ORIENTED)) == 1


def brute_framing_orbits(g, category):
    ivs = sorted([v for v in g.vkind if g.vkind[v] == "int"
                  and g.vtype.get(v) != MARKER], key=repr)
    edges = sorted({frozenset((d, g.tau[d])) for d in g.tail}, key=repr)

    def rots_of(v):
        ds = g.star[v]
        if len(ds) <= 2:
            return [tuple(ds)]
        return [(ds[0],) + p for p in itertools.permutations(ds[1:])]

    def norm(rot, tw):
        rows = []
        for v in ivs:
            seq = rot[v]
            k = seq.index(min(seq, key=repr))
            rows.append(tuple(seq[k:] + seq[:k]))
        return (tuple(rows), tuple(tw[e] for e in edges))

    def flip(state, v):
        rot, tw = state
        rot = dict(rot)
        seq = tuple(reversed(rot[v]))
        rot[v] = seq
        tw = dict(tw)
        for d in g.star[v]:
            e = frozenset((d, g.tau[d]))
            if g.tail[g.tau[d]] == v:
                continue
            tw[e] ^= 1
        return (rot, tw)

    def reflect(state):
        rot, tw = state
        return ({v: tuple(reversed(r)) for v, r in rot.items()}, dict(tw))

    states = []
    for rots in itertools.product(*[rots_of(v) for v in ivs]):
        base_rot = dict(zip(ivs, rots))
        for v in g.vkind:
            if g.vkind[v] == "int" and v not in base_rot:
                base_rot[v] = tuple(g.star[v])
        for bits in range(1 << len(edges)):
            tw = {e: (bits >> i) & 1 for i, e in enumerate(edges)}
            states.append((base_rot, tw))
    seen = set()
    orbits = 0
    for s in states:
        if norm(*s) in seen:
            continue
        orbits += 1
        stack = [s]
        while stack:
            cur = stack.pop()
            key = norm(*cur)
            if key in seen:
                continue
            seen.add(key)
            for v in ivs:
                stack.append(flip(cur, v))
            if category == UNORIENTED:
                stack.append(reflect(cur))
    return orbits


def test_theta_framings_vs_bruteforce():
    g = AbstractGraph.build({"u": "t3", "w": "t3"}, [],
                            [("u", "0", "w", "0")] * 3)
    for cat in (UNORIENTED,):
        engine = len(framing_webs(g, cat))
        oracle = brute_framing_orbits(g, cat)
        assert engine == oracle


def test_framings_all_faces_boundary_adjacent():
    g = AbstractGraph.build({"u": "t3", "w": "t3"}, ["x1", "x2"],
                            [("u", "0", "w", "0"), ("u", "0", "w", "0"),
                             ("u", "0", "x1", "0"), ("w", "0", "x2", "0")])
    for web in framing_webs(g, UNORIENTED):
        assert web.validate() == []
        for f in web.faces():
            assert f["kind"] in ("boundary-disk", "boundary-annulus")


# -- canonical keys -----------------------------------------------------------

def test_key_flip_invariance():
    w = theta_sphere()
    k = w.canonical_key()
    w2 = w.flipped("u")
    assert w2.canonical_key() == k
    w3 = w.flipped("u").flipped("w")
    assert w3.canonical_key() == k


def test_key_relabel_invariance():
    rng = random.Random(3)
    w = theta_sphere()
    for _ in range(10):
        vs = list(w.vkind)
        ds = list(w.vat)
        vmap = dict(zip(vs, rng.sample(range(100), len(vs))))
        dmap = dict(zip(ds, rng.sample(range(100, 300), len(ds))))
        w2 = w.relabeled(vmap, dmap)
        assert w2.canonical_key() == w.canonical_key()


def test_key_annulus_vs_mobius():
    assert free_circle(0, boundaries=1).canonical_key() != \
        free_circle(1, boundaries=1).canonical_key()


def test_key_nested_vs_side_by_side_circles():
    # two circles in a disk: nested vs disjoint differ only by regions
    def two_circles(nested):
        if nested:
            regions = [([("dart", (0, 0), 0)], 0, 0),
                       ([("dart", (0, 0), 1), ("dart", (1, 0), 0)], 0, 0),
                       ([("dart", (1, 0), 1), ("bnd", 0)], 0, 0)]
        else:
            regions = [([("dart", (0, 0), 0)], 0, 0),
                       ([("dart", (1, 0), 0)], 0, 0),
                       ([("dart", (0, 0), 1), ("dart", (1, 0), 1), ("bnd", 0)],
                        0, 0)]
        return build_web(UNORIENTED, internal={}, external={},
                         edges=[("m1", "0", "m1", "0", 0),
                                ("m2", "0", "m2", "0", 0)],
                         boundary=[(0, {})], regions=regions,
                         markers=["m1", "m2"])
    a, b = two_circles(True), two_circles(False)
    assert a.validate() == [] and b.validate() == []
    assert a.euler() == b.euler() == 1
    assert a.canonical_key() != b.canonical_key()
    # relabeling the markers leaves each key fixed
    sw = a.relabeled({"m1": "m2", "m2": "m1"},
                     {(0, 0): (1, 0), (0, 1): (1, 1), (1, 0): (0, 0),
                      (1, 1): (0, 1)})
    assert sw.canonical_key() == a.canonical_key()


def test_oriented_reflection_distinguishes():
    # a chiral oriented web: triangle with legs attached with all rotations
    # equal is distinct from its mirror in the oriented category
    def tri(mirror):
        rot = lambda i: [(i, 0), (3 + i, 0), ((i - 1) % 3, 1)]
        rotm = lambda i: list(reversed(rot(i)))
        internal = {"v%d" % i: ("t3", (rotm if mirror else rot)(i))
                    for i in range(3)}
        edges = [("v%d" % i, "0", "v%d" % ((i + 1) % 3), "0", 0) for i in range(3)]
        edges += [("v%d" % i, "0", "m%d" % i, "0", 0) for i in range(3)]
        # close each leg with a loop to keep the web boundaryless: use marker
        # circles instead: just make legs into external-free loops via markers
        return build_web(ORIENTED, internal,
                         {"x%d" % i: (0, i) for i in range(3)},
                         [("v%d" % i, "0", "v%d" % ((i + 1) % 3), "0", 0)
                          for i in range(3)] +
                         [("v%d" % i, "0", "x%d" % i, "0", 0) for i in range(3)],
                         [(3, {})])
    a, b = tri(False), tri(True)
    assert a.canonical_key() != b.canonical_key()
    au, bu = tri(False), tri(True)
    # same webs in the unoriented category with slot-free boundary would
    # compare equal; with occupied slots the parametrization is rigid, so we
    # only check the oriented inequality here.


def test_webg_roundtrip():
    w = theta_sphere()
    text = write_webg(w)
    w2 = read_webg(text)
    assert write_webg(w2) == text
    assert w2.canonical_key() == w.canonical_key()


def test_webg_roundtrip_with_boundary():
    rotations = {"u": ("t3", [(0, 0), (1, 0), (2, 0)])}
    w = build_web(UNORIENTED, rotations,
                  {"x0": (0, 0), "x1": (0, 1), "x2": (0, 2)},
                  [("u", "1", "x0", "1", 0), ("u", "1", "x1", "1", 0),
                   ("u", "2", "x2", "2", 0)],
                  [(3, {0: "1", 1: "1", 2: "2"})])
    text = write_webg(w)
    w2 = read_webg(text)
    assert write_webg(w2) == text
    assert w2.canonical_key() == w.canonical_key()
