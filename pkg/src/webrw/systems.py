"""Built-in rule systems, evaluators, and move utilities.

Rule catalogs are shipped as data files (see catalogs/); this module holds the
ring/vertex-table/measure declarations, the catalog loader with integrity
checking, the programmatic builders used to generate the catalogs, and the
specialized evaluators (Kauffman bracket, dichromatic polynomial, partition
classification).
"""

from __future__ import annotations

import hashlib
import os

from .agraph import MARKER, AbstractGraph
from .ring import RingConfig, RingElem
from .rewrite import (LinearWeb, Rule, RuleSystem, RewriteError, matches,
                      normal_form)
from .smap import ORIENTED, UNORIENTED, SurfaceWeb, build_web, read_webg, \
    write_webg

XING = "xing"

RINGS = {
    "A1": RingConfig(("A",), 1, False),
    "A2": RingConfig(("q",), 6, False),
    "B2": RingConfig(("q",), 2, True),
    "B2C": RingConfig(("q",), 2, True),
    "B2SINGLE": RingConfig(("q",), 2, True),
    "G2": RingConfig(("q",), 1, True),
    "DICHROM": RingConfig(("p", "q", "s", "v", "w1", "w2"), 1, False),
    "PARTITION": RingConfig(("d",), 1, False),
}

# A1 webs carry unoriented labels but live on oriented surfaces: the
# Kauffman resolution distinguishes mirror images, so reflections must not
# identify webs (they would collapse +/- kinks and break confluence).
CATEGORIES = {
    "A1": ORIENTED, "A2": ORIENTED, "B2": UNORIENTED, "B2C": UNORIENTED,
    "B2SINGLE": UNORIENTED, "G2": ORIENTED,
}

# label involutions: A2 edges are oriented (+ against -), others unoriented
NU = {
    "A1": {},
    "A2": {"+": "-", "-": "+"},
    "B2": {}, "B2C": {}, "B2SINGLE": {}, "G2": {},
}

VERTEX_TYPES = {
    "A1": {XING: 4},
    "A2": {"sink": 3, "source": 3, XING: 4},
    "B2": {"b2v": 3, "b2x": 4},
    "B2C": {"b2v": 3, "b2x": 4, XING: 4, "x12": 4, "x22": 4},
    "B2SINGLE": {"b2v": 3, "b2x": 4},
    "G2": {"b2v": 3, "g2v": 3},
}


def _components(web):
    if not web.vkind:
        return 0
    parent = {v: v for v in web.vkind}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d in web.vat:
        a, b = find(web.vat[d]), find(web.vat[web.eps[d]])
        if a != b:
            parent[a] = b
    return len({find(v) for v in web.vkind})


def _count_type(*types):
    def fn(web):
        return sum(1 for v, t in web.vtype.items() if t in types)
    return fn


MEASURES = {
    "A1": [("crossings", _count_type(XING)), ("components", _components)],
    "A2": [("v4", _count_type(XING)), ("v3", _count_type("sink", "source")),
           ("components", _components)],
    "B2": [("v4", _count_type("b2x")), ("v3", _count_type("b2v")),
           ("components", _components)],
    "G2": [("vb2", _count_type("b2v")), ("vg2", _count_type("g2v")),
           ("components", _components)],
}
MEASURES["B2C"] = [("crossings", _count_type(XING, "x12", "x22"))] + MEASURES["B2"]
MEASURES["B2SINGLE"] = MEASURES["B2"]


# ---------------------------------------------------------------------------
# pattern construction helpers


def disk_pattern(category, internal, edges, legs, nu=None, over=None,
                 regions=(), markers=()):
    """A pattern in a disk: legs is a list of (vertex, label) in boundary slot
    order; edges as for build_web, with legs appended automatically."""
    edges = list(edges)
    ext = {}
    marks = {}
    for slot, (v, lbl) in enumerate(legs):
        x = "x%d" % slot
        nu2 = nu or {}
        edges.append((v, lbl, x, nu2.get(lbl, lbl), 0))
        ext[x] = (0, slot)
        marks[slot] = nu2.get(lbl, lbl)
    w = build_web(category, internal, ext, edges, [(len(legs), marks)],
                  regions=regions, nu=nu, markers=markers, over=over)
    bad = w.validate()
    if bad:
        raise RewriteError("bad pattern: %s" % bad)
    if w.euler() != 1:
        raise RewriteError("pattern not a disk (euler=%d)" % w.euler())
    return w


def empty_disk(category, nslots=0, marks=None, nu=None):
    return build_web(category, {}, {}, [], [(nslots, marks or {})], nu=nu)


def circle_in_disk(category, label, nu=None, twist=0):
    """Free circle bounding an empty disk; the outer face is the boundary
    collar."""
    return build_web(category, {}, {},
                     [("m", label, "m", (nu or {}).get(label, label), twist)],
                     [(0, {})],
                     regions=[([("dart", (0, 0), 1), ("bnd", 0)], 0, 0)],
                     nu=nu, markers=["m"])


# the inner (0-gon) side of circle_in_disk is the default-disk walk anchored at
# ((0,0),0); construction asserts this in the builders below.


def _assert_faces(web, expect):
    kinds = sorted(f["kind"] for f in web.faces())
    if kinds != sorted(expect):
        raise RewriteError("faces %s != %s" % (kinds, expect))


# ---------------------------------------------------------------------------
# A1


def _rules_a1():
    cat = CATEGORIES["A1"]
    # S1: crossing resolution. Legs at slots 0..3; over strand through
    # slots (0, 2). The A-smoothing joins (0,1) and (2,3).
    lhs = disk_pattern(cat,
                       {"v": (XING, [(0, 0), (1, 0), (2, 0), (3, 0)])},
                       [], [("v", "0")] * 4,
                       over={"v": [(0, 0), (2, 0)]})
    _assert_faces(lhs, ["boundary-disk"] * 4)
    arc_a = _arcs_disk(cat, "0", [(0, 1), (2, 3)])
    arc_b = _arcs_disk(cat, "0", [(1, 2), (3, 0)])
    A = RingElem.monomial(RINGS["A1"], 1)
    Ainv = RingElem.monomial(RINGS["A1"], -1)
    s1 = Rule("A1.S1", lhs, [(A, arc_a), (Ainv, arc_b)], decrease="crossings")
    # S2: contractible circle removal
    circ = circle_in_disk(cat, "0")
    _assert_faces(circ, ["0-gon", "boundary-annulus"])
    delta = RingElem.parse(RINGS["A1"], "-A^2 - A^-2")
    s2 = Rule("A1.S2", circ, [(delta, empty_disk(cat))],
              decrease="components")
    return [s1, s2]


def _arcs_disk(category, label, pairs, nu=None, labels=None):
    """Disk web consisting of boundary-to-boundary arcs; pairs lists slot
    pairs; labels optionally gives the dart label at the first slot of each
    pair."""
    nu = nu or {}
    nslots = 2 * len(pairs)
    ext = {}
    edges = []
    marks = {}
    for i, (a, b) in enumerate(pairs):
        # la is the label of the inward dart at slot a (direction a -> b)
        la = (labels or {}).get((a, b), label)
        xa, xb = "x%d" % a, "x%d" % b
        edges.append((xa, la, xb, nu.get(la, la), 0))
        ext[xa] = (0, a)
        ext[xb] = (0, b)
        marks[a] = la
        marks[b] = nu.get(la, la)
    w = build_web(category, {}, ext, edges, [(nslots, marks)], nu=nu)
    bad = w.validate()
    if bad or w.euler() != 1:
        raise RewriteError("bad arc diagram: %s euler=%s" % (bad, w.euler()))
    return w


def a1_system():
    return RuleSystem("A1", RINGS["A1"], UNORIENTED, VERTEX_TYPES["A1"],
                      _rules_a1(), MEASURES["A1"], NU["A1"])


# ---------------------------------------------------------------------------
# diagram constructors (A1 corpus)


def braid_closure_web(word, n, category=None):
    """Closure of a braid word (letters +-i for sigma_i^{+-1}) as an A1 web on
    the sphere. Strands untouched by the word close into free circles."""
    category = category or CATEGORIES["A1"]
    vkind, vtype, vat, nxt, eps, twist, lab = {}, {}, {}, {}, {}, {}, {}
    over = {}
    pending = {j: ("top", j) for j in range(1, n + 1)}
    joints = []  # pairs of dart ids to fuse into edges
    tops = {j: ("top", j) for j in range(1, n + 1)}
    for ci, letter in enumerate(word):
        i = abs(letter)
        v = ("c", ci)
        vkind[v] = "int"
        vtype[v] = XING
        tl, tr, br, bl = [(v, t) for t in ("tl", "tr", "br", "bl")]
        for d in (tl, tr, br, bl):
            vat[d] = v
            twist[d] = 0
            lab[d] = "0"
        # planar rotation around the crossing
        nxt[tl], nxt[tr], nxt[br], nxt[bl] = tr, br, bl, tl
        over[v] = frozenset([tr, bl] if letter > 0 else [tl, br])
        joints.append((pending[i], tl))
        joints.append((pending[i + 1], tr))
        pending[i], pending[i + 1] = bl, br
    for j in range(1, n + 1):
        joints.append((pending[j], tops[j]))
    # resolve "top" placeholders: they pair a closure; chains through
    # placeholders merge into direct edges or free circles
    link = {}
    for a, b in joints:
        link.setdefault(a, []).append(b)
        link.setdefault(b, []).append(a)
    # placeholder nodes have exactly two joint ends; real darts one
    edges = []
    circles = 0
    visited = set()
    for a, b in joints:
        if (a, b) in visited or (b, a) in visited:
            continue
        if a == b:  # strand untouched by the word: a free circle
            visited.add((a, b))
            circles += 1
            continue
        # walk from a real dart if possible
        ends = []
        chain = [(a, b)]
        visited.add((a, b))

        def extend(node, prev):
            while isinstance(node, tuple) and node[0] == "top":
                nbrs = [x for x in link[node] if x != prev] or [prev]
                nxt_node = nbrs[0]
                visited.add((node, nxt_node))
                visited.add((nxt_node, node))
                prev, node = node, nxt_node
                if node == chain[0][0] and prev != chain[0][1]:
                    return None  # closed circle
            return node

        left = extend(a, b)
        right = extend(b, a)
        if left is None or right is None:
            circles += 1
            continue
        edges.append((left, right))
    for da, db in edges:
        eps[da], eps[db] = db, da
    for k in range(circles):
        m = ("m", k)
        vkind[m] = "int"
        vtype[m] = MARKER
        d1, d2 = (m, 0), (m, 1)
        vat[d1] = vat[d2] = m
        nxt[d1], nxt[d2] = d2, d1
        eps[d1], eps[d2] = d2, d1
        twist[d1] = twist[d2] = 0
        lab[d1] = lab[d2] = "0"
    web = SurfaceWeb(category, vkind, vtype, vat, nxt, eps, twist, lab, {},
                     [], [], NU["A1"], over)
    # disconnected diagrams share one outer region on the sphere: place the
    # components side by side by grouping one walk of each
    comp = {v: v for v in vkind}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for d in vat:
        a, b = find(vat[d]), find(vat[eps[d]])
        if a != b:
            comp[a] = b
    roots = {find(v) for v in vkind}
    if len(roots) > 1:
        walk_comp = {}
        for wk in web.walks():
            it = next(iter(sorted(wk.slots, key=repr)))
            walk_comp.setdefault(find(vat[it[1]]), wk)
        anchors = []
        for r in sorted(roots, key=repr):
            it = next(iter(sorted(walk_comp[r].slots, key=repr)))
            anchors.append(("dart", it[1], it[2]))
        web = SurfaceWeb(category, vkind, vtype, vat, nxt, eps, twist, lab,
                         {}, [], [(anchors, 0, 0)], NU["A1"], over)
    bad = web.validate()
    if bad:
        raise RewriteError("braid web invalid: %s" % bad)
    if word and web.euler() != 2:
        raise RewriteError("braid closure not spherical: euler=%d" % web.euler())
    return web


def kauffman_bracket(web, system=None):
    """Coefficient of the empty diagram in the A1 normal form."""
    system = system or a1_system()
    for v, t in web.vtype.items():
        if t not in (XING, MARKER):
            raise RewriteError("not an A1 diagram")
    nf = normal_form(LinearWeb.of(web, RingElem.one(system.ring)), system)
    empty_key = SurfaceWeb(web.category, {}, {}, {}, {}, {}, {}, {}, {},
                           web.boundary, [], web.nu).canonical_key()
    out = RingElem.zero(system.ring)
    for k, (w, c) in nf.terms.items():
        if k == empty_key:
            out = out + c
        elif not w.vat:
            out = out + c
        else:
            raise RewriteError("nonempty A1 normal form for a closed diagram")
    return out
