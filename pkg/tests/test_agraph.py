import itertools
import random

import pytest

from webrw.agraph import (AbstractGraph, GraphError, MARKER, automorphisms,
                          components, disjoint_union, embeddings, glue,
                          isomorphism)


def ee_edge():
    return AbstractGraph.build({}, ["x", "y"], [("x", "0", "y", "0")])


def y_graph(prefix=""):
    c = prefix + "c"
    legs = [prefix + s for s in ("x1", "x2", "x3")]
    return AbstractGraph.build({c: "v3"}, legs,
                               [(c, "0", x, "0") for x in legs])


def test_validate_ok():
    assert ee_edge().validate() == []


def test_validate_tau_fixed_point():
    g = AbstractGraph({"x": "ext", "y": "ext"}, {}, {"d": "x", "e": "y"},
                      {"d": "0", "e": "0"}, {"d": "d", "e": "e"})
    assert any(v.startswith("tau-fixed-point") for v in g.validate())


def test_validate_external_valency():
    g = AbstractGraph.build({"c": "v3"}, ["x"],
                            [("c", "0", "x", "0"), ("c", "0", "x", "0"),
                             ("c", "0", "c", "0")])
    assert any(v.startswith("external-valency") for v in g.validate())


def test_iso_self_identity():
    g = y_graph()
    m = isomorphism(g, g)
    assert m is not None


def test_y_automorphisms():
    assert len(automorphisms(y_graph())) == 6


def test_y_vs_edge_none():
    assert isomorphism(y_graph(), ee_edge()) is None


# -- embeddings oracle -------------------------------------------------------

def brute_embeddings(pat, host):
    """Enumerate all direction maps satisfying the embedding conditions."""
    pdirs = sorted(pat.tail, key=repr)
    hdirs = sorted(host.tail, key=repr)
    out = []
    for combo in itertools.product(hdirs, repeat=len(pdirs)):
        dmap = dict(zip(pdirs, combo))
        vmap = {}
        ok = True
        for d, D in dmap.items():
            if pat.lab[d] != host.lab[D] or dmap[pat.tau[d]] != host.tau[D]:
                ok = False
                break
            v, V = pat.tail[d], host.tail[D]
            if v in vmap and vmap[v] != V:
                ok = False
                break
            vmap[v] = V
        if not ok:
            continue
        for v, V in vmap.items():
            if pat.vkind[v] == "int":
                if host.vkind[V] != "int" or pat.vtype[v] != host.vtype.get(V):
                    ok = False
        ints = [vmap[v] for v in vmap if pat.vkind[v] == "int"]
        if len(set(ints)) != len(ints):
            ok = False
        intd = [dmap[d] for d in pdirs if pat.vkind[pat.tail[d]] == "int"]
        if len(set(intd)) != len(intd):
            ok = False
        if ok and len(dmap) == len(pdirs):
            out.append((tuple(sorted(vmap.items(), key=repr)),
                        tuple(sorted(dmap.items(), key=repr))))
    return set(out)


def as_set(embs):
    return {(tuple(sorted(v.items(), key=repr)), tuple(sorted(d.items(), key=repr)))
            for v, d in embs}


def test_edge_into_y_six():
    embs = embeddings(ee_edge(), y_graph())
    assert len(embs) == 6
    assert as_set(embs) == brute_embeddings(ee_edge(), y_graph())


def test_y_into_edge_empty():
    assert embeddings(y_graph(), ee_edge()) == []


def test_y_into_y_six():
    embs = embeddings(y_graph(), y_graph("z"))
    assert len(embs) == 6
    assert as_set(embs) == brute_embeddings(y_graph(), y_graph("z"))


def rand_graph(rng, nv=4):
    internal = {}
    external = []
    n = rng.randrange(1, nv + 1)
    stubs = []
    for i in range(n):
        internal["v%d" % i] = rng.choice(["t3", "t4"])
    edges = []
    # random edges among internals plus legs to externals
    for _ in range(rng.randrange(1, 2 * n + 1)):
        u = "v%d" % rng.randrange(n)
        v = "v%d" % rng.randrange(n)
        edges.append((u, "0", v, "0"))
    for j in range(rng.randrange(0, 3)):
        external.append("x%d" % j)
        edges.append(("v%d" % rng.randrange(n), "0", "x%d" % j, "0"))
    return AbstractGraph.build(internal, external, edges)


def brute_iso(g1, g2):
    v1 = sorted(g1.vkind, key=repr)
    v2 = sorted(g2.vkind, key=repr)
    if len(v1) != len(v2) or len(g1.tail) != len(g2.tail):
        return False
    d1 = sorted(g1.tail, key=repr)
    d2 = sorted(g2.tail, key=repr)
    for perm in itertools.permutations(d2):
        dmap = dict(zip(d1, perm))
        vmap = {}
        ok = True
        for d, D in dmap.items():
            if (g1.lab[d] != g2.lab[D] or dmap[g1.tau[d]] != g2.tau[D]):
                ok = False
                break
            v, V = g1.tail[d], g2.tail[D]
            if g1.vkind[v] != g2.vkind[V] or g1.vtype.get(v) != g2.vtype.get(V):
                ok = False
                break
            if v in vmap and vmap[v] != V:
                ok = False
                break
            vmap[v] = V
        if ok and len(set(vmap.values())) == len(vmap):
            unmapped1 = [v for v in v1 if v not in vmap]
            unmapped2 = [V for V in v2 if V not in vmap.values()]
            k1 = sorted((g1.vkind[v], g1.vtype.get(v)) for v in unmapped1)
            k2 = sorted((g2.vkind[v], g2.vtype.get(v)) for v in unmapped2)
            if k1 == k2:
                return True
    return len(d1) == 0 and sorted((g1.vkind[v], g1.vtype.get(v)) for v in v1) == \
        sorted((g2.vkind[v], g2.vtype.get(v)) for v in v2)


def test_canonical_key_matches_brute_force():
    rng = random.Random(5)
    graphs = [rand_graph(rng) for _ in range(40)]
    for g1, g2 in itertools.combinations(graphs, 2):
        if len(g1.tail) > 8 or len(g2.tail) > 8:
            continue
        same_key = g1.canonical_key() == g2.canonical_key()
        assert same_key == brute_iso(g1, g2)


def test_canonical_key_relabeling_invariant():
    rng = random.Random(9)
    for _ in range(30):
        g = rand_graph(rng)
        # relabel by shuffling identifier names
        vs = list(g.vkind)
        ds = list(g.tail)
        vmap = dict(zip(vs, rng.sample(range(1000), len(vs))))
        dmap = dict(zip(ds, rng.sample(range(1000, 3000), len(ds))))
        h = AbstractGraph({vmap[v]: k for v, k in g.vkind.items()},
                          {vmap[v]: t for v, t in g.vtype.items()},
                          {dmap[d]: vmap[v] for d, v in g.tail.items()},
                          {dmap[d]: l for d, l in g.lab.items()},
                          {dmap[d]: dmap[e] for d, e in g.tau.items()})
        assert g.canonical_key() == h.canonical_key()


# -- glue --------------------------------------------------------------------

def test_glue_two_edges_circle():
    g = glue(ee_edge(), ee_edge(), {"x": "x", "y": "y"})
    assert len(components(g)) == 1
    assert [g.vtype[v] for v in g.internal_vertices()] == [MARKER]
    assert not g.external_vertices()


def test_glue_y_y_theta():
    g = glue(y_graph(), y_graph(), {"x1": "x1", "x2": "x2", "x3": "x3"})
    assert len(g.internal_vertices()) == 2
    assert len(list(g.edges())) == 3
    assert not g.external_vertices()


def test_glue_y_y_one_leg_h_tree():
    g = glue(y_graph(), y_graph(), {"x1": "x1"})
    assert len(g.internal_vertices()) == 2
    assert len(g.external_vertices()) == 4
    assert len(list(g.edges())) == 5


def test_glue_symmetric():
    g1 = glue(y_graph(), y_graph(), {"x1": "x2"})
    g2 = glue(y_graph(), y_graph(), {"x2": "x1"})
    assert g1.canonical_key() == g2.canonical_key()


def test_glue_label_mismatch():
    a = AbstractGraph.build({}, ["x", "y"], [("x", "1", "y", "1")])
    b = AbstractGraph.build({}, ["x", "y"], [("x", "2", "y", "2")])
    with pytest.raises(GraphError):
        glue(a, b, {"x": "x"})


def test_glue_oriented_labels():
    nu = {"+": "-", "-": "+"}
    a = AbstractGraph.build({}, ["x", "y"], [("x", "+", "y", "-")], nu)
    b = AbstractGraph.build({}, ["x", "y"], [("x", "+", "y", "-")], nu)
    # outward direction at a.y has label '-', at b.x has label '+': dual, ok
    g = glue(a, b, {"y": "x"})
    assert len(g.external_vertices()) == 2
    with pytest.raises(GraphError):
        glue(a, b, {"x": "x"})


def test_embedding_composition():
    e = ee_edge()
    y = y_graph()
    th = glue(y_graph(), y_graph("z"), {"x1": "zx1"})
    for v1, d1 in embeddings(e, y)[:3]:
        for v2, d2 in embeddings(y, th)[:3]:
            vc = {a: v2[b] for a, b in v1.items()}
            dc = {a: d2[b] for a, b in d1.items()}
            found = embeddings(e, th)
            assert any(m == (vc, dc) for m in found)
