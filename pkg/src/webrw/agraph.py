"""Abstract labeled graphs: vertices, edge directions with a fixed-point-free
reversal involution, label involution, external (1-valent) vertices.

The substrate for the dichromatic and partition systems and for the abstract
stage of overlap enumeration. Graphs are immutable after construction.
"""

from __future__ import annotations

import itertools


MARKER = "marker"  # reserved 2-valent pseudo-vertex type carrying a free circle


class GraphError(Exception):
    pass


class AbstractGraph:
    __slots__ = ("vkind", "vtype", "tail", "lab", "tau", "nu", "_star", "_key")

    def __init__(self, vkind, vtype, tail, lab, tau, nu=None):
        self.vkind = dict(vkind)      # vertex -> "int" | "ext"
        self.vtype = dict(vtype)      # internal vertex -> type name
        self.tail = dict(tail)        # direction -> vertex
        self.lab = dict(lab)          # direction -> label
        self.tau = dict(tau)          # direction -> reversed direction
        self.nu = dict(nu) if nu else {}
        self._star = None
        self._key = None

    # -- construction helpers ----------------------------------------------

    @classmethod
    def build(cls, internal, external, edges, nu=None):
        """internal: {v: vtype}; external: iterable of v; edges: list of
        (u, lab_u, v, lab_v) meaning a direction from u labeled lab_u whose
        reversal at v is labeled lab_v."""
        vkind = {v: "int" for v in internal}
        vkind.update({v: "ext" for v in external})
        vtype = dict(internal)
        tail, lab, tau = {}, {}, {}
        for i, (u, lu, v, lv) in enumerate(edges):
            d, dr = ("e%d" % i, "e%dr" % i)
            tail[d], tail[dr] = u, v
            lab[d], lab[dr] = lu, lv
            tau[d], tau[dr] = dr, d
        return cls(vkind, vtype, tail, lab, tau, nu)

    def head(self, d):
        return self.tail[self.tau[d]]

    @property
    def star(self):
        if self._star is None:
            s = {v: [] for v in self.vkind}
            for d in sorted(self.tail, key=repr):
                s[self.tail[d]].append(d)
            self._star = s
        return self._star

    def valence(self, v):
        return len(self.star[v])

    def vertices(self):
        return self.vkind.keys()

    def directions(self):
        return self.tail.keys()

    def edges(self):
        seen = set()
        for d in self.tail:
            if d not in seen:
                seen.add(d)
                seen.add(self.tau[d])
                yield (d, self.tau[d])

    def internal_vertices(self):
        return [v for v, k in self.vkind.items() if k == "int"]

    def external_vertices(self):
        return [v for v, k in self.vkind.items() if k == "ext"]

    def nu_of(self, label):
        return self.nu.get(label, label)

    def is_ee_edge(self, d):
        return self.vkind[self.tail[d]] == "ext" and self.vkind[self.head(d)] == "ext"

    # -- validation ----------------------------------------------------------

    def validate(self, allow_two_valent=False):
        bad = []
        for d, dr in self.tau.items():
            if dr == d:
                bad.append("tau-fixed-point:%s" % d)
            elif self.tau.get(dr) != d:
                bad.append("tau-not-involution:%s" % d)
            if self.nu_of(self.lab[d]) != self.lab.get(dr):
                bad.append("label-involution:%s" % d)
        for d in self.tail:
            if self.tail[d] not in self.vkind:
                bad.append("dangling-tail:%s" % d)
        for v, k in self.vkind.items():
            n = self.valence(v)
            if k == "ext" and n != 1:
                bad.append("external-valency:%s" % v)
            if k == "int" and self.vtype.get(v) == MARKER and n != 2:
                bad.append("marker-valency:%s" % v)
            if (k == "int" and not allow_two_valent and n == 2
                    and self.vtype.get(v) != MARKER):
                bad.append("two-valent-internal:%s" % v)
        return bad

    # -- canonical form ------------------------------------------------------

    def _refine(self, col):
        while True:
            new = {}
            for v in self.vkind:
                sig = tuple(sorted((self.lab[d], self.lab[self.tau[d]],
                                    col[self.head(d)]) for d in self.star[v]))
                new[v] = (col[v], sig)
            ranks = {c: i for i, c in enumerate(sorted(set(new.values()), key=repr))}
            new = {v: ranks[c] for v, c in new.items()}
            if len(set(new.values())) == len(set(col.values())):
                same = len({(col[v], new[v]) for v in col}) == len(set(col.values()))
                if same:
                    return col
            col = new

    def _initial_coloring(self, vdec=None):
        col = {}
        for v, k in self.vkind.items():
            col[v] = (k, self.vtype.get(v), self.valence(v),
                      tuple(sorted(self.lab[d] for d in self.star[v])),
                      None if vdec is None else vdec.get(v))
        ranks = {c: i for i, c in enumerate(sorted(set(col.values()), key=repr))}
        return {v: ranks[c] for v, c in col.items()}

    def canonical_key(self, vdec=None, ddec=None):
        """Bytes equal iff graphs (with optional decorations) are isomorphic."""
        if vdec is None and ddec is None and self._key is not None:
            return self._key
        best = [None]
        self._canon_search(self._refine(self._initial_coloring(vdec)), vdec, ddec, best)
        if vdec is None and ddec is None:
            self._key = best[0]
        return best[0]

    def _canon_search(self, col, vdec, ddec, best):
        cells = {}
        for v, c in col.items():
            cells.setdefault(c, []).append(v)
        nonsingle = sorted((c for c, vs in cells.items() if len(vs) > 1))
        if not nonsingle:
            s = self._serialize(col, vdec, ddec)
            if best[0] is None or s < best[0]:
                best[0] = s
            return
        target = cells[nonsingle[0]]
        for v in sorted(target, key=repr):
            nc = dict(col)
            nc[v] = -1 - nc[v]  # individualize
            ranks = {c: i for i, c in enumerate(sorted(set(nc.values())))}
            nc = {u: ranks[c] for u, c in nc.items()}
            self._canon_search(self._refine(nc), vdec, ddec, best)

    def _serialize(self, col, vdec, ddec):
        order = sorted(self.vkind, key=lambda v: (col[v], repr(v)))
        vidx = {v: i for i, v in enumerate(order)}
        parts = []
        for v in order:
            parts.append("V%s,%s,%s" % (self.vkind[v], self.vtype.get(v),
                                        None if vdec is None else vdec.get(v)))
        didx = {}
        dorder = []
        for v in order:
            remaining = list(self.star[v])
            # greedy: keys recomputed as partners get indices, so interchangeable
            # parallel edges and loops serialize identically
            while remaining:
                def skey(d):
                    return (self.lab[d], None if ddec is None else repr(ddec.get(d)),
                            vidx[self.head(d)], didx.get(self.tau[d], 1 << 30))
                best = min(remaining, key=lambda d: (skey(d), repr(d)))
                remaining.remove(best)
                didx[best] = len(didx)
                dorder.append(best)
        rows = []
        for d in dorder:
            rows.append("E%d>%d,%s,%s,t%d" % (
                vidx[self.tail[d]], vidx[self.head(d)], self.lab[d],
                None if ddec is None else ddec.get(d), didx[self.tau[d]]))
        return ("|".join(parts) + "#" + "|".join(rows)).encode()


# ---------------------------------------------------------------------------
# embeddings


def embeddings(pat, host, iso=False):
    """All embeddings of pat into host per the direction-level definition:
    tails commute, tau commutes, labels preserved, injective on internal
    vertices and on directions with internal tails, internal vertex types
    preserved. With iso=True require a bijection on vertices and directions
    preserving external flags."""
    out = []
    pat_dirs = sorted(pat.tail, key=repr)
    comps = _direction_components(pat)
    isolated = [v for v in sorted(pat.vkind, key=repr) if not pat.star[v]]

    def extend(dmap, vmap, comps_left):
        if not comps_left:
            _assign_isolated(pat, host, dict(vmap), isolated, iso, dmap, out)
            return
        comp = comps_left[0]
        seed = comp[0]
        for D in sorted(host.tail, key=repr):
            _try_assign(pat, host, dmap, vmap, comp, seed, D, comps_left[1:], extend, iso)

    extend({}, {}, comps)
    if iso:
        out = [m for m in out
               if len(set(m[0].values())) == len(host.vkind) == len(pat.vkind)
               and len(m[1]) == len(host.tail) == len(pat.tail)
               and all(pat.vkind[v] == host.vkind[m[0][v]] for v in pat.vkind)]
    # deduplicate
    seen, uniq = set(), []
    for vmap, dmap in out:
        k = (tuple(sorted(vmap.items(), key=repr)), tuple(sorted(dmap.items(), key=repr)))
        if k not in seen:
            seen.add(k)
            uniq.append((vmap, dmap))
    return uniq


def _direction_components(g):
    seen = set()
    comps = []
    for d0 in sorted(g.tail, key=repr):
        if d0 in seen:
            continue
        comp = []
        stack = [d0]
        while stack:
            d = stack.pop()
            if d in seen:
                continue
            seen.add(d)
            comp.append(d)
            stack.append(g.tau[d])
            stack.extend(g.star[g.tail[d]])
        comps.append(sorted(comp, key=repr))
    return comps


def _compatible_vertex(pat, host, v, V):
    if pat.vkind[v] == "int":
        if host.vkind[V] != "int" or pat.vtype.get(v) != host.vtype.get(V):
            return False
    return True


def _try_assign(pat, host, dmap, vmap, comp, seed, D, rest, extend, iso):
    dmap = dict(dmap)
    vmap = dict(vmap)
    stack = [(seed, D)]
    while stack:
        d, Dh = stack.pop()
        if d in dmap:
            if dmap[d] != Dh:
                return
            continue
        if pat.lab[d] != host.lab[Dh]:
            return
        v, Vh = pat.tail[d], host.tail[Dh]
        if not _compatible_vertex(pat, host, v, Vh):
            return
        if v in vmap:
            if vmap[v] != Vh:
                return
        else:
            if pat.vkind[v] == "int" and Vh in [vmap[u] for u in vmap
                                                if pat.vkind[u] == "int"]:
                return
            if iso and Vh in vmap.values():
                return
            vmap[v] = Vh
        dmap[d] = Dh
        stack.append((pat.tau[d], host.tau[Dh]))
    # injectivity on internal-tailed directions
    used = {}
    for d, Dh in dmap.items():
        if pat.vkind[pat.tail[d]] == "int" or iso:
            if Dh in used:
                return
            used[Dh] = d
    # find next unassigned direction in this component anchored at a mapped vertex
    for d in comp:
        if d not in dmap:
            v = pat.tail[d]
            if v in vmap:
                for Dh in host.star[vmap[v]]:
                    _try_assign(pat, host, dmap, vmap, comp, d, Dh, rest, extend, iso)
                return
    # component fully assigned?
    if any(d not in dmap for d in comp):
        return  # disconnected within component: cannot happen
    extend(dmap, vmap, rest)


def _assign_isolated(pat, host, vmap, isolated, iso, dmap, out):
    def rec(i, vmap):
        if i == len(isolated):
            out.append((dict(vmap), dict(dmap)))
            return
        v = isolated[i]
        for V in sorted(host.vkind, key=repr):
            if not _compatible_vertex(pat, host, v, V):
                continue
            if pat.vkind[v] == "int" and V in [vmap[u] for u in vmap
                                               if pat.vkind[u] == "int"]:
                continue
            if iso and V in vmap.values():
                continue
            vmap[v] = V
            rec(i + 1, vmap)
            del vmap[v]
    rec(0, vmap)


def isomorphism(g1, g2):
    """A kind/type/label-preserving bijective embedding, or None."""
    if len(g1.vkind) != len(g2.vkind) or len(g1.tail) != len(g2.tail):
        return None
    if g1.canonical_key() != g2.canonical_key():
        return None
    found = embeddings(g1, g2, iso=True)
    return found[0] if found else None


def automorphisms(g):
    return embeddings(g, g, iso=True)


# ---------------------------------------------------------------------------
# contraction / gluing


def glue(g1, g2, pairing):
    """Contraction of g1 and g2 along a partial bijection between external
    vertices. Paired 1-valent vertices are removed and their edges spliced;
    a spliced cycle with no remaining vertices becomes a marker loop."""
    for x1, x2 in pairing.items():
        if g1.vkind.get(x1) != "ext" or g2.vkind.get(x2) != "ext":
            raise GraphError("pairing must join external vertices")
        d1 = g1.star[x1][0]
        d2 = g2.star[x2][0]
        if g1.lab[d1] != g1.nu_of(g2.lab[d2]):
            raise GraphError("label mismatch at %s~%s" % (x1, x2))

    vkind, vtype, tail, lab, tau, nu = {}, {}, {}, {}, {}, {}
    for g, tag in ((g1, "a"), (g2, "b")):
        for v, k in g.vkind.items():
            vkind[(tag, v)] = k
            if v in g.vtype:
                vtype[(tag, v)] = g.vtype[v]
        for d in g.tail:
            tail[(tag, d)] = (tag, g.tail[d])
            lab[(tag, d)] = g.lab[d]
            tau[(tag, d)] = (tag, g.tau[d])
        nu.update(g.nu)

    # splice each pair: remove x1, x2; connect the reversed directions
    succ = {}  # for chains of splices: dir -> dir it now continues into
    for x1, x2 in pairing.items():
        d1 = ("a", g1.star[x1][0])
        d2 = ("b", g2.star[x2][0])
        succ[d1] = tau[d2]
        succ[d2] = tau[d1]
        del vkind[("a", x1)]
        del vkind[("b", x2)]

    # resolve chains: each removed direction d had tau[d]=dr; new partner of a
    # surviving direction found by walking succ
    def resolve(d):
        while d in succ:
            d = succ[d]
        return d

    removed = set(succ)
    new_tau = {}
    for d in list(tau):
        if d in removed:
            continue
        new_tau[d] = resolve(tau[d])
    for d in removed:
        del tail[d]
        del lab[d]
    # fully closed circles: a splice cycle where every direction was removed
    circles = []
    seen = set()
    for d in succ:
        if d in seen:
            continue
        cyc = [d]
        seen.add(d)
        cur = succ[d]
        closed = False
        while cur in succ:
            if cur == d:
                closed = True
                break
            seen.add(cur)
            cyc.append(cur)
            cur = succ[cur]
        if closed:
            circles.append(cyc)
    # each closed cycle alternates d, tau pairs; realize as a marker loop
    done = set()
    for i, cyc in enumerate(circles):
        if any(c in done for c in cyc):
            continue
        done.update(cyc)
        done.update(tau[c] for c in cyc)  # the reversed chain is the same circle
        m = ("m", i)
        label = g1.lab[cyc[0][1]] if cyc[0][0] == "a" else g2.lab[cyc[0][1]]
        src = g1 if cyc[0][0] == "a" else g2
        vkind[m] = "int"
        vtype[m] = MARKER
        da, db = ("md", i, 0), ("md", i, 1)
        tail[da] = tail[db] = m
        lab[da] = label
        lab[db] = src.nu_of(label)
        new_tau[da], new_tau[db] = db, da
    out = AbstractGraph(vkind, vtype, tail, lab, new_tau, nu)
    bad = out.validate(allow_two_valent=True)
    if bad:
        raise GraphError("invalid glue result: %s" % bad)
    return out


def disjoint_union(g1, g2):
    vkind, vtype, tail, lab, tau, nu = {}, {}, {}, {}, {}, {}
    for g, tag in ((g1, "a"), (g2, "b")):
        for v, k in g.vkind.items():
            vkind[(tag, v)] = k
            if v in g.vtype:
                vtype[(tag, v)] = g.vtype[v]
        for d in g.tail:
            tail[(tag, d)] = (tag, g.tail[d])
            lab[(tag, d)] = g.lab[d]
            tau[(tag, d)] = (tag, g.tau[d])
        nu.update(g.nu)
    return AbstractGraph(vkind, vtype, tail, lab, tau, nu)


def components(g):
    """Connected components as sets of vertices."""
    seen = set()
    comps = []
    for v0 in sorted(g.vkind, key=repr):
        if v0 in seen:
            continue
        comp = set()
        stack = [v0]
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            for d in g.star[v]:
                stack.append(g.head(d))
        seen |= comp
        comps.append(comp)
    return comps
