"""Surface webs as combinatorial maps.

A web is a graph carried by a surface: darts with a rotation at every vertex,
an edge pairing with twist bits, labeled edge directions, boundary circles
with marked slots for external vertices, marker pseudo-vertices carrying free
circles, and region records assigning walk cycles to faces with topology tags
(genus, crosscaps). Faces are derived; webs are immutable values compared by
canonical keys.
"""

from __future__ import annotations

import itertools

from .agraph import MARKER, AbstractGraph


class WebError(Exception):
    pass


ORIENTED = "oriented"
UNORIENTED = "unoriented"


class Region:
    """A face of the web: a set of walk cycles bounding one component of
    F minus the graph, with its topology tag."""

    __slots__ = ("walks", "genus", "crosscaps")

    def __init__(self, walks, genus=0, crosscaps=0):
        self.walks = frozenset(walks)
        self.genus = genus
        self.crosscaps = crosscaps

    def euler(self, nwalks=None):
        return 2 - 2 * self.genus - self.crosscaps - len(self.walks)

    def __repr__(self):
        return "Region(%s,g=%d,k=%d)" % (sorted(self.walks), self.genus, self.crosscaps)


class Walk:
    __slots__ = ("idx", "items", "slots", "arcs")

    def __init__(self, idx, items):
        self.idx = idx
        self.items = items  # cyclic list of ("s", dart, side) and ("a", bid, k)
        self.slots = frozenset(it for it in items if it[0] == "s")
        self.arcs = frozenset(it for it in items if it[0] == "a")

    @property
    def sides(self):
        # each edge side-object appears as two local slots
        return len(self.slots) // 2 if not self.arcs else None

    def edges_of(self, web):
        out = []
        for kind, d, s in sorted(self.items, key=repr):
            if kind == "s":
                out.append(web.edge_of(d))
        return out

    def __repr__(self):
        return "Walk(%d,%s)" % (self.idx, self.items)


class SurfaceWeb:
    __slots__ = ("category", "nu", "vat", "nxt", "eps", "twist", "lab",
                 "vkind", "vtype", "ext_pos", "boundary", "regions_decl",
                 "over", "_walks", "_regions", "_key", "_keyfree")

    def __init__(self, category, vkind, vtype, vat, nxt, eps, twist, lab,
                 ext_pos, boundary, regions=(), nu=None, over=None):
        self.category = category
        self.nu = dict(nu) if nu else {}
        self.vkind = dict(vkind)
        self.vtype = dict(vtype)
        self.vat = dict(vat)
        self.nxt = dict(nxt)
        self.eps = dict(eps)
        self.twist = dict(twist)
        self.lab = dict(lab)
        self.ext_pos = dict(ext_pos)      # external vertex -> (bid, slot)
        self.boundary = list(boundary)    # bid -> (nslots, {slot: mark})
        self.regions_decl = list(regions)  # (list of anchors, genus, crosscaps)
        # crossing vertices: frozenset of the two darts of the over strand
        self.over = {v: frozenset(p) for v, p in (over or {}).items()}
        self._walks = None
        self._regions = None
        self._key = None
        self._keyfree = None

    # -- basics ---------------------------------------------------------------

    def darts(self):
        return sorted(self.vat, key=repr)

    def edge_of(self, d):
        return (d, self.eps[d]) if repr(d) <= repr(self.eps[d]) else (self.eps[d], d)

    def edges(self):
        seen = set()
        for d in self.darts():
            if d not in seen:
                seen.add(d)
                seen.add(self.eps[d])
                yield (d, self.eps[d])

    def star(self, v):
        out = []
        for d, u in self.vat.items():
            if u == v:
                out.append(d)
        return sorted(out, key=repr)

    def rotation(self, v):
        """The rotation cycle at v as an ordered list starting at the
        repr-smallest dart."""
        ds = self.star(v)
        if not ds:
            return []
        start = ds[0]
        out = [start]
        cur = self.nxt[start]
        while cur != start:
            out.append(cur)
            cur = self.nxt[cur]
        return out

    def nu_of(self, label):
        return self.nu.get(label, label)

    def prev_dart(self, d):
        cur = d
        while self.nxt[cur] != d:
            cur = self.nxt[cur]
        return cur

    def vertices(self):
        return sorted(self.vkind, key=repr)

    def internal_vertices(self):
        return [v for v in self.vertices() if self.vkind[v] == "int"]

    def external_vertices(self):
        return [v for v in self.vertices() if self.vkind[v] == "ext"]

    def n_edges(self):
        return len(self.vat) // 2

    # -- walks and regions ------------------------------------------------------

    def walks(self):
        if self._walks is not None:
            return self._walks
        # Nodes: local slots ("s", dart, side) with ports X (edge side-object)
        # and L (corner/boundary hookup); arcs ("a", bid, k) with ports
        # "start"/"end" joined internally. pair maps ports across nodes.
        pair = {}

        def join(p, q):
            pair[p] = q
            pair[q] = p

        for d in self.vat:
            e = self.eps[d]
            t = self.twist[d]
            # twist 0 joins L(d)-R(e), twist 1 joins L(d)-L(e)
            if repr(d) <= repr(e):
                join((("s", d, 0), "X"), (("s", e, 1 ^ t), "X"))
                join((("s", d, 1), "X"), (("s", e, 0 ^ t), "X"))
        for d, v in self.vat.items():
            if self.vkind[v] != "ext":
                join((("s", d, 0), "L"), (("s", self.nxt[d], 1), "L"))
        for bid, (nslots, marks) in enumerate(self.boundary):
            occupants = {k: x for x, (b, k) in self.ext_pos.items() if b == bid}
            if nslots == 0:
                a = ("a", bid, 0)
                join((a, "end"), (a, "start"))
                continue
            for k in range(nslots):
                prev_arc = ("a", bid, (k - 1) % nslots)
                this_arc = ("a", bid, k)
                if k in occupants:
                    d = self.star(occupants[k])[0]
                    join((prev_arc, "end"), (("s", d, 0), "L"))
                    join((("s", d, 1), "L"), (this_arc, "start"))
                else:
                    join((prev_arc, "end"), (this_arc, "start"))

        def other_port(port):
            node, p = port
            if node[0] == "s":
                return (node, "X" if p == "L" else "L")
            return (node, "end" if p == "start" else "start")

        visited = set()
        walks = []
        for port in sorted(pair, key=repr):
            if port[0] in visited:
                continue
            items = []
            cur = port
            while True:
                node = cur[0]
                if node in visited:
                    break
                visited.add(node)
                items.append(node)
                cur = pair[other_port(cur)]
            walks.append(Walk(len(walks), items))
        self._walks = walks
        return walks

    def regions(self):
        """Partition of walks into faces, honoring declared region records."""
        if self._regions is not None:
            return self._regions
        walks = self.walks()
        anchor_to_walk = {}
        for w in walks:
            for it in w.items:
                anchor_to_walk[it] = w.idx
        used = set()
        regions = []
        for anchors, g, k in self.regions_decl:
            widxs = set()
            for a in anchors:
                if a[0] == "bnd":
                    key = ("a", a[1], 0)
                else:
                    key = ("s", a[1], a[2])
                if key not in anchor_to_walk:
                    raise WebError("region anchor %r not on any walk" % (a,))
                widxs.add(anchor_to_walk[key])
            regions.append(Region(widxs, g, k))
            used |= widxs
        for w in walks:
            if w.idx not in used:
                regions.append(Region({w.idx}))
        self._regions = regions
        return regions

    def euler(self):
        """Euler characteristic of the carried surface."""
        V = len(self.vkind)
        E = self.n_edges()
        phantom = 0
        arcs = 0
        for bid, (nslots, marks) in enumerate(self.boundary):
            occ = sum(1 for x, (b, k) in self.ext_pos.items() if b == bid)
            if nslots == 0:
                phantom += 1
                arcs += 1
            else:
                phantom += nslots - occ
                arcs += nslots
        return V + phantom - (E + arcs) + sum(r.euler() for r in self.regions())

    # -- faces -------------------------------------------------------------------

    def faces(self):
        """Classified faces: list of dicts with region, kind and data."""
        out = []
        walks = self.walks()
        for r in self.regions():
            ws = [walks[i] for i in sorted(r.walks)]
            has_arcs = any(w.arcs for w in ws)
            kind = None
            data = {}
            if r.genus == 0 and r.crosscaps == 0 and len(ws) == 1 and not has_arcs:
                w = ws[0]
                n = len(w.slots) // 2
                edges = {}
                for (_, d, s) in w.slots:
                    edges.setdefault(self.edge_of(d), 0)
                    edges[self.edge_of(d)] += 1
                if n == 1 and all(
                        self.vtype.get(self.vat[d]) == MARKER for (_, d, s) in w.slots):
                    kind = "0-gon"
                else:
                    kind = "n-gon"
                    data["n"] = n
                    data["true"] = all(c <= 2 for c in edges.values()) and \
                        len(edges) == n
            elif r.genus == 0 and r.crosscaps == 0 and len(ws) == 1 and has_arcs:
                kind = "boundary-disk"
            elif (r.genus == 0 and r.crosscaps == 0 and len(ws) == 2):
                pure_b = [w for w in ws if w.arcs and not w.slots]
                pure_g = [w for w in ws if w.slots and not w.arcs]
                if len(pure_b) == 1 and len(pure_g) == 1:
                    kind = "boundary-annulus"
                else:
                    kind = "other"
            else:
                kind = "other"
            if kind == "other":
                data = {"genus": r.genus, "crosscaps": r.crosscaps,
                        "walks": len(ws)}
            out.append({"region": r, "kind": kind, **data})
        return out

    def is_simple(self):
        """Connected, and every face is a disk (internal or touching the
        boundary) or a boundary-annulus."""
        if not self._connected():
            return False
        for f in self.faces():
            if f["kind"] == "other":
                return False
        return True

    def _connected(self):
        vs = [v for v in self.vkind if self.vkind[v] != "ext" or True]
        if not vs:
            return True
        # connectivity of the graph (ignoring the boundary)
        seen = set()
        comps = 0
        for v0 in sorted(self.vkind, key=repr):
            if v0 in seen:
                continue
            comps += 1
            stack = [v0]
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                for d in self.star(v):
                    stack.append(self.vat[self.eps[d]])
        return comps <= 1

    # -- validation ---------------------------------------------------------------

    def validate(self, expected_euler=None):
        bad = []
        for d in self.vat:
            if self.eps.get(self.eps.get(d)) != d or self.eps[d] == d:
                bad.append("eps-involution:%r" % (d,))
            if self.twist[d] != self.twist[self.eps[d]]:
                bad.append("twist-mismatch:%r" % (d,))
            if self.nu_of(self.lab[d]) != self.lab[self.eps[d]]:
                bad.append("label-involution:%r" % (d,))
        for v, k in self.vkind.items():
            ds = self.star(v)
            if k == "ext":
                if len(ds) != 1:
                    bad.append("external-valency:%r" % (v,))
                if v not in self.ext_pos:
                    bad.append("external-unplaced:%r" % (v,))
            else:
                # rotation must be a single cycle on the star
                if ds:
                    rot = self.rotation(v)
                    if sorted(rot, key=repr) != ds:
                        bad.append("rotation-cycle:%r" % (v,))
            if self.vtype.get(v) == MARKER:
                if len(ds) != 2 or self.eps[ds[0]] != ds[1]:
                    bad.append("marker-shape:%r" % (v,))
        # free circles must carry exactly one marker
        for v in self.vkind:
            if self.vtype.get(v) == MARKER:
                continue
        if self.category == ORIENTED:
            if not self.orientable():
                bad.append("orientability")
            if any(self.twist[d] for d in self.twist):
                bad.append("oriented-twist-presentation")
            for r in self.regions():
                if r.crosscaps:
                    bad.append("oriented-crosscaps")
        try:
            walks = self.walks()
            cover = set()
            for r in self.regions():
                if cover & r.walks:
                    bad.append("region-overlap")
                cover |= r.walks
            if cover != {w.idx for w in walks}:
                bad.append("region-cover")
        except WebError as e:
            bad.append(str(e))
        if expected_euler is not None and not bad:
            if self.euler() != expected_euler:
                bad.append("euler:%d!=%d" % (self.euler(), expected_euler))
        return bad

    def orientable(self):
        """True iff twists can be gauged to zero (graph side only)."""
        flip = {}
        for v0 in sorted(self.vkind, key=repr):
            if v0 in flip:
                continue
            flip[v0] = 0
            stack = [v0]
            while stack:
                v = stack.pop()
                for d in self.star(v):
                    w = self.vat[self.eps[d]]
                    want = self.twist[d] ^ flip[v]
                    if w in flip:
                        if flip[w] != want:
                            return False
                    else:
                        flip[w] = want
                        stack.append(w)
        return True

    # -- canonical key -------------------------------------------------------------

    def canonical_key(self, rigid_boundary=True):
        if rigid_boundary and self._key is not None:
            return self._key
        if not rigid_boundary and self._keyfree is not None:
            return self._keyfree
        from .canon import web_key
        k = web_key(self, rigid_boundary)
        if rigid_boundary:
            self._key = k
        else:
            self._keyfree = k
        return k

    def equivalent(self, other):
        if self.category != other.category:
            raise WebError("category mismatch")
        if [b[0] for b in self.boundary] != [b[0] for b in other.boundary] or \
           [sorted(b[1].items()) for b in self.boundary] != \
           [sorted(b[1].items()) for b in other.boundary]:
            raise WebError("boundary parametrization mismatch")
        return self.canonical_key() == other.canonical_key()

    # -- conversions ----------------------------------------------------------------

    def to_abstract(self):
        """Forget the embedding: underlying abstract graph (markers kept)."""
        vkind = {v: ("ext" if k == "ext" else "int") for v, k in self.vkind.items()}
        vtype = {v: t for v, t in self.vtype.items() if vkind[v] == "int"}
        return AbstractGraph(vkind, vtype, dict(self.vat), dict(self.lab),
                             dict(self.eps), dict(self.nu))

    def relabeled(self, vmap=None, dmap=None):
        vmap = vmap or {v: v for v in self.vkind}
        dmap = dmap or {d: d for d in self.vat}
        regions = []
        for anchors, g, k in self.regions_decl:
            regions.append(([a if a[0] == "bnd" else ("dart", dmap[a[1]], a[2])
                             for a in anchors], g, k))
        return SurfaceWeb(
            self.category,
            {vmap[v]: k for v, k in self.vkind.items()},
            {vmap[v]: t for v, t in self.vtype.items()},
            {dmap[d]: vmap[v] for d, v in self.vat.items()},
            {dmap[d]: dmap[e] for d, e in self.nxt.items()},
            {dmap[d]: dmap[e] for d, e in self.eps.items()},
            {dmap[d]: t for d, t in self.twist.items()},
            {dmap[d]: l for d, l in self.lab.items()},
            {vmap[v]: p for v, p in self.ext_pos.items()},
            [(n, dict(m)) for n, m in self.boundary],
            regions, self.nu,
            {vmap[v]: frozenset(dmap[d] for d in p)
             for v, p in self.over.items()})

    def flipped(self, v):
        """Gauge move: reverse the rotation at v and toggle incident twists.
        Region anchors on darts at v swap sides."""
        if self.vkind[v] == "ext":
            return self
        star = set(self.star(v))
        nxt = dict(self.nxt)
        rot = self.rotation(v)
        for i, d in enumerate(rot):
            nxt[rot[(i + 1) % len(rot)]] = d
        twist = dict(self.twist)
        for d in star:
            e = self.eps[d]
            if e in star:
                continue  # loop: toggled twice, net zero
            twist[d] ^= 1
            twist[e] ^= 1
        regions = []
        for anchors, g, k in self.regions_decl:
            out = []
            for a in anchors:
                if a[0] == "dart" and self.vat[a[1]] == v:
                    out.append(("dart", a[1], a[2] ^ 1))
                else:
                    out.append(a)
            regions.append((out, g, k))
        return SurfaceWeb(self.category, self.vkind, self.vtype, self.vat, nxt,
                          self.eps, twist, self.lab, self.ext_pos,
                          self.boundary, regions, self.nu, self.over)


# ---------------------------------------------------------------------------
# construction helper


def build_web(category, internal, external, edges, boundary, regions=(),
              nu=None, markers=(), over=None):
    """Friendly constructor.

    internal: {v: (vtype, [rotation as list of edge-end references])}
      where an edge-end reference is (edge_index, 0|1).
    external: {x: (bid, slot)}
    edges: list of (end0, lab0, end1, lab1, twist) with end = vertex id
    boundary: list of (nslots, {slot: mark})
    markers: marker vertex ids (each with a single loop edge listed in edges)
    """
    vkind, vtype, vat, nxt, eps, twist, lab, ext_pos = {}, {}, {}, {}, {}, {}, {}, {}
    for v, (t, rot) in internal.items():
        vkind[v] = "int"
        vtype[v] = t
    for m in markers:
        vkind[m] = "int"
        vtype[m] = MARKER
    for x in external:
        vkind[x] = "ext"
        ext_pos[x] = external[x]
    for i, (u, lu, w, lw, t) in enumerate(edges):
        a, b = (i, 0), (i, 1)
        vat[a], vat[b] = u, w
        eps[a], eps[b] = b, a
        twist[a] = twist[b] = t
        lab[a], lab[b] = lu, lw
    # rotations
    for v, (t, rot) in internal.items():
        ds = [tuple(r) for r in rot]
        for i, d in enumerate(ds):
            nxt[d] = ds[(i + 1) % len(ds)]
    for m in markers:
        ds = sorted((d for d, v in vat.items() if v == m), key=repr)
        if len(ds) != 2:
            raise WebError("marker %r must carry one loop edge" % (m,))
        nxt[ds[0]], nxt[ds[1]] = ds[1], ds[0]
    for x in external:
        ds = [d for d, v in vat.items() if v == x]
        if len(ds) != 1:
            raise WebError("external %r must be 1-valent" % (x,))
        nxt[ds[0]] = ds[0]
    regions2 = []
    for anchors, g, k in regions:
        regions2.append(([a if a[0] == "bnd" else ("dart", tuple(a[1]), a[2])
                          for a in anchors], g, k))
    over2 = {v: frozenset(tuple(d) for d in p) for v, p in (over or {}).items()}
    w = SurfaceWeb(category, vkind, vtype, vat, nxt, eps, twist, lab, ext_pos,
                   boundary, regions2, nu, over2)
    return w


# ---------------------------------------------------------------------------
# framings


def _capped_walks(g, rot, twist):
    """Walk cycles of an abstract graph with chosen rotations and twists,
    capping around external tips. rot: {v: [darts...]} cyclic; twist: {edge
    frozenset: 0|1} keyed by frozenset of the two directions."""
    nxt = {}
    for v, ds in rot.items():
        for i, d in enumerate(ds):
            nxt[d] = ds[(i + 1) % len(ds)]
    pair = {}

    def join(p, q):
        pair[p] = q
        pair[q] = p

    for d in g.tail:
        e = g.tau[d]
        t = twist[frozenset((d, e))]
        if repr(d) <= repr(e):
            join((("s", d, 0), "X"), (("s", e, 1 ^ t), "X"))
            join((("s", d, 1), "X"), (("s", e, 0 ^ t), "X"))
    for v in g.vkind:
        if g.vkind[v] == "ext":
            d = g.star[v][0]
            join((("s", d, 0), "L"), (("s", d, 1), "L"))  # cap around the tip
        else:
            ds = rot[v]
            for i, d in enumerate(ds):
                join((("s", d, 0), "L"), (("s", ds[(i + 1) % len(ds)], 1), "L"))

    def other(port):
        node, p = port
        return (node, "X" if p == "L" else "L")

    visited = set()
    walks = []
    for port in sorted(pair, key=repr):
        if port[0] in visited:
            continue
        items = []
        cur = port
        while True:
            node = cur[0]
            if node in visited:
                break
            visited.add(node)
            items.append(node)
            cur = pair[other(cur)]
        walks.append(items)
    return walks


def _framing_signature(g, rot, twist, reflect_allowed):
    """Canonical form of (rot, twist) modulo vertex flips (and reflection),
    with the graph fixed pointwise."""
    ivs = [v for v in sorted(g.vkind, key=repr) if g.vkind[v] == "int"
           and g.vtype.get(v) != MARKER]
    best = None
    for refl in ((0, 1) if reflect_allowed else (0,)):
        for bits in range(1 << len(ivs)):
            flip = {v: (bits >> i) & 1 for i, v in enumerate(ivs)}
            rows = []
            for v in sorted(g.vkind, key=repr):
                if g.vkind[v] != "int":
                    continue
                ds = rot.get(v, g.star[v][:])
                if len(ds) > 1:
                    seq = list(reversed(ds)) if flip.get(v, 0) ^ refl else list(ds)
                    k = seq.index(min(seq, key=repr))
                    seq = seq[k:] + seq[:k]
                else:
                    seq = list(ds)
                rows.append("%r:%s" % (v, ",".join(repr(d) for d in seq)))
            for d, e in sorted((sorted(e, key=repr) for e in
                                (set(map(frozenset, ((d, g.tau[d]) for d in g.tail))))),
                               key=repr):
                t = twist[frozenset((d, e))]
                u, w = g.tail[d], g.tail[e]
                eff = t ^ flip.get(u, 0) ^ flip.get(w, 0)
                rows.append("t%r=%d" % (d, eff))
            code = "|".join(rows)
            if best is None or code < best:
                best = code
    return best


def framing_webs(g, category):
    """All framings of an abstract graph as surface webs, up to vertex flips
    and (unoriented category) reflection. Every face of a framing touches the
    boundary."""
    ivs = [v for v in sorted(g.vkind, key=repr) if g.vkind[v] == "int"]
    rot_choices = []
    for v in ivs:
        ds = g.star[v]
        if len(ds) <= 2:
            rot_choices.append([tuple(ds)])
        else:
            first = ds[0]
            rot_choices.append([(first,) + p for p in
                                itertools.permutations(ds[1:])])
    edges = sorted({frozenset((d, g.tau[d])) for d in g.tail}, key=repr)
    out = []
    seen = set()
    for rots in itertools.product(*rot_choices):
        rot = dict(zip(ivs, rots))
        for bits in range(1 << len(edges)):
            twist = {e: (bits >> i) & 1 for i, e in enumerate(edges)}
            if category == ORIENTED and not _orientable_choice(g, twist):
                continue
            sig = _framing_signature(g, rot, twist, category != ORIENTED)
            if sig in seen:
                continue
            seen.add(sig)
            out.append(_framing_to_web(g, rot, twist, category))
    return out


def _orientable_choice(g, twist):
    flip = {}
    for v0 in sorted(g.vkind, key=repr):
        if v0 in flip:
            continue
        flip[v0] = 0
        stack = [v0]
        while stack:
            v = stack.pop()
            for d in g.star[v]:
                e = g.tau[d]
                w = g.tail[e]
                want = twist[frozenset((d, e))] ^ flip[v]
                if w in flip:
                    if flip[w] != want:
                        return False
                else:
                    flip[w] = want
                    stack.append(w)
    return True


def _framing_to_web(g, rot, twist, category, over=None):
    walks = _capped_walks(g, rot, twist)
    boundary = []
    ext_pos = {}
    regions = []
    flip_leg = set()
    for items in walks:
        exts = []
        bits = {}
        n = len(items)
        for i, (kind, d, side) in enumerate(items):
            v = g.tail[d]
            if g.vkind[v] == "ext" and side == 0:
                exts.append((v, d))
                bits[v] = items[(i + 1) % n] == ("s", d, 1)
        # orient the slot sequence with the walk: caps must read L then R so
        # that the R side continues toward the next slot's L side; tips the
        # walk passes in the opposite local orientation are gauge-flipped by
        # toggling their leg twist
        if exts:
            first_bit = bits[exts[0][0]]
            if not first_bit:
                pass
            for v, d in exts:
                if bits[v] != first_bit:
                    flip_leg.add(v)
            if not first_bit:
                exts.reverse()
                exts = exts[-1:] + exts[:-1]
        bid = len(boundary)
        if exts:
            marks = {}
            for slot, (v, d) in enumerate(exts):
                marks[slot] = g.lab[d]
                ext_pos[v] = (bid, slot)
            boundary.append((len(exts), marks))
        else:
            boundary.append((0, {}))
            # collar region: this walk together with its parallel boundary circle
            anchor = next(("dart", d, s) for (kind, d, s) in items)
            regions.append(([anchor, ("bnd", bid)], 0, 0))
    vkind = dict(g.vkind)
    vtype = {v: t for v, t in g.vtype.items()}
    nxt = {}
    for v in g.vkind:
        if g.vkind[v] == "ext":
            d = g.star[v][0]
            nxt[d] = d
        else:
            ds = rot.get(v, g.star[v])
            for i, d in enumerate(ds):
                nxt[d] = ds[(i + 1) % len(ds)]
    twist_d = {}
    for d in g.tail:
        twist_d[d] = twist[frozenset((d, g.tau[d]))]
    for v in flip_leg:
        d = g.star[v][0]
        twist_d[d] ^= 1
        twist_d[g.tau[d]] ^= 1
    return SurfaceWeb(category, vkind, vtype, dict(g.tail), nxt, dict(g.tau),
                      twist_d, dict(g.lab), ext_pos, boundary, regions, g.nu,
                      over)


# ---------------------------------------------------------------------------
# WEBG text format


def write_webg(web, ring_line=None):
    lines = ["webg 1", "category %s" % web.category]
    if ring_line:
        lines.append("ring %s" % ring_line)
    flag_name = {}
    for i, d in enumerate(web.darts()):
        flag_name[d] = "f%d" % i
    for v in web.vertices():
        k = web.vkind[v]
        if k == "ext":
            bid, slot = web.ext_pos[v]
            mark = web.boundary[bid][1].get(slot, "-")
            lines.append("vertex %s external boundary %d slot %d mark %s flag %s"
                         % (v, bid, slot, mark, flag_name[web.star(v)[0]]))
        elif web.vtype.get(v) == MARKER:
            lines.append("marker %s rot %s" % (
                v, ",".join(flag_name[d] for d in web.rotation(v))))
        else:
            extra = ""
            if v in web.over:
                extra = " over %s" % ",".join(
                    sorted(flag_name[d] for d in web.over[v]))
            lines.append("vertex %s internal type %s rot %s%s" % (
                v, web.vtype.get(v),
                ",".join(flag_name[d] for d in web.rotation(v)), extra))
    for d, e in web.edges():
        la, lb = web.lab[d], web.lab[e]
        if la == lb:
            lines.append("edge %s %s label %s twist %d" %
                         (flag_name[d], flag_name[e], la, web.twist[d]))
        else:
            lines.append("edge %s %s label %s twist %d dir A" %
                         (flag_name[d], flag_name[e], la, web.twist[d]))
    for bid, (n, marks) in enumerate(web.boundary):
        lines.append("boundary %d slots %d" % (bid, n))
    for anchors, gg, kk in web.regions_decl:
        toks = []
        for a in anchors:
            if a[0] == "bnd":
                toks.append("bnd:%d" % a[1])
            else:
                toks.append("%s.%s" % (flag_name[a[1]], "LR"[a[2]]))
        lines.append("face at %s genus %d crosscaps %d" % (" ".join(toks), gg, kk))
    return "\n".join(lines) + "\n"


def read_webg(text, nu=None, category=None):
    nu = nu or {}
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0].split() != ["webg", "1"]:
        raise WebError("missing webg 1 header")
    cat = category
    vkind, vtype, vat, nxt, eps, twist, lab, ext_pos = ({}, {}, {}, {}, {}, {},
                                                        {}, {})
    boundary = {}
    regions = []
    rot_lines = []
    ext_lines = []
    edge_lines = []
    over_lines = {}
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "category":
            cat = parts[1]
        elif parts[0] == "ring":
            pass
        elif parts[0] == "vertex" and "internal" in parts:
            v = parts[1]
            vkind[v] = "int"
            vtype[v] = parts[parts.index("type") + 1]
            rot_lines.append((v, parts[parts.index("rot") + 1].split(",")))
            if "over" in parts:
                over_lines[v] = parts[parts.index("over") + 1].split(",")
        elif parts[0] == "marker":
            v = parts[1]
            vkind[v] = "int"
            vtype[v] = MARKER
            rot_lines.append((v, parts[parts.index("rot") + 1].split(",")))
        elif parts[0] == "vertex" and "external" in parts:
            v = parts[1]
            vkind[v] = "ext"
            bid = int(parts[parts.index("boundary") + 1])
            slot = int(parts[parts.index("slot") + 1])
            mark = parts[parts.index("mark") + 1]
            flag = parts[parts.index("flag") + 1] if "flag" in parts else None
            ext_lines.append((v, bid, slot, mark, flag))
        elif parts[0] == "edge":
            edge_lines.append(parts)
        elif parts[0] == "boundary":
            bid = int(parts[1])
            boundary[bid] = int(parts[parts.index("slots") + 1])
        elif parts[0] == "face":
            at = parts.index("at")
            gi = parts.index("genus")
            ki = parts.index("crosscaps")
            anchors = []
            for tok in parts[at + 1:gi]:
                if tok.startswith("bnd:"):
                    anchors.append(("bnd", int(tok[4:])))
                else:
                    f, s = tok.rsplit(".", 1)
                    anchors.append(("dart", f, "LR".index(s)))
            regions.append((anchors, int(parts[gi + 1]), int(parts[ki + 1])))
        else:
            raise WebError("bad WEBG line: %r" % ln)
    for parts in edge_lines:
        a, b = parts[1], parts[2]
        l = parts[parts.index("label") + 1]
        t = int(parts[parts.index("twist") + 1])
        eps[a], eps[b] = b, a
        twist[a] = twist[b] = t
        if "dir" in parts:
            which = parts[parts.index("dir") + 1]
            la = l if which == "A" else nu.get(l, l)
        else:
            la = l
        lab[a] = la
        lab[b] = nu.get(la, la)
    for v, rot in rot_lines:
        for i, f in enumerate(rot):
            vat[f] = v
            nxt[f] = rot[(i + 1) % len(rot)]
    unplaced = [f for f in eps if f not in vat]
    for v, bid, slot, mark, flag in ext_lines:
        if flag is None:
            if len(unplaced) != 1:
                raise WebError("external %s needs an explicit flag" % v)
            flag = unplaced[0]
        ext_pos[v] = (bid, slot)
        vat[flag] = v
        nxt[flag] = flag
        boundary.setdefault(bid, 0)
    nb = max(boundary) + 1 if boundary else 0
    blist = []
    for bid in range(nb):
        marks = {}
        for v, b2, slot, mark, flag in ext_lines:
            if b2 == bid and mark != "-":
                marks[slot] = mark
        blist.append((boundary.get(bid, 0), marks))
    regions2 = [([a if a[0] == "bnd" else ("dart", a[1], a[2]) for a in anchors],
                 g_, k_) for anchors, g_, k_ in regions]
    if cat is None:
        raise WebError("category not declared")
    over = {v: frozenset(fs) for v, fs in over_lines.items()}
    return SurfaceWeb(cat, vkind, vtype, vat, nxt, eps, twist, lab, ext_pos,
                      blist, regions2, nu, over)
