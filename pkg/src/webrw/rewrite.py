"""Rule matching, application, and deterministic normal forms.

A match embeds a rule's left-hand pattern into a host web as an exact patch:
internal vertices map by full star bijections (rotation-exact, reflected only
in the unoriented category), pattern external legs end at cut points in the
interior of host edges, and every internal face of the pattern ambient must be
a host face with the same walk set and topology tag. Application removes the
patch, splices each right-hand term into the hole, and recomputes faces with
region tags tracked through the surgery.
"""

from __future__ import annotations

from .agraph import MARKER
from .smap import ORIENTED, Region, SurfaceWeb


class RewriteError(Exception):
    pass


class Match:
    __slots__ = ("vmap", "dmap", "flip")

    def __init__(self, vmap, dmap, flip):
        self.vmap = vmap  # pattern vertex -> host vertex
        self.dmap = dmap  # pattern dart -> host dart
        self.flip = flip  # pattern vertex -> 0|1 side correspondence

    def key(self):
        return tuple(sorted((repr(a), repr(b)) for a, b in self.dmap.items()))

    def __repr__(self):
        return "Match(%d darts)" % len(self.dmap)


class Rule:
    def __init__(self, rid, lhs, rhs, decrease="empirical"):
        self.rid = rid
        self.lhs = lhs            # SurfaceWeb pattern
        self.rhs = rhs            # list of (RingElem, SurfaceWeb)
        self.decrease = decrease  # "proven" claim stat name or "empirical"
        self._check()

    def _check(self):
        base = [(n, tuple(sorted(m.items()))) for n, m in self.lhs.boundary]
        for c, t in self.rhs:
            tb = [(n, tuple(sorted(m.items()))) for n, m in t.boundary]
            if tb != base:
                raise RewriteError("rule %s: rhs boundary differs from lhs" % self.rid)

    def __repr__(self):
        return "Rule(%s)" % self.rid


class RuleSystem:
    def __init__(self, name, ring_cfg, category, vertex_types, rules, measure,
                 nu=None):
        self.name = name
        self.ring = ring_cfg
        self.category = category
        self.vertex_types = dict(vertex_types)
        self.rules = list(rules)
        self.measure = list(measure)  # ordered (stat name, fn(web) -> int)
        self.nu = dict(nu) if nu else {}

    def measure_of(self, web):
        return tuple(fn(web) for name, fn in self.measure)

    def rule_by_id(self, rid):
        for r in self.rules:
            if r.rid == rid:
                return r
        raise KeyError(rid)

    def without(self, rids):
        return RuleSystem(self.name + "-without-" + ",".join(rids), self.ring,
                          self.category, self.vertex_types,
                          [r for r in self.rules if r.rid not in rids],
                          self.measure, self.nu)


# ---------------------------------------------------------------------------
# matching


def matches(host, rule):
    """Complete duplicate-free list of matches of rule.lhs in host."""
    pat = rule.lhs
    comps = _pattern_components(pat)
    if not comps:
        return []
    out = []
    _match_components(host, pat, comps, {}, {}, {}, out)
    seen = set()
    uniq = []
    for m in out:
        k = m.key()
        if k not in seen:
            seen.add(k)
            uniq.append(m)
    return [m for m in uniq if _faces_ok(host, pat, m)]


def _pattern_components(pat):
    seen = set()
    comps = []
    for v0 in sorted(pat.vkind, key=repr):
        if v0 in seen or pat.vkind[v0] == "ext":
            continue
        comp = set()
        stack = [v0]
        while stack:
            v = stack.pop()
            if v in comp or pat.vkind[v] == "ext":
                continue
            comp.add(v)
            for d in pat.star(v):
                stack.append(pat.vat[pat.eps[d]])
        seen |= comp
        comps.append(sorted(comp, key=repr))
    return comps


def _match_components(host, pat, comps, vmap, dmap, flip, out):
    if not comps:
        out.append(Match(dict(vmap), dict(dmap), dict(flip)))
        return
    comp, rest = comps[0], comps[1:]
    seed = comp[0]
    prot = pat.rotation(seed)
    sides = (0,) if host.category == ORIENTED else (0, 1)
    for V in host.internal_vertices():
        if host.vtype.get(V) != pat.vtype.get(seed):
            continue
        hrot = host.rotation(V)
        if len(hrot) != len(prot):
            continue
        for off in range(len(hrot)):
            for s in sides:
                trial_v, trial_d, trial_f = dict(vmap), dict(dmap), dict(flip)
                if _grow(host, pat, seed, V, off, s, trial_v, trial_d, trial_f):
                    _match_components(host, pat, rest, trial_v, trial_d,
                                      trial_f, out)


def _rot_from(web, d, reverse=False):
    rot = web.rotation(web.vat[d])
    i = rot.index(d)
    seq = rot[i:] + rot[:i]
    if reverse:
        seq = [seq[0]] + list(reversed(seq[1:]))
    return seq


def _grow(host, pat, seed, V, off, s, vmap, dmap, flip):
    if V in vmap.values():
        return False
    prot = pat.rotation(seed)
    hrot = host.rotation(V)
    hseq = hrot[off:] + hrot[:off]
    if s:
        hseq = [hseq[0]] + list(reversed(hseq[1:]))
    vmap[seed] = V
    flip[seed] = s
    if not _over_ok(pat, host, seed, V, prot, hseq, s):
        return False
    for pd, hd in zip(prot, hseq):
        if pat.lab[pd] != host.lab[hd]:
            return False
        dmap[pd] = hd
    queue = [seed]
    while queue:
        v = queue.pop()
        for pd in pat.star(v):
            hd = dmap[pd]
            pe, he = pat.eps[pd], host.eps[hd]
            w = pat.vat[pe]
            if pat.vkind[w] == "ext":
                continue
            W = host.vat[he]
            want = flip[v] ^ pat.twist[pd] ^ host.twist[hd]
            if host.category == ORIENTED and want:
                return False
            if w in vmap:
                if vmap[w] != W or flip[w] != want or dmap.get(pe) != he:
                    return False
                continue
            if W in vmap.values():
                return False
            if pat.vtype.get(w) != host.vtype.get(W):
                return False
            wrot = _rot_from(pat, pe)
            Wrot = _rot_from(host, he, reverse=bool(want))
            if len(wrot) != len(Wrot):
                return False
            if not _over_ok(pat, host, w, W, wrot, Wrot, want):
                return False
            ok = True
            for a, b in zip(wrot, Wrot):
                if pat.lab[a] != host.lab[b]:
                    ok = False
                    break
                dmap[a] = b
            if not ok:
                return False
            vmap[w] = W
            flip[w] = want
            queue.append(w)
    # injectivity on darts and cut-edge discipline
    img = list(dmap.values())
    if len(set(img)) != len(img):
        return False
    internal_img = {hd for pd, hd in dmap.items()
                    if pat.vkind[pat.vat[pat.eps[pd]]] != "ext"}
    leg_img = {hd for pd, hd in dmap.items()
               if pat.vkind[pat.vat[pat.eps[pd]]] == "ext"}
    for hd in leg_img:
        he = host.eps[hd]
        if he in internal_img:
            return False
    return True


def _over_ok(pat, host, v, V, prot, hseq, flag):
    """Crossing over-strand compatibility. A reflected alignment swaps
    over and under (the crossing lives in the oriented I-bundle over the
    surface, so reversing the local surface orientation exchanges them)."""
    if (v in pat.over) != (V in host.over):
        return False
    if v not in pat.over:
        return True
    ppos = {i for i, x in enumerate(prot) if x in pat.over[v]}
    hpos = {i for i, x in enumerate(hseq) if x in host.over[V]}
    if flag:
        hpos = set(range(len(hseq))) - hpos
    return ppos == hpos


def _walk_image(pat, m, walk):
    out = set()
    for (_, d, side) in walk.slots:
        out.add(("s", m.dmap[d], side ^ m.flip[pat.vat[d]]))
    return out


def _internal_region_images(host, pat, m):
    """Map each arcless pattern region to the host region realizing it, or
    None if some region fails the exactness condition."""
    host_walks = host.walks()
    slot_to_walk = {}
    for w in host_walks:
        for it in w.items:
            slot_to_walk[it] = w.idx
    walk_to_region = {}
    for ri, r in enumerate(host.regions()):
        for widx in r.walks:
            walk_to_region[widx] = ri
    pat_walks = pat.walks()
    result = {}
    for pi, r in enumerate(pat.regions()):
        ws = [pat_walks[i] for i in sorted(r.walks)]
        if any(w.arcs for w in ws):
            continue
        img_widx = set()
        img_slots = set()
        for w in ws:
            img = _walk_image(pat, m, w)
            img_slots |= img
            it = next(iter(img))
            if it not in slot_to_walk:
                return None
            img_widx.add(slot_to_walk[it])
        ri = walk_to_region.get(next(iter(img_widx)))
        if ri is None:
            return None
        hr = host.regions()[ri]
        if hr.walks != frozenset(img_widx):
            return None
        if (hr.genus, hr.crosscaps) != (r.genus, r.crosscaps):
            return None
        hslots = set()
        for widx in hr.walks:
            hslots |= host_walks[widx].slots
        if hslots != img_slots:
            return None
        result[pi] = ri
    return result


def _faces_ok(host, pat, m):
    return _internal_region_images(host, pat, m) is not None


# ---------------------------------------------------------------------------
# application


def apply_match(host, rule, m, tag="T"):
    """Apply each right-hand term at the matched patch; returns a list of
    (coefficient, SurfaceWeb)."""
    pat = rule.lhs
    # re-gauge host so every matched vertex has flip 0
    for v in sorted(m.flip, key=repr):
        if m.flip[v]:
            host = host.flipped(m.vmap[v])
    m = Match(m.vmap, m.dmap, {v: 0 for v in m.flip})
    ctx = _PatchContext(host, pat, m)
    out = []
    chi = host.euler()
    for i, (coeff, term) in enumerate(rule.rhs):
        res = ctx.splice(term, (tag, i))
        if res.vat or res.boundary:
            if res.euler() != chi:
                raise RewriteError(
                    "euler not conserved: %d -> %d applying %s"
                    % (chi, res.euler(), rule.rid))
        out.append((coeff, res))
    return out


class _PatchContext:
    def __init__(self, host, pat, m):
        self.host = host
        self.pat = pat
        self.m = m
        self.host_walks = host.walks()
        self.slot_to_walk = {}
        for w in self.host_walks:
            for it in w.items:
                self.slot_to_walk[it] = w.idx
        self.walk_to_region = {}
        self.host_regions = host.regions()
        for ri, r in enumerate(self.host_regions):
            for widx in r.walks:
                self.walk_to_region[widx] = ri
        img = _internal_region_images(host, pat, m)
        if img is None:
            raise RewriteError("invalid match")
        self.consumed = set(img.values())
        self.matched_vs = set(m.vmap.values())
        self.internal_img = {hd for pd, hd in m.dmap.items()
                             if pat.vkind[pat.vat[pat.eps[pd]]] != "ext"}
        # legs: slot position -> (pattern dart at vertex, host dart)
        self.legs = {}
        for pd, hd in m.dmap.items():
            x = pat.vat[pat.eps[pd]]
            if pat.vkind[x] == "ext":
                self.legs[pat.ext_pos[x]] = (pd, hd)
        # old host region bordering each pattern boundary arc, and the list of
        # slot-free pattern boundary circles with their outside host region
        self.arc_old = {}
        self.circle_cuts = []
        pat_walks = pat.walks()
        for w in pat_walks:
            if not w.arcs:
                continue
            sslots = [it for it in w.items if it[0] == "s" and it[1] in m.dmap]
            if sslots:
                img_it = ("s", m.dmap[sslots[0][1]],
                          sslots[0][2] ^ m.flip[pat.vat[sslots[0][1]]])
                old_ri = self.walk_to_region[self.slot_to_walk[img_it]]
            else:
                old_ri = None
                for r in pat.regions():
                    if w.idx in r.walks and len(r.walks) >= 2:
                        other = next(i for i in sorted(r.walks) if i != w.idx)
                        ow = pat_walks[other]
                        it = next(iter(sorted(ow.slots, key=repr)))
                        img_it = ("s", m.dmap[it[1]],
                                  it[2] ^ m.flip[pat.vat[it[1]]])
                        old_ri = self.walk_to_region[self.slot_to_walk[img_it]]
                        break
                if old_ri is None:
                    raise RewriteError("ungrouped slot-free pattern boundary")
                bid = next(iter(w.arcs))[1]
                self.circle_cuts.append((bid, old_ri))
                continue  # circle cuts join along S^1: no arc-join accounting
            for a in w.arcs:
                self.arc_old[a] = old_ri

    def splice(self, term, tag):
        host, pat, m = self.host, self.pat, self.m
        # salt the tag so fresh names never collide with surviving ones
        existing = set()
        for d in host.vat:
            existing.add(d if not isinstance(d, tuple) else d[:1])
        for v in host.vkind:
            existing.add(v if not isinstance(v, tuple) else v[:1])
        salt = 0
        while ((tag, salt),) in existing or (tag, salt) in existing:
            salt += 1
        tag = (tag, salt)
        tname = lambda x: (tag, x)
        vkind, vtype, vat, nxt, eps, twist, lab, ext_pos = ({}, {}, {}, {}, {},
                                                            {}, {}, {})
        over = {}
        keep = set()
        for d in host.vat:
            if d in self.internal_img or host.vat[d] in self.matched_vs:
                continue
            if d in {hd for (pd, hd) in self.legs.values()}:
                continue
            keep.add(d)
        for v, k in host.vkind.items():
            if v in self.matched_vs:
                continue
            vkind[v] = k
            if v in host.vtype:
                vtype[v] = host.vtype[v]
            if v in host.over:
                over[v] = host.over[v]
            if k == "ext":
                ext_pos[v] = host.ext_pos[v]
        for d in keep:
            vat[d] = host.vat[d]
            lab[d] = host.lab[d]
            twist[d] = host.twist[d]
            nxt[d] = host.nxt[d]
            e = host.eps[d]
            if e in keep:
                eps[d] = e
        for d, v in term.vat.items():
            if term.vkind[v] == "ext":
                continue
            vkind[tname(v)] = term.vkind[v]
            if v in term.vtype:
                vtype[tname(v)] = term.vtype[v]
            if v in term.over:
                over[tname(v)] = frozenset(tname(x) for x in term.over[v])
            vat[tname(d)] = tname(v)
            lab[tname(d)] = term.lab[d]
            twist[tname(d)] = term.twist[d]
            nxt[tname(d)] = tname(term.nxt[d])
            e = term.eps[d]
            if term.vkind[term.vat[e]] != "ext":
                eps[tname(d)] = tname(e)

        # --- chain resolution at the cut ---------------------------------
        # ports: ("t", pos) and ("h", pos) per occupied slot; each port either
        # terminates at a real open dart or links to another port.
        t_port, h_port = {}, {}
        for x, pos in term.ext_pos.items():
            dx = term.star(x)[0]
            inner = term.eps[dx]
            if term.vkind[term.vat[inner]] == "ext":
                t_port[pos] = ("link", ("t", term.ext_pos[term.vat[inner]]),
                               term.twist[dx], term.lab[dx], ("term", dx))
            else:
                t_port[pos] = ("end", tname(inner), term.twist[dx])
        leg_harts = {hd: pos for pos, (pd, hd) in self.legs.items()}
        for pos, (pd, hd) in self.legs.items():
            he = host.eps[hd]
            if he in leg_harts:
                t_mid = host.twist[hd] ^ pat.twist[pd] ^ \
                    pat.twist[self.legs[leg_harts[he]][0]]
                h_port[pos] = ("link", ("h", leg_harts[he]), t_mid,
                               host.lab[hd], ("mid", hd))
            else:
                h_port[pos] = ("end", he, host.twist[hd] ^ pat.twist[pd])

        def port_data(p):
            side, pos = p
            return (t_port if side == "t" else h_port)[pos]

        # traverse: start at unvisited port; cross the cut to the sibling
        # port; follow links until both ends terminate or the chain closes
        visited = set()
        new_edges = []   # (dartA, dartB, twist)
        new_circles = []  # (twist, label, side-heritage tracker)
        for pos in sorted(self.legs, key=repr):
            for start_side in ("t", "h"):
                start = (start_side, pos)
                if start in visited or port_data(start)[0] != "end":
                    continue
                # walk from a real end across the structure
                end_a = port_data(start)
                tw = end_a[2]
                visited.add(start)
                cur = (("h", pos) if start_side == "t" else ("t", pos))
                while True:
                    visited.add(cur)
                    e = port_data(cur)
                    if e[0] == "end":
                        new_edges.append((end_a[1], e[1], tw ^ e[2]))
                        break
                    tw ^= e[2]
                    nxt_port = e[1]
                    visited.add(nxt_port)
                    cur = (("h", nxt_port[1]) if nxt_port[0] == "t"
                           else ("t", nxt_port[1]))
        for pos in sorted(self.legs, key=repr):
            for start_side in ("t", "h"):
                start = (start_side, pos)
                if start in visited:
                    continue
                # pure cycle of links: a fresh free circle
                tw = 0
                heritage = []
                cur = start
                first_label = None
                while True:
                    if cur in visited:
                        break
                    visited.add(cur)
                    e = port_data(cur)
                    if e[0] == "end":
                        raise RewriteError("chain inconsistency")
                    heritage.append((e[4], tw))
                    if first_label is None:
                        first_label = e[3]
                    tw ^= e[2]
                    nxt_port = e[1]
                    visited.add(nxt_port)
                    cur = (("h", nxt_port[1]) if nxt_port[0] == "t"
                           else ("t", nxt_port[1]))
                new_circles.append((tw, first_label, heritage))

        for a, b, tw in new_edges:
            eps[a] = b
            eps[b] = a
            twist[a] = twist[b] = tw

        marker_info = []
        for i, (tw, lbl, heritage) in enumerate(new_circles):
            mv = (tag, "M", i)
            vkind[mv] = "int"
            vtype[mv] = MARKER
            d1, d2 = (tag, "c", i, 0), (tag, "c", i, 1)
            vat[d1] = vat[d2] = mv
            nxt[d1], nxt[d2] = d2, d1
            eps[d1], eps[d2] = d2, d1
            twist[d1] = twist[d2] = tw
            lab[d1] = lbl
            lab[d2] = host.nu_of(lbl)
            marker_info.append((d1, heritage))

        new_web = SurfaceWeb(host.category, vkind, vtype, vat, nxt, eps, twist,
                             lab, ext_pos, host.boundary, [], host.nu, over)
        regions = self._regions_after(term, new_web, tname, marker_info)
        return SurfaceWeb(host.category, vkind, vtype, vat, nxt, eps, twist,
                          lab, ext_pos, host.boundary, regions, host.nu, over)

    # -- region reconstruction ------------------------------------------------

    def _regions_after(self, term, new_web, tname, marker_info):
        host, pat = self.host, self.pat
        # pieces: ("old", ri) for surviving host regions, ("term", ti)
        term_walks = term.walks()
        term_slot_to_walk = {}
        for w in term_walks:
            for it in w.items:
                term_slot_to_walk[it] = w.idx
        term_regions = term.regions()
        term_walk_to_region = {}
        for ti, r in enumerate(term_regions):
            for widx in r.walks:
                term_walk_to_region[widx] = ti

        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        def union(x, y):
            parent.setdefault(x, x)
            parent.setdefault(y, y)
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for ri in range(len(self.host_regions)):
            if ri not in self.consumed:
                parent.setdefault(("old", ri), ("old", ri))
        for ti in range(len(term_regions)):
            parent.setdefault(("term", ti), ("term", ti))

        arc_joins = []
        for a, old_ri in self.arc_old.items():
            t_ri = term_walk_to_region[term_slot_to_walk[a]]
            union(("old", old_ri), ("term", t_ri))
            arc_joins.append((("old", old_ri), ("term", t_ri)))
        for bid, old_ri in self.circle_cuts:
            t_ri = term_walk_to_region[term_slot_to_walk[("a", bid, 0)]]
            union(("old", old_ri), ("term", t_ri))

        # classify each new walk
        new_walks = new_web.walks()
        marker_class = {}
        for d1, heritage in marker_info:
            def piece_cls(piece, side):
                if piece[0] == "term":
                    t_w = term_slot_to_walk[("s", piece[1], side)]
                    return ("term", term_walk_to_region[t_w])
                o_w = self.slot_to_walk[("s", piece[1], side)]
                return ("old", self.walk_to_region[o_w])

            cls = {}
            for side in (0, 1):
                votes = {find(piece_cls(p, side ^ tw)) for p, tw in heritage}
                if len(votes) != 1:
                    raise RewriteError(
                        "marker heritage sides disagree: %r"
                        % ([(p, tw, find(piece_cls(p, side ^ tw)))
                            for p, tw in heritage],))
                cls[side] = votes.pop()
            d2 = new_web.eps[d1]
            t = new_web.twist[d1]
            for side in (0, 1):
                marker_class[(d1, side)] = cls[side]
                # the loop's other dart shares side-objects with d1
                marker_class[(d2, side)] = cls[1 ^ side ^ t]

        walk_class = {}
        for w in new_walks:
            classes = set()
            for (_, d, side) in w.slots:
                piece = self._slot_piece(d, side, term, term_slot_to_walk,
                                         term_walk_to_region, marker_class)
                if piece is not None:
                    classes.add(find(piece))
            for (_, b, k) in w.arcs:
                # boundary arcs of the host: their walk belonged to an old
                # region; find it from the old structure
                ow = self.slot_to_walk.get(("a", b, k))
                if ow is not None:
                    classes.add(find(("old", self.walk_to_region[ow])))
            if not classes:
                walk_class[w.idx] = None  # isolated: a fresh disk
            else:
                first = classes.pop()
                for c in classes:
                    union(first, c)
                walk_class[w.idx] = find(first)

        # normalize classes after the extra unions
        for w in new_walks:
            if walk_class[w.idx] is not None:
                walk_class[w.idx] = find(walk_class[w.idx])
        import os
        if os.environ.get("WEBRW_DEBUG_REGIONS"):
            print("WALK_CLASS:", walk_class)

        groups = {}
        for w in new_walks:
            groups.setdefault(walk_class[w.idx], []).append(w.idx)

        # Euler bookkeeping per class
        regions = []
        for cls, widxs in groups.items():
            if cls is None:
                for widx in widxs:
                    regions.append(((widx,), 0, 0))
                continue
            chi = 0
            orientable = True
            for p in parent:
                if find(p) != cls:
                    continue
                if p[0] == "old":
                    r = self.host_regions[p[1]]
                else:
                    r = term_regions[p[1]]
                chi += r.euler()
                if r.crosscaps:
                    orientable = False
            joins = sum(1 for x, y in arc_joins if find(x) == cls)
            chi -= joins
            c = 2 - len(widxs) - chi
            if c < 0 or (orientable and c % 2):
                raise RewriteError(
                    "region bookkeeping failed (c=%d cls=%r widxs=%r chi=%d "
                    "joins=%d pieces=%r)"
                    % (c, cls, widxs, chi, joins,
                       [p for p in parent if find(p) == cls]))
            if orientable:
                g, k = c // 2, 0
            else:
                g, k = 0, c
            regions.append((tuple(widxs), g, k))

        # convert to anchor-based declarations on the new web
        decls = []
        for widxs, g, k in regions:
            if len(widxs) == 1 and g == 0 and k == 0:
                continue
            anchors = []
            for widx in widxs:
                w = new_walks[widx]
                it = min(w.items, key=repr)
                if it[0] == "s":
                    anchors.append(("dart", it[1], it[2]))
                else:
                    anchors.append(("bnd", it[1]))
            decls.append((anchors, g, k))
        return decls

    def _slot_piece(self, d, side, term, term_slot_to_walk,
                    term_walk_to_region, marker_class):
        if ("s", d, side) in self.slot_to_walk:
            ow = self.slot_to_walk[("s", d, side)]
            return ("old", self.walk_to_region[ow])
        if (d, side) in marker_class:
            return marker_class[(d, side)]
        if isinstance(d, tuple) and len(d) == 2:
            orig = d[1]
            if ("s", orig, side) in term_slot_to_walk:
                tw = term_slot_to_walk[("s", orig, side)]
                return ("term", term_walk_to_region[tw])
        return None


# ---------------------------------------------------------------------------
# linear webs and normal forms


class LinearWeb:
    """Finite formal sum of webs over a shared external boundary, keyed by
    canonical encodings. Zero coefficients are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        self.terms = {}
        for web, coeff in terms:
            self.add_term(web, coeff)

    @classmethod
    def of(cls, web, coeff):
        lw = cls()
        lw.add_term(web, coeff)
        return lw

    def add_term(self, web, coeff):
        if coeff.is_zero():
            return
        k = web.canonical_key()
        if k in self.terms:
            w0, c0 = self.terms[k]
            c = c0 + coeff
            if c.is_zero():
                del self.terms[k]
            else:
                self.terms[k] = (w0, c)
        else:
            self.terms[k] = (web, coeff)

    def __add__(self, other):
        out = LinearWeb()
        for w, c in self.terms.values():
            out.add_term(w, c)
        for w, c in other.terms.values():
            out.add_term(w, c)
        return out

    def scaled(self, coeff):
        out = LinearWeb()
        for w, c in self.terms.values():
            out.add_term(w, c * coeff)
        return out

    def __eq__(self, other):
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k][1] == other.terms[k][1] for k in self.terms)

    def __hash__(self):
        return hash(tuple(sorted((k, c) for k, (w, c) in self.terms.items())))

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for k in sorted(self.terms):
            w, c = self.terms[k]
            n = "empty" if not w.vat else "web<%d>" % len(w.vat)
            bits.append("(%s)*%s" % (c, n))
        return " + ".join(bits)


def find_reduction(lw, system):
    """Deterministic redex: the reducible term with greatest measure then
    lowest key; within it the lowest-index rule, then lowest match key.
    Returns (key, web, coeff, rule_index, match) or None."""

    def order(item):
        k, (w, c) = item
        return (tuple(-x for x in system.measure_of(w)), k)

    for k, (w, c) in sorted(lw.terms.items(), key=order):
        for ri, rule in enumerate(system.rules):
            ms = matches(w, rule)
            if ms:
                m = min(ms, key=lambda m: m.key())
                return (k, w, c, ri, m)
    return None


def reduce_once(lw, system, tag="T"):
    """One deterministic reduction step; None if irreducible."""
    red = find_reduction(lw, system)
    if red is None:
        return None
    k, w, c, ri, m = red
    out = LinearWeb()
    for k2, (w2, c2) in lw.terms.items():
        if k2 != k:
            out.add_term(w2, c2)
    for coeff, web2 in apply_match(w, system.rules[ri], m, tag=tag):
        out.add_term(web2, c * coeff)
    return out


def normal_form(lw, system, budget=10 ** 6, trace=None):
    """Iterate reductions to the unique fixed point (for terminal systems).
    Raises RewriteError when the step budget is exhausted."""
    step = 0
    cur = lw
    while True:
        red = find_reduction(cur, system)
        if red is None:
            return cur
        step += 1
        if step > budget:
            raise RewriteError("step budget exceeded (%d)" % budget)
        k, w, c, ri, m = red
        nxt = LinearWeb()
        for k2, (w2, c2) in cur.terms.items():
            if k2 != k:
                nxt.add_term(w2, c2)
        pieces = apply_match(w, system.rules[ri], m, tag=("T", step))
        for coeff, web2 in pieces:
            nxt.add_term(web2, c * coeff)
        if trace is not None:
            trace.append("%s @ %d : %s -> %d terms" % (
                system.rules[ri].rid, 0, k.decode()[:40], len(pieces)))
        cur = nxt


def is_irreducible(web, system):
    return all(not matches(web, r) for r in system.rules)


# ---------------------------------------------------------------------------
# termination measures


def check_measure(system, corpus=(), budget=2000):
    """Verify declared lexicographic decreases rule by rule.

    A statistic is usable for a rule when it is additive and local: vertex-type
    counts always are; the component count only when the pattern is closed (no
    external legs). Rules declared with a stat name must show strictly smaller
    vectors for every rhs term; 'empirical' rules are exercised on the corpus.
    """
    names = [name for name, fn in system.measure]
    report = {"rules": {}, "proven": [], "empirical": [], "violations": []}
    for rule in system.rules:
        lhs_stats = system.measure_of(rule.lhs)
        closed = not rule.lhs.ext_pos
        verdicts = []
        for coeff, term in rule.rhs:
            t_stats = system.measure_of(term)
            verdict = None
            for i, name in enumerate(names):
                usable = (name != "components") or closed
                if not usable:
                    verdict = ("unprovable", name)
                    break
                if t_stats[i] < lhs_stats[i]:
                    verdict = ("decreases", name)
                    break
                if t_stats[i] > lhs_stats[i]:
                    verdict = ("increases", name)
                    break
            if verdict is None:
                verdict = ("ties", None)
            verdicts.append(verdict)
        if not rule.rhs:
            status = ("proven", "empty-rhs")
        elif all(v[0] == "decreases" for v in verdicts):
            status = ("proven", verdicts[0][1])
        else:
            status = ("empirical", verdicts)
        if rule.decrease != "empirical" and status[0] != "proven":
            report["violations"].append((rule.rid, verdicts))
        report["rules"][rule.rid] = status
        report["proven" if status[0] == "proven" else "empirical"].append(rule.rid)
    for web in corpus:
        normal_form(LinearWeb.of(web, _one(system)), system, budget=budget)
    report["ok"] = not report["violations"]
    return report


def _one(system):
    from .ring import RingElem
    return RingElem.one(system.ring)
