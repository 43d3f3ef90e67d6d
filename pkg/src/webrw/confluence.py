"""Overlap enumeration and local-confluence certification.

Abstract overlaps are quotients of the disjoint union of two patterns filtered
by irreducibility conditions; surface overlap bases arise by framing the
abstract hosts compatibly with both pattern ambients and capping boundary
circles that the patterns require to bound disks. Certification reduces both
branches of every divergence on every basis host and compares normal forms.
"""

from __future__ import annotations

import itertools
import random

from .agraph import MARKER, AbstractGraph, automorphisms
from .ring import RingElem
from .rewrite import (LinearWeb, Match, RewriteError, apply_match, matches,
                      check_measure, normal_form)
from .smap import ORIENTED, SurfaceWeb, build_web, framing_webs, write_webg


class Overlap:
    """Host graph with the two pattern embeddings as dart maps."""

    __slots__ = ("host", "dmap1", "dmap2", "atoms")

    def __init__(self, host, dmap1, dmap2, atoms):
        self.host = host
        self.dmap1 = dmap1
        self.dmap2 = dmap2
        self.atoms = atoms

    def is_trivial(self):
        return not self.atoms[0] and not self.atoms[1]


# ---------------------------------------------------------------------------
# abstract overlap enumeration


def _glue_state(g1, g2, edge_atoms, vert_atoms=()):
    """Quotient of g1 ⊔ g2 by the given identifications. edge_atoms: list of
    (e1dart, e2dart) meaning direction e1dart is identified with e2dart (and
    tau-partners correspondingly). Returns (host, dmap1, dmap2), or "hard"
    when the quotient violates embedding legality (so would every extension),
    or None when merely invalid (external class of valence > 1)."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for d1, d2 in edge_atoms:
        if g1.lab[d1] != g2.lab[d2]:
            return "hard"
        union(("d", "a", d1), ("d", "b", d2))
        union(("d", "a", g1.tau[d1]), ("d", "b", g2.tau[d2]))
        union(("v", "a", g1.tail[d1]), ("v", "b", g2.tail[d2]))
        union(("v", "a", g1.tail[g1.tau[d1]]), ("v", "b", g2.tail[g2.tau[d2]]))
    for v1, v2 in vert_atoms:
        union(("v", "a", v1), ("v", "b", v2))

    # collect classes
    dclass = {}
    for tag, g in (("a", g1), ("b", g2)):
        for d in g.tail:
            dclass.setdefault(find(("d", tag, d)), []).append((tag, d))
    vclass = {}
    for tag, g in (("a", g1), ("b", g2)):
        for v in g.vkind:
            vclass.setdefault(find(("v", tag, v)), []).append((tag, v))

    def gof(tag):
        return g1 if tag == "a" else g2

    # embedding legality: within one pattern no two internal vertices merge,
    # no two int-tailed directions merge; across patterns int-tailed
    # directions merge at most one per pattern
    for root, members in dclass.items():
        per = {"a": [], "b": []}
        for tag, d in members:
            if gof(tag).vkind[gof(tag).tail[d]] == "int":
                per[tag].append(d)
        if len(per["a"]) > 1 or len(per["b"]) > 1:
            return "hard"
    for root, members in vclass.items():
        per = {"a": [], "b": []}
        for tag, v in members:
            if gof(tag).vkind[v] == "int":
                per[tag].append(v)
        if len(per["a"]) > 1 or len(per["b"]) > 1:
            return "hard"
        # vertex types of merged internals must agree
        types = {gof(tag).vtype.get(v) for tag, v in members
                 if gof(tag).vkind[v] == "int"}
        if len(types) > 1:
            return "hard"

    # build host
    vkind, vtype, tail, lab, tau = {}, {}, {}, {}, {}
    for root, members in vclass.items():
        kinds = {gof(tag).vkind[v] for tag, v in members}
        vkind[root] = "int" if "int" in kinds else "ext"
        for tag, v in members:
            if gof(tag).vkind[v] == "int":
                vtype[root] = gof(tag).vtype.get(v)
    dmap1, dmap2 = {}, {}
    for root, members in dclass.items():
        tag0, d0 = members[0]
        tail[root] = find(("v", tag0, gof(tag0).tail[d0]))
        lab[root] = gof(tag0).lab[d0]
        tau[root] = find(("d", tag0, gof(tag0).tau[d0]))
        for tag, d in members:
            if gof(tag).lab[d] != lab[root]:
                return "hard"
            (dmap1 if tag == "a" else dmap2)[d] = root
    host = AbstractGraph(vkind, vtype, tail, lab, tau, {**g1.nu, **g2.nu})
    # validity: external classes must be 1-valent
    for v, k in host.vkind.items():
        if k == "ext" and host.valence(v) != 1:
            return None
    if host.validate(allow_two_valent=True):
        return None
    return host, dmap1, dmap2


def _cond45(g1, g2, host, dmap1, dmap2):
    """Theorem conditions (4)-(5): an ext-ext pattern edge shares neither its
    image edge nor its endpoint images with any other pattern material."""
    vmap1 = _vertex_map(g1, host, dmap1)
    vmap2 = _vertex_map(g2, host, dmap2)
    for g, dmap, vmap in ((g1, dmap1, vmap1), (g2, dmap2, vmap2)):
        for d in g.tail:
            if not g.is_ee_edge(d):
                continue
            img = dmap[d]
            hits = 0
            for dm in (dmap1, dmap2):
                hits += sum(1 for ii in dm.values()
                            if ii in (img, host.tau[img]))
            if hits > 2:
                return False
            for endv in (g.tail[d], g.head(d)):
                vimg = vmap[endv]
                pre = 0
                for vm in (vmap1, vmap2):
                    pre += sum(1 for u in vm.values() if u == vimg)
                if pre > 1:
                    return False
    return True


def _vertex_map(g, host, dmap):
    vmap = {}
    for d, img in dmap.items():
        vmap[g.tail[d]] = host.tail[img]
    for v in g.vkind:
        if v not in vmap:
            raise RewriteError("isolated pattern vertex in overlap")
    return vmap


def _shared_filters(g1, g2, host, dmap1, dmap2, n_atoms):
    """Reconstructed condition (6). A single shared edge is always a genuine
    minimal overlap; several pieces can only be shared as the star of one
    common internal vertex with externally-merged tips (the two patterns
    overlapping on a vertex neighborhood). Anything else pulls apart along a
    shared piece. Completeness is guarded by the factorization property test.
    """
    if n_atoms <= 1:
        return True
    vmap1 = _vertex_map(g1, host, dmap1)
    vmap2 = _vertex_map(g2, host, dmap2)
    cov1 = set(dmap1.values()) | {host.tau[d] for d in dmap1.values()}
    cov2 = set(dmap2.values()) | {host.tau[d] for d in dmap2.values()}
    int1 = {vmap1[v] for v in g1.vkind if g1.vkind[v] == "int"}
    int2 = {vmap2[v] for v in g2.vkind if g2.vkind[v] == "int"}
    centers = set()
    shared_edges = []
    for d, dr in host.edges():
        if d in cov1 and d in cov2:
            shared_edges.append((d, dr))
    for d, dr in shared_edges:
        a, b = host.tail[d], host.tail[dr]
        a_int = a in int1 and a in int2
        b_int = b in int1 and b in int2
        a_ext = host.vkind[a] == "ext"
        b_ext = host.vkind[b] == "ext"
        if a_int and b_ext:
            centers.add(a)
        elif b_int and a_ext:
            centers.add(b)
        else:
            return False
    return len(centers) == 1


def _refinement_reducible(g1, g2, atoms, host, dmap1, dmap2):
    """True if dropping part of the gluing yields an overlap mapping onto this
    one by a legal embedding (merges touch at most one internal vertex class
    and at most one int-tailed direction class each)."""
    edge_atoms = atoms[0]
    n = len(edge_atoms)
    if n == 0:
        return False
    for keep_mask in range((1 << n) - 1):
        ea = [a for i, a in enumerate(edge_atoms) if (keep_mask >> i) & 1]
        sub = _glue_state(g1, g2, ea)
        if sub is None or sub == "hard":
            continue
        shost, sd1, sd2 = sub
        # classes of the fine overlap merging into each coarse class
        if _merge_is_embedding(shost, sd1, sd2, host, dmap1, dmap2, g1, g2):
            return True
    return False


def _merge_is_embedding(shost, sd1, sd2, host, dmap1, dmap2, g1, g2):
    # map each fine dart class to the coarse one via the patterns
    fine_of_coarse_d = {}
    for d, img in sd1.items():
        fine_of_coarse_d.setdefault(dmap1[d], set()).add(img)
    for d, img in sd2.items():
        fine_of_coarse_d.setdefault(dmap2[d], set()).add(img)
    for coarse, fines in fine_of_coarse_d.items():
        int_tailed = [f for f in fines if shost.vkind[shost.tail[f]] == "int"]
        if len(int_tailed) > 1:
            return False
    svmap1 = _vertex_map(g1, shost, sd1)
    svmap2 = _vertex_map(g2, shost, sd2)
    vmap1 = _vertex_map(g1, host, dmap1)
    vmap2 = _vertex_map(g2, host, dmap2)
    fine_of_coarse_v = {}
    for v in g1.vkind:
        fine_of_coarse_v.setdefault(vmap1[v], set()).add(svmap1[v])
    for v in g2.vkind:
        fine_of_coarse_v.setdefault(vmap2[v], set()).add(svmap2[v])
    for coarse, fines in fine_of_coarse_v.items():
        internal = [f for f in fines if shost.vkind[f] == "int"]
        if len(internal) > 1:
            return False
    return True


def abstract_overlaps(g1, g2, star_saturated=False, include_trivial=True):
    """All irreducible overlaps of two abstract patterns, up to isomorphism of
    the decorated host. With star_saturated=True, internal-internal vertex
    merges must identify the full stars (the surface-stage restriction)."""
    e1 = sorted({d for d in g1.tail}, key=repr)
    e2 = sorted({d for d in g2.tail}, key=repr)
    # candidate edge atoms: identify edge of g1 with edge of g2 (2 orientations)
    ecands = []
    for d1 in e1:
        if repr(g1.tau[d1]) < repr(d1):
            continue
        for d2 in e2:
            if repr(g2.tau[d2]) < repr(d2):
                continue
            for dd2 in (d2, g2.tau[d2]):
                if g1.lab[d1] == g2.lab[dd2]:
                    ecands.append((d1, dd2))
    # vertex-only identifications never produce irreducible overlaps: an
    # internal-internal touch without a co-identified edge splits off, and an
    # external-onto-vertex touch retracts (both factor; cf. the paper's
    # vertex-glued Y examples) -- so atoms are edge identifications only.
    out = []
    seen = set()
    emitted = set()

    def consider(edge_atoms):
        res = _glue_state(g1, g2, list(edge_atoms))
        if res == "hard":
            return "hard"
        if res is None:
            return None
        host, dmap1, dmap2 = res
        key = _overlap_key(host, dmap1, dmap2)
        if key in seen:
            return key
        seen.add(key)
        if not _cond45(g1, g2, host, dmap1, dmap2):
            return key
        if not _shared_filters(g1, g2, host, dmap1, dmap2, len(edge_atoms)):
            return key
        if star_saturated and not _star_saturated(g1, g2, host, dmap1, dmap2):
            return key
        if _refinement_reducible(g1, g2, (list(edge_atoms), ()),
                                 host, dmap1, dmap2):
            return key
        emitted.add(key)
        out.append(Overlap(host, dmap1, dmap2, (list(edge_atoms), [])))
        return key

    def edges_rec(start, chosen, used1, used2):
        for i in range(start, len(ecands)):
            d1, d2 = ecands[i]
            k1 = frozenset((d1, g1.tau[d1]))
            k2 = frozenset((d2, g2.tau[d2]))
            if k1 in used1 or k2 in used2:
                continue
            res = consider(chosen + [(d1, d2)])
            if res == "hard":
                continue
            edges_rec(i + 1, chosen + [(d1, d2)], used1 | {k1}, used2 | {k2})

    consider([])
    edges_rec(0, [], frozenset(), frozenset())
    if not include_trivial:
        out = [o for o in out if not o.is_trivial()]
    return out


def _star_saturated(g1, g2, host, dmap1, dmap2):
    vmap1 = _vertex_map(g1, host, dmap1)
    vmap2 = _vertex_map(g2, host, dmap2)
    int1 = {vmap1[v]: v for v in g1.vkind if g1.vkind[v] == "int"}
    int2 = {vmap2[v]: v for v in g2.vkind if g2.vkind[v] == "int"}
    cov1 = set(dmap1.values())
    cov2 = set(dmap2.values())
    for hv in host.vkind:
        if hv in int1 and hv in int2:
            for d in host.star[hv]:
                if not (d in cov1 and d in cov2):
                    return False
    return True


def _overlap_key(host, dmap1, dmap2):
    cover1 = set(dmap1.values())
    cover2 = set(dmap2.values())
    ddec = {}
    for d in host.tail:
        ddec[d] = "%d%d" % (d in cover1, d in cover2)
    return host.canonical_key(ddec=ddec)


# ---------------------------------------------------------------------------
# surface overlap bases


def _lift_flags(pat, fweb, dmap):
    """Check that the pattern's rotations/twists embed into the framing web
    under the dart map; returns per-vertex side flags or None. Crossing
    over-pairs must agree (complemented under reflected flags)."""
    flags = {}
    category = fweb.category
    for v in sorted(pat.vkind, key=repr):
        if pat.vkind[v] == "ext" or v in flags:
            continue
        if not _lift_component(pat, fweb, dmap, v, flags, category):
            return None
    return flags


def _lift_component(pat, fweb, dmap, v0, flags, category):
    from .rewrite import _rot_from, _over_ok
    trials = (0,) if category == ORIENTED else (0, 1)
    for f0 in trials:
        trial = dict(flags)
        if _try_lift(pat, fweb, dmap, v0, f0, trial, category):
            flags.update(trial)
            return True
    return False


def _try_lift(pat, fweb, dmap, v0, f0, flags, category):
    from .rewrite import _rot_from, _over_ok
    stack = [(v0, f0)]
    while stack:
        v, f = stack.pop()
        if v in flags:
            if flags[v] != f:
                return False
            continue
        if category == ORIENTED and f:
            return False
        flags[v] = f
        prot = pat.rotation(v)
        hd0 = dmap[prot[0]]
        # the host rotation restricted to the image darts must cycle like the
        # pattern rotation (reversed when flagged)
        img = [dmap[d] for d in prot]
        hrot = fweb.rotation(fweb.vat[hd0])
        restr = [d for d in hrot if d in set(img)]
        i = restr.index(img[0])
        restr = restr[i:] + restr[:i]
        if f:
            restr = [restr[0]] + list(reversed(restr[1:]))
        if restr != img:
            return False
        if not _over_ok(pat, fweb, v, fweb.vat[hd0], prot, restr, f):
            return False
        for pd in prot:
            pe = pat.eps[pd]
            w = pat.vat[pe]
            if pat.vkind[w] == "ext":
                continue
            want = f ^ pat.twist[pd] ^ fweb.twist[dmap[pd]]
            stack.append((w, want))
    return True


def _cap_host(fweb, caps):
    """Attach disks along the given slot-free boundary circles: their collar
    regions become internal disk faces."""
    if not caps:
        return fweb
    keep = [b for b in range(len(fweb.boundary)) if b not in caps]
    renum = {b: i for i, b in enumerate(keep)}
    boundary = [fweb.boundary[b] for b in keep]
    ext_pos = {x: (renum[b], k) for x, (b, k) in fweb.ext_pos.items()}
    regions = []
    for anchors, g, k in fweb.regions_decl:
        out = []
        capped = False
        for a in anchors:
            if a[0] == "bnd" and a[1] in caps:
                capped = True
                continue
            if a[0] == "bnd":
                out.append(("bnd", renum[a[1]]))
            else:
                out.append(a)
        if capped and len(out) == 1 and g == 0 and k == 0:
            continue  # collar became a plain disk: default region
        regions.append((out, g, k))
    return SurfaceWeb(fweb.category, fweb.vkind, fweb.vtype, fweb.vat,
                      fweb.nxt, fweb.eps, fweb.twist, fweb.lab, ext_pos,
                      boundary, regions, fweb.nu, fweb.over)


def _pattern_internal_disk_walks(pat):
    """Slot sets of pattern walks bounding internal disk faces."""
    out = []
    walks = pat.walks()
    for r in pat.regions():
        ws = [walks[i] for i in sorted(r.walks)]
        if any(w.arcs for w in ws):
            continue
        if r.genus == 0 and r.crosscaps == 0 and len(ws) == 1:
            out.append(ws[0].slots)
    return out


def surface_overlap_basis(rule1, rule2, category, include_trivial=False):
    """Basis of overlaps of the two rules' patterns: framings of each
    irreducible abstract overlap compatible with both pattern ambients, with
    boundary circles capped wherever a pattern provides the bounding disk."""
    p1, p2 = rule1.lhs, rule2.lhs
    for p, r in ((p1, rule1), (p2, rule2)):
        if not p.is_simple():
            raise RewriteError("rule %s: pattern is not simple" % r.rid)
    g1, g2 = p1.to_abstract(), p2.to_abstract()
    overlaps = abstract_overlaps(g1, g2, star_saturated=True,
                                 include_trivial=include_trivial)
    hosts = []
    seen = set()
    for ov in overlaps:
        if ov.is_trivial() and not include_trivial:
            continue
        for web in _framed_hosts(p1, p2, ov, category):
            k = web.canonical_key()
            if k not in seen:
                seen.add(k)
                hosts.append(web)
    return hosts


def _framed_hosts(p1, p2, ov, category):
    from .smap import _framing_to_web
    g = ov.host
    # rotations are forced by the owning patterns up to gauge; collect the
    # image rotation from whichever pattern covers each vertex fully
    rot = {}
    for v in sorted(g.vkind, key=repr):
        if g.vkind[v] != "int":
            continue
        owner = None
        for pat, dmap in ((p1, ov.dmap1), (p2, ov.dmap2)):
            vmap = _vertex_map(pat.to_abstract(), g, dmap)
            for pv in pat.vkind:
                if pat.vkind[pv] != "ext" and vmap.get(pv) == v:
                    owner = (pat, dmap, pv)
                    break
            if owner:
                break
        if not owner:
            return
        pat, dmap, pv = owner
        rot[v] = tuple(dmap[d] for d in pat.rotation(pv))
    edges = sorted({frozenset((d, g.tau[d])) for d in g.tail}, key=repr)
    over = {}
    for pat, dmap in ((p1, ov.dmap1), (p2, ov.dmap2)):
        vmap = _vertex_map(pat.to_abstract(), g, dmap)
        for pv, pair in pat.over.items():
            over[vmap[pv]] = frozenset(dmap[d] for d in pair)
    out = []
    for bits in range(1 << len(edges)):
        twist = {e: (bits >> i) & 1 for i, e in enumerate(edges)}
        if category == ORIENTED and any(twist.values()):
            # oriented webs are stored twist-free; gauge classes with
            # nonzero twists are either equivalent to a zero assignment or
            # non-orientable, and the zero assignment is always enumerated
            continue
        fweb = _framing_to_web(g, rot, twist, category, over)
        flags1 = _lift_flags(p1, fweb, ov.dmap1)
        if flags1 is None:
            continue
        flags2 = _lift_flags(p2, fweb, ov.dmap2)
        if flags2 is None:
            continue
        capped = _decide_caps(fweb, (p1, ov.dmap1, flags1),
                              (p2, ov.dmap2, flags2))
        out.append(capped)
    return out


def _decide_caps(fweb, lift1, lift2):
    caps = set()
    walks = fweb.walks()
    collars = {}
    for anchors, gg, kk in fweb.regions_decl:
        bids = [a[1] for a in anchors if a[0] == "bnd"]
        darts = [a for a in anchors if a[0] == "dart"]
        if len(bids) == 1 and len(darts) == 1 and gg == 0 and kk == 0:
            collars[bids[0]] = darts[0]
    for bid, anchor in collars.items():
        walk = None
        for w in walks:
            if ("s", anchor[1], anchor[2]) in w.slots:
                walk = w
        if walk is None:
            continue
        for pat, dmap, flags in (lift1, lift2):
            if _pattern_caps(pat, dmap, flags, walk):
                caps.add(bid)
                break
    return _cap_host(fweb, caps)


def _pattern_caps(pat, dmap, flags, walk):
    inv = {}
    for pd, hd in dmap.items():
        inv.setdefault(hd, []).append(pd)
    disks = _pattern_internal_disk_walks(pat)
    for pre_slots in disks:
        img = set()
        ok = True
        for (_, pd, side) in pre_slots:
            v = pat.vat[pd]
            if pd not in dmap:
                ok = False
                break
            img.add(("s", dmap[pd], side ^ flags.get(v, 0)))
        if ok and img == walk.slots:
            return True
    return False


# ---------------------------------------------------------------------------
# certification


class ConfluenceReport:
    def __init__(self, system):
        self.system = system
        self.pairs = []      # (rid1, rid2, n_hosts, n_checked, witnesses)
        self.measure = None
        self.coarse_ambients = 0
        self.indeterminate = []

    @property
    def joinable(self):
        return all(not w for (_, _, _, _, w) in self.pairs) and \
            not self.indeterminate

    def result(self):
        if self.indeterminate:
            return "indeterminate"
        return "confluent" if self.joinable else "not-confluent"

    def nontrivial_overlaps(self):
        return sum(n for (_, _, n, _, _) in self.pairs)


def check_system(system, budget=10 ** 5, pairs=None, progress=None):
    """Local-confluence certification: on every basis host of every rule
    pair, reduce both branches of every divergence to normal form."""
    rep = ConfluenceReport(system)
    rep.measure = check_measure(system)
    one = RingElem.one(system.ring)
    rules = system.rules
    for i in range(len(rules)):
        for j in range(i, len(rules)):
            if pairs is not None and (rules[i].rid, rules[j].rid) not in pairs:
                continue
            if progress:
                progress("pair %s %s" % (rules[i].rid, rules[j].rid))
            try:
                hosts = surface_overlap_basis(rules[i], rules[j],
                                              system.category)
            except RewriteError as e:
                raise
            witnesses = []
            checked = 0
            for host in hosts:
                ms1 = matches(host, rules[i])
                ms2 = matches(host, rules[j])
                branches = {}
                for rule, ms in ((rules[i], ms1), (rules[j], ms2)):
                    for m in ms:
                        key = (rule.rid, m.key())
                        if key in branches:
                            continue
                        lw = LinearWeb()
                        for coeff, web in apply_match(host, rule, m,
                                                      tag=("C", key)):
                            lw.add_term(web, coeff)
                        branches[key] = lw
                items = sorted(branches.items())
                for a in range(len(items)):
                    for b in range(a + 1, len(items)):
                        checked += 1
                        try:
                            nf1 = normal_form(items[a][1], system, budget)
                            nf2 = normal_form(items[b][1], system, budget)
                        except RewriteError:
                            rep.indeterminate.append(
                                (rules[i].rid, rules[j].rid, host))
                            continue
                        if nf1 != nf2:
                            witnesses.append((host, items[a][0], items[b][0],
                                              nf1, nf2))
                if any(True for f in host.faces()
                       if f["kind"] == "boundary-annulus"):
                    rep.coarse_ambients += 1
            rep.pairs.append((rules[i].rid, rules[j].rid, len(hosts), checked,
                              witnesses))
    return rep


def render_report(rep):
    lines = []
    lines.append("confluence report: system %s (%s)" %
                 (rep.system.name, rep.system.category))
    lines.append("rules: %d" % len(rep.system.rules))
    m = rep.measure
    lines.append("measure: proven=%s empirical=%s%s" % (
        ",".join(sorted(m["proven"])) or "-",
        ",".join(sorted(m["empirical"])) or "-",
        " VIOLATIONS=%s" % m["violations"] if m["violations"] else ""))
    total_hosts = 0
    for rid1, rid2, n, checked, wit in sorted(rep.pairs):
        total_hosts += n
        lines.append("pair %s %s : %d overlap hosts, %d branch pairs, %s" % (
            rid1, rid2, n, checked,
            "joinable" if not wit else "%d NOT JOINABLE" % len(wit)))
        for host, k1, k2, nf1, nf2 in wit:
            lines.append("  witness (%s vs %s):" % (k1[0], k2[0]))
            lines.append("    branch1 = %r" % nf1)
            lines.append("    branch2 = %r" % nf2)
            for ln in write_webg(host).splitlines():
                lines.append("    | " + ln)
    lines.append("nontrivial overlap hosts: %d" % total_hosts)
    if rep.coarse_ambients:
        lines.append("note: %d hosts have annular faces; web equality on such"
                     " ambients is homeomorphism-coarse (Dehn twists"
                     " identified)" % rep.coarse_ambients)
    if rep.result() == "confluent" and rep.measure["empirical"]:
        lines.append("note: local confluence certified; global confluence on"
                     " linear combinations additionally needs the empirical"
                     " rules' termination (Linear Diamond Lemma hypothesis)")
    lines.append("RESULT %s" % rep.result())
    return "\n".join(lines) + "\n"
