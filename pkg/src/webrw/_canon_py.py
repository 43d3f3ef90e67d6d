"""Canonical encodings of surface webs (pure Python kernel).

The key is a minimum serialization over the allowed presentation freedom:
vertex flips (gauge), root choices for closed components, and a global
reflection where the category and boundary permit one. Equal keys iff the
webs are equivalent as boundary-parametrized combinatorial maps.
"""

from __future__ import annotations


def web_key(web, rigid_boundary=True):
    variants = [_encode(web)]
    slotted = any(n > 0 for n, marks in web.boundary)
    allow_reflection = web.category != "oriented" and (not slotted or not rigid_boundary)
    if allow_reflection:
        variants.append(_encode(_reflected(web)))
    return min(variants)


def _reflected(web):
    from .smap import SurfaceWeb
    prv = {}
    for d, e in web.nxt.items():
        prv[e] = d
    boundary = []
    slotmap = {}
    for bid, (n, marks) in enumerate(web.boundary):
        newmarks = {}
        for k, m in marks.items():
            nk = (n - 1 - k) % n if n else k
            newmarks[nk] = m
            slotmap[(bid, k)] = (bid, nk)
        boundary.append((n, newmarks))
    ext_pos = {x: slotmap.get(p, p) for x, p in web.ext_pos.items()}
    over = {}
    for v, pair in web.over.items():
        over[v] = frozenset(web.star(v)) - pair  # reflection swaps over/under
    return SurfaceWeb(web.category, web.vkind, web.vtype, web.vat, prv,
                      web.eps, web.twist, web.lab, ext_pos, boundary,
                      web.regions_decl, web.nu, over)


def _rotation_from(web, d, reverse, prv):
    out = [d]
    step = prv if reverse else web.nxt
    cur = step[d]
    while cur != d:
        out.append(cur)
        cur = step[cur]
    return out


class _Enc:
    """One encoding pass: index assignment + token stream."""

    def __init__(self, web):
        self.web = web
        self.prv = {}
        for d, e in web.nxt.items():
            self.prv[e] = d
        self.idx = {}
        self.order = []
        self.flip = {}
        self.tokens = []

    def clone(self):
        c = _Enc.__new__(_Enc)
        c.web = self.web
        c.prv = self.prv
        c.idx = dict(self.idx)
        c.order = list(self.order)
        c.flip = dict(self.flip)
        c.tokens = list(self.tokens)
        return c

    def reach(self, d):
        if d not in self.idx:
            self.idx[d] = len(self.order)
            self.order.append(d)

    def process(self, start, root_flip=None):
        web = self.web
        i = start
        while i < len(self.order):
            d = self.order[i]
            i += 1
            v = web.vat[d]
            if v not in self.flip:
                e = web.eps[d]
                if web.vkind[v] == "ext":
                    self.flip[v] = 0
                elif web.vat[e] in self.flip:
                    self.flip[v] = web.twist[d] ^ self.flip[web.vat[e]]
                else:
                    self.flip[v] = root_flip or 0
                if web.vkind[v] == "ext":
                    bid, slot = web.ext_pos[v]
                    self.tokens.append("X%d.%d" % (bid, slot))
                else:
                    self.tokens.append("V%s" % (web.vtype.get(v),))
                rot = _rotation_from(web, d, bool(self.flip[v]), self.prv)
                for s in rot:
                    self.reach(s)
                self.tokens.append("r%d" % len(rot))
            self.reach(web.eps[d])
        return i

    def edge_rows(self, darts, base=0):
        web = self.web
        rows = []
        for d in darts:
            e = web.eps[d]
            eff = web.twist[d] ^ self.flip[web.vat[d]] ^ self.flip[web.vat[e]]
            over = web.over.get(web.vat[d])
            ob = "o" if over is not None and d in over else ""
            rows.append("%d,%s,%d%s" % (self.idx[e] - base, web.lab[d], eff, ob))
        return "|".join(rows)


def _component_darts(web, d0):
    seen = set()
    stack = [d0]
    while stack:
        d = stack.pop()
        if d in seen:
            continue
        seen.add(d)
        stack.append(web.eps[d])
        stack.append(web.nxt[d])
    return sorted(seen, key=repr)


def _component_plans(web, comp):
    """All (root, flip) plans achieving the minimal standalone encoding of a
    closed component, plus that code. In the oriented category the stored
    rotations carry the orientation, so the root flip is not free (a flipped
    closed component would be its mirror image)."""
    best = None
    plans = []
    flips = (0,) if web.category == "oriented" else (0, 1)
    for root in comp:
        for f0 in flips:
            enc = _Enc(web)
            enc.reach(root)
            enc.process(0, root_flip=f0)
            code = "|".join(enc.tokens) + "#" + enc.edge_rows(enc.order)
            if best is None or code < best:
                best = code
                plans = [(root, f0)]
            elif code == best:
                plans.append((root, f0))
    return best, plans


def _encode(web):
    import itertools

    head = []
    for bid, (n, marks) in enumerate(web.boundary):
        head.append("b%d:%s" % (n, ",".join(
            "%d=%s" % (k, marks[k]) for k in sorted(marks))))

    enc0 = _Enc(web)
    for bid, (n, marks) in enumerate(web.boundary):
        occupants = {k: x for x, (b, k) in web.ext_pos.items() if b == bid}
        for k in range(n):
            if k in occupants:
                enc0.reach(web.star(occupants[k])[0])
    enc0.process(0)
    anchored = "|".join(enc0.tokens) + "#" + enc0.edge_rows(enc0.order)

    groups = {}  # code -> list of (comp, plans)
    remaining = [d for d in web.darts() if d not in enc0.idx]
    while remaining:
        comp = _component_darts(web, remaining[0])
        code, plans = _component_plans(web, comp)
        groups.setdefault(code, []).append((comp, plans))
        done = set(comp)
        remaining = [d for d in remaining if d not in done]

    # enumerate orderings within tied groups and tied per-component plans;
    # region rows can distinguish otherwise identical components
    def variants():
        codes = sorted(groups)
        per_group = []
        for c in codes:
            entries = groups[c]
            opts = []
            for perm in itertools.permutations(range(len(entries))):
                for choice in itertools.product(*[entries[i][1] for i in perm]):
                    opts.append([(entries[perm[j]][0], choice[j])
                                 for j in range(len(perm))])
            per_group.append(opts)
        count = 1
        for opts in per_group:
            count *= len(opts)
        if count > 2000:
            # pathological symmetry: fall back to the first option per group
            flat = []
            for opts in per_group:
                flat.extend(opts[0])
            yield flat
            return
        for combo in itertools.product(*per_group):
            flat = []
            for seq in combo:
                flat.extend(seq)
            yield flat

    best = None
    for plan in variants():
        enc = enc0.clone()
        comp_codes = []
        for comp, (root, f0) in plan:
            base = len(enc.order)
            mark = len(enc.tokens)
            enc.reach(root)
            enc.process(base, root_flip=f0)
            comp_codes.append("|".join(enc.tokens[mark:]) + "#" +
                              enc.edge_rows(enc.order[base:], base))
        region_rows = _region_code(web, enc.idx, enc.flip)
        full = ("&".join(head) + "#" + anchored + "#" +
                ";".join(comp_codes) + "#" + region_rows).encode()
        if best is None or full < best:
            best = full
    return best


def _region_code(web, idx, flip):
    walk_ids = {}
    for w in web.walks():
        cands = []
        for it in w.items:
            if it[0] == "s":
                _, d, side = it
                cands.append("s%06d.%d" % (idx[d], side ^ flip[web.vat[d]]))
            else:
                cands.append("a%s.%s" % (it[1], it[2]))
        walk_ids[w.idx] = min(cands)
    rows = []
    for r in web.regions():
        if len(r.walks) == 1 and r.genus == 0 and r.crosscaps == 0:
            continue
        rows.append("{%s;g%d;k%d}" % (",".join(sorted(walk_ids[i] for i in r.walks)),
                                      r.genus, r.crosscaps))
    rows.sort()
    return "".join(rows)
