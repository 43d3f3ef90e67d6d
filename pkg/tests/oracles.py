"""Independent oracles used by the test suite.

These deliberately share no code with the engine paths they validate: the
Kauffman state sum works on braid words with a union-find over grid points,
the dichromatic oracle by recursive deletion-contraction on edge lists.
"""

import itertools
import random
from fractions import Fraction


# -- Kauffman bracket state sum ----------------------------------------------

def _poly_mul(p, q):
    out = {}
    for a, ca in p.items():
        for b, cb in q.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _poly_add(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


DELTA = {2: -1, -2: -1}  # -A^2 - A^-2


def bracket_state_sum(word, n):
    """delta-normalized bracket of the closure of a braid word: for every
    smoothing state, the crossings contribute A or A^-1 and each closed loop
    contributes delta. Returns an exponent->int dict in A."""
    total = {}
    k = len(word)
    for choice in itertools.product((0, 1), repeat=k):
        parent = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        exp = 0
        for lvl, (letter, c) in enumerate(zip(word, choice)):
            i = abs(letter)
            if letter > 0:
                exp += 1 if c == 0 else -1
            else:
                exp += -1 if c == 0 else 1
            for j in range(1, n + 1):
                if j in (i, i + 1):
                    continue
                union((lvl, j), (lvl + 1, j))
            if c == 0:  # strand-through smoothing
                union((lvl, i), (lvl + 1, i))
                union((lvl, i + 1), (lvl + 1, i + 1))
            else:  # cup-cap smoothing
                union((lvl, i), (lvl, i + 1))
                union((lvl + 1, i), (lvl + 1, i + 1))
        for j in range(1, n + 1):
            union((k, j), (0, j))
        loops = len({find(x) for x in list(parent)})
        if k == 0:
            loops = n
        val = {exp: 1}
        for _ in range(loops):
            val = _poly_mul(val, DELTA)
        total = _poly_add(total, val)
    return total


def bracket_of_ring_elem(elem):
    """RingElem (Laurent in A, no fractions) -> exponent dict for comparison."""
    return {e: c for e, c in elem.num}


# -- dichromatic polynomial by deletion-contraction ---------------------------

def dichrom_oracle(n_vertices, edges, rng=None):
    """Z(G) over Z[q, v]: Z = sum over A subseteq E of q^{|A|} v^{k(A)}, via
    randomized-order deletion/contraction with loop and vertex rules:
    Z(G) = Z(G - e) + q Z(G / e); loops contribute (1 + q); isolated vertices
    contribute v. Returns dict (qexp, vexp) -> int."""
    rng = rng or random.Random(0)

    def rec(nv, es):
        es = [e for e in es]
        if not es:
            return {(0, nv): 1}
        k = rng.randrange(len(es))
        (a, b) = es[k]
        rest = es[:k] + es[k + 1:]
        if a == b:  # loop: factor (1 + q)
            sub = rec(nv, rest)
            out = {}
            for (qe, ve), c in sub.items():
                out[(qe, ve)] = out.get((qe, ve), 0) + c
                out[(qe + 1, ve)] = out.get((qe + 1, ve), 0) + c
            return out
        deleted = rec(nv, rest)
        merged = []
        for (x, y) in rest:
            x2 = a if x == b else x
            y2 = a if y == b else y
            merged.append((x2, y2))
        contracted = rec(nv - 1, merged)
        out = dict(deleted)
        for (qe, ve), c in contracted.items():
            out[(qe + 1, ve)] = out.get((qe + 1, ve), 0) + c
        return {kk: v for kk, v in out.items() if v}

    return rec(n_vertices, list(edges))
