import random

import pytest

from webrw.rewrite import (LinearWeb, RewriteError, apply_match, check_measure,
                           find_reduction, is_irreducible, matches,
                           normal_form, reduce_once)
from webrw.ring import RingElem
from webrw.smap import ORIENTED, build_web
from webrw.systems import (a1_system, braid_closure_web, kauffman_bracket)

from oracles import bracket_state_sum

SYS = a1_system()
ONE = RingElem.one(SYS.ring)


def nonseparating_torus_circle():
    # circle on the torus whose complement is a single annulus face
    return build_web(ORIENTED, {}, {}, [("m", "0", "m", "0", 0)], [],
                     regions=[([("dart", (0, 0), 0), ("dart", (0, 0), 1)],
                               0, 0)],
                     markers=["m"])


def test_matches_circle_contractible_vs_not():
    circ = braid_closure_web([], 1)  # one contractible circle on the sphere
    s2 = SYS.rule_by_id("A1.S2")
    assert len(matches(circ, s2)) >= 1
    assert matches(nonseparating_torus_circle(), s2) == []


def test_matches_empty_web():
    empty = braid_closure_web([1], 2)
    nf = normal_form(LinearWeb.of(empty, ONE), SYS)
    (w, c), = nf.terms.values()
    for rule in SYS.rules:
        assert matches(w, rule) == []


def test_apply_crossing_two_states():
    w = braid_closure_web([1], 2)
    s1 = SYS.rule_by_id("A1.S1")
    ms = matches(w, s1)
    m = min(ms, key=lambda m: m.key())
    pieces = apply_match(w, s1, m)
    assert len(pieces) == 2
    coeffs = sorted(str(c) for c, _ in pieces)
    assert coeffs == ["A", "A^-1"]
    sizes = sorted(len(t.vkind) for _, t in pieces)
    assert sizes == [1, 2]  # one circle and two circles


def test_apply_locality():
    # a disjoint free circle is untouched by resolving the kink's crossing
    kink = braid_closure_web([1], 2)
    both = braid_closure_web([1], 3)  # extra strand closes into a circle
    s1 = SYS.rule_by_id("A1.S1")
    m1 = min(matches(kink, s1), key=lambda m: m.key())
    m2 = min(matches(both, s1), key=lambda m: m.key())
    p1 = apply_match(kink, s1, m1)
    p2 = apply_match(both, s1, m2)
    for (c1, t1), (c2, t2) in zip(p1, p2):
        assert c1 == c2
        assert len(t2.vkind) == len(t1.vkind) + 1


def test_reduce_once_rule_order():
    # a web with both a crossing and a free circle reduces the crossing first
    w = braid_closure_web([1], 3)
    red = find_reduction(LinearWeb.of(w, ONE), SYS)
    assert SYS.rules[red[3]].rid == "A1.S1"


def test_reduce_once_irreducible():
    assert reduce_once(LinearWeb.of(nonseparating_torus_circle(), ONE), SYS) \
        is None


def test_cancellation_drops_zero_terms():
    w = braid_closure_web([], 1)
    x = LinearWeb.of(w, ONE) + LinearWeb.of(w, -ONE)
    assert x.is_zero()


def test_kink_normal_form():
    w = braid_closure_web([1], 2)
    nf = normal_form(LinearWeb.of(w, ONE), SYS)
    (ww, c), = nf.terms.values()
    assert not ww.vat
    assert c == RingElem.parse(SYS.ring, "A^5 + A")


def test_psi_identity_on_irreducible():
    w = nonseparating_torus_circle()
    nf = normal_form(LinearWeb.of(w, ONE), SYS)
    assert nf == LinearWeb.of(w, ONE)


def test_budget_alarm():
    w = braid_closure_web([1, 1, 1], 2)
    with pytest.raises(RewriteError):
        normal_form(LinearWeb.of(w, ONE), SYS, budget=2)


def test_bracket_matches_state_sum_small():
    rng = random.Random(17)
    cases = [([1], 2), ([-1], 2), ([1, 1], 2), ([1, 1, 1], 2),
             ([1, -2, 1, -2], 3), ([1, 2, 1, 2], 3), ([-1, -1], 2)]
    for _ in range(8):
        n = rng.choice([2, 3])
        word = [rng.choice([1, -1]) * rng.randrange(1, n)
                for _ in range(rng.randrange(1, 5))]
        cases.append((word, n))
    for word, n in cases:
        try:
            w = braid_closure_web(word, n)
        except Exception:
            continue
        got = kauffman_bracket(w)
        exp = bracket_state_sum(word, n)
        assert {e: c for e, c in got.num} == exp, (word, n)


def test_psi_linearity():
    rng = random.Random(5)
    a = RingElem.parse(SYS.ring, "A^2 - 3")
    b = RingElem.parse(SYS.ring, "-A + 1")
    x = LinearWeb.of(braid_closure_web([1], 2), ONE)
    y = LinearWeb.of(braid_closure_web([1, 1], 2), ONE)
    lhs = normal_form(x.scaled(a) + y.scaled(b), SYS)
    rhs = normal_form(x, SYS).scaled(a) + normal_form(y, SYS).scaled(b)
    assert lhs == rhs


def random_strategy_normal_form(lw, system, rng, budget=10000):
    cur = lw
    for _ in range(budget):
        options = []
        for k, (w, c) in cur.terms.items():
            for ri, rule in enumerate(system.rules):
                for m in matches(w, rule):
                    options.append((k, w, c, ri, m))
        if not options:
            return cur
        k, w, c, ri, m = options[rng.randrange(len(options))]
        nxt = LinearWeb()
        for k2, (w2, c2) in cur.terms.items():
            if k2 != k:
                nxt.add_term(w2, c2)
        for coeff, web2 in apply_match(w, system.rules[ri], m,
                                       tag=("R", rng.randrange(1 << 30))):
            nxt.add_term(web2, c * coeff)
        cur = nxt
    raise AssertionError("budget exceeded")


def test_strategy_independence():
    rng = random.Random(23)
    for word, n in [([1, 1], 2), ([1, -2, 1], 3), ([2, 1, 1, 2], 3)]:
        w = braid_closure_web(word, n)
        base = normal_form(LinearWeb.of(w, ONE), SYS)
        for _ in range(6):
            assert random_strategy_normal_form(LinearWeb.of(w, ONE), SYS,
                                               rng) == base


def test_measure_report_a1():
    rep = check_measure(SYS)
    assert rep["ok"]
    assert sorted(rep["proven"]) == ["A1.S1", "A1.S2"]
    assert rep["empirical"] == []


def test_euler_conserved_under_rewriting():
    w = braid_closure_web([1, -2, 1], 3)
    chi = w.euler()
    x = LinearWeb.of(w, ONE)
    for _ in range(6):
        x2 = reduce_once(x, SYS)
        if x2 is None:
            break
        x = x2
        for k, (ww, c) in x.terms.items():
            if ww.vat:
                assert ww.euler() == chi
