"""Exact coefficient arithmetic for the rule systems.

Two kinds of rings appear: univariate Laurent polynomials in one variable with
exponents in units 1/d (optionally closed under division, giving normalized
fractions), and multivariate integer polynomials (the dichromatic ring).
Elements are immutable and kept in a canonical form, so equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class RingError(Exception):
    pass


@dataclass(frozen=True)
class RingConfig:
    """Declares the coefficient ring: variable names, exponent denominator d
    (univariate only; exponents are integers in units of 1/d), and whether
    fractions are available."""

    variables: tuple
    denom: int = 1
    fractions: bool = False

    def __post_init__(self):
        if self.denom < 1:
            raise RingError("denominator must be >= 1")
        if (self.fractions or self.denom > 1) and len(self.variables) != 1:
            raise RingError("fractions and fractional exponents need a univariate ring")

    @property
    def univariate(self):
        return len(self.variables) == 1


# Polynomials are dicts exp -> int coeff; univariate exps are ints (units of
# 1/denom), multivariate exps are tuples of ints.


def _prune(p):
    return {e: c for e, c in p.items() if c}


def _padd(p, q):
    r = dict(p)
    for e, c in q.items():
        r[e] = r.get(e, 0) + c
    return _prune(r)


def _pneg(p):
    return {e: -c for e, c in p.items()}


def _pmul_uni(p, q):
    r = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            r[e] = r.get(e, 0) + c1 * c2
    return _prune(r)


def _pmul_multi(p, q):
    r = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            r[e] = r.get(e, 0) + c1 * c2
    return _prune(r)


def _content(p):
    g = 0
    for c in p.values():
        g = gcd(g, abs(c))
    return g or 1


def _poly_to_list(p):
    # dense list of Fractions, constant term first; requires min exp 0
    n = max(p) + 1
    out = [Fraction(0)] * n
    for e, c in p.items():
        out[e] = Fraction(c)
    return out


def _list_trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _list_divmod(a, b):
    # fraction-coefficient polynomial division
    a = a[:]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] * inv
        q[i] = f
        if f:
            for j, bc in enumerate(b):
                a[i + j] -= f * bc
    return q, _list_trim(a)


def _gcd_poly(p, q):
    """Primitive integer gcd (positive leading coefficient) of two ordinary
    integer polynomials given as exp->coeff dicts with min exp >= 0."""
    a, b = _list_trim(_poly_to_list(p)), _list_trim(_poly_to_list(q))
    while b:
        a, b = b, _list_divmod(a, b)[1]
    # a has Fraction coeffs; lift to primitive integer form
    den = 1
    for c in a:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return {e: c for e, c in enumerate(ints) if c}


def _exact_div(p, g):
    """Divide integer polynomial p by g (must divide exactly over Q, result
    rescaled to integers)."""
    a = _list_trim(_poly_to_list(p))
    b = _list_trim(_poly_to_list(g))
    q, r = _list_divmod(a, b)
    if r:
        raise RingError("non-exact polynomial division")
    den = 1
    for c in q:
        den = den * c.denominator // gcd(den, c.denominator)
    if den != 1:
        raise RingError("non-integer quotient")
    return {e: int(c) for e, c in enumerate(q) if c}


class RingElem:
    """Immutable canonical ring element: numerator/denominator pair."""

    __slots__ = ("cfg", "num", "den", "_hash")

    def __init__(self, cfg, num, den=None):
        num = _prune(num)
        if den is None:
            den = {_zero_exp(cfg): 1}
        den = _prune(den)
        if not den:
            raise RingError("zero denominator")
        if not cfg.fractions and den != {_zero_exp(cfg): 1}:
            raise RingError("fractions disabled for this ring")
        if cfg.univariate and cfg.fractions:
            num, den = _normalize_fraction(num, den)
        elif not num:
            den = {_zero_exp(cfg): 1}
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "num", tuple(sorted(num.items(), reverse=True)))
        object.__setattr__(self, "den", tuple(sorted(den.items(), reverse=True)))
        object.__setattr__(self, "_hash", hash((cfg, self.num, self.den)))

    def __setattr__(self, *a):
        raise AttributeError("RingElem is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, cfg):
        return cls(cfg, {})

    @classmethod
    def one(cls, cfg):
        return cls(cfg, {_zero_exp(cfg): 1})

    @classmethod
    def integer(cls, cfg, n):
        return cls(cfg, {_zero_exp(cfg): n})

    @classmethod
    def monomial(cls, cfg, exps, coeff=1):
        """Univariate: exps is the exponent in units 1/d. Multivariate: a
        mapping var -> integer exponent."""
        if cfg.univariate:
            return cls(cfg, {exps: coeff})
        key = tuple(exps.get(v, 0) for v in cfg.variables)
        return cls(cfg, {key: coeff})

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.cfg != other.cfg:
            raise RingError("mixed ring configurations")

    def __add__(self, other):
        self._check(other)
        n1, d1 = dict(self.num), dict(self.den)
        n2, d2 = dict(other.num), dict(other.den)
        mul = _pmul_uni if self.cfg.univariate else _pmul_multi
        if d1 == d2:
            return RingElem(self.cfg, _padd(n1, n2), d1)
        return RingElem(self.cfg, _padd(mul(n1, d2), mul(n2, d1)), mul(d1, d2))

    def __neg__(self):
        return RingElem(self.cfg, _pneg(dict(self.num)), dict(self.den))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        mul = _pmul_uni if self.cfg.univariate else _pmul_multi
        return RingElem(self.cfg, mul(dict(self.num), dict(other.num)),
                        mul(dict(self.den), dict(other.den)))

    def inverse(self):
        if not self.cfg.fractions:
            raise RingError("fractions disabled for this ring")
        if not self.num:
            raise RingError("division by zero")
        return RingElem(self.cfg, dict(self.den), dict(self.num))

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self == RingElem.one(self.cfg)

    def __eq__(self, other):
        return (isinstance(other, RingElem) and self.cfg == other.cfg
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return self._hash

    # -- evaluation --------------------------------------------------------

    def evaluate(self, point):
        """Exact rational evaluation. For a univariate ring the point maps the
        variable to the value of var^(1/d) directly."""
        if self.cfg.univariate:
            v = Fraction(point[self.cfg.variables[0]])
            num = _eval_uni(dict(self.num), v)
            den = _eval_uni(dict(self.den), v)
        else:
            vals = [Fraction(point[x]) for x in self.cfg.variables]
            num = _eval_multi(dict(self.num), vals)
            den = _eval_multi(dict(self.den), vals)
        if den == 0:
            raise RingError("denominator vanishes at evaluation point")
        return num / den

    # -- printing / parsing ------------------------------------------------

    def __str__(self):
        den_one = dict(self.den) == {_zero_exp(self.cfg): 1}
        num = _poly_str(dict(self.num), self.cfg)
        if den_one:
            return num
        return "(%s)/(%s)" % (num, _poly_str(dict(self.den), self.cfg))

    def __repr__(self):
        return "RingElem(%s)" % self

    @classmethod
    def parse(cls, cfg, text):
        return _parse_elem(cfg, text)


def _zero_exp(cfg):
    return 0 if cfg.univariate else (0,) * len(cfg.variables)


def _normalize_fraction(num, den):
    if not num:
        return {}, {0: 1}
    shift = min(min(num), min(den))
    num = {e - shift: c for e, c in num.items()}
    den = {e - shift: c for e, c in den.items()}
    g = _gcd_poly(num, den)
    if g != {0: 1}:
        num = _exact_div(num, g)
        den = _exact_div(den, g)
    c = gcd(_content(num), _content(den))
    if c > 1:
        num = {e: v // c for e, v in num.items()}
        den = {e: v // c for e, v in den.items()}
    if den[max(den)] < 0:
        num, den = _pneg(num), _pneg(den)
    return num, den


def _eval_uni(p, v):
    out = Fraction(0)
    for e, c in p.items():
        if e < 0 and v == 0:
            raise RingError("evaluation at zero with negative exponent")
        out += c * v ** e
    return out


def _eval_multi(p, vals):
    out = Fraction(0)
    for exps, c in p.items():
        t = Fraction(c)
        for v, e in zip(vals, exps):
            if e < 0 and v == 0:
                raise RingError("evaluation at zero with negative exponent")
            t *= v ** e
        out += t
    return out


# ---------------------------------------------------------------------------
# textual syntax


def _mono_str(exp, cfg):
    if cfg.univariate:
        if exp == 0:
            return ""
        var = cfg.variables[0]
        g = gcd(abs(exp), cfg.denom)
        a, b = exp // g, cfg.denom // g
        if a == 1 and b == 1:
            return var
        if b == 1:
            return "%s^%d" % (var, a)
        return "%s^%d/%d" % (var, a, b)
    parts = []
    for v, e in zip(cfg.variables, exp):
        if e == 0:
            continue
        parts.append(v if e == 1 else "%s^%d" % (v, e))
    return "*".join(parts)


def _poly_str(p, cfg):
    if not p:
        return "0"
    out = []
    for exp, c in sorted(p.items(), reverse=True):
        mono = _mono_str(exp, cfg)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = "%d*%s" % (mag, mono)
        else:
            body = str(mag)
        if not out:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out)


class _Tok:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            raise RingError("expected %r at %d in %r" % (ch, self.pos, self.text))
        self.pos += 1

    def integer(self):
        self.peek()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or not self.text[start:self.pos].lstrip("+-"):
            raise RingError("expected integer at %d in %r" % (start, self.text))
        return int(self.text[start:self.pos])

    def ident(self):
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]


def _parse_mono(tok, cfg):
    var = tok.ident()
    if var not in cfg.variables:
        raise RingError("unknown variable %r" % var)
    e_num, e_den = 1, 1
    if tok.peek() == "^":
        tok.take("^")
        e_num = tok.integer()
        if tok.peek() == "/":
            tok.take("/")
            e_den = tok.integer()
    if cfg.denom % e_den:
        raise RingError("exponent %d/%d not in units 1/%d" % (e_num, e_den, cfg.denom))
    if cfg.univariate:
        return {var: e_num * (cfg.denom // e_den)}
    if e_den != 1:
        raise RingError("fractional exponent in multivariate ring")
    return {var: e_num}


def _parse_poly(tok, cfg):
    p = {}
    sign = 1
    if tok.peek() in "+-":
        if tok.peek() == "-":
            sign = -1
        tok.pos += 1
    while True:
        coeff = sign
        exps = {}
        if tok.peek().isdigit():
            coeff = sign * tok.integer()
            if tok.peek() == "*":
                tok.take("*")
                exps = _parse_mono(tok, cfg)
                while tok.peek() == "*":
                    tok.take("*")
                    for v, e in _parse_mono(tok, cfg).items():
                        exps[v] = exps.get(v, 0) + e
        else:
            exps = _parse_mono(tok, cfg)
            while tok.peek() == "*":
                tok.take("*")
                for v, e in _parse_mono(tok, cfg).items():
                    exps[v] = exps.get(v, 0) + e
        if cfg.univariate:
            key = exps.get(cfg.variables[0], 0)
        else:
            key = tuple(exps.get(v, 0) for v in cfg.variables)
        p[key] = p.get(key, 0) + coeff
        nxt = tok.peek()
        if nxt == "+":
            sign = 1
            tok.pos += 1
        elif nxt == "-":
            sign = -1
            tok.pos += 1
        else:
            return p


def _parse_elem(cfg, text):
    tok = _Tok(text)
    if tok.peek() == "(":
        save = tok.pos
        tok.take("(")
        num = _parse_poly(tok, cfg)
        try:
            tok.take(")")
            tok.take("/")
            tok.take("(")
        except RingError:
            # a parenthesized plain polynomial is not part of the grammar;
            # reset and parse as polynomial
            tok.pos = save
            p = _parse_poly(tok, cfg)
            if tok.peek():
                raise
            return RingElem(cfg, p)
        den = _parse_poly(tok, cfg)
        tok.take(")")
        if tok.peek():
            raise RingError("trailing input in %r" % text)
        return RingElem(cfg, num, den)
    p = _parse_poly(tok, cfg)
    if tok.peek():
        raise RingError("trailing input in %r" % text)
    return RingElem(cfg, p)
