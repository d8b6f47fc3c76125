"""Differential polynomials, lambda-polynomials and their quotient normal forms.

A monomial is a sorted tuple of factors ``(gen, order)``; ``()`` is 1.
A :class:`LambdaPoly` is a dict keyed by ``(exps, mono, tag)``: ``exps`` are
the lambda exponents, ``tag`` is ``None`` for honest values or an unknown's
label when the polynomial is a linear form in unknown coefficients.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from itertools import product
from math import comb

from .exact_linalg import Echelon, Q, vec_iadd

UNIT = ()


# ------------------------------------------------------------ monomials

def mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def mono_weight(m: tuple, weights) -> int:
    return sum(weights[g] + o for g, o in m)


def mono_key(m: tuple) -> tuple:
    """Order key: larger means leading (derivative orders, descending, compared lexicographically)."""
    return tuple(sorted(((o, g) for g, o in m), reverse=True))


@lru_cache(maxsize=None)
def mono_derivative(m: tuple) -> tuple:
    """∂m as a tuple of (mono, int coefficient)."""
    out: dict = {}
    for idx, f in enumerate(m):
        if idx and m[idx - 1] == f:
            continue
        mult = m.count(f)
        rest = list(m)
        rest.remove(f)
        new = tuple(sorted(rest + [(f[0], f[1] + 1)]))
        out[new] = out.get(new, 0) + mult
    return tuple(out.items())


@lru_cache(maxsize=None)
def mono_dpow(m: tuple, r: int) -> tuple:
    """∂^r m as a tuple of (mono, int coefficient)."""
    if r == 0:
        return ((m, 1),)
    out: dict = {}
    for a, c in mono_dpow(m, r - 1):
        for b, d in mono_derivative(a):
            out[b] = out.get(b, 0) + c * d
    return tuple((k, v) for k, v in out.items() if v)


def _factors_upto(weight, weights):
    fs = []
    for g, d in enumerate(weights):
        for o in range(0, weight - d + 1):
            fs.append((g, o))
    fs.sort(key=lambda f: (weights[f[0]] + f[1], f))
    return fs


@lru_cache(maxsize=None)
def monomials(weight: int, weights: tuple) -> tuple:
    """All monomials of the given conformal weight (the unit has weight 0)."""
    if weight < 0:
        return ()
    if weight == 0:
        return (UNIT,)
    fs = _factors_upto(weight, weights)
    out = []

    def rec(start, left, acc):
        if left == 0:
            out.append(tuple(sorted(acc)))
            return
        for idx in range(start, len(fs)):
            w = weights[fs[idx][0]] + fs[idx][1]
            if w > left:
                break
            acc.append(fs[idx])
            rec(idx, left - w, acc)
            acc.pop()

    rec(0, weight, [])
    return tuple(sorted(set(out), key=mono_key, reverse=True))


@lru_cache(maxsize=None)
def exponent_vectors(nvars: int, degree: int) -> tuple:
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for first in range(degree, -1, -1):
        for rest in exponent_vectors(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


# -------------------------------------------------------- linear forms

@lru_cache(maxsize=None)
def _lin_power(form: tuple, k: int, nvars: int) -> tuple:
    """(Σ c_i λ_i)^k as a tuple of (exps, coeff); form is ((i, c), ...)."""
    if k == 0:
        return (((0,) * nvars, Q(1)),)
    prev = _lin_power(form, k - 1, nvars)
    out: dict = {}
    for e, c in prev:
        for i, a in form:
            e2 = list(e)
            e2[i] += 1
            e2 = tuple(e2)
            out[e2] = out.get(e2, 0) + c * a
    return tuple((e, c) for e, c in out.items() if c)


def _form_key(form: dict) -> tuple:
    return tuple(sorted((i, Q(c)) for i, c in form.items() if c))


# ------------------------------------------------------- lambda polys

class LambdaPoly:
    """Polynomial in λ_1..λ_n with differential-polynomial coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int = 0, terms: dict | None = None):
        self.nvars = nvars
        self.terms = terms if terms is not None else {}

    # constructors
    @classmethod
    def const(cls, c, nvars=0):
        c = Q(c)
        return cls(nvars, {((0,) * nvars, UNIT, None): c} if c else {})

    @classmethod
    def mono(cls, m, nvars=0, coeff=1, exps=None, tag=None):
        e = tuple(exps) if exps is not None else (0,) * nvars
        return cls(nvars, {(e, tuple(m), tag): Q(coeff)})

    @classmethod
    def gen(cls, g, order=0, nvars=0):
        return cls.mono(((g, order),), nvars)

    @classmethod
    def lam(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {(tuple(e), UNIT, None): Q(1)})

    # arithmetic
    def copy(self):
        return LambdaPoly(self.nvars, dict(self.terms))

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError(f"mixing {self.nvars} and {other.nvars} lambda variables")

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        vec_iadd(t, other.terms)
        return LambdaPoly(self.nvars, t)

    def __sub__(self, other):
        self._check(other)
        t = dict(self.terms)
        vec_iadd(t, other.terms, -1)
        return LambdaPoly(self.nvars, t)

    def __neg__(self):
        return LambdaPoly(self.nvars, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        c = Q(c)
        if not c:
            return LambdaPoly(self.nvars)
        return LambdaPoly(self.nvars, {k: c * v for k, v in self.terms.items()})

    def iadd(self, other, c=1):
        self._check(other)
        vec_iadd(self.terms, other.terms, c)
        return self

    def __mul__(self, other):
        if not isinstance(other, LambdaPoly):
            return self.scale(other)
        if other.nvars == 0 and self.nvars:
            other = other.embed((), self.nvars)
        elif self.nvars == 0 and other.nvars:
            return other * self
        self._check(other)
        out: dict = {}
        for (e1, m1, t1), c1 in self.terms.items():
            for (e2, m2, t2), c2 in other.terms.items():
                if t1 is not None and t2 is not None:
                    raise ValueError("product of two unknowns is not linear")
                key = (tuple(a + b for a, b in zip(e1, e2)), mono_mul(m1, m2), t1 if t1 is not None else t2)
                v = out.get(key, 0) + c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return LambdaPoly(self.nvars, out)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, LambdaPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"LambdaPoly({self.nvars}, {format_poly(self)})"

    # structure
    def derivative(self):
        """∂ acting on the coefficients."""
        out: dict = {}
        for (e, m, t), c in self.terms.items():
            for m2, d in mono_derivative(m):
                key = (e, m2, t)
                out[key] = out.get(key, 0) + c * d
        return LambdaPoly(self.nvars, {k: v for k, v in out.items() if v})

    def dpow(self, r: int):
        out: dict = {}
        for (e, m, t), c in self.terms.items():
            for m2, d in mono_dpow(m, r):
                key = (e, m2, t)
                out[key] = out.get(key, 0) + c * d
        return LambdaPoly(self.nvars, {k: v for k, v in out.items() if v})

    def tags(self) -> set:
        return {t for (_, _, t) in self.terms}

    def split_tags(self) -> dict:
        out: dict = {}
        for (e, m, t), c in self.terms.items():
            out.setdefault(t, {})[(e, m, None)] = c
        return {t: LambdaPoly(self.nvars, d) for t, d in out.items()}

    def with_tag(self, tag):
        out: dict = {}
        for (e, m, t), c in self.terms.items():
            if t is not None:
                raise ValueError("polynomial already carries an unknown")
            out[(e, m, tag)] = c
        return LambdaPoly(self.nvars, out)

    def lam_degree(self, i: int) -> int:
        return max((e[i] for (e, _, _) in self.terms), default=0)

    def substitute(self, images, nvars: int):
        """Replace λ_i by the linear form images[i] (a dict var -> coeff) in nvars variables."""
        if len(images) != self.nvars:
            raise ValueError("need one image per lambda variable")
        keys = [_form_key(f) for f in images]
        out: dict = {}
        for (e, m, t), c in self.terms.items():
            acc = {((0,) * nvars): c}
            for i, k in enumerate(e):
                if not k:
                    continue
                pw = _lin_power(keys[i], k, nvars)
                nxt: dict = {}
                for e1, c1 in acc.items():
                    for e2, c2 in pw:
                        e3 = tuple(a + b for a, b in zip(e1, e2))
                        nxt[e3] = nxt.get(e3, 0) + c1 * c2
                acc = nxt
            for e3, c3 in acc.items():
                if c3:
                    key = (e3, m, t)
                    v = out.get(key, 0) + c3
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return LambdaPoly(nvars, out)

    def embed(self, positions, nvars: int):
        """Rename λ_i to λ_{positions[i]} inside nvars variables."""
        out: dict = {}
        for (e, m, t), c in self.terms.items():
            e2 = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    e2[positions[i]] += k
            key = (tuple(e2), m, t)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return LambdaPoly(nvars, out)

    def shift_substitute(self, slot: int, target):
        """λ_slot ↦ λ_slot + ∂, with ∂ acting on target, and multiply by target."""
        if target.nvars not in (0, self.nvars):
            raise ValueError("target has the wrong number of lambda variables")
        if target.nvars == 0 and self.nvars:
            target = target.embed((), self.nvars)
        deg = self.lam_degree(slot)
        ders = [target]
        for _ in range(deg):
            ders.append(ders[-1].derivative())
        out = LambdaPoly(self.nvars)
        for (e, m, t), c in self.terms.items():
            k = e[slot]
            for r in range(k + 1):
                e2 = list(e)
                e2[slot] = k - r
                base = LambdaPoly(self.nvars, {(tuple(e2), m, t): c * comb(k, r)})
                out.iadd(base * ders[r])
        return out

    def weight(self, weights):
        """Common conformal weight, or None for an inhomogeneous (or zero) polynomial."""
        ws = {sum(e) + mono_weight(m, weights) for (e, m, _) in self.terms}
        if len(ws) == 1:
            return ws.pop()
        return None

    def coefficient_vector(self) -> dict:
        return dict(self.terms)


def Poly(terms=None) -> LambdaPoly:
    """A plain differential polynomial (no lambda variables)."""
    return LambdaPoly(0, terms)


def total_derivative(p: LambdaPoly) -> LambdaPoly:
    return p.derivative()


@lru_cache(maxsize=None)
def _elim_expansion(nvars: int, m: int, mono: tuple) -> tuple:
    """(-λ_1-...-λ_{n-1}-∂)^m applied to mono, as ((exps, mono), coeff) pairs."""
    out: dict = {}
    form = tuple((i, Q(1)) for i in range(nvars - 1))
    sgn = -1 if m % 2 else 1
    for r in range(m + 1):
        a = m - r
        lam = _lin_power(form, a, nvars) if nvars > 1 else ((((0,) * nvars), Q(1)),) if a == 0 else ()
        if not lam:
            continue
        for m2, d in mono_dpow(mono, r):
            for e, c in lam:
                key = (e, m2)
                out[key] = out.get(key, 0) + sgn * comb(m, r) * d * c
    return tuple((k, v) for k, v in out.items() if v)


def normal_form(p: LambdaPoly) -> LambdaPoly:
    """Canonical representative modulo ∂ + λ_1 + ... + λ_n: eliminate λ_n."""
    n = p.nvars
    if n == 0:
        raise ValueError("use normal_form_v0 for the zero-variable quotient")
    out: dict = {}
    for (e, m, t), c in p.terms.items():
        k = e[-1]
        if not k:
            v = out.get((e, m, t), 0) + c
            out[(e, m, t)] = v
            continue
        base = e[:-1] + (0,)
        for (e2, m2), d in _elim_expansion(n, k, m):
            key = (tuple(a + b for a, b in zip(base, e2)), m2, t)
            out[key] = out.get(key, 0) + c * d
    return LambdaPoly(n, {k: v for k, v in out.items() if v})


def normal_form_quotient(p: LambdaPoly, n: int | None = None) -> LambdaPoly:
    if n is not None and n != p.nvars:
        raise ValueError(f"expected {n} lambda variables, got {p.nvars}")
    return normal_form(p)


def in_quotient_ideal(p: LambdaPoly) -> bool:
    return normal_form(p).is_zero()


# ----------------------------------------------------- V / ∂V

class _V0Reducer:
    def __init__(self, weights):
        self.weights = tuple(weights)
        self._ech: dict = {}

    def echelon(self, w: int) -> Echelon:
        e = self._ech.get(w)
        if e is None:
            e = Echelon(pivot_key=mono_key)
            for m in monomials(w - 1, self.weights):
                if m:
                    e.add({m2: Q(d) for m2, d in mono_derivative(m)})
            self._ech[w] = e
        return e

    def reduce(self, p: LambdaPoly) -> LambdaPoly:
        if p.nvars:
            raise ValueError("V/∂V normal form takes a lambda-free polynomial")
        by: dict = {}
        for (_, m, t), c in p.terms.items():
            by.setdefault((t, mono_weight(m, self.weights)), {})[m] = c
        out: dict = {}
        for (t, w), vec in by.items():
            res = self.echelon(w).residual(vec) if w > 0 else vec
            for m, c in res.items():
                out[((), m, t)] = c
        return LambdaPoly(0, out)

    def survivors(self, w: int) -> list:
        e = self.echelon(w)
        return [m for m in monomials(w, self.weights) if m not in e.pivots]


_v0: dict = {}


def v0_reducer(weights) -> _V0Reducer:
    key = tuple(weights)
    r = _v0.get(key)
    if r is None:
        r = _v0[key] = _V0Reducer(key)
    return r


def normal_form_v0(p: LambdaPoly, weights) -> LambdaPoly:
    """Canonical representative of p + ∂V."""
    return v0_reducer(weights).reduce(p)


# ------------------------------------------- tensor powers and ∂-bases

def tuple_weight(t, weights) -> int:
    return sum(mono_weight(m, weights) for m in t)


def tuple_derivative(t: tuple) -> dict:
    """Diagonal ∂ on a tensor of monomials."""
    out: dict = {}
    for i, m in enumerate(t):
        for m2, d in mono_derivative(m):
            t2 = t[:i] + (m2,) + t[i + 1:]
            out[t2] = out.get(t2, 0) + d
    return out


def tuple_key(t):
    return tuple(mono_key(m) for m in t)


class TensorBasis:
    """A complement of ∂(V^{⊗k}) in each weight, with decomposition into ∂-powers."""

    def __init__(self, weights, k: int):
        self.weights = tuple(weights)
        self.k = k
        self._tuples: dict = {}
        self._ech: dict = {}
        self._dec: dict = {}

    def tuples(self, w: int) -> list:
        hit = self._tuples.get(w)
        if hit is None:
            hit = []
            for split in _compositions(w, self.k):
                for ms in product(*(monomials(x, self.weights) for x in split)):
                    hit.append(tuple(ms))
            self._tuples[w] = hit
        return hit

    def _echelon(self, w: int) -> Echelon:
        e = self._ech.get(w)
        if e is None:
            e = Echelon(pivot_key=tuple_key)
            if w > 0:
                for t in self.tuples(w - 1):
                    row = {t2: Q(c) for t2, c in tuple_derivative(t).items() if c}
                    if row:
                        if not e.add(row, payload={t: Q(1)}):
                            raise ArithmeticError("∂ is not injective on the positive part")
            self._ech[w] = e
        return e

    def basis(self, w: int) -> list:
        e = self._echelon(w)
        return [t for t in self.tuples(w) if t not in e.pivots]

    def decompose(self, t: tuple) -> dict:
        """{(r, b): c} with t = Σ c ∂^r b, b in the basis."""
        hit = self._dec.get(t)
        if hit is not None:
            return hit
        w = tuple_weight(t, self.weights)
        e = self._echelon(w)
        res, combo = e.reduce({t: Q(1)}, track=True)
        out: dict = {}
        for b, c in res.items():
            out[(0, b)] = out.get((0, b), 0) + c
        for pre, c in combo.items():
            for (r, b), d in self.decompose(pre).items():
                out[(r + 1, b)] = out.get((r + 1, b), 0) + c * d
        out = {k: v for k, v in out.items() if v}
        self._dec[t] = out
        return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


_tensor_bases: dict = {}


def tensor_basis(weights, k: int) -> TensorBasis:
    key = (tuple(weights), k)
    tb = _tensor_bases.get(key)
    if tb is None:
        tb = _tensor_bases[key] = TensorBasis(key[0], k)
    return tb


def value_basis(nvars_free: int, weight: int, weights) -> list:
    """Monomials λ^e x of total weight `weight` in the first nvars_free lambdas."""
    out = []
    for d in range(0, max(weight, -1) + 1):
        for e in exponent_vectors(nvars_free, d):
            for m in monomials(weight - d, tuple(weights)):
                out.append((e, m))
    return out


# ------------------------------------------------------------ parsing

class ParseError(ValueError):
    def __init__(self, msg, line=1, col=1):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


def relocate(exc: ParseError, source: str, fragment: str | None = None) -> ParseError:
    """Translate an error inside ``fragment`` to a position in the file ``source``."""
    fragment = fragment if fragment is not None else getattr(exc, "fragment", None)
    if fragment is None:
        return exc
    at = source.find(json.dumps(fragment))
    if at < 0:
        return exc
    at += 1 + exc.col - 1
    line = source.count("\n", 0, at) + 1
    col = at - (source.rfind("\n", 0, at) + 1) + 1
    msg = str(exc).rsplit(" at line", 1)[0]
    return ParseError(msg, line, col)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))", re.S)


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            toks.append(("int", m.group(1), start))
        elif m.group(2):
            toks.append(("id", m.group(2), start))
        elif m.group(3):
            if m.group(3).isspace():
                pos = m.end()
                continue
            toks.append(("op", m.group(3), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def _linecol(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _constant_value(p: LambdaPoly):
    if not p.terms:
        return Q(0)
    if len(p.terms) == 1:
        (e, m, t), c = next(iter(p.terms.items()))
        if not any(e) and not m and t is None:
            return c
    return None


class _Parser:
    def __init__(self, text, gens, nvars):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.gens = {g: k for k, g in enumerate(gens)}
        self.nvars = nvars

    def err(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        raise ParseError(msg, *_linecol(self.text, tok[2]))

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            self.err(f"expected {want!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            self.err("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.err(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-", self.peek()[2]):
            self.take()
            sign = -1
        elif self.peek()[:2] == ("op", "+"):
            self.take()
        p = self.term().scale(sign)
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            p = p + t if op == "+" else p - t
        return p

    def term(self):
        p = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()
            q = self.factor()
            if op[1] == "*":
                p = p * q
                continue
            c = _constant_value(q)
            if c is None or not c:
                self.err("can only divide by a nonzero rational constant", op)
            p = p.scale(1 / c)
        return p

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.factor()
        b = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            k = int(self.take("int")[1])
            out = LambdaPoly.const(1, self.nvars)
            for _ in range(k):
                out = out * b
            return out
        return b

    def base(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            num = int(tok[1])
            den = 1
            if self.peek()[:2] == ("op", "/") and self.toks[self.i + 1][0] == "int":
                self.take()
                dtok = self.take("int")
                den = int(dtok[1])
                if den == 0:
                    self.err("zero denominator", dtok)
            return LambdaPoly.const(Q(num, den), self.nvars)
        if tok[:2] == ("op", "("):
            self.take()
            p = self.expr()
            self.take("op", ")")
            return p
        if tok[0] == "id":
            name = tok[1]
            if name == "D":
                self.take()
                k = 1
                if self.peek()[:2] == ("op", "^"):
                    self.take()
                    k = int(self.take("int")[1])
                self.take("op", "(")
                g = self.take("id")
                if g[1] not in self.gens:
                    self.err(f"unknown generator {g[1]!r}", g)
                self.take("op", ")")
                return LambdaPoly.gen(self.gens[g[1]], k, self.nvars)
            m = re.fullmatch(r"L(\d*)", name)
            if m and name not in self.gens:
                self.take()
                idx = int(m.group(1)) if m.group(1) else 1
                if not 1 <= idx <= self.nvars:
                    self.err(f"lambda index {idx} outside 1..{self.nvars}", tok)
                return LambdaPoly.lam(idx - 1, self.nvars)
            if name in self.gens:
                self.take()
                return LambdaPoly.gen(self.gens[name], 0, self.nvars)
            self.err(f"unknown symbol {name!r}", tok)
        self.err(f"unexpected {tok[1] or 'end of input'!r}")


def parse_poly(text: str, gens, nvars: int = 0) -> LambdaPoly:
    """Parse an expression; ``L`` is λ_1, ``Lk`` is λ_k, ``D^k(u)`` is u^(k)."""
    try:
        return _Parser(text, list(gens), nvars).parse()
    except ParseError as exc:
        exc.fragment = text
        raise


def format_mono(m, gens) -> str:
    parts = []
    for f in sorted(set(m)):
        g, o = f
        name = gens[g] if o == 0 else (f"D({gens[g]})" if o == 1 else f"D^{o}({gens[g]})")
        k = m.count(f)
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def format_poly(p: LambdaPoly, gens=None, lam="L") -> str:
    if not p.terms:
        return "0"
    if gens is None:
        ng = 1 + max((g for (_, m, _) in p.terms for g, _ in m), default=-1)
        gens = [f"x{i}" for i in range(ng)]
    pieces = []
    for (e, m, t), c in sorted(p.terms.items(), key=lambda kv: (str(kv[0][2]), kv[0][0], mono_key(kv[0][1]))):
        fs = []
        for i, k in enumerate(e):
            if k:
                v = lam if p.nvars == 1 and lam == "L" else f"L{i + 1}"
                fs.append(v if k == 1 else f"{v}^{k}")
        if m:
            fs.append(format_mono(m, gens))
        if t is not None:
            fs.append(f"<{t}>")
        body = "*".join(fs)
        cs = str(c) if not hasattr(c, "denominator") or c.denominator == 1 else f"({c})"
        cs = cs.replace("mpq(", "").replace(",", "/").replace(")", "") if "mpq" in cs else cs
        if not body:
            pieces.append(cs)
        elif c == 1:
            pieces.append(body)
        elif c == -1:
            pieces.append("-" + body)
        else:
            pieces.append(f"{cs}*{body}")
    return " + ".join(pieces).replace("+ -", "- ")
