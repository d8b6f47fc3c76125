"""Variational cochains: values on generator tuples, extended to all of V^{⊗n}
by sesquilinearity and the Leibniz rule."""

from __future__ import annotations

import json
from itertools import product

from .diffpoly import (
    UNIT, LambdaPoly, ParseError, exponent_vectors, monomials, normal_form,
    normal_form_v0, parse_poly, v0_reducer,
    relocate,
)
from .exact_linalg import Q, pm, vec_iadd
from .pva import PVASpec, bracket_monos


def _neg_lam(i, r, n):
    e = [0] * n
    e[i] = r
    return LambdaPoly(n, {(tuple(e), UNIT, None): Q(-1 if r % 2 else 1)})


class VarCochain:
    """f_{λ_1..λ_n}(g_1 ⊗ ... ⊗ g_n) stored for every generator tuple."""

    def __init__(self, spec: PVASpec, n: int, values=None, delta=None):
        self.spec = spec
        self.n = n
        self.values = values if values is not None else {}
        self.delta = delta
        self._memo: dict = {}

    @property
    def weights(self):
        return self.spec.weights

    def gen_tuples(self):
        return list(product(range(self.spec.ngens), repeat=self.n))

    def stored(self, g):
        return self.values.get(tuple(g), LambdaPoly(self.n))

    # ------------------------------------------------------ evaluation
    def evaluate(self, monos) -> LambdaPoly:
        monos = tuple(tuple(m) for m in monos)
        if len(monos) != self.n:
            raise ValueError(f"expected {self.n} arguments, got {len(monos)}")
        hit = self._memo.get(monos)
        if hit is None:
            hit = self._memo[monos] = normal_form(self._eval(monos)) if self.n else self._eval(monos)
        return hit

    def _eval(self, monos):
        n = self.n
        if n == 0:
            return self.values.get((), LambdaPoly(0))
        if any(m == UNIT for m in monos):
            return LambdaPoly(n)
        for i, m in enumerate(monos):
            if len(m) > 1:
                u, w = (m[0],), m[1:]
                left = self.evaluate(monos[:i] + (u,) + monos[i + 1:])
                right = self.evaluate(monos[:i] + (w,) + monos[i + 1:])
                out = left.shift_substitute(i, LambdaPoly.mono(w))
                out.iadd(right.shift_substitute(i, LambdaPoly.mono(u)))
                return out
        for i, m in enumerate(monos):
            g, r = m[0]
            if r:
                base = self.evaluate(monos[:i] + (((g, 0),),) + monos[i + 1:])
                return _neg_lam(i, r, n) * base
        return self.stored(tuple(m[0][0] for m in monos))

    # --------------------------------------------------- linear algebra
    def _like(self, values):
        return VarCochain(self.spec, self.n, values, self.delta)

    def __add__(self, other):
        vals = dict(self.values)
        for g, v in other.values.items():
            vals[g] = vals[g] + v if g in vals else v
        return self._like(vals)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return self._like({g: v.scale(c) for g, v in self.values.items()})

    def coords(self):
        out = {}
        for g, v in self.values.items():
            for (e, m, tag), c in v.terms.items():
                out[(g, e, m, tag)] = c
        return out

    def is_zero(self):
        return not any(v.terms for v in self.values.values())

    def __eq__(self, other):
        return isinstance(other, VarCochain) and self.n == other.n and (self - other).is_zero()

    def value_slots(self, g):
        w = sum(self.spec.weights[x] for x in g) + (self.delta or 0)
        if w < 0:
            return []
        if self.n == 0:
            return [((), m) for m in v0_reducer(self.spec.weights).survivors(w)]
        out = []
        for d in range(w + 1):
            for e in exponent_vectors(self.n - 1, d):
                for m in monomials(w - d, self.spec.weights):
                    out.append((e + (0,), m))
        return out

    def generic(self):
        vals = {}
        for g in self.gen_tuples():
            v = {(e, m, (g, e, m)): Q(1) for e, m in self.value_slots(g)}
            if v:
                vals[g] = LambdaPoly(self.n, v)
        return self._like(vals)

    def specialize(self, assignment):
        vals = {}
        for g in self.gen_tuples():
            v = {}
            for e, m in self.value_slots(g):
                c = assignment.get((g, e, m))
                if c:
                    v[(e, m, None)] = Q(c)
            if v:
                vals[g] = LambdaPoly(self.n, v)
        return self._like(vals)

    def unknowns(self):
        return [(g, e, m) for g in self.gen_tuples() for e, m in self.value_slots(g)]

    # ------------------------------------------------------ validation
    def skew_residuals(self):
        """f_{λ_σ}(g_σ) - sign(σ) f_λ(g) over adjacent transpositions."""
        n = self.n
        out = {}
        for g in self.gen_tuples():
            for i in range(n - 1):
                p = list(range(n))
                p[i], p[i + 1] = p[i + 1], p[i]
                g2 = tuple(g[p[a]] for a in range(n))
                v = self.stored(g2)
                images = [{p[a]: 1} for a in range(n)]
                moved = normal_form(v.substitute(images, n))
                r = moved + self.stored(g)
                if r.terms:
                    out[(g, i)] = r
        return out

    def is_valid(self):
        return not self.skew_residuals()

    def __repr__(self):
        return f"VarCochain(n={self.n}, {len(self.values)} tuples)"


def skew_constraints(f: VarCochain):
    """Linear rows (over unknown tags) of the skewsymmetry residuals of a generic cochain."""
    rows = []
    for r in f.skew_residuals().values():
        by_slot: dict = {}
        for (e, m, tag), c in r.terms.items():
            by_slot.setdefault((e, m), {})[tag] = c
        rows.extend(by_slot.values())
    return rows


# ---------------------------------------------------------- differential

def var_terms(f: VarCochain, v) -> tuple:
    """The two sums of (df)_{λ_1..λ_{n+1}}(v) for monomials v, each in normal form."""
    spec = f.spec
    n = f.n
    N = n + 1
    first = LambdaPoly(N)
    for i in range(N):
        val = f.evaluate(v[:i] + v[i + 1:])
        others = [a for a in range(N) if a != i]
        emb = val.embed(others, N) if n else val.embed((), N)
        first.iadd(_bracket_into(spec, v[i], emb, i), pm(n + i + 1))
    second = LambdaPoly(N)
    for i in range(N):
        for j in range(i + 1, N):
            br = bracket_monos(spec, v[i], v[j])
            rest_idx = [a for a in range(N) if a not in (i, j)]
            images = [{i: 1, j: 1}] + [{a: 1} for a in rest_idx]
            sgn = pm(n + 1 + i + j + 2)
            for (e, m, _), c in br.terms.items():
                val = f.evaluate((m,) + tuple(v[a] for a in rest_idx))
                if not val.terms:
                    continue
                term = val.substitute(images, N)
                lam = [0] * N
                lam[i] = e[0]
                term = LambdaPoly(N, {(tuple(lam), UNIT, None): Q(1)}) * term
                second.iadd(term, c * sgn)
    return normal_form(first), normal_form(second)


def d_var(f: VarCochain) -> VarCochain:
    spec = f.spec
    N = f.n + 1
    out = {}
    for g in product(range(spec.ngens), repeat=N):
        a, b = var_terms(f, tuple(((x, 0),) for x in g))
        acc = a + b
        if acc.terms:
            out[g] = acc
    dlt = None if f.delta is None else f.delta + spec.shift
    return VarCochain(spec, N, out, dlt)


def _bracket_into(spec, a, value, slot):
    out = LambdaPoly(value.nvars)
    for (e, m, t), c in value.terms.items():
        br = bracket_monos(spec, a, m)
        for (e2, m2, _), c2 in br.terms.items():
            e3 = list(e)
            e3[slot] += e2[0]
            vec_iadd(out.terms, {(tuple(e3), m2, t): c * c2})
    return out


def phi(f: VarCochain, W: int):
    """The classical cochain supported on the edgeless graph with value f."""
    from .cl_complex import ClCochain

    n = f.n
    Y = ClCochain(f.spec, n, W, f.delta if f.delta is not None else 0)
    shape = (1,) * n
    vals = {}
    for b in Y.basis_tuples(shape):
        v = f.evaluate(b)
        if v.terms:
            vals[b] = v
    Y.values = {shape: vals}
    return Y


# -------------------------------------------------------------- files

def cochain_to_dict(f: VarCochain) -> dict:
    gens = f.spec.generators
    vals = {",".join(gens[i] for i in g): f.spec.fmt(v) for g, v in sorted(f.values.items()) if v.terms}
    out = {"arity": f.n, "values": vals}
    if f.delta is not None:
        out["delta"] = f.delta
    return out


def cochain_from_dict(spec: PVASpec, d: dict) -> VarCochain:
    try:
        n = int(d["arity"])
        raw = d.get("values", {})
        delta = None if d.get("delta") is None else int(d["delta"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad cochain file: {exc}") from None
    names = {g: i for i, g in enumerate(spec.generators)}
    vals = {}
    for key, text in raw.items():
        parts = [p.strip() for p in key.split(",")] if key.strip() else []
        if len(parts) != n:
            raise ParseError(f"tuple '{key}' has {len(parts)} entries, arity is {n}")
        try:
            g = tuple(names[p] for p in parts)
        except KeyError as exc:
            raise ParseError(f"unknown generator {exc} in tuple '{key}'") from None
        p = parse_poly(str(text), spec.generators, n)
        vals[g] = normal_form(p) if n else normal_form_v0(p, spec.weights)
    return VarCochain(spec, n, vals, delta)


def load_cochain(spec: PVASpec, path) -> VarCochain:
    with open(path) as fh:
        text = fh.read()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    try:
        return cochain_from_dict(spec, d)
    except ParseError as exc:
        raise relocate(exc, text) from None


def scaling_derivation(spec: PVASpec) -> VarCochain:
    """E(g) = g on every generator (n = 1)."""
    return VarCochain(spec, 1, {(i,): LambdaPoly.gen(i, 0, 1) for i in range(spec.ngens)})


def integral(spec: PVASpec, poly: LambdaPoly) -> VarCochain:
    """The class of ∫poly in V/∂V as a 0-cochain."""
    return VarCochain(spec, 0, {(): normal_form_v0(poly, spec.weights)})
