"""Shape-indexed sesquilinear cochains: storage, the t-th differentials,
Harrison operators per group and the S_s action.

A cochain stores, for each shape k = (k_1..k_s), its value on every tuple of
the ∂-complement basis of V^{⊗k_1} ⊗ ... ⊗ V^{⊗k_s} up to a weight cap W.
Values are lambda-polynomials in Λ_1..Λ_s with Λ_s eliminated.  The value on
any other tuple follows from F(.. ∂ group t ..) = -Λ_t F(..).
"""

from __future__ import annotations

from itertools import permutations, product

from .diffpoly import (
    UNIT, LambdaPoly, exponent_vectors, monomials, normal_form, tensor_basis, tuple_weight,
    v0_reducer,
)
from .exact_linalg import Q, pm
from .symgroup import drop_sign, inverse, monotone


class TruncationError(ArithmeticError):
    """A value was requested on a tuple above the weight cap."""


def groups_of(shape, t):
    out, pos = [], 0
    for k in shape:
        out.append(tuple(t[pos:pos + k]))
        pos += k
    return out


def offsets(shape):
    K = [0]
    for k in shape:
        K.append(K[-1] + k)
    return K


def _neg_power(t: int, r: int, s: int) -> LambdaPoly:
    e = [0] * s
    e[t] = r
    return LambdaPoly(s, {(tuple(e), UNIT, None): Q(-1 if r % 2 else 1)})


class GroupedCochain:
    """Values on ∂-complement basis tuples, one table per shape."""

    kind = "grouped"

    def __init__(self, n, weights, W, vshift, values=None, nvars=None):
        self.n = n
        self.weights = tuple(weights)
        self.W = W
        self._vshift = vshift
        self.values = values if values is not None else {}
        self._cache: dict = {}

    # subclasses fix which shapes exist and how many lambda variables they carry
    def shapes(self):
        raise NotImplementedError

    def nvars(self, shape):
        return len(shape)

    def vshift(self, shape):
        return self._vshift(shape) if callable(self._vshift) else self._vshift

    # basis tuples
    def basis_tuples(self, shape, wmax=None):
        wmax = self.W if wmax is None else wmax
        if not shape or shape == (0,):
            return [()]
        bases = [tensor_basis(self.weights, k) for k in shape]
        out = []
        for split in _weight_splits(len(shape), wmax):
            for parts in product(*(b.basis(w) for b, w in zip(bases, split))):
                out.append(sum(parts, ()))
        return out

    def value_slots(self, shape, t):
        """(exps, mono) pairs a value on basis tuple t may use."""
        s = self.nvars(shape)
        w = tuple_weight(t, self.weights) + self.vshift(shape)
        if w < 0:
            return []
        if s == 0:
            return [((), m) for m in v0_reducer(self.weights).survivors(w)]
        if s > 1 and 0 in shape:
            return []
        for g in groups_of(shape, t):
            if g and all(m == UNIT for m in g):
                if s > 1:
                    return []
                return [((0,), UNIT)] if w == 0 else []
        if len(shape) == 1 and shape[0] == 0:
            return [((0,), UNIT)] if w == 0 else []
        out = []
        for d in range(w + 1):
            for e in exponent_vectors(s - 1, d):
                for m in monomials(w - d, self.weights):
                    out.append((e + (0,), m))
        return out

    def stored(self, shape, t):
        return self.values.get(shape, {}).get(t)

    def value(self, shape, t) -> LambdaPoly:
        """Value on an arbitrary tuple of monomials (normal form)."""
        key = (shape, t)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        s = self.nvars(shape)
        if s == 0:
            v = self.stored(shape, t)
            out = v if v is not None else LambdaPoly(0)
            self._cache[key] = out
            return out
        if s > 1 and 0 in shape:
            out = LambdaPoly(s)
            self._cache[key] = out
            return out
        if tuple_weight(t, self.weights) > self.W:
            raise TruncationError(
                f"value requested on a tuple of weight {tuple_weight(t, self.weights)} above the cap W={self.W}")
        gs = groups_of(shape, t)
        decs = []
        for g, k in zip(gs, shape):
            if k == 0:
                decs.append({(0, ()): Q(1)})
            else:
                decs.append(tensor_basis(self.weights, k).decompose(g))
        out = LambdaPoly(s)
        need_nf = False
        table = self.values.get(shape, {})
        for combo in product(*(d.items() for d in decs)):
            coeff = Q(1)
            parts = []
            rs = []
            for (r, b), c in combo:
                coeff *= c
                parts.append(b)
                rs.append(r)
            v = table.get(sum(parts, ()))
            if v is None or not v.terms:
                continue
            term = v.scale(coeff)
            for idx, r in enumerate(rs):
                if r:
                    term = _neg_power(idx, r, s) * term
                    if idx == s - 1:
                        need_nf = True
            out.iadd(term)
        if need_nf:
            out = normal_form(out)
        self._cache[key] = out
        return out

    # linear structure
    def _like(self, values):
        new = object.__new__(type(self))
        new.__dict__.update(self.__dict__)
        new.values = values
        new._cache = {}
        return new

    def _combine(self, other, c):
        vals = {sh: dict(tab) for sh, tab in self.values.items()}
        for sh, tab in other.values.items():
            dst = vals.setdefault(sh, {})
            for t, v in tab.items():
                cur = dst.get(t)
                new = v.scale(c) if cur is None else cur + v.scale(c)
                if new.terms:
                    dst[t] = new
                else:
                    dst.pop(t, None)
        return self._like(vals)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        return self._like({sh: {t: v.scale(c) for t, v in tab.items()} for sh, tab in self.values.items()})

    def coords(self) -> dict:
        out = {}
        for sh, tab in self.values.items():
            for t, v in tab.items():
                for (e, m, tag), c in v.terms.items():
                    out[(sh, t, e, m, tag)] = c
        return out

    def is_zero(self):
        return not any(v.terms for tab in self.values.values() for v in tab.values())

    def __eq__(self, other):
        return isinstance(other, GroupedCochain) and self.n == other.n and (self - other).is_zero()

    def support(self):
        return sorted(sh for sh, tab in self.values.items() if any(v.terms for v in tab.values()))

    def generic(self, tagger=None):
        """Same slice, every stored coefficient replaced by an unknown."""
        vals = {}
        for sh in self.shapes():
            tab = {}
            for t in self.basis_tuples(sh):
                v = LambdaPoly(self.nvars(sh))
                for e, m in self.value_slots(sh, t):
                    tag = (sh, t, e, m) if tagger is None else tagger(sh, t, e, m)
                    v.terms[(e if self.nvars(sh) else (), m, tag)] = Q(1)
                if v.terms:
                    tab[t] = v
            vals[sh] = tab
        return self._like(vals)

    def unknowns(self):
        return [tag for (_, _, _, _, tag) in self.generic().coords()]

    def specialize(self, assignment: dict):
        """Substitute numbers for unknowns: assignment maps tag -> coefficient."""
        vals = {}
        for sh in self.shapes():
            tab = {}
            for t in self.basis_tuples(sh):
                v = {}
                for e, m in self.value_slots(sh, t):
                    c = assignment.get((sh, t, e, m))
                    if c:
                        v[(e if self.nvars(sh) else (), m, None)] = Q(c)
                if v:
                    tab[t] = LambdaPoly(self.nvars(sh), v)
            vals[sh] = tab
        return self._like(vals)


def _weight_splits(parts, wmax):
    def rec(p, left):
        if p == 0:
            yield ()
            return
        for w in range(left + 1):
            for rest in rec(p - 1, left - w):
                yield (w,) + rest
    yield from rec(parts, wmax)


def compositions(n, s, allow_zero=False):
    lo = 0 if allow_zero else 1

    def rec(left, p):
        if p == 1:
            if left >= lo:
                yield (left,)
            return
        for first in range(lo, left + 1):
            for rest in rec(left - first, p - 1):
                yield (first,) + rest
    if s == 0:
        return [()] if n == 0 else []
    return list(rec(n, s))


# ----------------------------------------------------- sesquilinear family

class SesqCochain(GroupedCochain):
    """Components F^k for the compositions k of n into s parts."""

    kind = "sesquilinear"

    def __init__(self, s, n, weights, W, delta, values=None, shapes=None):
        super().__init__(n, weights, W, delta, values)
        self.s = s
        self.delta = delta
        if shapes is None:
            shapes = [(0,)] if (s == 1 and n == 0) else compositions(n, s)
        self._shapes = [tuple(k) for k in shapes]

    def shapes(self):
        return list(self._shapes)

    def nvars(self, shape):
        return self.s

    def component(self, shape):
        return self._like({shape: self.values.get(shape, {})})


def zero_sesq(s, n, weights, W, delta, shapes=None):
    return SesqCochain(s, n, weights, W, delta, {}, shapes)


def d_t(F: SesqCochain, t: int, shapes_out=None) -> SesqCochain:
    """The t-th differential (t is 1-based)."""
    if not 1 <= t <= F.s:
        raise ValueError(f"group index {t} outside 1..{F.s}")
    out_vals: dict = {}
    for k in F.shapes():
        k2 = list(k)
        k2[t - 1] += 1
        k2 = tuple(k2)
        if shapes_out is not None and k2 not in shapes_out:
            continue
        proto = SesqCochain(F.s, F.n + 1, F.weights, F.W, F.delta, shapes=[k2])
        K = offsets(k)
        tab = out_vals.setdefault(k2, {})
        for b in proto.basis_tuples(k2):
            if not proto.value_slots(k2, b):
                continue
            v = _d_t_at(F, k, t, K, b)
            if v.terms:
                tab[b] = vec_add_poly(tab.get(b), v)
    shapes = sorted(out_vals) if shapes_out is None else list(shapes_out)
    return SesqCochain(F.s, F.n + 1, F.weights, F.W, F.delta, out_vals, shapes)


def vec_add_poly(a, b):
    return b if a is None else a + b


def _d_t_at(F, k, t, K, v) -> LambdaPoly:
    s = F.s
    first = K[t - 1]          # 0-based position of the first vector of group t
    last = K[t]               # 0-based position of the last vector of the enlarged group
    out = LambdaPoly(s)
    rest = v[:first] + v[first + 1:]
    p = F.value(k, rest)
    if p.terms:
        out.iadd(p.shift_substitute(t - 1, LambdaPoly.mono(v[first])), pm(K[t - 1]))
    for i in range(first, last):
        prod = _mono_product(v[i], v[i + 1])
        w = v[:i] + (prod,) + v[i + 2:]
        out.iadd(F.value(k, w), pm(i + 1))
    rest = v[:last] + v[last + 1:]
    p = F.value(k, rest)
    if p.terms:
        out.iadd(p.shift_substitute(t - 1, LambdaPoly.mono(v[last])), pm(K[t] + 1))
    return normal_form(out)


def _mono_product(a, b):
    return tuple(sorted(a + b))


def d_total(F: SesqCochain, shapes_out=None) -> SesqCochain:
    if F.s == 1 and F.n == 0:
        shapes_out = shapes_out or [(1,)]
    out = None
    for t in range(1, F.s + 1):
        part = d_t(F, t, shapes_out)
        out = part if out is None else out + part
    if shapes_out is None:
        shapes_out = compositions(F.n + 1, F.s)
    out._shapes = list(shapes_out)
    return out


# ------------------------------------------------------------- Harrison

def apply_harrison(F: SesqCochain, t: int, m: int, shape) -> dict:
    """{basis tuple: (L_m^{(t)} F)(b)} on the component `shape`."""
    k = shape[t - 1]
    if not 2 <= m <= k:
        raise ValueError(f"need 2 <= m <= k_t = {k}, got m={m}")
    K = offsets(shape)
    terms = [(p, drop_sign(p)) for p in monotone(k, m)]
    out = {}
    for b in F.basis_tuples(shape):
        acc = LambdaPoly(F.s)
        grp = b[K[t - 1]:K[t]]
        for p, sg in terms:
            g2 = tuple(grp[p[i] - 1] for i in range(k))
            w = b[:K[t - 1]] + g2 + b[K[t]:]
            acc.iadd(F.value(shape, w), sg)
        out[b] = acc
    return out


def harrison_check(F: SesqCochain, t: int, m: int, shape=None):
    """(ok, residual) for L_m^{(t)} F = F."""
    shapes = [shape] if shape is not None else F.shapes()
    residual = {}
    for sh in shapes:
        if sh[t - 1] < m:
            continue
        for b, v in apply_harrison(F, t, m, sh).items():
            r = v - F.value(sh, b)
            if r.terms:
                residual[(sh, b)] = r
    return not residual, residual


def harrison_violations(F: SesqCochain) -> list:
    bad = []
    for sh in F.shapes():
        for t in range(1, len(sh) + 1):
            for m in range(2, sh[t - 1] + 1):
                ok, _ = harrison_check(F, t, m, sh)
                if not ok:
                    bad.append(f"L_{m} on group {t} of shape {sh}")
    return bad


# -------------------------------------------------------------- S_s action

def koszul_sign(p, shape) -> int:
    s = len(shape)
    tot = 0
    for a in range(s):
        for b in range(a + 1, s):
            if p[b] < p[a]:
                tot += shape[a] * shape[b]
    return -1 if tot % 2 else 1


def permute_shape(p, shape):
    """σ(k) with σ(k)_u = k_{σ^{-1}(u)}."""
    inv = inverse(p)
    return tuple(shape[inv[u] - 1] for u in range(len(shape)))


def act_Ss(p, F: SesqCochain, shape=None) -> SesqCochain:
    """F^σ: group t of F is read from group σ(t) of the argument, Λ_t ↦ Λ_σ(t)."""
    if len(p) != F.s:
        raise ValueError(f"permutation of {len(p)} letters acting on {F.s} groups")
    s = F.s
    images = [{p[t] - 1: 1} for t in range(s)]
    out_vals = {}
    new_shapes = []
    for k in ([shape] if shape is not None else F.shapes()):
        k2 = permute_shape(p, k)
        new_shapes.append(k2)
        sg = koszul_sign(p, k)
        proto = SesqCochain(s, F.n, F.weights, F.W, F.delta, shapes=[k2])
        tab = {}
        for b in proto.basis_tuples(k2):
            gs = groups_of(k2, b)
            w = sum((gs[p[t] - 1] for t in range(s)), ())
            v = F.value(k, w)
            if v.terms:
                v = normal_form(v.substitute(images, s)).scale(sg)
                if v.terms:
                    tab[b] = v
        out_vals[k2] = tab
    return SesqCochain(s, F.n, F.weights, F.W, F.delta, out_vals, sorted(set(new_shapes)))


def symmetrize(F: SesqCochain) -> SesqCochain:
    from math import factorial

    s = F.s
    acc = None
    for p in permutations(range(1, s + 1)):
        img = act_Ss(p, F)
        acc = img if acc is None else acc + img
    acc = acc.scale(Q(1, factorial(s)))
    acc._shapes = F.shapes()
    return acc


def invariance_violations(F: SesqCochain) -> list:
    bad = []
    s = F.s
    for a in range(1, s):
        p = list(range(1, s + 1))
        p[a - 1], p[a] = p[a], p[a - 1]
        img = act_Ss(tuple(p), F)
        img._shapes = F.shapes()
        if not (img - F).is_zero():
            bad.append(f"transposition ({a} {a + 1})")
    return bad
