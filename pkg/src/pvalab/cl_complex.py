"""Classical cochains stored on standard lines, their values on arbitrary
graphs, the explicit differential and an operadic cross-check."""

from __future__ import annotations

import json
from functools import lru_cache
from itertools import product
from math import comb

from .diffpoly import (
    UNIT, LambdaPoly, ParseError, mono_dpow, mono_mul, normal_form, normal_form_v0, parse_poly,
    relocate,
)
from .exact_linalg import Q, pm, vec_iadd
from .graphs import (
    Digraph, act, collapse, components, decompose_proper_line, delete_vertex, epsilon,
    graph_stats, has_undirected_cycle, reduce_graph, standard_line,
)
from .pva import PVASpec, bracket_monos
from .sesquilinear import (
    GroupedCochain, SesqCochain, compositions, harrison_violations, invariance_violations,
)
from .symgroup import inverse, monotone, shuffles, sign


def partitions(n):
    """Partitions of n as ascending tuples."""
    if n == 0:
        return [()]
    out = []

    def rec(left, lo, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        for k in range(lo, left + 1):
            rec(left - k, k, acc + [k])
    rec(n, 1, [])
    return out


class ClCochain(GroupedCochain):
    """Y^{Γ_k} for each partition k of n, on ∂-complement basis tuples."""

    kind = "classical"

    def __init__(self, spec: PVASpec, n, W, delta, values=None):
        super().__init__(n, spec.weights, W, None, values)
        self.spec = spec
        self.delta = delta

    def shapes(self):
        return partitions(self.n)

    def vshift(self, shape):
        return self.delta + (self.n - len(shape)) * (-self.spec.shift)

    def __repr__(self):
        return f"ClCochain(n={self.n}, W={self.W}, delta={self.delta}, support={self.support()})"


class AnalyticCochain:
    """A cochain given by a formula on every tuple (no cap)."""

    def __init__(self, spec, n, delta, fn):
        self.spec = spec
        self.n = n
        self.delta = delta
        self.weights = spec.weights
        self.W = None
        self._fn = fn
        self._cache = {}

    def vshift(self, shape):
        return self.delta + (self.n - len(shape)) * (-self.spec.shift)

    def value(self, shape, t):
        key = (shape, t)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self._fn(shape, t)
        return hit


def master_X(spec: PVASpec) -> AnalyticCochain:
    """ab on the edge, [a_Λ b] on two isolated vertices."""
    def fn(shape, t):
        a, b = t
        if shape == (2,):
            if a == UNIT and b == UNIT:
                return LambdaPoly(1, {((0,), UNIT, None): Q(1)})
            return LambdaPoly(1, {((0,), mono_mul(a, b), None): Q(1)})
        if shape == (1, 1):
            return normal_form(bracket_monos(spec, a, b).embed((0,), 2))
        raise KeyError(shape)
    return AnalyticCochain(spec, 2, spec.shift, fn)


def identity_cochain(spec: PVASpec) -> AnalyticCochain:
    return AnalyticCochain(spec, 1, 0, lambda shape, t: LambdaPoly(1, {((0,), t[0], None): Q(1)}))


# ------------------------------------------------------- graph values

@lru_cache(maxsize=None)
def _line_info(line: Digraph):
    shape, tau = decompose_proper_line(line)
    K = [0]
    for k in shape:
        K.append(K[-1] + k)
    groups = [tuple(tau[p] - 1 for p in range(K[t], K[t + 1])) for t in range(len(shape))]
    return shape, tau, sign(tau), groups


def _lam_mono(exps):
    return LambdaPoly(len(exps), {(tuple(exps), UNIT, None): Q(1)})


def graph_eval(Y, g: Digraph, lam_forms, args: dict, N: int) -> LambdaPoly:
    """Σ_args c λ^e Y^g_{forms}(monos), unnormalised, in N variables.

    lam_forms[p] is the linear form (dict var -> coeff) put in slot p;
    args maps (exps, monos) to a coefficient.
    """
    out = LambdaPoly(N)
    if g.n == 0:
        base = Y.value((), ())
        if base.terms:
            base = base.embed((), N)
            for (e, _), c in args.items():
                out.iadd(_lam_mono(e) * base, c)
        return out
    if has_undirected_cycle(g):
        return out
    for line, c in reduce_graph(g).items():
        shape, tau, sg, groups = _line_info(line)
        forms = []
        for grp in groups:
            f: dict = {}
            for p in grp:
                for var, a in lam_forms[p].items():
                    f[var] = f.get(var, 0) + a
            forms.append(f)
        cache = {}
        for (e, monos), a in args.items():
            w = tuple(monos[tau[p] - 1] for p in range(g.n))
            sub = cache.get(w)
            if sub is None:
                val = Y.value(shape, w)
                sub = cache[w] = val.substitute(forms, N) if val.terms else None
            if sub is None:
                continue
            term = _lam_mono(e) * sub if any(e) else sub
            out.iadd(term, a * c * sg)
    return out


def _unit_forms(N, skip=()):
    return [{k: 1} for k in range(N) if k not in skip]


def evaluate_on_graph(Y, g: Digraph, v) -> LambdaPoly:
    """Y^g_{λ_1..λ_n}(v) in normal form."""
    v = tuple(tuple(m) for m in v)
    if len(v) != g.n:
        raise ValueError(f"{len(v)} arguments for a graph on {g.n} vertices")
    n = g.n
    if n == 0:
        return Y.value((), ())
    p = graph_eval(Y, g, _unit_forms(n), {((0,) * n, v): Q(1)}, n)
    return normal_form(p)


def to_Lambda(p: LambdaPoly, shape, check=True) -> LambdaPoly:
    """Rewrite an n-variable normal form through the group sums of shape."""
    s = len(shape)
    n = sum(shape)
    if s == 0:
        return p
    K = [0]
    for k in shape:
        K.append(K[-1] + k)
    images = []
    for var in range(n):
        t = next(t for t in range(s) if K[t] <= var < K[t + 1])
        images.append({t: 1} if (var == K[t] and t < s - 1) else {})
    out = p.substitute(images, s)
    if check:
        back = [{q: 1 for q in range(K[t], K[t + 1])} for t in range(s)]
        if normal_form(out.substitute(back, n)) != p:
            raise ArithmeticError(f"value does not depend on group sums only (shape {shape})")
    return out


# ------------------------------------------------------------ differential

def _expand_shift(P: LambdaPoly, shifts, N):
    """Substitute μ_i -> form_i + ∂_{S_i} into P (variables μ_1..μ_m).

    shifts[i] = (form dict over N vars, tuple of argument positions S_i).
    Yields (lambda-poly in N vars without ∂, {position: r}) pairs.
    """
    out: dict = {}
    for (e, m, tag), c in P.terms.items():
        per_slot = []
        for i, k in enumerate(e):
            form, S = shifts[i]
            fp = _form_poly(form, N)
            opts = []
            pw = LambdaPoly.const(1, N)
            powers = [pw]
            for _ in range(k):
                powers.append(powers[-1] * fp)
            for r in range(k + 1):
                lam_part = powers[k - r].scale(comb(k, r))
                if not lam_part.terms:
                    continue
                for dist, mult in _distribute(r, S):
                    opts.append((lam_part.scale(mult), dist))
            per_slot.append(opts)
        for choice in product(*per_slot):
            lam = LambdaPoly(N, {((0,) * N, m, tag): c})
            ders: dict = {}
            for lp, dist in choice:
                lam = lam * lp
                for q, r in dist:
                    ders[q] = ders.get(q, 0) + r
            key = tuple(sorted((q, r) for q, r in ders.items() if r))
            acc = out.get(key)
            out[key] = lam if acc is None else acc + lam
    return out


def _form_poly(form, N):
    out = LambdaPoly(N)
    for var, a in form.items():
        e = [0] * N
        e[var] = 1
        out.terms[(tuple(e), UNIT, None)] = Q(a)
    return out


def _distribute(r, S):
    """Multinomial distributions of r derivatives over positions S."""
    S = tuple(S)
    if r == 0:
        return [((), 1)]
    if not S:
        return []
    out = []

    def rec(i, left, acc, mult):
        if i == len(S) - 1:
            out.append((tuple(acc + [(S[i], left)]), mult))
            return
        for x in range(left + 1):
            rec(i + 1, left - x, acc + [(S[i], x)], mult * comb(left, x))
    rec(0, r, [], 1)
    return out


def _apply_ders(monos, ders):
    """Expand ∂^{r_q} on the listed positions into {monos tuple: coeff}."""
    out = {tuple(monos): Q(1)}
    for q, r in ders:
        nxt: dict = {}
        for t, c in out.items():
            for m2, d in mono_dpow(t[q], r):
                t2 = t[:q] + (m2,) + t[q + 1:]
                nxt[t2] = nxt.get(t2, 0) + c * d
        out = {t: c for t, c in nxt.items() if c}
    return out


def _poly_args(lam_coeffs: LambdaPoly, slot_monos, ders, N):
    """Tensor args from a poly whose coefficients go to position 0."""
    args: dict = {}
    for (e, m, tag), c in lam_coeffs.terms.items():
        if tag is not None:
            raise ValueError("arguments cannot carry unknowns")
        for t, d in _apply_ders((m,) + tuple(slot_monos), ders).items():
            vec_iadd(args, {(e, t): c * d})
    return args


def dcl_terms(Y, G: Digraph, v, spec: PVASpec) -> dict:
    """The four sums of (dY)^G_{λ_1..λ_{n+1}}(v), each in normal form.

    Keys: isolated (bracket with an isolated vertex), leaf (degree-one
    vertex deleted, shifted product), bracket (collapse of two unlinked
    vertices through the λ-bracket), product (collapse of an edge).
    """
    N = G.n
    n = N - 1
    st = graph_stats(G)
    sums = {k: LambdaPoly(N) for k in ("isolated", "leaf", "bracket", "product")}
    comp_of = {}
    for c in components(G):
        for x in c:
            comp_of[x] = c
    for h in range(1, N + 1):
        deg = st.deg(h)
        if deg == 0:
            sub = delete_vertex(G, h)
            P = graph_eval(Y, sub, _unit_forms(N, (h - 1,)),
                           {((0,) * N, v[:h - 1] + v[h:]): Q(1)}, N)
            if P.terms:
                sums["isolated"].iadd(_bracket_into(spec, v[h - 1], P, h - 1), pm(n - h))
        elif deg == 1:
            j = next(x for x in range(1, N + 1) if x != h and epsilon(G, x, h) != 0)
            sub = delete_vertex(G, h)
            forms = []
            for k in range(N):
                if k == h - 1:
                    continue
                forms.append({k: 1, h - 1: 1} if k == j - 1 else {k: 1})
            P = graph_eval(Y, sub, forms, {((0,) * N, v[:h - 1] + v[h:]): Q(1)}, N)
            if P.terms:
                outdeg = sum(1 for a, _ in G.edges if a == h)
                term = P.shift_substitute(j - 1, LambdaPoly.mono(v[h - 1], N))
                sums["leaf"].iadd(term, pm(outdeg + n - h + 1))
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            eps = epsilon(G, i, j)
            sgn = pm(n + i + j - 1)
            rest = [k for k in range(1, N + 1) if k not in (i, j)]
            forms = [{i - 1: 1, j - 1: 1}] + [{k - 1: 1} for k in rest]
            H = collapse(G, i, j)
            if eps == 0:
                if j in comp_of[i] or has_undirected_cycle(H):
                    continue
                br = bracket_monos(spec, v[i - 1], v[j - 1])
                if not br.terms:
                    continue
                inner = [k for k in comp_of[i] if k != i]
                form = {i - 1: 1}
                for k in inner:
                    form[k - 1] = 1
                pos = tuple(1 + rest.index(k) for k in inner)
                expanded = _expand_shift(br, [(form, pos)], N)
                args: dict = {}
                for ders, lam in expanded.items():
                    vec_iadd(args, _poly_args(lam, [v[k - 1] for k in rest], ders, N))
                P = graph_eval(Y, H, forms, args, N)
                sums["bracket"].iadd(P, sgn)
            else:
                prod_m = mono_mul(v[i - 1], v[j - 1])
                P = graph_eval(Y, H, forms, {((0,) * N, (prod_m,) + tuple(v[k - 1] for k in rest)): Q(1)}, N)
                sums["product"].iadd(P, eps * sgn)
    return {k: normal_form(p) for k, p in sums.items()}


def dcl_value(Y, G: Digraph, v, spec: PVASpec) -> LambdaPoly:
    """(dY)^G_{λ_1..λ_{n+1}}(v) in normal form."""
    out = LambdaPoly(G.n)
    for p in dcl_terms(Y, G, v, spec).values():
        out.iadd(p)
    return out


def _bracket_into(spec, a, value, slot):
    out = LambdaPoly(value.nvars)
    for (e, m, t), c in value.terms.items():
        for (e2, m2, _), c2 in bracket_monos(spec, a, m).terms.items():
            e3 = list(e)
            e3[slot] += e2[0]
            vec_iadd(out.terms, {(tuple(e3), m2, t): c * c2})
    return out


def _store(out: ClCochain, shape, b, val, tab):
    if not val.terms:
        return
    slots = set(out.value_slots(shape, b))
    for (e, m, _) in val.terms:
        if (e, m) not in slots:
            raise ArithmeticError(
                f"value on {shape}/{b} leaves the cochain space (term λ^{e} {m})")
    tab[b] = val


def d_cl(Y: ClCochain, shapes=None) -> ClCochain:
    spec = Y.spec
    N = Y.n + 1
    out = ClCochain(spec, N, Y.W, Y.delta + spec.shift)
    vals = {}
    for shape in (shapes or out.shapes()):
        G = standard_line(shape)
        tab = {}
        for b in out.basis_tuples(shape):
            val = to_Lambda(dcl_value(Y, G, b, spec), shape)
            _store(out, shape, b, val, tab)
        vals[shape] = tab
    out.values = vals
    return out


def d_cl_residual_zero(spec: PVASpec, X=None, W=None) -> dict:
    """Check dX = 0 for the PVA structure on all basis tuples up to weight W."""
    X = X if X is not None else master_X(spec)
    if W is None:
        W = 3 * max(spec.weights) + 1
    bad = []
    for shape in partitions(3):
        G = standard_line(shape)
        proto = ClCochain(spec, 3, W, 2 * spec.shift)
        for b in proto.basis_tuples(shape):
            val = dcl_value(X, G, b, spec)
            if val.terms:
                bad.append({"shape": list(shape), "args": [spec.fmt(LambdaPoly.mono(m)) for m in b],
                            "value": spec.fmt(val)})
                if len(bad) >= 5:
                    break
    return {"ok": not bad, "W": W, "nonzero": bad}


# ------------------------------------------------------------- oracle

def circ1(A, B, G: Digraph, lam_forms, args: dict, N: int, m: int) -> LambdaPoly:
    """(A ∘_1 B)^G evaluated with the given slot forms and arguments (unnormalised)."""
    k = A.n
    if G.n != m + k - 1:
        raise ValueError("graph size does not match the arities")
    first = set(range(1, m + 1))
    Gp = Digraph(m, tuple(e for e in G.edges if e[0] in first and e[1] in first))
    Gpp_edges = tuple(e for e in G.edges if not (e[0] in first and e[1] in first))
    relabel = {x: (1 if x <= m else x - m + 1) for x in range(1, G.n + 1)}
    bar_edges = tuple((relabel[a], relabel[b]) for a, b in Gpp_edges)
    if any(a == b for a, b in bar_edges):
        return LambdaPoly(N)
    Gbar = Digraph(k, bar_edges)
    if has_undirected_cycle(Gbar):
        return LambdaPoly(N)
    Gpp = Digraph(G.n, Gpp_edges)
    comp = {}
    for c in components(Gpp):
        for x in c:
            comp[x] = c
    Gi = [tuple(x for x in comp[i] if x != i) for i in range(1, m + 1)]
    out = LambdaPoly(N)
    a_forms = [{}] + [dict(lam_forms[q - 1]) for q in range(m + 1, G.n + 1)]
    for i in range(m):
        for var, c in lam_forms[i].items():
            a_forms[0][var] = a_forms[0].get(var, 0) + c
    b_cache = {}
    for (e, monos), c in args.items():
        head = tuple(monos[:m])
        P = b_cache.get(head)
        if P is None:
            P = b_cache[head] = graph_eval(B, Gp, [{q: 1} for q in range(m)], {((0,) * m, head): Q(1)}, m)
        if not P.terms:
            continue
        shifts = []
        for i in range(m):
            form = dict(lam_forms[i])
            for x in Gi[i]:
                for var, a in lam_forms[x - 1].items():
                    form[var] = form.get(var, 0) + a
            shifts.append((form, tuple(x - m for x in Gi[i])))
        expanded = _expand_shift(P, shifts, N)
        a_args: dict = {}
        tail = list(monos[m:])
        for ders, lam in expanded.items():
            for (e2, m2, tag), c2 in lam.terms.items():
                for t, d in _apply_ders((m2,) + tuple(tail), ders).items():
                    e3 = tuple(x + y for x, y in zip(e, e2))
                    a_args.setdefault(tag, {})
                    vec_iadd(a_args[tag], {(e3, t): c * c2 * d})
        for tag, targs in a_args.items():
            val = graph_eval(A, Gbar, a_forms, targs, N)
            if tag is not None:
                val = val.with_tag(tag)
            out.iadd(val)
    return out


def _acted_circ(A, B, m, sigma, G, v, N):
    """((A ∘_1 B)^{σ^{-1}})^G_λ(v) = sign(σ) (A∘_1B)^{σ^{-1}G}_{λ_σ}(v_σ)."""
    inv = inverse(sigma)
    H = act(inv, G)
    forms = [{sigma[p] - 1: 1} for p in range(N)]
    w = tuple(v[sigma[p] - 1] for p in range(N))
    return circ1(A, B, H, forms, {((0,) * N, w): Q(1)}, N, m).scale(sign(sigma))


def adX_value(spec, Y, G: Digraph, v, X=None) -> LambdaPoly:
    """[X, Y]^G(v) via ∘_1 products and shuffle sums."""
    X = X if X is not None else master_X(spec)
    N = G.n
    n = N - 1
    acc = LambdaPoly(N)
    for sigma in shuffles(n, 1):
        acc.iadd(_acted_circ(X, Y, n, sigma, G, v, N))
    for tau in shuffles(2, n - 1):
        acc.iadd(_acted_circ(Y, X, 2, tau, G, v, N), pm(n))
    return normal_form(acc)


def adX_bracket(spec: PVASpec, Y: ClCochain, X=None) -> ClCochain:
    N = Y.n + 1
    out = ClCochain(spec, N, Y.W, Y.delta + spec.shift)
    vals = {}
    for shape in out.shapes():
        G = standard_line(shape)
        tab = {}
        for b in out.basis_tuples(shape):
            _store(out, shape, b, to_Lambda(adX_value(spec, Y, G, b, X), shape), tab)
        vals[shape] = tab
    out.values = vals
    return out


def bracket_XX(spec: PVASpec, W=None) -> dict:
    """[X, X] on the standard 3-lines (should vanish for a PVA)."""
    X = master_X(spec)
    W = W if W is not None else 3 * max(spec.weights) + 1
    proto = ClCochain(spec, 3, W, 2 * spec.shift)
    bad = []
    for shape in partitions(3):
        G = standard_line(shape)
        for b in proto.basis_tuples(shape):
            val = adX_value(spec, X, G, b, X)
            if val.terms:
                bad.append((shape, b))
    return {"ok": not bad, "W": W, "nonzero": bad[:5]}


# ---------------------------------------------------- filtration, gr, iso

def filtration_level(Y: ClCochain) -> int:
    sup = Y.support()
    return min((len(sh) for sh in sup), default=Y.n)


def truncate_below(Y: ClCochain, s: int) -> ClCochain:
    """Keep only the shapes with at least s parts."""
    return Y._like({sh: tab for sh, tab in Y.values.items() if len(sh) >= s})


def gr_d(Y: ClCochain, s: int) -> ClCochain:
    """Leaf-deletion and edge-collapse terms on the shapes with s parts."""
    if filtration_level(Y) < s:
        raise ValueError(f"cochain has filtration level {filtration_level(Y)} < {s}")
    spec = Y.spec
    N = Y.n + 1
    n = Y.n
    out = ClCochain(spec, N, Y.W, Y.delta + spec.shift)
    vals = {}
    for shape in out.shapes():
        if len(shape) != s:
            continue
        G = standard_line(shape)
        tab = {}
        for b in out.basis_tuples(shape):
            acc = LambdaPoly(N)
            st = graph_stats(G)
            for h in range(1, N + 1):
                if st.deg(h) != 1:
                    continue
                j = next(x for x in range(1, N + 1) if x != h and epsilon(G, x, h) != 0)
                forms = [({k: 1, h - 1: 1} if k == j - 1 else {k: 1}) for k in range(N) if k != h - 1]
                P = graph_eval(Y, delete_vertex(G, h), forms, {((0,) * N, b[:h - 1] + b[h:]): Q(1)}, N)
                if P.terms:
                    outdeg = sum(1 for a, _ in G.edges if a == h)
                    acc.iadd(P.shift_substitute(j - 1, LambdaPoly.mono(b[h - 1], N)), pm(outdeg + n - h + 1))
            for i, j in G.edges:
                a, c = min(i, j), max(i, j)
                rest = [k for k in range(1, N + 1) if k not in (a, c)]
                forms = [{a - 1: 1, c - 1: 1}] + [{k - 1: 1} for k in rest]
                P = graph_eval(Y, collapse(G, a, c), forms,
                               {((0,) * N, (mono_mul(b[a - 1], b[c - 1]),) + tuple(b[k - 1] for k in rest)): Q(1)}, N)
                acc.iadd(P, epsilon(G, a, c) * pm(n + a + c - 1))
            _store(out, shape, b, to_Lambda(normal_form(acc), shape), tab)
        vals[shape] = tab
    out.values = vals
    return out


def chain_sign(n: int) -> int:
    """(-1)^{n(n+1)/2}: rescaling degree n by this makes the line-value map a chain map.

    On the standard lines the classical differential equals (-1)^{n+1} times
    the sesquilinear one, so to_harrison(gr_d(Y)) = (-1)^{n+1} d(to_harrison(Y)).
    """
    return pm(n * (n + 1) // 2)


def sesq_shift(Y: ClCochain, s: int) -> int:
    return Y.delta + (Y.n - s) * (-Y.spec.shift)


def to_harrison(Y: ClCochain, s: int) -> SesqCochain:
    """Standard-line values on every composition with s parts, as Λ-polynomials."""
    if filtration_level(Y) < s:
        raise ValueError(f"cochain has filtration level {filtration_level(Y)} < {s}")
    n = Y.n
    shapes = compositions(n, s)
    F = SesqCochain(s, n, Y.weights, Y.W, sesq_shift(Y, s), shapes=shapes)
    vals = {}
    for k in shapes:
        G = standard_line(k)
        tab = {}
        for b in F.basis_tuples(k):
            v = to_Lambda(evaluate_on_graph(Y, G, b), k)
            if v.terms:
                tab[b] = v
        vals[k] = tab
    F.values = vals
    return F


def from_harrison(F: SesqCochain, spec: PVASpec, check=True) -> ClCochain:
    if check:
        bad = harrison_violations(F) + invariance_violations(F)
        if bad:
            raise ValueError("not a symmetric Harrison cochain: " + "; ".join(bad))
    s, n = F.s, F.n
    delta = F.delta - (n - s) * (-spec.shift)
    Y = ClCochain(spec, n, F.W, delta)
    Y.values = {k: dict(F.values.get(k, {})) for k in partitions(n) if len(k) == s}
    return Y


# ------------------------------------------------------- constraints

def constraint_rows(Y: ClCochain) -> list:
    """Linear conditions on the unknowns of a generic cochain.

    Harrison conditions follow from the monotone-graph identity together
    with the action of S_n on graphs; swapping two equal-length lines is a
    stabiliser of the standard line.
    """
    rows = []

    def emit(res):
        by_slot: dict = {}
        for (e, m, tag), c in res.terms.items():
            by_slot.setdefault((e, m), {})[tag] = c
        rows.extend(r for r in by_slot.values() if r)

    for shape in Y.shapes():
        s = len(shape)
        K = [0]
        for k in shape:
            K.append(K[-1] + k)
        for b in Y.basis_tuples(shape):
            if not Y.value_slots(shape, b):
                continue
            for t in range(s):
                kt = shape[t]
                for m in range(2, kt + 1):
                    res = Y.value(shape, b).copy()
                    sg = 1 if m % 2 == 0 else -1
                    for p in monotone(kt, m):
                        grp = tuple(b[K[t] + p[q] - 1] for q in range(kt))
                        w = b[:K[t]] + grp + b[K[t + 1]:]
                        res.iadd(Y.value(shape, w), sg * sign(p))
                    emit(res)
            for t in range(s - 1):
                if shape[t] != shape[t + 1]:
                    continue
                perm = list(range(1, n_of(shape) + 1))
                for q in range(shape[t]):
                    perm[K[t] + q], perm[K[t + 1] + q] = perm[K[t + 1] + q], perm[K[t] + q]
                w = tuple(b[perm[p] - 1] for p in range(len(b)))
                images = [{x: 1} for x in range(s)]
                images[t], images[t + 1] = {t + 1: 1}, {t: 1}
                moved = normal_form(Y.value(shape, w).substitute(images, s))
                res = Y.value(shape, b) - moved.scale(sign(tuple(perm)))
                emit(res)
    return rows


def violations(Y: ClCochain) -> list:
    """Human-readable reasons why a concrete cochain is not a valid element."""
    out = []
    for sh, tab in Y.values.items():
        if sh not in Y.shapes():
            out.append(f"shape {sh} is not a partition of {Y.n}")
            continue
        basis = set(Y.basis_tuples(sh))
        for t, v in tab.items():
            if not v.terms:
                continue
            if t not in basis:
                out.append(f"shape {sh}: argument tuple {t} is not a stored basis tuple")
                continue
            slots = set(Y.value_slots(sh, t))
            if any((e, m) not in slots for (e, m, _) in v.terms):
                out.append(f"shape {sh}: value at {t} has terms of the wrong weight")
    if not out and constraint_rows(Y):
        out.append(f"{len(constraint_rows(Y))} Harrison or symmetry conditions fail")
    return out


def n_of(shape):
    return sum(shape)


# ---------------------------------------------------------------- files

def cochain_to_dict(Y: ClCochain) -> dict:
    gens = Y.spec.generators
    shapes = {}
    for sh, tab in Y.values.items():
        if not tab:
            continue
        items = {}
        for t, v in tab.items():
            parts = []
            pos = 0
            for k in sh:
                parts.append(",".join(_fmt_mono(m, gens) for m in t[pos:pos + k]))
                pos += k
            items[" | ".join(parts)] = Y.spec.fmt(v)
        shapes[",".join(map(str, sh))] = items
    return {"arity": Y.n, "weight_cap": Y.W, "delta": Y.delta, "shapes": shapes}


def _fmt_mono(m, gens):
    from .diffpoly import format_mono
    return format_mono(m, gens) if m else "1"


def cochain_from_dict(spec: PVASpec, d: dict) -> ClCochain:
    try:
        n = int(d["arity"])
        W = int(d["weight_cap"])
        delta = int(d.get("delta", 0))
        raw = d.get("shapes", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad classical cochain file: {exc}") from None
    Y = ClCochain(spec, n, W, delta)
    vals = {}
    for key, items in raw.items():
        try:
            sh = tuple(int(x) for x in key.split(",")) if key.strip() else ()
        except ValueError:
            raise ParseError(f"bad shape key '{key}'") from None
        if tuple(sorted(sh)) != sh or sum(sh) != n:
            raise ParseError(f"shape '{key}' is not an ascending partition of {n}")
        tab = {}
        for tkey, text in items.items():
            groups = [g.strip() for g in tkey.split("|")]
            if len(groups) != len(sh):
                raise ParseError(f"tuple '{tkey}' does not have {len(sh)} groups")
            monos = []
            for g, k in zip(groups, sh):
                entries = [x.strip() for x in g.split(",")] if g else []
                if len(entries) != k:
                    raise ParseError(f"group '{g}' does not have {k} entries")
                for x in entries:
                    p = parse_poly(x, spec.generators, 0)
                    if len(p.terms) != 1 or next(iter(p.terms.values())) != 1:
                        raise ParseError(f"'{x}' is not a monomial")
                    monos.append(next(iter(p.terms))[1])
            s = len(sh)
            p = parse_poly(str(text), spec.generators, s)
            tab[tuple(monos)] = normal_form(p) if s else normal_form_v0(p, spec.weights)
        vals[sh] = tab
    Y.values = vals
    return Y


def load_cochain(spec: PVASpec, path) -> ClCochain:
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
