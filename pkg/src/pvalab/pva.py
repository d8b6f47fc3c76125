"""Lambda-brackets on differential polynomial algebras."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .diffpoly import (
    UNIT, LambdaPoly, ParseError, format_poly, mono_weight, monomials, normal_form, parse_poly,
    relocate,
)


@dataclass
class PVASpec:
    generators: list
    weights: tuple
    table: dict  # (g, h) -> LambdaPoly(1)
    name: str = ""
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.weights = tuple(int(w) for w in self.weights)
        if len(self.weights) != len(self.generators):
            raise ValueError("one weight per generator")
        if any(w < 1 for w in self.weights):
            raise ValueError("conformal weights must be positive")
        n = len(self.generators)
        for g in range(n):
            for h in range(n):
                if (g, h) not in self.table:
                    if (h, g) not in self.table:
                        self.table[(g, h)] = LambdaPoly(1)
                    else:
                        self.table[(g, h)] = _skew_partner(self.table[(h, g)])
        self.shift = self._detect_shift()

    def _detect_shift(self):
        shifts = set()
        for (g, h), p in self.table.items():
            for (e, m, _) in p.terms:
                shifts.add(e[0] + mono_weight(m, self.weights) - self.weights[g] - self.weights[h])
        if len(shifts) > 1:
            raise ValueError(f"bracket table is not weight-homogeneous (shifts {sorted(shifts)})")
        return shifts.pop() if shifts else -1

    @property
    def ngens(self):
        return len(self.generators)

    def gen(self, name_or_index, order=0):
        g = name_or_index if isinstance(name_or_index, int) else self.generators.index(name_or_index)
        return LambdaPoly.gen(g, order)

    def parse(self, text, nvars=0):
        return parse_poly(text, self.generators, nvars)

    def fmt(self, p, lam="L"):
        return format_poly(p, self.generators, lam)


def _skew_partner(p: LambdaPoly) -> LambdaPoly:
    """[b_λ a] from [a_λ b] via skewsymmetry."""
    return -_flip(p)


def _flip(p: LambdaPoly) -> LambdaPoly:
    """p(-λ-∂) with ∂ acting on the coefficients."""
    two = normal_form(p.embed((1,), 2))
    out = {}
    for (e, m, t), c in two.terms.items():
        out[((e[0],), m, t)] = c
    return LambdaPoly(1, out)


def spec_from_dict(d: dict, name="") -> PVASpec:
    gens = list(d["generators"])
    if "D" in gens or any(g.startswith("L") and g[1:].isdigit() or g == "L" for g in gens):
        raise ParseError("generator names D, L and Lk are reserved")
    weights = d.get("weights", [1] * len(gens))
    table = {}
    for key, text in d.get("brackets", {}).items():
        a, _, b = key.partition(",")
        a, b = a.strip(), b.strip()
        if a not in gens or b not in gens:
            raise ParseError(f"bracket key {key!r} names an unknown generator")
        table[(gens.index(a), gens.index(b))] = parse_poly(text, gens, 1)
    full = {k: v for k, v in table.items()}
    spec = PVASpec(gens, tuple(weights), full, name=name)
    for (g, h), p in table.items():
        if (h, g) in table and _skew_partner(p) != table[(h, g)]:
            spec.table_conflicts = getattr(spec, "table_conflicts", []) + [(g, h)]
    return spec


def load_spec(path) -> PVASpec:
    with open(path) as fh:
        text = fh.read()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(d, dict) or "generators" not in d:
        raise ParseError("spec file needs a JSON object with 'generators'")
    try:
        return spec_from_dict(d, name=str(path))
    except ParseError as exc:
        raise relocate(exc, text) from None


def gfz() -> PVASpec:
    return spec_from_dict({"generators": ["u"], "weights": [1], "brackets": {"u,u": "L"}}, "GFZ")


def virasoro(c=1) -> PVASpec:
    return spec_from_dict({
        "generators": ["T"], "weights": [2],
        "brackets": {"T,T": f"D(T) + 2*L*T + ({c})/12*L^3"},
    }, "Virasoro")


def broken_pair() -> PVASpec:
    """Two generators; skewsymmetric but not Jacobi."""
    return spec_from_dict({
        "generators": ["u", "v"], "weights": [1, 1],
        "brackets": {"u,u": "D(v) + 2*L*v", "v,v": "D(v) + 2*L*v", "u,v": "0"},
    }, "broken")


def constant_bracket() -> PVASpec:
    spec = PVASpec(["u"], (1,), {(0, 0): LambdaPoly.const(1, 1)}, name="constant")
    return spec


# ------------------------------------------------------------ brackets

def bracket_monos(spec: PVASpec, a: tuple, b: tuple) -> LambdaPoly:
    """[a_λ b] for monomials a, b."""
    key = (a, b)
    hit = spec._memo.get(key)
    if hit is not None:
        return hit
    if not a or not b:
        out = LambdaPoly(1)
    elif len(b) > 1:
        f, rest = (b[0],), b[1:]
        out = bracket_monos(spec, a, f) * LambdaPoly.mono(rest, 1)
        out = out + bracket_monos(spec, a, rest) * LambdaPoly.mono(f, 1)
    elif b[0][1] > 0:
        g, q = b[0]
        inner = bracket_monos(spec, a, ((g, q - 1),))
        out = LambdaPoly.lam(0, 1) * inner + inner.derivative()
    elif len(a) > 1:
        f, rest = (a[0],), a[1:]
        out = bracket_monos(spec, f, b).shift_substitute(0, LambdaPoly.mono(rest))
        out = out + bracket_monos(spec, rest, b).shift_substitute(0, LambdaPoly.mono(f))
    else:
        h, p = a[0]
        out = spec.table[(h, b[0][0])]
        if p:
            lam = LambdaPoly.lam(0, 1).scale(-1)
            for _ in range(p):
                out = lam * out
    spec._memo[key] = out
    return out


def extend_bracket(spec: PVASpec, a: LambdaPoly, b: LambdaPoly) -> LambdaPoly:
    """[a_λ b] for lambda-free polynomials."""
    if a.nvars or b.nvars:
        raise ValueError("arguments must be lambda-free")
    out = LambdaPoly(1)
    for (_, ma, ta), ca in a.terms.items():
        for (_, mb, tb), cb in b.terms.items():
            if ta is not None or tb is not None:
                raise ValueError("unknowns not allowed in bracket arguments")
            out.iadd(bracket_monos(spec, ma, mb), ca * cb)
    return out


def bracket_into(spec: PVASpec, a: tuple, value: LambdaPoly, slot: int) -> LambdaPoly:
    """[a_{λ_slot} value] where value lives in the same lambda variables (coefficientwise)."""
    n = value.nvars
    out = LambdaPoly(n)
    for (e, m, t), c in value.terms.items():
        br = bracket_monos(spec, a, m)
        for (e2, m2, _), c2 in br.terms.items():
            e3 = list(e)
            e3[slot] += e2[0]
            key = (tuple(e3), m2, t)
            v = out.terms.get(key, 0) + c * c2
            if v:
                out.terms[key] = v
            else:
                out.terms.pop(key, None)
    return out


# ---------------------------------------------------------- axiom checks

def skew_residual(spec, a: tuple, b: tuple) -> LambdaPoly:
    """[a_λ b] + [b_{-λ-∂} a]."""
    return bracket_monos(spec, a, b) + _flip(bracket_monos(spec, b, a))


def check_skewsymmetry(spec: PVASpec, samples=25, max_weight=4, seed=0) -> dict:
    bad = []
    pairs = [(((g, 0),), ((h, 0),)) for g in range(spec.ngens) for h in range(spec.ngens)]
    rng = random.Random(seed)
    pool = [m for w in range(1, max_weight + 1) for m in monomials(w, spec.weights)]
    for _ in range(samples if pool else 0):
        pairs.append((rng.choice(pool), rng.choice(pool)))
    for a, b in pairs:
        r = skew_residual(spec, a, b)
        if r:
            bad.append({"a": spec.fmt(LambdaPoly.mono(a)), "b": spec.fmt(LambdaPoly.mono(b)),
                        "residual": spec.fmt(r)})
    return {"ok": not bad, "checked": len(pairs), "failures": bad}


def jacobi_residual(spec, a: tuple, b: tuple, c: tuple) -> LambdaPoly:
    """[a_λ[b_μ c]] - [b_μ[a_λ c]] - [[a_λ b]_{λ+μ} c] in V[λ, μ]."""
    bc = bracket_monos(spec, b, c).embed((1,), 2)
    ac = bracket_monos(spec, a, c).embed((0,), 2)
    out = bracket_into(spec, a, bc, 0) - bracket_into(spec, b, ac, 1)
    ab = bracket_monos(spec, a, b)
    for (e, m, _), k in ab.terms.items():
        inner = bracket_monos(spec, m, c).substitute([{0: 1, 1: 1}], 2)
        lam = LambdaPoly(2, {((e[0], 0), UNIT, None): k})
        out = out - lam * inner
    return out


def check_jacobi(spec: PVASpec, samples=25, max_weight=6, seed=0) -> dict:
    bad = []
    n = spec.ngens
    triples = [(((g, 0),), ((h, 0),), ((k, 0),)) for g in range(n) for h in range(n) for k in range(n)]
    rng = random.Random(seed)
    pool = [m for w in range(1, max_weight // 2 + 1) for m in monomials(w, spec.weights)]
    for _ in range(samples if pool else 0):
        triples.append(tuple(rng.choice(pool) for _ in range(3)))
    for a, b, c in triples:
        r = jacobi_residual(spec, a, b, c)
        if r:
            bad.append({"a": spec.fmt(LambdaPoly.mono(a)), "b": spec.fmt(LambdaPoly.mono(b)),
                        "c": spec.fmt(LambdaPoly.mono(c)), "residual": format_poly(r, spec.generators)})
    return {"ok": not bad, "checked": len(triples), "failures": bad}


def check_pva(spec: PVASpec, samples=25, seed=0, with_dx=True) -> dict:
    rep = {"skewsymmetry": check_skewsymmetry(spec, samples, seed=seed)}
    rep["jacobi"] = check_jacobi(spec, samples, seed=seed) if rep["skewsymmetry"]["ok"] else {
        "ok": False, "skipped": "skewsymmetry failed"}
    if with_dx:
        from .cl_complex import master_X, d_cl_residual_zero
        rep["dX"] = d_cl_residual_zero(spec, master_X(spec))
    rep["ok"] = all(v["ok"] for v in rep.values() if isinstance(v, dict))
    return rep
