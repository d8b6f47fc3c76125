"""Finite weight slices of the three complexes, their cohomology, the
vanishing check with a W+1 retry, and straightening of closed classical
cochains onto the edgeless graph."""

from __future__ import annotations

from dataclasses import dataclass

from .cl_complex import (
    ClCochain, constraint_rows, d_cl, filtration_level, from_harrison, sesq_shift, to_harrison,
)
from .diffpoly import tuple_weight
from .exact_linalg import Echelon, Q, SparseMatrix, pm, rank_kernel, vec_iadd
from .pv_complex import VarCochain, d_var, skew_constraints
from .pva import PVASpec
from .sesquilinear import (
    SesqCochain, act_Ss, apply_harrison, compositions, d_total,
)

KINDS = ("variational", "classical", "sesquilinear")
UNKNOWN_CAP = 20000


class CapExceeded(ValueError):
    """A slice is larger than the configured cap."""


class NotClosed(ValueError):
    """straighten was given a cochain with d Y != 0."""


class TruncationInfeasible(ArithmeticError):
    """A primitive needed by straighten does not exist inside the weight cap."""

    def __init__(self, msg, level):
        super().__init__(msg)
        self.level = level


def _rows_from(residual) -> list:
    by_slot: dict = {}
    for (e, m, tag), c in residual.terms.items():
        by_slot.setdefault((e, m), {})[tag] = c
    return [r for r in by_slot.values() if r]


def sesq_constraint_rows(F: SesqCochain) -> list:
    """Harrison fixed points per group and invariance under adjacent group swaps."""
    rows = []
    for sh in F.shapes():
        for t in range(1, len(sh) + 1):
            for m in range(2, sh[t - 1] + 1):
                for b, v in apply_harrison(F, t, m, sh).items():
                    rows.extend(_rows_from(v - F.value(sh, b)))
    s = F.s
    for a in range(1, s):
        p = list(range(1, s + 1))
        p[a - 1], p[a] = p[a], p[a - 1]
        img = act_Ss(tuple(p), F)
        for sh in F.shapes():
            for b in F.basis_tuples(sh):
                rows.extend(_rows_from(img.value(sh, b) - F.value(sh, b)))
    return rows


def _out_key(key):
    return key[:-1]


@dataclass
class Slice:
    """One degree of a truncated complex: a basis of the valid cochains and d on it."""

    kind: str
    n: int
    delta: int
    proto: object
    tags: list
    kernel: list            # dicts tag -> coeff
    _dcols: dict | None = None

    @property
    def dim(self):
        return len(self.kernel)

    def cochains(self):
        return [self.proto.specialize(kv) for kv in self.kernel]

    def coords_of(self, kv):
        """Coordinates of a basis combination in the stored-value basis."""
        return {k: c for k, c in kv.items() if c}


def _differential(kind, Y):
    if kind == "variational":
        return d_var(Y)
    if kind == "classical":
        return d_cl(Y)
    return d_total(Y)


class TruncatedComplex:
    """Weight slices of a complex; delta is the shift at degree 0."""

    def __init__(self, kind, spec: PVASpec, W, delta, s=None):
        if kind not in KINDS:
            raise ValueError(f"unknown complex kind {kind!r}; choose from {KINDS}")
        if kind == "sesquilinear" and (s is None or s < 0):
            raise ValueError("the sesquilinear complex needs a group count s >= 0")
        self.kind = kind
        self.spec = spec
        self.W = W
        self.delta = delta
        self.s = s
        self.step = 0 if kind == "sesquilinear" else spec.shift
        self._slices: dict = {}

    def delta_at(self, n):
        return self.delta + n * self.step

    def proto(self, n):
        d = self.delta_at(n)
        if self.kind == "variational":
            return VarCochain(self.spec, n, delta=d)
        if self.kind == "classical":
            return ClCochain(self.spec, n, self.W, d)
        s = self.s
        if s == 0:
            shapes = [()] if n == 0 else []
        elif s == 1 and n == 0:
            shapes = [(0,)]
        else:
            shapes = compositions(n, s)
        return SesqCochain(s, n, self.spec.weights, self.W, d, shapes=shapes)

    def slice(self, n, level=None) -> Slice:
        """Degree-n slice; with level=s (classical only) restrict to F_s."""
        key = n if level is None else (n, level)
        hit = self._slices.get(key)
        if hit is not None:
            return hit
        proto = self.proto(n)
        tags = proto.unknowns()
        if len(tags) > UNKNOWN_CAP:
            raise CapExceeded(f"degree {n} slice has {len(tags)} unknowns; cap is {UNKNOWN_CAP}")
        gen = proto.generic()
        if self.kind == "variational":
            rows = skew_constraints(gen)
        elif self.kind == "classical":
            rows = constraint_rows(gen)
            if level is not None:
                rows += [{t: Q(1)} for t in tags if len(t[0]) < level]
        else:
            rows = sesq_constraint_rows(gen)
        idx = {t: i for i, t in enumerate(tags)}
        m = SparseMatrix(len(rows), len(tags), [{idx[t]: c for t, c in r.items()} for r in rows])
        _, ker = rank_kernel(m)
        kernel = [{tags[i]: c for i, c in v.items()} for v in ker]
        sl = Slice(self.kind, n, self.delta_at(n), proto, tags, kernel)
        self._slices[key] = sl
        return sl

    def dcols(self, n) -> dict:
        """d on the unknowns of degree n: tag -> {output coordinate: coeff}."""
        sl = self.slice(n)
        if sl._dcols is None:
            if self.kind == "sesquilinear" and self.s == 0:
                sl._dcols = {}
                return sl._dcols
            out = _differential(self.kind, sl.proto.generic())
            cols: dict = {}
            for key, c in out.coords().items():
                cols.setdefault(key[-1], {})[_out_key(key)] = c
            sl._dcols = cols
        return sl._dcols

    def images(self, n) -> list:
        cols = self.dcols(n)
        out = []
        for kv in self.slice(n).kernel:
            v: dict = {}
            for tag, c in kv.items():
                col = cols.get(tag)
                if col:
                    vec_iadd(v, col, c)
            out.append(v)
        return out

    def rank(self, n) -> int:
        if n < 0:
            return 0
        ech = Echelon()
        return sum(1 for v in self.images(n) if v and ech.add(v))

    def cohomology(self, n) -> dict:
        dim_c = self.slice(n).dim
        rk = self.rank(n)
        rk_prev = self.rank(n - 1)
        return {"n": n, "delta": self.delta_at(n), "W": self.W, "dim_C": dim_c,
                "dim_ker": dim_c - rk, "dim_im": rk_prev, "dim_H": dim_c - rk - rk_prev}

    def d_squared_zero(self, n) -> bool:
        """d_{n+1} d_n = 0 on the basis of degree n."""
        nxt = _differential(self.kind, symbolic_element(self.slice(n)))
        nxt.W = self.W
        dd = _differential(self.kind, nxt)
        return not dd.coords()


def cochain_basis(tc: TruncatedComplex, n: int) -> list:
    return tc.slice(n).cochains()


def cohomology_dims(tc: TruncatedComplex, degrees) -> list:
    return [tc.cohomology(n) for n in degrees]


# ------------------------------------------------------------- vanishing

def _restrict(vec: dict, W, weights) -> dict:
    return {k: c for k, c in vec.items() if tuple_weight(k[1], weights) <= W}


def _cocycles(tc: TruncatedComplex, n) -> list:
    """A basis of the cocycles, as coordinate vectors over stored values."""
    sl = tc.slice(n)
    imgs = tc.images(n)
    # kernel of the image map restricted to the basis combinations
    keys = {}
    rows_T: dict = {}
    for j, v in enumerate(imgs):
        for k, c in v.items():
            rows_T.setdefault(keys.setdefault(k, len(keys)), {})[j] = c
    m = SparseMatrix(len(rows_T), len(imgs), list(rows_T.values()))
    _, ker = rank_kernel(m)
    out = []
    for v in ker:
        z: dict = {}
        for j, c in v.items():
            vec_iadd(z, sl.kernel[j], c)
        out.append(z)
    return out


def verify_vanishing(spec: PVASpec, s: int, n: int, W: int, delta: int, retry=True) -> dict:
    """dim H^n of the truncated symmetric s-sesquilinear Harrison complex."""
    if not 1 <= s < n:
        raise ValueError(f"the vanishing statement needs 1 <= s < n, got s={s}, n={n}")
    return slice_report(spec, s, n, W, delta, retry)


def slice_report(spec: PVASpec, s: int, n: int, W: int, delta: int, retry=True) -> dict:
    """dim H^n at (s, W, delta); a nonzero answer is re-examined at W+1."""
    tc = TruncatedComplex("sesquilinear", spec, W, delta, s)
    rep = tc.cohomology(n)
    rep.update({"s": s, "status": "zero" if rep["dim_H"] == 0 else "nonzero"})
    if rep["dim_H"] and retry:
        big = TruncatedComplex("sesquilinear", spec, W + 1, delta, s)
        ech = Echelon()
        for v in tc.images(n - 1):
            if v:
                ech.add(v)
        base = len(ech)
        for z in _cocycles(big, n):
            r = _restrict(z, W, spec.weights)
            if r:
                ech.add(r)
        surviving = len(ech) - base
        rep["retry"] = {"W": W + 1, "surviving_classes": surviving}
        if surviving == 0:
            rep["status"] = "retry"
    return rep


def vanishing_grid(spec, cases=((2, 1), (3, 1), (3, 2)), Ws=range(1, 5), deltas=range(-4, 9)) -> list:
    out = []
    for n, s in cases:
        for W in Ws:
            for d in deltas:
                out.append(verify_vanishing(spec, s, n, W, d))
    return out


# ------------------------------------------------------------ straighten

def _solve(images, target):
    ech = Echelon()
    for i, v in enumerate(images):
        if v:
            ech.add(v, {i: Q(1)})
    return ech.express(target)


def straighten(spec: PVASpec, Y: ClCochain):
    """(Z, Ytilde) with Y = d Z + Ytilde and Ytilde supported on the edgeless graph."""
    n = Y.n
    if not d_cl(Y).is_zero():
        raise NotClosed("straighten needs a closed cochain (d Y != 0)")
    Z = ClCochain(spec, n - 1, Y.W, Y.delta - spec.shift)
    cur = Y
    for s in range(1, n):
        if filtration_level(cur) > s:
            continue
        # to_harrison(d_cl Z) = (-1)^n d(to_harrison Z) on the level-s part for Z of arity n-1
        target = to_harrison(cur, s).scale(pm(n))
        tc = TruncatedComplex("sesquilinear", spec, Y.W, sesq_shift(cur, s), s)
        coords = {k[:-1]: c for k, c in target.coords().items()}
        sol = _solve(tc.images(n - 1), coords) if n - 1 >= s else None
        if sol is None:
            raise TruncationInfeasible(
                f"no primitive for the level-{s} part inside weight cap W={Y.W}", s)
        sl = tc.slice(n - 1)
        assign: dict = {}
        for i, c in sol.items():
            vec_iadd(assign, sl.kernel[i], c)
        Zbar = sl.proto.specialize(assign)
        Zs = from_harrison(Zbar, spec)
        cur = cur - d_cl(Zs)
        Z = Z + Zs
        if filtration_level(cur) <= s:
            raise ArithmeticError(f"level {s} part survived the correction")
    return Z, cur


def in_image(tc: TruncatedComplex, n: int, vec: dict) -> bool:
    """Is the coordinate vector in d(C^{n-1}) of the slice?"""
    if n == 0:
        return not vec
    return _solve(tc.images(n - 1), vec) is not None


def coords(Y) -> dict:
    return {k[:-1]: c for k, c in Y.coords().items()}


# --------------------------------------------------------------- sampling

def random_element(sl: Slice, rng, lo=-3, hi=3):
    """A random integer combination of the slice basis."""
    assign: dict = {}
    for kv in sl.kernel:
        c = rng.randint(lo, hi)
        if c:
            vec_iadd(assign, kv, c)
    return sl.proto.specialize(assign)


def symbolic_element(sl: Slice):
    """Σ_i t_i b_i with one unknown t_i per basis vector."""
    total = None
    for i, kv in enumerate(sl.kernel):
        b = sl.proto.specialize(kv)
        for tab in (b.values.values() if not isinstance(b, VarCochain) else [b.values]):
            for key in list(tab):
                tab[key] = tab[key].with_tag(("t", i))
        total = b if total is None else total + b
    return total if total is not None else sl.proto


def cocycle_basis(tc: TruncatedComplex, n: int) -> list:
    """Basis of the degree-n cocycles as cochains."""
    return [tc.slice(n).proto.specialize(z) for z in _cocycles(tc, n)]


def random_cocycle(tc: TruncatedComplex, n: int, rng, lo=-3, hi=3):
    assign: dict = {}
    for z in _cocycles(tc, n):
        c = rng.randint(lo, hi)
        if c:
            vec_iadd(assign, z, c)
    return tc.slice(n).proto.specialize(assign)
