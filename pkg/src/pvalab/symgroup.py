"""Permutations, shuffles, monotone permutations and the group algebra Q[S_n].

A permutation is a tuple of 1-based images: p[i-1] = p(i).
"""

from __future__ import annotations

from itertools import combinations, permutations
from math import comb

from .exact_linalg import ONE, Q, SparseMatrix, rank, rank_kernel, vec_iadd

Permutation = tuple


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def is_permutation(p) -> bool:
    return sorted(p) == list(range(1, len(p) + 1))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p o q)(i) = p(q(i))."""
    assert len(p) == len(q)
    return tuple(p[q[i] - 1] for i in range(len(q)))


def inverse(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, x in enumerate(p, 1):
        out[x - 1] = i
    return tuple(out)


def inversions(p: Permutation) -> int:
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def sign(p: Permutation) -> int:
    return -1 if inversions(p) % 2 else 1


def all_permutations(n: int) -> list[Permutation]:
    return list(permutations(range(1, n + 1)))


def shuffles(m: int, n: int) -> list[Permutation]:
    """(m, n)-shuffles: increasing on 1..m and on m+1..m+n."""
    if m < 0 or n < 0:
        return []
    out = []
    for first in combinations(range(1, m + n + 1), m):
        rest = [x for x in range(1, m + n + 1) if x not in first]
        out.append(tuple(first) + tuple(rest))
    return out


def monotone(n: int, k: int) -> list[Permutation]:
    """Monotone permutations of S_n starting at k, built from position subsets."""
    if not 1 <= k <= n:
        raise ValueError(f"start {k} outside 1..{n}")
    out = []
    for pos in combinations(range(2, n + 1), k - 1):
        p = [0] * n
        p[0] = k
        down = iter(range(k - 1, 0, -1))
        up = iter(range(k + 1, n + 1))
        for i in range(2, n + 1):
            p[i - 1] = next(down) if i in pos else next(up)
        out.append(tuple(p))
    return out


def is_monotone(p: Permutation) -> bool:
    lo = hi = p[0]
    for x in p[1:]:
        if x > hi:
            hi = x
        elif x < lo:
            lo = x
        else:
            return False
    return True


def drops(p: Permutation) -> list[int]:
    """Positions i >= 2 where p(i) is a new running minimum."""
    out = []
    lo = p[0]
    for i, x in enumerate(p[1:], 2):
        if x < lo:
            out.append(i)
            lo = x
    return out


def drop_sign(p: Permutation) -> int:
    if not is_monotone(p):
        raise ValueError(f"{p} is not monotone")
    return -1 if sum(drops(p)) % 2 else 1


class GroupAlgebraElement:
    """Element of Q[S_n] as a dict permutation -> rational."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {p: Q(c) for p, c in (terms or {}).items() if c}

    @classmethod
    def one(cls, n: int) -> "GroupAlgebraElement":
        return cls(n, {identity(n): ONE})

    def __add__(self, other):
        t = dict(self.terms)
        vec_iadd(t, other.terms)
        return GroupAlgebraElement(self.n, t)

    def __sub__(self, other):
        t = dict(self.terms)
        vec_iadd(t, other.terms, -1)
        return GroupAlgebraElement(self.n, t)

    def scale(self, c) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.n, {p: c * x for p, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return self.scale(other)
        assert self.n == other.n
        t: dict = {}
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                r = compose(p, q)
                c = t.get(r, 0) + a * b
                if c:
                    t[r] = c
                else:
                    t.pop(r, None)
        return GroupAlgebraElement(self.n, t)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, GroupAlgebraElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{list(p)}" for p, c in sorted(self.terms.items()))


def harrison_operator(n: int, k: int) -> GroupAlgebraElement:
    """L_k = sum over monotone pi starting at k of (-1)^dr(pi) pi."""
    if not 2 <= k <= n:
        raise ValueError(f"start {k} outside 2..{n}")
    return GroupAlgebraElement(n, {p: drop_sign(p) for p in monotone(n, k)})


def shuffle_element(n: int, signed: bool = True) -> GroupAlgebraElement:
    """Sum of all (p, n-p)-shuffles for 1 <= p <= n-1.

    The signed version is the one whose zero eigenspace is the Harrison
    component for the argument-permutation action used here; the unsigned
    one differs by the twist p -> sign(p) p.
    """
    t: dict = {}
    for p in range(1, n):
        for s in shuffles(p, n - p):
            t[s] = t.get(s, 0) + (sign(s) if signed else 1)
    return GroupAlgebraElement(n, t)


def _integer_roots(coeffs: list) -> list[int]:
    """Integer roots of a monic polynomial given low-to-high coefficients."""
    low = next((i for i, c in enumerate(coeffs) if c), None)
    roots = [0] if low else []
    c0 = int(abs(coeffs[low]))
    cands = set()
    for d in range(1, c0 + 1):
        if c0 % d == 0:
            cands.update((d, -d))
    for r in sorted(cands):
        if sum(c * r**i for i, c in enumerate(coeffs)) == 0:
            roots.append(r)
    return sorted(roots)


def _minimal_polynomial(x: GroupAlgebraElement) -> list:
    """Low-to-high coefficients of the monic minimal polynomial of x."""
    n = x.n
    index = {p: i for i, p in enumerate(all_permutations(n))}

    def vec(e):
        return {index[p]: c for p, c in e.terms.items()}

    from .exact_linalg import Echelon

    ech = Echelon()
    power = GroupAlgebraElement.one(n)
    deg = 0
    while True:
        v = vec(power)
        combo = ech.express(v)
        if combo is not None:
            coeffs = [-combo.get(i, 0) for i in range(deg)] + [ONE]
            return coeffs
        ech.add(v, {deg: ONE})
        power = power * x
        deg += 1


def eulerian_idempotents(n: int) -> list[GroupAlgebraElement]:
    """Spectral projectors of the signed shuffle element, by increasing eigenvalue."""
    if n == 1:
        return [GroupAlgebraElement.one(1)]
    s = shuffle_element(n)
    roots = _integer_roots(_minimal_polynomial(s))
    one = GroupAlgebraElement.one(n)
    out = []
    for r in roots:
        e = one
        for q in roots:
            if q != r:
                e = (e * (s - one.scale(q))).scale(Q(1, r - q))
        out.append(e)
    return out


def eigenvalues(n: int) -> list[int]:
    if n == 1:
        return [0]
    return _integer_roots(_minimal_polynomial(shuffle_element(n)))


def _regular_index(n):
    return {p: i for i, p in enumerate(all_permutations(n))}


def right_image(e: GroupAlgebraElement) -> list[dict]:
    """Spanning vectors of Q[S_n] e (image of right multiplication by e)."""
    idx = _regular_index(e.n)
    return [{idx[p]: c for p, c in (GroupAlgebraElement(e.n, {g: 1}) * e).terms.items()} for g in idx]


def argument_action(x: GroupAlgebraElement) -> GroupAlgebraElement:
    """Antipode p -> p^-1: turns an argument permutation into right multiplication."""
    return GroupAlgebraElement(x.n, {inverse(p): c for p, c in x.terms.items()})


def harrison_fixed_space(n: int) -> list[dict]:
    """Basis of the x in Q[S_n] fixed by every L_k acting on argument positions.

    Permuting arguments by pi is right multiplication by pi^-1, so the
    condition reads x * antipode(L_k) = x.
    """
    idx = _regular_index(n)
    N = len(idx)
    rows = []
    for k in range(2, n + 1):
        L = argument_action(harrison_operator(n, k))
        # column g holds g L_k - g; rows are coordinates
        cols = []
        for g in idx:
            d = (GroupAlgebraElement(n, {g: 1}) * L - GroupAlgebraElement(n, {g: 1})).terms
            cols.append({idx[p]: c for p, c in d.items()})
        block = [{} for _ in range(N)]
        for j, col in enumerate(cols):
            for i, c in col.items():
                block[i][j] = c
        rows.extend(block)
    if not rows:
        return [{i: ONE} for i in range(N)]
    _, ker = rank_kernel(SparseMatrix(len(rows), N, rows))
    return ker


def same_subspace(a: list[dict], b: list[dict]) -> bool:
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(list(a) + list(b))


def harrison_projector(n: int) -> tuple[int, GroupAlgebraElement]:
    """(position, idempotent) of the Eulerian idempotent whose right image is the L_k-fixed space."""
    fix = harrison_fixed_space(n)
    for i, e in enumerate(eulerian_idempotents(n)):
        if same_subspace(right_image(e), fix):
            return i, e
    raise ArithmeticError(f"no spectral projector matches the Harrison fixed space for n={n}")


def count_check(n: int, k: int) -> bool:
    return len(monotone(n, k)) == comb(n - 1, k - 1)
