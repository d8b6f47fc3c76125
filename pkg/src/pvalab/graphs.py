"""Oriented n-graphs, cycle relations and reduction to proper lines.

Vertices are 1..n; a graph stores its edges as a sorted tuple so that
parallel edges survive (collapsing vertices can create them).
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

from .exact_linalg import ONE, Echelon, Q, vec_iadd
from .symgroup import Permutation

LINE_CAP = 6
RELATION_CAP = 5


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Digraph:
    n: int
    edges: tuple = ()

    def __post_init__(self):
        edges = tuple(sorted(tuple(e) for e in self.edges))
        for i, j in edges:
            if i == j:
                raise ValueError(f"tadpole at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge {i}->{j} outside 1..{self.n}")
        object.__setattr__(self, "edges", edges)

    def __str__(self):
        return f"{self.n}; " + ", ".join(f"{i}->{j}" for i, j in self.edges)


def parse_graph(text: str) -> Digraph:
    """Parse ``n; i->j, ...``."""
    head, _, body = text.partition(";")
    n = int(head.strip())
    edges = []
    for part in body.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(\d+)\s*->\s*(\d+)", part)
        if not m:
            raise ValueError(f"bad edge {part!r}")
        edges.append((int(m.group(1)), int(m.group(2))))
    return Digraph(n, tuple(edges))


def act(p: Permutation, g: Digraph) -> Digraph:
    if len(p) != g.n:
        raise ValueError(f"permutation of {len(p)} letters acting on a {g.n}-graph")
    return Digraph(g.n, tuple((p[i - 1], p[j - 1]) for i, j in g.edges))


def delete_vertex(g: Digraph, h: int) -> Digraph:
    if not 1 <= h <= g.n:
        raise ValueError(f"vertex {h} outside 1..{g.n}")

    def r(x):
        return x - 1 if x > h else x

    return Digraph(g.n - 1, tuple((r(i), r(j)) for i, j in g.edges if h not in (i, j)))


def collapse(g: Digraph, i: int, j: int) -> Digraph:
    """Merge i and j into vertex 1; other vertices become 2.. in order."""
    if i == j:
        raise ValueError("cannot collapse a vertex with itself")
    rest = [x for x in range(1, g.n + 1) if x not in (i, j)]
    new = {i: 1, j: 1}
    for pos, x in enumerate(rest, 2):
        new[x] = pos
    edges = tuple((new[a], new[b]) for a, b in g.edges if {a, b} != {i, j})
    return Digraph(g.n - 1, edges)


def components(g: Digraph) -> list[tuple[int, ...]]:
    parent = list(range(g.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.edges:
        parent[find(a)] = find(b)
    groups: dict = {}
    for v in range(1, g.n + 1):
        groups.setdefault(find(v), []).append(v)
    return sorted(tuple(c) for c in groups.values())


def has_directed_cycle(g: Digraph) -> bool:
    out: dict = {}
    for a, b in g.edges:
        out.setdefault(a, set()).add(b)
    state = [0] * (g.n + 1)

    def visit(v):
        state[v] = 1
        for w in out.get(v, ()):
            if state[w] == 1 or (state[w] == 0 and visit(w)):
                return True
        state[v] = 2
        return False

    return any(state[v] == 0 and visit(v) for v in range(1, g.n + 1))


def has_undirected_cycle(g: Digraph) -> bool:
    """True if the underlying multigraph is not a forest (parallel or antiparallel edges count)."""
    return len(g.edges) != g.n - len(components(g))


def epsilon(g: Digraph, i: int, j: int) -> int:
    if (i, j) in g.edges:
        return 1
    if (j, i) in g.edges:
        return -1
    return 0


@dataclass(frozen=True)
class GraphStats:
    components: tuple
    s: int
    has_cycle: bool
    deg_in: tuple
    deg_out: tuple
    epsilon: dict

    def deg(self, v: int) -> int:
        return self.deg_in[v - 1] + self.deg_out[v - 1]


def graph_stats(g: Digraph) -> GraphStats:
    din = [0] * g.n
    dout = [0] * g.n
    for a, b in g.edges:
        dout[a - 1] += 1
        din[b - 1] += 1
    eps = {}
    for i in range(1, g.n + 1):
        for j in range(1, g.n + 1):
            if i != j:
                eps[(i, j)] = epsilon(g, i, j)
    comps = tuple(components(g))
    return GraphStats(comps, len(comps), has_directed_cycle(g), tuple(din), tuple(dout), eps)


# ---------------------------------------------------------------- lines

def normalize_shape(shape) -> tuple:
    return tuple(sorted(int(k) for k in shape))


def shape_offsets(shape) -> list[int]:
    """K_0 = 0, K_1, ..., K_s."""
    out = [0]
    for k in shape:
        out.append(out[-1] + k)
    return out


def standard_line(shape) -> Digraph:
    shape = tuple(shape)
    if any(k < 1 for k in shape):
        raise ValueError(f"invalid line shape {shape}")
    K = shape_offsets(shape)
    edges = []
    for t in range(len(shape)):
        edges.extend((v, v + 1) for v in range(K[t] + 1, K[t + 1]))
    return Digraph(K[-1], tuple(edges))


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


@lru_cache(maxsize=None)
def line_basis(n: int) -> tuple:
    """All proper lines on n vertices: each path starts at its smallest label."""
    if not 1 <= n <= LINE_CAP:
        raise CapExceeded(f"line basis requested for n={n}; cap is {LINE_CAP}")
    out = set()
    for part in _set_partitions(list(range(1, n + 1))):
        choices = [[]]
        for block in part:
            b = sorted(block)
            new = []
            for tail in permutations(b[1:]):
                path = (b[0],) + tail
                for c in choices:
                    new.append(c + [path])
            choices = new
        for paths in choices:
            edges = [(p[a], p[a + 1]) for p in paths for a in range(len(p) - 1)]
            out.add(Digraph(n, tuple(edges)))
    return tuple(sorted(out))


def line_paths(g: Digraph) -> list[tuple[int, ...]] | None:
    """Vertex sequences of the component paths if g is a union of lines, else None."""
    din = [0] * (g.n + 1)
    nxt: dict = {}
    for a, b in g.edges:
        din[b] += 1
        if a in nxt:
            return None
        nxt[a] = b
    if any(d > 1 for d in din):
        return None
    paths = []
    seen = 0
    for v in range(1, g.n + 1):
        if din[v] == 0:
            p = [v]
            while p[-1] in nxt:
                p.append(nxt[p[-1]])
            paths.append(tuple(p))
            seen += len(p)
    if seen != g.n:
        return None
    return paths


def decompose_proper_line(g: Digraph) -> tuple[tuple, Permutation]:
    """(shape, tau) with act(tau, standard_line(shape)) == g."""
    paths = line_paths(g)
    if paths is None:
        raise ValueError(f"{g} is not a union of lines")
    paths.sort(key=lambda p: (len(p), min(p)))
    shape = tuple(len(p) for p in paths)
    tau = tuple(v for p in paths for v in p)
    return shape, tau


def is_proper_line(g: Digraph) -> bool:
    paths = line_paths(g)
    return paths is not None and all(p[0] == min(p) for p in paths)


# ------------------------------------------------------------- vectors

class GraphVector:
    """Finite linear combination of n-graphs."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {}
        for g, c in (terms or {}).items():
            if g.n != n:
                raise ValueError("graphs of different arity in one vector")
            if c:
                self.terms[g] = self.terms.get(g, 0) + Q(c)
        self.terms = {g: c for g, c in self.terms.items() if c}

    def __add__(self, other):
        t = dict(self.terms)
        vec_iadd(t, other.terms)
        return GraphVector(self.n, t)

    def __sub__(self, other):
        t = dict(self.terms)
        vec_iadd(t, other.terms, -1)
        return GraphVector(self.n, t)

    def scale(self, c):
        return GraphVector(self.n, {g: c * x for g, x in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, GraphVector) and self.n == other.n and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c} * [{g}]" for g, c in sorted(self.terms.items()))


def parse_graph_vector(text: str) -> GraphVector:
    """Parse ``c1 * [n; i->j, ...] + c2 * [...]``; a bare ``[...]`` has coefficient 1."""
    terms = []
    pos = 0
    text = text.strip()
    pat = re.compile(r"\s*([+-])?\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*\s*)?\[([^\]]*)\]\s*")
    while pos < len(text):
        m = pat.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse graph vector at column {pos + 1}")
        sgn = -1 if m.group(1) == "-" else 1
        coef = Q(1)
        if m.group(2):
            a, _, b = m.group(2).partition("/")
            coef = Q(int(a), int(b) if b else 1)
        terms.append((parse_graph(m.group(3)), sgn * coef))
        pos = m.end()
    if not terms:
        raise ValueError("empty graph vector")
    n = terms[0][0].n
    acc: dict = {}
    for g, c in terms:
        if g.n != n:
            raise ValueError("graphs of different arity in one vector")
        acc[g] = acc.get(g, 0) + c
    return GraphVector(n, acc)


# ----------------------------------------------------- cycle relations

def _directed_cycles(n: int) -> list[frozenset]:
    """Edge sets of the simple directed cycles of the complete digraph on n vertices."""
    out = []
    for size in range(2, n + 1):
        for verts in combinations(range(1, n + 1), size):
            first = verts[0]
            for rest in permutations(verts[1:]):
                cyc = (first,) + rest
                out.append(frozenset((cyc[a], cyc[(a + 1) % size]) for a in range(size)))
    return list(set(out))


def simple_graphs(n: int) -> list[Digraph]:
    """All graphs without repeated edges (antiparallel pairs allowed): 4^(n(n-1)/2)."""
    pairs = list(combinations(range(1, n + 1), 2))
    out = []
    for code in range(4 ** len(pairs)):
        edges = []
        for a, (i, j) in enumerate(pairs):
            c = (code >> (2 * a)) & 3
            if c & 1:
                edges.append((i, j))
            if c & 2:
                edges.append((j, i))
        out.append(Digraph(n, tuple(edges)))
    return out


def relation_span(n: int) -> list[GraphVector]:
    """Spanning set of R(n) over simple graphs: cyclic graphs and cycle sums."""
    if n > RELATION_CAP:
        raise CapExceeded(f"relation span requested for n={n}; cap is {RELATION_CAP}")
    if n <= 1:
        return []
    cycles = _directed_cycles(n)
    out = []
    for g in simple_graphs(n):
        es = set(g.edges)
        if has_directed_cycle(g):
            out.append(GraphVector(n, {g: 1}))
        for c in cycles:
            if c <= es:
                terms: dict = {}
                for e in c:
                    h = Digraph(n, tuple(x for x in g.edges if x != e))
                    terms[h] = terms.get(h, 0) + 1
                out.append(GraphVector(n, terms))
    return out


def relation_rank(n: int) -> int:
    """Rank of relation_span(n) inside the space spanned by simple graphs."""
    ech = Echelon()
    for v in relation_span(n):
        ech.add(v.terms)
    return len(ech)


# ------------------------------------------------------------ reduction

def _orient(edges) -> tuple[int, tuple]:
    """Sign and sorted undirected edge tuple for a forest given as oriented edges."""
    sgn = 1
    und = []
    for i, j in edges:
        if i > j:
            sgn = -sgn
            und.append((j, i))
        else:
            und.append((i, j))
    return sgn, tuple(sorted(und))


def _forests(n: int) -> list[tuple]:
    pairs = list(combinations(range(1, n + 1), 2))
    out = []
    for size in range(0, n):
        for es in combinations(pairs, size):
            if not has_undirected_cycle(Digraph(n, es)):
                out.append(es)
    return out


def _tree_path(adj: dict, a: int, b: int) -> list[int]:
    prev = {a: None}
    stack = [a]
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if w not in prev:
                prev[w] = v
                stack.append(w)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


class _Reducer:
    """Relations among sign-normalised forests, with proper lines left free."""

    def __init__(self, n: int):
        self.n = n
        self.lines = line_basis(n)
        self.line_of: dict = {}
        for g in self.lines:
            sgn, key = _orient(g.edges)
            self.line_of[key] = (sgn, g)
        key_rank = {}
        for f in _forests(n):
            key_rank[f] = (0 if f in self.line_of else 1, f)
        self.ech = Echelon(pivot_key=lambda f: key_rank[f])
        seen = set()
        for f in _forests(n):
            adj: dict = {}
            for i, j in f:
                adj.setdefault(i, []).append(j)
                adj.setdefault(j, []).append(i)
            comp = {v: c for c in components(Digraph(n, f)) for v in c}
            for a, b in combinations(range(1, n + 1), 2):
                if comp[a] != comp[b] or (a, b) in f:
                    continue
                uni = tuple(sorted(f + ((a, b),)))
                if uni in seen:
                    continue
                seen.add(uni)
                path = _tree_path(adj, a, b)
                cyc = [(path[t], path[t + 1]) for t in range(len(path) - 1)] + [(b, a)]
                cset = {tuple(sorted(e)) for e in cyc}
                others = [e for e in f if e not in cset]
                row: dict = {}
                for e in cyc:
                    rest = others + [x for x in cyc if x != e]
                    sgn, key = _orient(rest)
                    row[key] = row.get(key, 0) + sgn
                row = {k: Q(c) for k, c in row.items() if c}
                self.ech.add(row)
        for key in self.line_of:
            if key in self.ech.pivots:
                raise ArithmeticError("proper lines are dependent modulo the cycle relations")
        self._cache: dict = {}

    def reduce_graph(self, g: Digraph) -> dict:
        hit = self._cache.get(g)
        if hit is not None:
            return hit
        if has_undirected_cycle(g):
            out = {}
        else:
            sgn, key = _orient(g.edges)
            res = self.ech.residual({key: Q(sgn)})
            out = {}
            for k, c in res.items():
                if k not in self.line_of:
                    raise ArithmeticError(f"forest {k} did not reduce to proper lines")
                s2, line = self.line_of[k]
                out[line] = c * s2
        self._cache[g] = out
        return out


_reducers: dict = {}
_lock = threading.Lock()


def _reducer(n: int) -> _Reducer:
    r = _reducers.get(n)
    if r is None:
        with _lock:
            r = _reducers.get(n)
            if r is None:
                r = _Reducer(n)
                _reducers[n] = r
    return r


def reduce_graph(g: Digraph) -> dict:
    """Coordinates of one graph over line_basis(g.n)."""
    if g.n > LINE_CAP:
        raise CapExceeded(f"reduction requested for n={g.n}; cap is {LINE_CAP}")
    if g.n == 0:
        return {g: ONE}
    return _reducer(g.n).reduce_graph(g)


def reduce(v: GraphVector) -> dict:
    """Coordinates of v modulo R(n) over the proper-line basis."""
    out: dict = {}
    for g, c in v.terms.items():
        vec_iadd(out, reduce_graph(g), c)
    return out


def monotone_graph_sum(n: int, m: int) -> GraphVector:
    from .symgroup import monotone

    line = standard_line((n,))
    terms = {line: ONE}
    sgn = 1 if m % 2 == 0 else -1
    for p in monotone(n, m):
        h = act(p, line)
        terms[h] = terms.get(h, 0) + sgn
    return GraphVector(n, terms)


def check_identity_lemma(n: int, m: int) -> bool:
    if not 2 <= m <= n <= LINE_CAP:
        raise ValueError(f"need 2 <= m <= n <= {LINE_CAP}, got n={n}, m={m}")
    return not reduce(monotone_graph_sum(n, m))
