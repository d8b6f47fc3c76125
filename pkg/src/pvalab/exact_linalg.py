"""Exact rational linear algebra on sparse rows.

Vectors are plain dicts mapping a hashable column key to a nonzero rational.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    _mpq = None


def Q(num=0, den=1):
    """Return an exact rational; uses gmpy2 when available."""
    if isinstance(num, float) or isinstance(den, float):
        raise TypeError("floats are not exact; pass integers or rationals")
    if _mpq is not None:
        if isinstance(num, Fraction):
            return _mpq(num.numerator, num.denominator) / den
        return _mpq(num, den)
    return Fraction(num, den)


def pm(k: int) -> int:
    """(-1)^k for any integer k, as an int."""
    return -1 if k % 2 else 1


ZERO = Q(0)
ONE = Q(1)

Vector = dict


def vec_add(a: dict, b: dict, c=1) -> dict:
    """Return a + c*b without mutating either argument."""
    out = dict(a)
    vec_iadd(out, b, c)
    return out


def vec_iadd(a: dict, b: dict, c=1) -> None:
    """In place a += c*b, dropping zeros."""
    if not c:
        return
    for k, v in b.items():
        w = a.get(k, 0) + c * v
        if w:
            a[k] = w
        elif k in a:
            del a[k]


def vec_scale(a: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


class SparseMatrix:
    """A rows x cols matrix stored as one dict per row."""

    def __init__(self, nrows: int, ncols: int, rows: list | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [{} for _ in range(nrows)]
        assert len(rows) == nrows
        self.rows = [{c: Q(v) for c, v in r.items() if v} for r in rows]
        for r in self.rows:
            for c in r:
                if not 0 <= c < ncols:
                    raise ValueError(f"column index {c} outside 0..{ncols - 1}")

    @classmethod
    def from_dense(cls, data: list[list]) -> "SparseMatrix":
        ncols = len(data[0]) if data else 0
        rows = [{j: x for j, x in enumerate(r) if x} for r in data]
        return cls(len(data), ncols, rows)

    def to_dense(self) -> list[list]:
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                out[i][j] = x
        return out

    @property
    def entries(self) -> dict:
        return {(i, j): x for i, r in enumerate(self.rows) for j, x in r.items()}

    def apply(self, v: dict) -> dict:
        """Matrix times column vector v (dict col -> value)."""
        out = {}
        for i, r in enumerate(self.rows):
            s = sum((x * v[j] for j, x in r.items() if j in v), ZERO)
            if s:
                out[i] = s
        return out

    def transpose(self) -> "SparseMatrix":
        cols = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                cols[j][i] = x
        return SparseMatrix(self.ncols, self.nrows, cols)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        rows = []
        for r in self.rows:
            acc: dict = {}
            for j, x in r.items():
                vec_iadd(acc, other.rows[j], x)
            rows.append(acc)
        return SparseMatrix(self.nrows, other.ncols, rows)

    def is_zero(self) -> bool:
        return not any(self.rows)


class Echelon:
    """Incremental reduced row echelon form with optional payload tracking.

    Rows are kept fully reduced: each has pivot coefficient 1 and no entry
    in another row's pivot column, so reducing a vector only touches the
    pivots it actually contains.  ``pivot_key`` picks the pivot of a new row
    as its maximal column under that key; otherwise the column with the
    fewest recorded occurrences in ``col_counts`` wins (ties by repr).
    """

    def __init__(self, pivot_key: Callable | None = None, col_counts: dict | None = None):
        self.pivot_key = pivot_key
        self.col_counts = col_counts
        self.rows: dict = {}
        self.payloads: dict = {}
        self._colrows: dict = {}

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self):
        return self.rows.keys()

    def _choose(self, vec: dict):
        if self.pivot_key is not None:
            return max(vec, key=self.pivot_key)
        if self.col_counts is not None:
            cc = self.col_counts
            return min(vec, key=lambda c: (cc.get(c, 0), repr(c)))
        return min(vec, key=repr)

    def reduce(self, vec: dict, track: bool = False):
        """Return (residual, combo) with vec = residual + sum c_p row_p.

        ``combo`` is sum c_p payload_p when ``track`` is set, otherwise None.
        """
        v = dict(vec)
        combo = {} if track else None
        rows = self.rows
        for p in [c for c in v if c in rows]:
            c = v[p]
            vec_iadd(v, rows[p], -c)
            if track:
                vec_iadd(combo, self.payloads[p], c)
        return v, combo

    def add(self, vec: dict, payload: dict | None = None) -> bool:
        """Insert a row; return False if it was dependent on existing rows."""
        track = payload is not None
        v, combo = self.reduce(vec, track=track)
        if not v:
            return False
        pay = None
        if track:
            pay = dict(payload)
            vec_iadd(pay, combo, -1)
        p = self._choose(v)
        inv = 1 / v[p]
        v = {k: x * inv for k, x in v.items()}
        if track:
            pay = {k: x * inv for k, x in pay.items()}
        colrows = self._colrows
        for q in list(colrows.pop(p, ())):
            r = self.rows[q]
            c = r[p]
            for k, x in v.items():
                w = r.get(k, 0) - c * x
                if w:
                    r[k] = w
                    if k != p:
                        colrows.setdefault(k, set()).add(q)
                else:
                    r.pop(k, None)
                    if k != p:
                        s = colrows.get(k)
                        if s is not None:
                            s.discard(q)
            r.pop(p, None)
            if track:
                vec_iadd(self.payloads[q], pay, -c)
        self.rows[p] = v
        self.payloads[p] = pay
        for k in v:
            if k != p:
                colrows.setdefault(k, set()).add(p)
        return True

    def residual(self, vec: dict) -> dict:
        return self.reduce(vec)[0]

    def contains(self, vec: dict) -> bool:
        return not self.residual(vec)

    def express(self, vec: dict):
        """Coefficients over the inserted payloads, or None if vec is outside."""
        v, combo = self.reduce(vec, track=True)
        return None if v else combo

    def fully_reduced(self) -> dict:
        """{pivot: row} in reduced row echelon form."""
        return self.rows


def rank_kernel(m: SparseMatrix) -> tuple[int, list[dict]]:
    """Rank of m and a basis of its right kernel (as dict column vectors)."""
    counts: dict = {}
    for r in m.rows:
        for j in r:
            counts[j] = counts.get(j, 0) + 1
    ech = Echelon(col_counts=counts)
    for r in sorted(m.rows, key=len):
        if r:
            ech.add(r)
    rref = ech.fully_reduced()
    free = [j for j in range(m.ncols) if j not in rref]
    kernel = []
    for f in free:
        v = {f: ONE}
        for p, row in rref.items():
            c = row.get(f)
            if c:
                v[p] = -c
        kernel.append(v)
    return len(rref), kernel


def rank(rows: Iterable[dict]) -> int:
    ech = Echelon()
    n = 0
    for r in rows:
        if r and ech.add(r):
            n += 1
    return n


def solve_in_rowspace(m: SparseMatrix, target) -> dict | None:
    """Coefficients c (dict row -> value) with sum c_i m_i = target, or None."""
    if isinstance(target, (list, tuple)):
        if len(target) != m.ncols:
            raise ValueError(f"target length {len(target)} != cols {m.ncols}")
        target = {j: Q(x) for j, x in enumerate(target) if x}
    else:
        for j in target:
            if not 0 <= j < m.ncols:
                raise ValueError(f"target column {j} outside 0..{m.ncols - 1}")
    ech = Echelon()
    for i, r in enumerate(m.rows):
        if r:
            ech.add(r, {i: ONE})
    return ech.express(target)
