"""Exact linear algebra over Q(k).

Elimination clears denominators row by row and runs a fraction-free
Gauss-Jordan sweep over Q[k], dividing every updated row by its content.
The pivot in each column is the entry of least degree, then least
coefficient height, then lowest row index. The sweep runs separately on
each connected block of the sparsity pattern; the final reduced row
echelon form over Q(k) is unique, so every basis returned here is
canonical.

Every symbolic rank is appended to the active :func:`rank_log` (if any),
which is how the specialization oracle finds the matrices it replays.
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .exactfield import ONE, ZERO, Poly, RatFunc, poly_gcd, rf, specialize

Vector = tuple  # tuple of RatFunc

__all__ = [
    "Matrix",
    "Vector",
    "RankRecord",
    "rank_log",
    "rref",
    "rank",
    "nullspace",
    "column_space",
    "solve",
    "is_injective",
    "is_surjective",
    "specialize_matrix",
    "numeric_rank",
    "charpoly",
    "vec_zero",
    "vec_add",
    "vec_scale",
    "vec_dot",
    "vec_is_zero",
]


class Matrix:
    """Dense matrix with :class:`RatFunc` entries (immutable by convention)."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        self.rows = tuple(tuple(rf(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> "Matrix":
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls._raw(tuple((ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        if not cols:
            return cls.zeros(nrows, 0)
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, entries: dict) -> "Matrix":
        data = [[ZERO] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            data[i][j] = rf(v)
        return cls._raw(tuple(tuple(r) for r in data), ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix._raw(
            tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols)), self.nrows
        )

    T = property(transpose)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.ncols
        out = []
        ocols = [other.column(j) for j in range(cols)]
        for r in self.rows:
            nz = [(k, x) for k, x in enumerate(r) if not x.is_zero()]
            row = []
            for c in ocols:
                acc = ZERO
                for k, x in nz:
                    y = c[k]
                    if not y.is_zero():
                        acc = acc + x * y
                row.append(acc)
            out.append(tuple(row))
        return Matrix._raw(tuple(out), cols)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        nz = [(k, x) for k, x in enumerate(v) if not rf(x).is_zero()]
        out = []
        for r in self.rows:
            acc = ZERO
            for k, x in nz:
                y = r[k]
                if not y.is_zero():
                    acc = acc + y * x
            out.append(acc)
        return tuple(out)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = rf(c)
        return Matrix._raw(tuple(tuple(x * c for x in r) for r in self.rows), self.ncols)

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row mismatch")
        return Matrix._raw(
            tuple(a + b for a, b in zip(self.rows, other.rows)), self.ncols + other.ncols
        )

    def power(self, e: int) -> "Matrix":
        out = Matrix.identity(self.nrows)
        for _ in range(e):
            out = out @ self
        return out

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]


# -- vectors --------------------------------------------------------------

def vec_zero(n: int) -> Vector:
    return (ZERO,) * n


def vec_add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(a: Sequence, c) -> Vector:
    c = rf(c)
    return tuple(x * c for x in a)


def vec_dot(a: Sequence, b: Sequence) -> RatFunc:
    acc = ZERO
    for x, y in zip(a, b):
        if not x.is_zero() and not y.is_zero():
            acc = acc + x * y
    return acc


def vec_is_zero(a: Sequence) -> bool:
    return all(x.is_zero() for x in a)


# -- rank recording ---------------------------------------------------------

@dataclass(frozen=True)
class RankRecord:
    matrix: Matrix
    rank: int


_RANK_LOG: contextvars.ContextVar = contextvars.ContextVar("bgglab_rank_log", default=None)


@contextlib.contextmanager
def rank_log() -> Iterator[list]:
    """Collect a :class:`RankRecord` for every symbolic rank computed inside."""
    log: list = []
    token = _RANK_LOG.set(log)
    try:
        yield log
    finally:
        _RANK_LOG.reset(token)


def _record(m: Matrix, r: int) -> None:
    log = _RANK_LOG.get()
    if log is not None:
        log.append(RankRecord(m, r))


# -- elimination ------------------------------------------------------------

def _poly_lcm(a: Poly, b: Poly) -> Poly:
    g = poly_gcd(a, b)
    return (a * b).divmod(g)[0].monic()


def _int_content_scale(row: list) -> list:
    """Scale a row of polynomials so coefficients are coprime integers."""
    from math import gcd

    den = 1
    for p in row:
        for c in p.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
    scaled = [p.scale(den) for p in row] if den != 1 else row
    g2 = 0
    for p in scaled:
        for c in p.coeffs:
            g2 = gcd(g2, int(c))
    if g2 > 1:
        scaled = [p.scale(Fraction(1, g2)) for p in scaled]
    return scaled


def _primitive(row: list) -> list:
    g = None
    for p in row:
        if p.is_zero():
            continue
        g = p.monic() if g is None else poly_gcd(g, p)
        if g.degree == 0:
            break
    if g is not None and g.degree > 0:
        row = [p.divmod(g)[0] if not p.is_zero() else p for p in row]
    return _int_content_scale(row)


def _height(p: Poly) -> int:
    return max(abs(c.numerator) for c in p.coeffs)


def _components(m: Matrix) -> list[tuple[list[int], list[int]]]:
    parent = list(range(m.nrows + m.ncols))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, r in enumerate(m.rows):
        for j, x in enumerate(r):
            if not x.is_zero():
                a, b = find(i), find(m.nrows + j)
                if a != b:
                    parent[a] = b
    groups: dict[int, tuple[list, list]] = {}
    for i in range(m.nrows):
        groups.setdefault(find(i), ([], []))[0].append(i)
    for j in range(m.ncols):
        groups.setdefault(find(m.nrows + j), ([], []))[1].append(j)
    return [g for g in groups.values() if g[0] and g[1]]


def _rref_block(m: Matrix) -> list[tuple[int, tuple]]:
    """Reduced rows of a block as (pivot column, RatFunc row)."""
    prows = []
    for r in m.rows:
        L = Poly.const(1)
        for x in r:
            if not x.is_zero() and x.den.degree > 0:
                L = _poly_lcm(L, x.den)
        prow = [x.num * L.divmod(x.den)[0] if not x.is_zero() else x.num for x in r]
        if any(not p.is_zero() for p in prow):
            prows.append(_primitive(prow))
    used = [False] * len(prows)
    pivots: list[tuple[int, int]] = []  # (col, row index)
    for col in range(m.ncols):
        best = None
        for ri, r in enumerate(prows):
            if used[ri] or r[col].is_zero():
                continue
            key = (r[col].degree, _height(r[col]), ri)
            if best is None or key < best:
                best = key
        if best is None:
            continue
        pi = best[2]
        used[pi] = True
        pivots.append((col, pi))
        prow = prows[pi]
        pv = prow[col]
        for ri, r in enumerate(prows):
            if ri == pi or r[col].is_zero():
                continue
            c = r[col]
            new = [pv * x - c * y for x, y in zip(r, prow)]
            prows[ri] = _primitive(new)
    out = []
    for col, pi in pivots:
        r = prows[pi]
        pv = r[col]
        out.append((col, tuple(RatFunc(x, pv) if not x.is_zero() else ZERO for x in r)))
    return out


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    rows: list[tuple[int, tuple]] = []
    for ri, ci in _components(m):
        sub = m.submatrix(ri, ci)
        for pc, r in _rref_block(sub):
            full = [ZERO] * m.ncols
            for j, x in zip(ci, r):
                full[j] = x
            rows.append((ci[pc], tuple(full)))
    rows.sort(key=lambda t: t[0])
    pivots = tuple(c for c, _ in rows)
    _record(m, len(pivots))
    return Matrix._raw(tuple(r for _, r in rows), m.ncols), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix) -> list[Vector]:
    """Canonical kernel basis, one vector per free column in increasing order.

    Each basis vector has a 1 in its free column and zeros in the other
    free columns.
    """
    R, piv = rref(m)
    pivset = set(piv)
    basis = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [ZERO] * m.ncols
        v[f] = ONE
        for r, pc in zip(R.rows, piv):
            x = r[f]
            if not x.is_zero():
                v[pc] = -x
        basis.append(tuple(v))
    return basis


def column_space(m: Matrix) -> list[Vector]:
    """Canonical basis of the column space (reduced rows of the transpose)."""
    R, _ = rref(m.transpose())
    return list(R.rows)


def span_basis(vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    """Canonical basis of the span of ``vectors`` in a space of dimension ``dim``."""
    if not vectors:
        return []
    return column_space(Matrix.from_columns(list(vectors), dim))


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """A particular solution X of ``a @ X = b`` (free variables set to 0), or None."""
    aug = a.hstack(b)
    R, piv = rref(aug)
    if any(p >= a.ncols for p in piv):
        return None
    x = [[ZERO] * b.ncols for _ in range(a.ncols)]
    for r, pc in zip(R.rows, piv):
        for j in range(b.ncols):
            x[pc][j] = r[a.ncols + j]
    return Matrix._raw(tuple(tuple(r) for r in x), b.ncols)


def is_injective(m: Matrix) -> bool:
    return rank(m) == m.ncols


def is_surjective(m: Matrix) -> bool:
    return rank(m) == m.nrows


# -- specialization -----------------------------------------------------------

def specialize_matrix(m: Matrix, q) -> list[list[Fraction]]:
    return [[specialize(x, q) for x in r] for r in m.rows]


def numeric_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by plain Gaussian elimination (independent of :func:`rref`)."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        for i in range(r + 1, len(a)):
            if a[i][c] != 0:
                f = a[i][c] / pv
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


# -- characteristic polynomial ----------------------------------------------------

def charpoly(m: Matrix) -> list[RatFunc]:
    """Coefficients ``[c_0, ..., c_n]`` (``c_n = 1``) of det(x I - m).

    Faddeev-LeVerrier recursion; exact over Q(k).
    """
    n = m.nrows
    if n != m.ncols:
        raise ValueError("charpoly needs a square matrix")
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    ident = Matrix.identity(n)
    mk = Matrix.zeros(n, n)
    for kk in range(1, n + 1):
        mk = m @ mk + ident.scale(coeffs[n - kk + 1])
        am = m @ mk
        tr = ZERO
        for i in range(n):
            tr = tr + am.rows[i][i]
        coeffs[n - kk] = tr * Fraction(-1, kk)
    return coeffs


def poly_divide_linear(coeffs: Sequence[RatFunc], root: RatFunc) -> tuple[list[RatFunc], RatFunc]:
    """Synthetic division of sum c_i x^i by (x - root); returns quotient and remainder."""
    n = len(coeffs) - 1
    q = [ZERO] * n
    acc = ZERO
    for i in range(n, 0, -1):
        acc = acc * root + coeffs[i]
        q[i - 1] = acc
    rem = acc * root + coeffs[0]
    return q, rem
