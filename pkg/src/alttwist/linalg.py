"""Exact linear maps between (tensor products of) finite-dimensional spaces.

Tensor index convention, used everywhere in the package: the basis vector
``e_i (x) f_j`` of ``V (x) W`` sits at index ``i * dim(W) + j`` (left factor
major).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, Singular
from .scalars import QQ, Field, FieldKind, Residue, render_scalar

SparseVec = dict  # index -> nonzero scalar


def add_into(acc: dict, vec: Mapping, coef=1) -> None:
    """acc += coef * vec, dropping cancelled entries."""
    for k, c in vec.items():
        v = acc.get(k, 0) + coef * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def sparse_sub(x: Mapping, y: Mapping) -> dict:
    out = dict(x)
    add_into(out, y, -1)
    return out


def dense_to_sparse(coords: Sequence) -> dict:
    return {k: c for k, c in enumerate(coords) if c}


def sparse_to_dense(vec: Mapping, n: int, zero) -> tuple:
    out = [zero] * n
    for k, c in vec.items():
        out[k] = c
    return tuple(out)


class LinearMap:
    """A matrix with exact entries; column j is the image of basis vector j."""

    __slots__ = ("field", "domain_dim", "codomain_dim", "_cols", "_rows")

    def __init__(self, entries: Sequence[Sequence], field: Field = QQ):
        rows = [tuple(field(x) for x in row) for row in entries]
        if not rows or not rows[0]:
            raise DimensionMismatch("linear map needs positive dimensions")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged matrix")
        self.field = field
        self.codomain_dim = len(rows)
        self.domain_dim = width
        self._rows = tuple(rows)
        self._cols = tuple(
            {i: rows[i][j] for i in range(len(rows)) if rows[i][j]} for j in range(width)
        )

    @classmethod
    def from_columns(cls, cols: Sequence[Mapping], codomain_dim: int, field: Field = QQ) -> "LinearMap":
        self = cls.__new__(cls)
        self.field = field
        self.domain_dim = len(cols)
        self.codomain_dim = codomain_dim
        if self.domain_dim == 0 or codomain_dim == 0:
            raise DimensionMismatch("linear map needs positive dimensions")
        clean = []
        for col in cols:
            c = {}
            for i, v in col.items():
                if not 0 <= i < codomain_dim:
                    raise DimensionMismatch(f"row index {i} out of range")
                v = field(v)
                if v:
                    c[i] = v
            clean.append(c)
        self._cols = tuple(clean)
        self._rows = None
        return self

    @classmethod
    def from_function(cls, fn, domain_dim: int, codomain_dim: int, field: Field = QQ) -> "LinearMap":
        """Build from ``fn(j) -> sparse image of basis vector j``."""
        return cls.from_columns([fn(j) for j in range(domain_dim)], codomain_dim, field)

    @property
    def entries(self) -> tuple:
        if self._rows is None:
            z = self.field.zero
            rows = [[z] * self.domain_dim for _ in range(self.codomain_dim)]
            for j, col in enumerate(self._cols):
                for i, v in col.items():
                    rows[i][j] = v
            self._rows = tuple(tuple(r) for r in rows)
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return (self.codomain_dim, self.domain_dim)

    def column(self, j: int) -> dict:
        return self._cols[j]

    def columns(self) -> tuple:
        return self._cols

    def apply_sparse(self, vec: Mapping) -> dict:
        out: dict = {}
        for j, c in vec.items():
            add_into(out, self._cols[j], c)
        return out

    def apply(self, coords: Sequence) -> tuple:
        if len(coords) != self.domain_dim:
            raise DimensionMismatch("vector length does not match domain")
        out = self.apply_sparse(dense_to_sparse(coords))
        return sparse_to_dense(out, self.codomain_dim, self.field.zero)

    def __call__(self, coords):
        return self.apply(coords)

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(c.items())) for c in self._cols)))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return compose(self, other)

    def __neg__(self):
        return self.scaled(-1)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if self.shape != other.shape:
            raise DimensionMismatch("cannot add maps of different shapes")
        cols = []
        for a, b in zip(self._cols, other._cols):
            c = dict(a)
            add_into(c, b)
            cols.append(c)
        return LinearMap.from_columns(cols, self.codomain_dim, self.field)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + (-other)

    def scaled(self, s) -> "LinearMap":
        s = self.field(s)
        cols = [{i: s * v for i, v in c.items()} for c in self._cols]
        return LinearMap.from_columns(cols, self.codomain_dim, self.field)

    def is_identity(self) -> bool:
        return self.domain_dim == self.codomain_dim and all(
            c == {j: 1} for j, c in enumerate(self._cols)
        )

    def to_json(self) -> list:
        return [[render_scalar(x) for x in row] for row in self.entries]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[str]], field: Field = QQ) -> "LinearMap":
        return cls([[field(str(x)) for x in row] for row in rows], field)

    def __repr__(self):
        return f"LinearMap({self.codomain_dim}x{self.domain_dim})"


def identity(n: int, field: Field = QQ) -> LinearMap:
    return LinearMap.from_columns([{j: 1} for j in range(n)], n, field)


def flip(dim_v: int, dim_w: int, field: Field = QQ) -> LinearMap:
    """The flip V (x) W -> W (x) V, v (x) w |-> w (x) v."""
    cols = []
    for i in range(dim_v):
        for j in range(dim_w):
            cols.append({j * dim_v + i: 1})
    return LinearMap.from_columns(cols, dim_v * dim_w, field)


def permutation(perm: Sequence[int], field: Field = QQ) -> LinearMap:
    """Map sending basis vector j to basis vector perm[j]."""
    if sorted(perm) != list(range(len(perm))):
        raise ValueError("not a permutation")
    return LinearMap.from_columns([{p: 1} for p in perm], len(perm), field)


def compose(m1: LinearMap, m2: LinearMap) -> LinearMap:
    """m1 o m2."""
    if m1.domain_dim != m2.codomain_dim:
        raise DimensionMismatch(f"cannot compose {m1.shape} with {m2.shape}")
    cols = [m1.apply_sparse(c) for c in m2.columns()]
    return LinearMap.from_columns(cols, m1.codomain_dim, m1.field)


def tensor(m1: LinearMap, m2: LinearMap) -> LinearMap:
    """Kronecker product, left factor major on both sides."""
    n2_dom, n2_cod = m2.domain_dim, m2.codomain_dim
    cols = []
    for j1 in range(m1.domain_dim):
        c1 = m1.column(j1)
        for j2 in range(n2_dom):
            c2 = m2.column(j2)
            cols.append({i1 * n2_cod + i2: a * b for i1, a in c1.items() for i2, b in c2.items()})
    return LinearMap.from_columns(cols, m1.codomain_dim * n2_cod, m1.field)


def _integer_rows(rows: Iterable[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        d = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * d) for x in row])
    return out


def _bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, len(m)):
            row = m[r]
            f = row[col]
            top = m[rank]
            for c in range(col + 1, ncols):
                row[c] = (p * row[c] - f * top[c]) // prev
            row[col] = 0
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


def _field_rank(rows: list[list], field: Field) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = field.invert(m[rank][col])
        for r in range(rank + 1, len(m)):
            f = m[r][col]
            if f:
                f = f * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def matrix_rank(rows: Sequence[Sequence], field: Field = QQ) -> int:
    """Exact rank; fraction-free elimination over QQ, plain elimination mod p."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    if field.spec.kind is FieldKind.RATIONALS:
        return _bareiss_rank(_integer_rows(rows))
    return _field_rank(rows, field)


def rank(m: LinearMap) -> int:
    return matrix_rank(m.entries, m.field)


def span_rank(vectors: Sequence[Mapping], dim: int, field: Field = QQ) -> int:
    """Rank of a family of sparse vectors of length ``dim``."""
    rows = [sparse_to_dense(v, dim, field.zero) for v in vectors]
    return matrix_rank(rows, field) if rows else 0


def invert(m: LinearMap) -> LinearMap:
    """Exact inverse by Gauss-Jordan elimination; raises Singular."""
    n = m.domain_dim
    if m.codomain_dim != n:
        raise Singular(f"non-square map {m.shape} is not bijective")
    field = m.field
    one, zero = field.one, field.zero
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m.entries)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise Singular("map is not bijective")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = field.invert(aug[col][col])
        aug[col] = [x * inv for x in aug[col]]
        top = aug[col]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], top)]
    return LinearMap([row[n:] for row in aug], field)


def is_invertible(m: LinearMap) -> bool:
    return m.domain_dim == m.codomain_dim and rank(m) == m.domain_dim
