"""Unital algebras given by structure constants, their elements and involutions.

Every algebra carries the decomposition ``K*e0 (+) A0`` where ``e0`` is the
unit (always basis index 0) and ``A0`` is spanned by the remaining basis
vectors.  Other decompositions are reached with :func:`change_basis`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import (
    AlgebraMismatch,
    DimensionMismatch,
    InvolutionNotVerified,
    NotStrong,
    UnitConventionViolated,
)
from .linalg import (
    LinearMap,
    add_into,
    compose,
    dense_to_sparse,
    identity,
    invert,
    sparse_sub,
    sparse_to_dense,
)
from .report import CheckReport
from .scalars import QQ, Field, make_field


class Algebra:
    """A finite-dimensional unital algebra over an exact field.

    ``table[i][j]`` is a sparse dict ``{k: c}`` with ``e_i e_j = sum c e_k``.
    Instances are immutable; do not mutate the dicts returned by
    :meth:`basis_product`.
    """

    def __init__(self, name: str, field: Field, labels: Sequence[str], table):
        self.name = name
        self.field = field
        self.dim = len(labels)
        self.labels = tuple(labels)
        self._table = table

    @property
    def spec(self):
        return self.field.spec

    def basis_product(self, i: int, j: int) -> dict:
        return self._table[i][j]

    @property
    def table(self) -> tuple:
        """Dense structure constants c[i][j][k]."""
        n, z = self.dim, self.field.zero
        return tuple(
            tuple(sparse_to_dense(self._table[i][j], n, z) for j in range(n)) for i in range(n)
        )

    def sparse_table(self) -> tuple:
        return tuple(tuple(row) for row in self._table)

    def mul_sparse(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        t = self._table
        for i, a in x.items():
            row = t[i]
            for j, b in y.items():
                prod = row[j]
                if prod:
                    add_into(out, prod, a * b)
        return out

    def element(self, coords) -> "Element":
        if isinstance(coords, Mapping):
            coords = sparse_to_dense(coords, self.dim, self.field.zero)
        if len(coords) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates, got {len(coords)}")
        return Element(self, tuple(self.field(c) for c in coords))

    def basis(self, i: int) -> "Element":
        return self.element({i: 1})

    def basis_elements(self) -> list["Element"]:
        return [self.basis(i) for i in range(self.dim)]

    @property
    def unit(self) -> "Element":
        return self.basis(0)

    @property
    def zero(self) -> "Element":
        return self.element({})

    def scalar(self, c) -> "Element":
        return self.element({0: c})

    def same_table(self, other: "Algebra") -> bool:
        return (
            self.field == other.field
            and self.dim == other.dim
            and all(
                self._table[i][j] == other._table[i][j]
                for i in range(self.dim)
                for j in range(self.dim)
            )
        )

    def table_differences(self, other: "Algebra") -> list[tuple[int, int]]:
        if self.dim != other.dim:
            raise DimensionMismatch("algebras of different dimension")
        return [
            (i, j)
            for i in range(self.dim)
            for j in range(self.dim)
            if self._table[i][j] != other._table[i][j]
        ]

    def renamed(self, name: str, labels: Sequence[str] | None = None) -> "Algebra":
        return Algebra(name, self.field, labels or self.labels, self._table)

    def __repr__(self):
        return f"Algebra({self.name!r}, dim={self.dim}, field={self.spec})"


def _check_unit(n: int, table) -> None:
    for j in range(n):
        if table[0][j] != {j: 1}:
            raise UnitConventionViolated(0, j)
    for i in range(n):
        if table[i][0] != {i: 1}:
            raise UnitConventionViolated(i, 0)


def make_algebra(field: Field | None, dim: int, labels: Sequence[str] | None, table, name: str = "") -> Algebra:
    """Build an algebra from dense ``c[i][j][k]`` or sparse ``{(i, j): {k: c}}`` data."""
    field = field or QQ
    if dim < 1:
        raise DimensionMismatch("dimension must be positive")
    labels = list(labels) if labels is not None else ["1"] + [f"e{i}" for i in range(1, dim)]
    if len(labels) != dim:
        raise DimensionMismatch("one label per basis vector required")
    rows = [[{} for _ in range(dim)] for _ in range(dim)]
    if isinstance(table, Mapping):
        for (i, j), prod in table.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatch(f"index pair {(i, j)} out of range")
            items = prod.items() if isinstance(prod, Mapping) else prod
            for k, c in items:
                if not 0 <= k < dim:
                    raise DimensionMismatch(f"output index {k} out of range")
                add_into(rows[i][j], {k: field(c)})
    else:
        if len(table) != dim or any(len(r) != dim for r in table):
            raise DimensionMismatch("table must be dim x dim x dim")
        for i in range(dim):
            for j in range(dim):
                cell = table[i][j]
                if len(cell) != dim:
                    raise DimensionMismatch("table must be dim x dim x dim")
                rows[i][j] = {k: field(c) for k, c in enumerate(cell) if field(c)}
    _check_unit(dim, rows)
    return Algebra(name, field, labels, tuple(tuple(r) for r in rows))


def algebra_from_products(name, field, labels, product) -> Algebra:
    """Build from a function ``product(i, j) -> sparse dict`` over basis indices."""
    n = len(labels)
    rows = tuple(tuple(dict(product(i, j)) for j in range(n)) for i in range(n))
    _check_unit(n, rows)
    return Algebra(name, field, labels, rows)


def base_field_algebra(field: Field | None = None) -> Algebra:
    """The ground field K as a one-dimensional algebra."""
    return make_algebra(field or QQ, 1, ["1"], {(0, 0): {0: 1}}, name="K")


@dataclass(frozen=True, eq=False)
class Element:
    algebra: Algebra
    coords: tuple

    def sparse(self) -> dict:
        return dense_to_sparse(self.coords)

    def _same(self, other: "Element"):
        if not isinstance(other, Element):
            return False
        if other.algebra is not self.algebra and not other.algebra.same_table(self.algebra):
            raise AlgebraMismatch("elements of different algebras")
        return True

    def __add__(self, other):
        if not self._same(other):
            return NotImplemented
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        if not self._same(other):
            return NotImplemented
        return Element(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Element(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        c = self.algebra.field(other)
        return Element(self.algebra, tuple(c * a for a in self.coords))

    def __rmul__(self, other):
        c = self.algebra.field(other)
        return Element(self.algebra, tuple(c * a for a in self.coords))

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra.dim == other.algebra.dim and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_scalar(self) -> bool:
        return not any(self.coords[1:])

    def __str__(self):
        return format_combination(self.sparse(), self.algebra.labels)

    def __repr__(self):
        return f"Element({self.algebra.name!r}, {self})"


def multiply(x: Element, y: Element) -> Element:
    if x.algebra is not y.algebra and not x.algebra.same_table(y.algebra):
        raise AlgebraMismatch("cannot multiply elements of different algebras")
    A = x.algebra
    prod = A.mul_sparse(x.sparse(), y.sparse())
    return Element(A, sparse_to_dense(prod, A.dim, A.field.zero))


def format_combination(vec: Mapping, labels: Sequence[str]) -> str:
    """Render ``{k: c}`` as e.g. ``-1 + 2*v - 1/2*z``."""
    from .scalars import render_scalar

    if not vec:
        return "0"
    parts = []
    for k in sorted(vec):
        c = vec[k]
        s = render_scalar(c)
        neg = s.startswith("-")
        mag = s[1:] if neg else s
        if k == 0 and labels[0] == "1":
            term = mag
        elif mag == "1":
            term = labels[k]
        else:
            term = f"{mag}*{labels[k]}"
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append(("- " if neg else "+ ") + term)
    return " ".join(parts)


def apply_map(m: LinearMap, x: Element, target: Algebra | None = None) -> Element:
    target = target or x.algebra
    return target.element(m.apply(x.coords))


def _square_check(A: Algebra, m: LinearMap) -> None:
    if m.shape != (A.dim, A.dim):
        raise DimensionMismatch(f"map of shape {m.shape} on algebra of dim {A.dim}")


def check_involution(A: Algebra, m: LinearMap) -> CheckReport:
    """sigma^2 = id, sigma(e0) = e0 and sigma(e_i e_j) = sigma(e_j) sigma(e_i)."""
    _square_check(A, m)
    if m.column(0) != {0: 1}:
        return CheckReport.fail("involution", (0,), "sigma(e0) != e0")
    for j in range(A.dim):
        if m.apply_sparse(m.column(j)) != {j: 1}:
            return CheckReport.fail("involution", (j,), "sigma^2 != id")
    for i in range(A.dim):
        si = m.column(i)
        for j in range(A.dim):
            lhs = m.apply_sparse(A.basis_product(i, j))
            rhs = A.mul_sparse(m.column(j), si)
            if lhs != rhs:
                return CheckReport.fail("involution", (i, j), "sigma(e_i e_j) != sigma(e_j) sigma(e_i)")
    return CheckReport.ok("involution")


def check_involutive_automorphism(A: Algebra, m: LinearMap) -> CheckReport:
    """sigma^2 = id, sigma(e0) = e0 and sigma(e_i e_j) = sigma(e_i) sigma(e_j)."""
    _square_check(A, m)
    if m.column(0) != {0: 1}:
        return CheckReport.fail("automorphism", (0,), "sigma(e0) != e0")
    for j in range(A.dim):
        if m.apply_sparse(m.column(j)) != {j: 1}:
            return CheckReport.fail("automorphism", (j,), "sigma^2 != id")
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = m.apply_sparse(A.basis_product(i, j))
            rhs = A.mul_sparse(m.column(i), m.column(j))
            if lhs != rhs:
                return CheckReport.fail("automorphism", (i, j), "sigma(e_i e_j) != sigma(e_i) sigma(e_j)")
    return CheckReport.ok("automorphism")


@dataclass(frozen=True, eq=False)
class Involution:
    algebra: Algebra
    map: LinearMap
    verified: bool = False

    def __call__(self, x: Element) -> Element:
        return apply_map(self.map, x)

    def apply_sparse(self, vec: Mapping) -> dict:
        return self.map.apply_sparse(vec)


def make_involution(A: Algebra, m: LinearMap) -> Involution:
    """Verify ``m`` and wrap it; raises InvolutionNotVerified on failure."""
    report = check_involution(A, m)
    if not report.passed:
        raise InvolutionNotVerified(report.summary())
    return Involution(A, m, True)


def identity_involution(A: Algebra) -> Involution:
    return make_involution(A, identity(A.dim, A.field))


@dataclass(frozen=True, eq=False)
class StrongInvolutionData:
    involution: Involution
    trace_vector: tuple
    gram: tuple  # symmetric matrix of (x, y) = 1/2 (n(x+y) - n(x) - n(y))

    def trace(self, x: Element | Sequence) -> object:
        coords = x.coords if isinstance(x, Element) else x
        return sum((t * c for t, c in zip(self.trace_vector, coords)), self.involution.algebra.field.zero)

    def bilinear(self, x, y) -> object:
        xs = x.coords if isinstance(x, Element) else x
        ys = y.coords if isinstance(y, Element) else y
        total = self.involution.algebra.field.zero
        for i, a in enumerate(xs):
            if not a:
                continue
            row = self.gram[i]
            for j, b in enumerate(ys):
                if b and row[j]:
                    total += a * b * row[j]
        return total

    def norm(self, x) -> object:
        return self.bilinear(x, x)


def strong_involution_data(A: Algebra, s: Involution) -> StrongInvolutionData:
    """Trace and norm of a strong involution; raises NotStrong otherwise."""
    if not s.verified:
        report = check_involution(A, s.map)
        if not report.passed:
            raise InvolutionNotVerified(report.summary())
    m = s.map
    n = A.dim
    two = A.field(2)
    trace = []
    for i in range(n):
        tot = dict(m.column(i))
        add_into(tot, {i: 1})
        if any(k != 0 for k in tot):
            raise NotStrong((i,), f"e{i} + sigma(e{i}) is not a scalar")
        trace.append(tot.get(0, A.field.zero))
    gram = [[A.field.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            left = A.mul_sparse({i: 1}, m.column(j))
            add_into(left, A.mul_sparse({j: 1}, m.column(i)))
            right = A.mul_sparse(m.column(i), {j: 1})
            add_into(right, A.mul_sparse(m.column(j), {i: 1}))
            if any(k != 0 for k in left):
                w = (i,) if i == j else (i, j)
                raise NotStrong(w, f"x sigma(x) is not a scalar at {w}")
            if left != right:
                w = (i,) if i == j else (i, j)
                raise NotStrong(w, f"x sigma(x) != sigma(x) x at {w}")
            g = left.get(0, A.field.zero) / two
            gram[i][j] = gram[j][i] = g
    return StrongInvolutionData(s, tuple(trace), tuple(tuple(r) for r in gram))


def change_basis(A: Algebra, P: LinearMap, labels: Sequence[str] | None = None) -> Algebra:
    """Re-express A in the basis given by the columns of P.

    Column 0 must be e0, so the unit stays at index 0 and the new A0 is the
    span of the remaining columns.
    """
    _square_check(A, P)
    if P.column(0) != {0: 1}:
        raise UnitConventionViolated(0, 0, "first new basis vector must be the unit")
    Pinv = invert(P)

    def product(i, j):
        return Pinv.apply_sparse(A.mul_sparse(P.column(i), P.column(j)))

    labels = labels or [A.labels[0]] + [f"f{i}" for i in range(1, A.dim)]
    return algebra_from_products(A.name, A.field, labels, product)


def transport_map(m: LinearMap, P: LinearMap) -> LinearMap:
    """Conjugate an endomorphism into the basis of P's columns: P^-1 m P."""
    return compose(invert(P), compose(m, P))


def sparse_equal(x: Mapping, y: Mapping) -> bool:
    return not sparse_sub(x, y)


__all__ = [
    "Algebra",
    "Element",
    "Involution",
    "StrongInvolutionData",
    "algebra_from_products",
    "base_field_algebra",
    "change_basis",
    "check_involution",
    "check_involutive_automorphism",
    "format_combination",
    "identity_involution",
    "make_algebra",
    "make_field",
    "make_involution",
    "multiply",
    "strong_involution_data",
    "transport_map",
]
