"""Named constructions: C(K,q), Cayley-Dickson (both forms), Clifford, tripling.

Every construction is built through the generic twisted-product machinery
and then compared entrywise against the closed multiplication formula, which
acts as an independent oracle (``ConstructionResult.cross_check``).

Basis order is block order: for a doubling ``a + vb`` the unit block comes
first, then the v block; for the tripling the blocks are 1, v, z.  For the
Cayley-Dickson and tripling processes this is already the native order of
the twisted product; the underline Cayley-Dickson form and the Clifford
process are permuted into block order, and ``to_twisted`` records the
permutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .algebra import (
    Algebra,
    Involution,
    StrongInvolutionData,
    algebra_from_products,
    base_field_algebra,
    check_involution,
    check_involutive_automorphism,
    make_algebra,
    make_involution,
    strong_involution_data,
)
from .errors import (
    InvolutionNotVerified,
    NotAutomorphism,
    UnknownName,
    VerificationFailed,
    ZeroParameter,
)
from .linalg import LinearMap, add_into, compose, identity, permutation
from .properties import check_isomorphism
from .report import CheckReport
from .scalars import QQ, Field, parse_scalar, render_scalar
from .twisting import (
    MirrorMap,
    TwistedAlgebra,
    TwistingMap,
    alt_twisted_product,
    mirror_product,
)


@dataclass(frozen=True, eq=False)
class ConstructionResult:
    algebra: Algebra
    involution: Involution | None = None
    automorphism: LinearMap | None = None
    twisting: TwistingMap | MirrorMap | None = None
    twisted: TwistedAlgebra | None = None
    to_twisted: LinearMap | None = None  # block-order basis -> twisted-product basis
    embeddings: dict = field(default_factory=dict)
    cross_check: CheckReport | None = None

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def strong_data(self) -> StrongInvolutionData:
        if self.involution is None:
            raise InvolutionNotVerified(f"{self.algebra.name} carries no involution")
        return strong_involution_data(self.algebra, self.involution)


def _nonzero(q, field: Field, name: str = "q"):
    q = field(q) if not isinstance(q, str) else parse_scalar(q, field)
    if q == 0:
        raise ZeroParameter(f"{name} must be nonzero")
    return q


def fresh_symbol(base: str, labels: Sequence[str]) -> str:
    """``base`` unless it already occurs as a factor of some label."""
    used = {tok for lab in labels for tok in lab.split("·")}
    if base not in used:
        return base
    k = 2
    while f"{base}{k}" in used:
        k += 1
    return f"{base}{k}"


def prefixed(symbol: str, labels: Sequence[str]) -> list[str]:
    return [symbol if lab == "1" else f"{symbol}·{lab}" for lab in labels]


def suffixed(symbol: str, labels: Sequence[str]) -> list[str]:
    return [symbol if lab == "1" else f"{lab}·{symbol}" for lab in labels]


def c_algebra(q, field: Field = QQ, symbol: str = "v") -> Algebra:
    """C(K, q) = K[v]/(v^2 - q) with decomposition K.1 + K.v."""
    q = _nonzero(q, field)
    return make_algebra(
        field, 2, ["1", symbol],
        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: q}},
        name=f"C({render_scalar(q)})",
    )


def tripling_base(q, r, field: Field = QQ, symbols: tuple[str, str] = ("v", "z")) -> Algebra:
    """Basis {1, v, z} with v^2 = q, z^2 = r, vz = zv = 0."""
    q = _nonzero(q, field, "q")
    r = _nonzero(r, field, "r")
    v, z = symbols
    table = {(0, j): {j: 1} for j in range(3)}
    table.update({(i, 0): {i: 1} for i in range(3)})
    table[(1, 1)] = {0: q}
    table[(2, 2)] = {0: r}
    return make_algebra(field, 3, ["1", v, z], table, name=f"T({render_scalar(q)},{render_scalar(r)})")


def graded_twisting_map(A: Algebra, B: Algebra, sigma: LinearMap) -> LinearMap:
    """R(b (x) 1) = 1 (x) b and R(b (x) a) = a (x) sigma(b) for a in A0."""
    nA, nB = A.dim, B.dim
    cols = []
    for b in range(nB):
        for a in range(nA):
            if a == 0:
                cols.append({b: 1})
            else:
                cols.append({a * nB + k: c for k, c in sigma.column(b).items()})
    return LinearMap.from_columns(cols, nA * nB, A.field)


def _as_involution(B: Algebra, s) -> Involution:
    if isinstance(s, Involution):
        if s.verified:
            return s
        s = s.map
    report = check_involution(B, s)
    if not report.passed:
        raise InvolutionNotVerified(report.summary())
    return Involution(B, s, True)


def _block_sigma(blocks: Sequence[LinearMap], field: Field) -> LinearMap:
    """Block-diagonal map."""
    cols, offset = [], 0
    total = sum(m.domain_dim for m in blocks)
    for m in blocks:
        for j in range(m.domain_dim):
            cols.append({offset + i: c for i, c in m.column(j).items()})
        offset += m.domain_dim
    return LinearMap.from_columns(cols, total, field)


def _direct_algebra(name, field, labels, nblocks: int, n: int, formula) -> Algebra:
    """Algebra from a block formula ``formula(x_blocks, y_blocks) -> blocks``."""

    def product(i, j):
        xb = [dict() for _ in range(nblocks)]
        yb = [dict() for _ in range(nblocks)]
        xb[i // n][i % n] = field.one
        yb[j // n][j % n] = field.one
        out = {}
        for blk, vec in enumerate(formula(xb, yb)):
            for k, c in vec.items():
                if c:
                    out[blk * n + k] = c
        return out

    return algebra_from_products(name, field, labels, product)


def _lin(*terms) -> dict:
    """Sum of (coef, sparse vec) pairs."""
    out: dict = {}
    for c, v in terms:
        add_into(out, v, c)
    return out


def _cross(direct: Algebra, built: Algebra, what: str) -> CheckReport:
    diffs = direct.table_differences(built)
    if diffs:
        return CheckReport.fail("cross_check", diffs[0], f"{what}: displayed formula and twisted product differ")
    return CheckReport.ok("cross_check", f"{what}: displayed formula equals twisted product")


def _permute_algebra(alg: Algebra, to_native: Sequence[int], labels, name) -> Algebra:
    """Re-index: new basis index x corresponds to native index to_native[x]."""
    inv = {nat: x for x, nat in enumerate(to_native)}

    def product(x, y):
        return {inv[k]: c for k, c in alg.basis_product(to_native[x], to_native[y]).items()}

    return algebra_from_products(name, alg.field, labels, product)


def cayley_dickson(B: Algebra, s, q, symbol: str | None = None) -> ConstructionResult:
    """B-bar(q) = C(K,q) (x)_R B with R(b (x) v) = v (x) sigma(b).

    (a + vb)(c + vd) = (ac + q d sigma(b)) + v(sigma(a) d + cb)
    """
    field = B.field
    q = _nonzero(q, field)
    inv = _as_involution(B, s)
    sig = inv.map
    v = symbol or fresh_symbol("v", B.labels)
    C = c_algebra(q, field, v)
    R = graded_twisting_map(C, B, sig)
    labels = list(B.labels) + prefixed(v, B.labels)
    name = f"CD({B.name},{render_scalar(q)})"
    tw = alt_twisted_product(C, B, R, name=name, labels=labels)
    alg = tw.algebra
    n = B.dim
    mul, S = B.mul_sparse, sig.apply_sparse

    def formula(x, y):
        a, b = x
        c, d = y
        return [_lin((1, mul(a, c)), (q, mul(d, S(b)))), _lin((1, mul(S(a), d)), (1, mul(c, b)))]

    direct = _direct_algebra(name, field, labels, 2, n, formula)
    sbar = _block_sigma([sig, identity(n, field).scaled(-1)], field)
    rep = check_involution(alg, sbar)
    if not rep.passed:
        raise VerificationFailed(f"lifted involution: {rep.summary()}")
    return ConstructionResult(
        algebra=alg,
        involution=Involution(alg, sbar, True),
        twisting=tw.twisting,
        twisted=tw,
        to_twisted=identity(2 * n, field),
        embeddings={"B": _block_embedding(n, 0, 2, field), "C": tw.left_embedding},
        cross_check=_cross(direct, alg, "cayley_dickson"),
    )


def _block_embedding(n: int, block: int, nblocks: int, field: Field) -> LinearMap:
    return LinearMap.from_columns([{block * n + j: 1} for j in range(n)], nblocks * n, field)


def _unit_block_subalgebra_embedding(n: int, blocks: Sequence[int], nblocks: int, field: Field) -> LinearMap:
    """Embed blocks (1, X) of a doubling into chosen blocks of a bigger algebra."""
    cols = []
    for blk in blocks:
        for j in range(n):
            cols.append({blk * n + j: 1})
    return LinearMap.from_columns(cols, nblocks * n, field)


def mirror_cd_map(B: Algebra, C: Algebra, sigma: LinearMap) -> LinearMap:
    """P : C(K,q) (x) B -> B (x) C(K,q), P(1 (x) b) = b (x) 1, P(v (x) b) = sigma(b) (x) v."""
    nB = B.dim
    cols = []
    for d in range(2):
        for c in range(nB):
            if d == 0:
                cols.append({c * 2: 1})
            else:
                cols.append({k * 2 + 1: x for k, x in sigma.column(c).items()})
    return LinearMap.from_columns(cols, 2 * nB, B.field)


def cayley_dickson_underline(B: Algebra, s, q, symbol: str | None = None) -> ConstructionResult:
    """B-underline(q) = B (x)_P C(K,q) with P(v (x) b) = sigma(b) (x) v.

    (a + bv)(c + dv) = (ac + q sigma(d) b) + (b sigma(c) + da) v
    """
    field = B.field
    q = _nonzero(q, field)
    inv = _as_involution(B, s)
    sig = inv.map
    v = symbol or fresh_symbol("v", B.labels)
    C = c_algebra(q, field, v)
    P = mirror_cd_map(B, C, sig)
    n = B.dim
    name = f"CDu({B.name},{render_scalar(q)})"
    tw = mirror_product(B, C, P, name=name)
    labels = list(B.labels) + suffixed(v, B.labels)
    to_native = [c * 2 for c in range(n)] + [c * 2 + 1 for c in range(n)]
    alg = _permute_algebra(tw.algebra, to_native, labels, name)
    mul, S = B.mul_sparse, sig.apply_sparse

    def formula(x, y):
        a, b = x
        c, d = y
        return [_lin((1, mul(a, c)), (q, mul(S(d), b))), _lin((1, mul(b, S(c))), (1, mul(d, a)))]

    direct = _direct_algebra(name, field, labels, 2, n, formula)
    sbar = _block_sigma([sig, identity(n, field).scaled(-1)], field)
    rep = check_involution(alg, sbar)
    if not rep.passed:
        raise VerificationFailed(f"lifted involution: {rep.summary()}")
    return ConstructionResult(
        algebra=alg,
        involution=Involution(alg, sbar, True),
        twisting=tw.twisting,
        twisted=tw,
        to_twisted=permutation(to_native, field),
        embeddings={"B": _block_embedding(n, 0, 2, field)},
        cross_check=_cross(direct, alg, "cayley_dickson_underline"),
    )


def cd_iso(B: Algebra, s, q) -> tuple[LinearMap, CheckReport]:
    """a + bv -> a + v sigma(b), from B-underline(q) to B-bar(q), verified.

    Also compared with the map R of the overline construction read as
    B (x)_P C(K,q) -> C(K,q) (x)_R B, which must agree after the block
    re-ordering.
    """
    inv = _as_involution(B, s)
    under = cayley_dickson_underline(B, inv, q)
    over = cayley_dickson(B, inv, q)
    n, field = B.dim, B.field
    phi = _block_sigma([identity(n, field), inv.map], field)
    reports = [check_isomorphism(phi, under.algebra, over.algebra)]
    via_R = compose(over.twisting.R, under.to_twisted)
    if via_R == phi:
        reports.append(CheckReport.ok("izom", "phi(b (x) 1) = 1 (x) b, phi(b (x) v) = v (x) sigma(b)"))
    else:
        bad = next(j for j in range(2 * n) if via_R.column(j) != phi.column(j))
        reports.append(CheckReport.fail("izom", (bad,), "R read as a map of the underline form differs from (a, b) -> (a, sigma b)"))
    from .report import combine

    report = combine("cd_iso", reports)
    if not report.passed:
        raise VerificationFailed(report.summary())
    return phi, report


def clifford_step(A: Algebra, s: LinearMap, q, symbol: str | None = None) -> ConstructionResult:
    """Cl(A) = A (x)_R C(K,q) with R(v (x) a) = sigma(a) (x) v, sigma an involutive automorphism.

    (a + bv)(c + dv) = (ac + q b sigma(d)) + (ad + b sigma(c)) v
    """
    field = A.field
    q = _nonzero(q, field)
    if isinstance(s, Involution):
        s = s.map
    rep = check_involutive_automorphism(A, s)
    if not rep.passed:
        raise NotAutomorphism(rep.summary())
    v = symbol or fresh_symbol("v", A.labels)
    C = c_algebra(q, field, v)
    n = A.dim
    cols = []
    for d in range(2):
        for a in range(n):
            if d == 0:
                cols.append({a * 2: 1})
            else:
                cols.append({k * 2 + 1: c for k, c in s.column(a).items()})
    R = LinearMap.from_columns(cols, 2 * n, field)
    name = f"Cl({A.name},{render_scalar(q)})"
    tw = alt_twisted_product(A, C, R, name=name)
    labels = list(A.labels) + suffixed(v, A.labels)
    to_native = [a * 2 for a in range(n)] + [a * 2 + 1 for a in range(n)]
    alg = _permute_algebra(tw.algebra, to_native, labels, name)
    mul, S = A.mul_sparse, s.apply_sparse

    def formula(x, y):
        a, b = x
        c, d = y
        return [_lin((1, mul(a, c)), (q, mul(b, S(d)))), _lin((1, mul(a, d)), (1, mul(b, S(c))))]

    direct = _direct_algebra(name, field, labels, 2, n, formula)
    sbar = _block_sigma([s, s.scaled(-1)], field)
    rep = check_involutive_automorphism(alg, sbar)
    if not rep.passed:
        raise VerificationFailed(f"lifted automorphism: {rep.summary()}")
    return ConstructionResult(
        algebra=alg,
        automorphism=sbar,
        twisting=tw.twisting,
        twisted=tw,
        to_twisted=permutation(to_native, field),
        embeddings={"A": _block_embedding(n, 0, 2, field)},
        cross_check=_cross(direct, alg, "clifford_step"),
    )


def tripling(B: Algebra, s, q, r, symbols: tuple[str, str] | None = None) -> ConstructionResult:
    """B-bar(q, r) = T(q, r) (x)_R B, R(b (x) v) = v (x) sigma(b), R(b (x) z) = z (x) sigma(b).

    (a+vb+zc)(a'+vb'+zc') = (aa' + q b' sigma(b) + r c' sigma(c))
                            + v(sigma(a) b' + a' b) + z(sigma(a) c' + a' c)
    """
    field = B.field
    q = _nonzero(q, field, "q")
    r = _nonzero(r, field, "r")
    inv = _as_involution(B, s)
    strong_involution_data(B, inv)  # raises NotStrong
    sig = inv.map
    if symbols is None:
        v = fresh_symbol("v", B.labels)
        z = fresh_symbol("z", list(B.labels) + [v])
        symbols = (v, z)
    v, z = symbols
    T = tripling_base(q, r, field, symbols)
    R = graded_twisting_map(T, B, sig)
    n = B.dim
    labels = list(B.labels) + prefixed(v, B.labels) + prefixed(z, B.labels)
    name = f"Tri({B.name},{render_scalar(q)},{render_scalar(r)})"
    tw = alt_twisted_product(T, B, R, name=name, labels=labels)
    alg = tw.algebra
    mul, S = B.mul_sparse, sig.apply_sparse

    def formula(x, y):
        a, b, c = x
        a2, b2, c2 = y
        return [
            _lin((1, mul(a, a2)), (q, mul(b2, S(b))), (r, mul(c2, S(c)))),
            _lin((1, mul(S(a), b2)), (1, mul(a2, b))),
            _lin((1, mul(S(a), c2)), (1, mul(a2, c))),
        ]

    direct = _direct_algebra(name, field, labels, 3, n, formula)
    minus = identity(n, field).scaled(-1)
    sbar = _block_sigma([sig, minus, minus], field)
    rep = check_involution(alg, sbar)
    if not rep.passed:
        raise VerificationFailed(f"lifted involution: {rep.summary()}")
    return ConstructionResult(
        algebra=alg,
        involution=Involution(alg, sbar, True),
        twisting=tw.twisting,
        twisted=tw,
        to_twisted=identity(3 * n, field),
        embeddings={
            "B": _block_embedding(n, 0, 3, field),
            "base": tw.left_embedding,
            "Bq": _unit_block_subalgebra_embedding(n, (0, 1), 3, field),
            "Br": _unit_block_subalgebra_embedding(n, (0, 2), 3, field),
        },
        cross_check=_cross(direct, alg, "tripling"),
    )


def base_field(field: Field = QQ) -> ConstructionResult:
    K = base_field_algebra(field)
    one = identity(1, field)
    return ConstructionResult(algebra=K, involution=Involution(K, one, True), automorphism=one)


_TOWER = {"K": 0, "complex": 1, "quaternions": 2, "octonions": 3, "sedenions": 4}


def _parse_params(text: str, field: Field) -> list:
    return [parse_scalar(t, field) for t in text.split(",") if t.strip()]


@lru_cache(maxsize=64)
def catalog(name: str, field: Field = QQ) -> ConstructionResult:
    """Deterministic named constructions.

    K, complex, quaternions, octonions, sedenions (Cayley-Dickson with q=-1),
    split-complex (q=1), clifford:n:q1,...,qn and tripling:<base>:q,r.
    """
    if name in _TOWER:
        res = base_field(field)
        for _ in range(_TOWER[name]):
            res = cayley_dickson(res.algebra, res.involution, -1)
        return _named(res, name)
    if name == "split-complex":
        K = base_field(field)
        return _named(cayley_dickson(K.algebra, K.involution, 1), name)
    if name.startswith("clifford:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise UnknownName(name)
        try:
            count = int(parts[1])
        except ValueError:
            raise UnknownName(name) from None
        qs = _parse_params(parts[2], field)
        if len(qs) != count:
            raise UnknownName(f"{name}: expected {count} parameters")
        res = base_field(field)
        for q in qs:
            res = clifford_step(res.algebra, res.automorphism, q)
        return _named(res, name)
    if name.startswith("tripling:"):
        body = name[len("tripling:"):]
        base_name, _, params = body.rpartition(":")
        qs = _parse_params(params, field)
        if not base_name or len(qs) != 2:
            raise UnknownName(name)
        base = catalog(base_name, field)
        return _named(tripling(base.algebra, base.involution, *qs), name)
    raise UnknownName(name)


def _named(res: ConstructionResult, name: str) -> ConstructionResult:
    alg = res.algebra.renamed(name)
    inv = Involution(alg, res.involution.map, True) if res.involution is not None else None
    return ConstructionResult(
        algebra=alg,
        involution=inv,
        automorphism=res.automorphism,
        twisting=res.twisting,
        twisted=res.twisted,
        to_twisted=res.to_twisted,
        embeddings=res.embeddings,
        cross_check=res.cross_check,
    )


CATALOG_NAMES = ("K", "complex", "quaternions", "octonions", "sedenions", "split-complex")
