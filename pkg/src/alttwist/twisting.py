"""Alternative twisting maps and the two twisted products built from them.

Index conventions (left factor major, as everywhere):

* ``R : B (x) A -> A (x) B`` has domain index ``b * dim(A) + a`` and codomain
  index ``a * dim(B) + b``.
* ``P : D (x) C -> C (x) D`` likewise: domain ``d * dim(C) + c``, codomain
  ``c * dim(D) + d``.

The Sweedler notation ``R(b (x) a) = a_R (x) b_R`` becomes a list of
``(a_R, b_R, coef)`` basis-index triples, see :func:`_split`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Algebra, Involution, algebra_from_products, check_involution
from .errors import AxiomsFailed, DimensionMismatch, HypothesisFailed
from .linalg import LinearMap, add_into, compose, flip, span_rank, tensor
from .report import CheckReport, combine


def _split(m: LinearMap, dom_right: int, cod_right: int) -> list[list[list[tuple]]]:
    """table[x][y] = [(u, w, c), ...] with m(x (x) y) = sum c * u (x) w."""
    dom_left = m.domain_dim // dom_right
    out = []
    for x in range(dom_left):
        row = []
        for y in range(dom_right):
            col = m.column(x * dom_right + y)
            row.append([(idx // cod_right, idx % cod_right, c) for idx, c in sorted(col.items())])
        out.append(row)
    return out


def _check_shape(m: LinearMap, left: Algebra, right: Algebra, name: str) -> None:
    n = left.dim * right.dim
    if m.shape != (n, n):
        raise DimensionMismatch(
            f"{name} must be {n}x{n} for dims {right.dim} (x) {left.dim}, got {m.shape}"
        )


def pair_label(left: str, right: str) -> str:
    if left == "1":
        return right
    if right == "1":
        return left
    return f"{left}·{right}"


class TwistingMap:
    """R : B (x) A -> A (x) B bound to its algebras; axioms checked lazily."""

    def __init__(self, A: Algebra, B: Algebra, R: LinearMap):
        _check_shape(R, A, B, "R")
        self.A, self.B, self.R = A, B, R
        self._report = None
        self._sweedler = None

    @property
    def axiom_report(self) -> CheckReport:
        if self._report is None:
            self._report = check_alt_twisting_axioms(self.A, self.B, self.R)
        return self._report

    @property
    def sweedler(self):
        if self._sweedler is None:
            self._sweedler = _split(self.R, self.A.dim, self.B.dim)
        return self._sweedler

    def product(self, check: bool = True) -> "TwistedAlgebra":
        return alt_twisted_product(self.A, self.B, self.R, check=check)


class MirrorMap:
    """P : D (x) C -> C (x) D bound to its algebras; axioms checked lazily."""

    def __init__(self, C: Algebra, D: Algebra, P: LinearMap):
        _check_shape(P, C, D, "P")
        self.C, self.D, self.P = C, D, P
        self._report = None

    @property
    def axiom_report(self) -> CheckReport:
        if self._report is None:
            self._report = check_mirror_axioms(self.C, self.D, self.P)
        return self._report

    def product(self, check: bool = True) -> "TwistedAlgebra":
        return mirror_product(self.C, self.D, self.P, check=check)


@dataclass(frozen=True, eq=False)
class TwistedAlgebra:
    algebra: Algebra
    left: Algebra
    right: Algebra
    twisting: TwistingMap | MirrorMap
    left_embedding: LinearMap
    right_embedding: LinearMap
    embedding_report: CheckReport = field(default=None)

    @property
    def kind(self) -> str:
        return "alternative" if isinstance(self.twisting, TwistingMap) else "mirror"

    def index(self, i: int, j: int) -> int:
        return i * self.right.dim + j


def check_alt_twisting_axioms(A: Algebra, B: Algebra, R: LinearMap) -> CheckReport:
    """(atm1) on basis pairs, (atm2) on triples (b, a, a'), (atm3) on (b, b', a) with a in A0."""
    _check_shape(R, A, B, "R")
    nA, nB = A.dim, B.dim
    sw = _split(R, nA, nB)
    for b in range(nB):
        for a in range(nA):
            if b == 0 and R.column(a) != {a * nB: 1}:
                return CheckReport.fail("atm1", (b, a), "R(1 (x) a) != a (x) 1")
            if a == 0 and R.column(b * nA) != {b: 1}:
                return CheckReport.fail("atm1", (b, a), "R(b (x) 1) != 1 (x) b")
    for b in range(nB):
        for a in range(nA):
            for a2 in range(nA):
                lhs = R.apply_sparse({b * nA + k: c for k, c in A.basis_product(a, a2).items()})
                rhs: dict = {}
                for i, j, c1 in sw[b][a]:
                    for k, l, c2 in sw[j][a2]:
                        for m, c3 in A.basis_product(i, k).items():
                            add_into(rhs, {m * nB + l: c1 * c2 * c3})
                if lhs != rhs:
                    return CheckReport.fail("atm2", (b, a, a2), "R(b (x) aa') != a_R a'_r (x) (b_R)_r")
    for b in range(nB):
        for b2 in range(nB):
            for a in range(1, nA):
                lhs = R.apply_sparse({k * nA + a: c for k, c in B.basis_product(b, b2).items()})
                rhs = {}
                for i, j, c1 in sw[b2][a]:
                    for k, l, c2 in sw[b][i]:
                        for m, c3 in B.basis_product(j, l).items():
                            add_into(rhs, {k * nB + m: c1 * c2 * c3})
                if lhs != rhs:
                    return CheckReport.fail("atm3", (b, b2, a), "R(bb' (x) a) != (a_R)_r (x) b'_R b_r")
    return CheckReport.ok("alt_twisting_axioms")


def check_mirror_axioms(C: Algebra, D: Algebra, P: LinearMap) -> CheckReport:
    """(aatm1) on pairs, (aatm2) on (d, c, c') with d in D0, (aatm3) on (d, d', c)."""
    _check_shape(P, C, D, "P")
    nC, nD = C.dim, D.dim
    sw = _split(P, nC, nD)
    for d in range(nD):
        for c in range(nC):
            if d == 0 and P.column(c) != {c * nD: 1}:
                return CheckReport.fail("aatm1", (d, c), "P(1 (x) c) != c (x) 1")
            if c == 0 and P.column(d * nC) != {d: 1}:
                return CheckReport.fail("aatm1", (d, c), "P(d (x) 1) != 1 (x) d")
    for d in range(1, nD):
        for c in range(nC):
            for c2 in range(nC):
                lhs = P.apply_sparse({d * nC + k: x for k, x in C.basis_product(c, c2).items()})
                rhs: dict = {}
                for i, j, x1 in sw[d][c]:
                    for k, l, x2 in sw[j][c2]:
                        for m, x3 in C.basis_product(k, i).items():
                            add_into(rhs, {m * nD + l: x1 * x2 * x3})
                if lhs != rhs:
                    return CheckReport.fail("aatm2", (d, c, c2), "P(d (x) cc') != c'_p c_P (x) (d_P)_p")
    for d in range(nD):
        for d2 in range(nD):
            for c in range(nC):
                lhs = P.apply_sparse({k * nC + c: x for k, x in D.basis_product(d, d2).items()})
                rhs = {}
                for i, j, x1 in sw[d2][c]:
                    for k, l, x2 in sw[d][i]:
                        for m, x3 in D.basis_product(l, j).items():
                            add_into(rhs, {k * nD + m: x1 * x2 * x3})
                if lhs != rhs:
                    return CheckReport.fail("aatm3", (d, d2, c), "P(dd' (x) c) != (c_P)_p (x) d_p d'_P")
    return CheckReport.ok("mirror_axioms")


def _embeddings(nL: int, nR: int, field) -> tuple[LinearMap, LinearMap]:
    left = LinearMap.from_columns([{i * nR: 1} for i in range(nL)], nL * nR, field)
    right = LinearMap.from_columns([{j: 1} for j in range(nR)], nL * nR, field)
    return left, right


def check_embeddings(tw: TwistedAlgebra) -> CheckReport:
    """Both factor embeddings are multiplicative and (a (x) 1)(1 (x) b) = a (x) b."""
    P, L, Rt = tw.algebra, tw.left, tw.right
    nR = Rt.dim
    for i in range(L.dim):
        for j in range(L.dim):
            img = {k * nR: c for k, c in L.basis_product(i, j).items()}
            if P.mul_sparse({i * nR: 1}, {j * nR: 1}) != img:
                return CheckReport.fail("embeddings", ("left", i, j), "a -> a (x) 1 not multiplicative")
    for i in range(nR):
        for j in range(nR):
            if P.mul_sparse({i: 1}, {j: 1}) != Rt.basis_product(i, j):
                return CheckReport.fail("embeddings", ("right", i, j), "b -> 1 (x) b not multiplicative")
    for i in range(L.dim):
        for j in range(nR):
            if P.mul_sparse({i * nR: 1}, {j: 1}) != {i * nR + j: 1}:
                return CheckReport.fail("embeddings", ("pure", i, j), "(a (x) 1)(1 (x) b) != a (x) b")
    return CheckReport.ok("embeddings")


def _product_labels(L: Algebra, Rt: Algebra) -> list[str]:
    return [pair_label(a, b) for a in L.labels for b in Rt.labels]


def alt_twisted_product(
    A: Algebra,
    B: Algebra,
    R: LinearMap | TwistingMap,
    check: bool = True,
    name: str | None = None,
    labels: Sequence[str] | None = None,
) -> TwistedAlgebra:
    """The alternative twisted product on A (x) B.

    (1 (x) b)(a' (x) b') = a'_R (x) b_R b' and, for a in A0,
    (a (x) b)(a' (x) b') = a a'_R (x) b' b_R.
    """
    tm = R if isinstance(R, TwistingMap) else TwistingMap(A, B, R)
    if check and not tm.axiom_report.passed:
        raise AxiomsFailed(tm.axiom_report)
    nA, nB = A.dim, B.dim
    sw = tm.sweedler

    def product(x, y):
        i, j = divmod(x, nB)
        k, l = divmod(y, nB)
        out: dict = {}
        for i2, j2, r in sw[j][k]:
            if i == 0:
                for m, c in B.basis_product(j2, l).items():
                    add_into(out, {i2 * nB + m: r * c})
            else:
                ap = A.basis_product(i, i2)
                if not ap:
                    continue
                bp = B.basis_product(l, j2)
                for u, c1 in ap.items():
                    for w, c2 in bp.items():
                        add_into(out, {u * nB + w: r * c1 * c2})
        return out

    alg = algebra_from_products(
        name or f"{A.name}#{B.name}", A.field, labels or _product_labels(A, B), product
    )
    left, right = _embeddings(nA, nB, A.field)
    tw = TwistedAlgebra(alg, A, B, tm, left, right)
    return TwistedAlgebra(alg, A, B, tm, left, right, check_embeddings(tw))


def mirror_product(
    C: Algebra,
    D: Algebra,
    P: LinearMap | MirrorMap,
    check: bool = True,
    name: str | None = None,
    labels: Sequence[str] | None = None,
) -> TwistedAlgebra:
    """The mirror product on C (x) D.

    (c (x) d)(c' (x) 1) = c c'_P (x) d_P and, for d' in D0,
    (c (x) d)(c' (x) d') = c'_P c (x) d_P d'.
    """
    mm = P if isinstance(P, MirrorMap) else MirrorMap(C, D, P)
    if check and not mm.axiom_report.passed:
        raise AxiomsFailed(mm.axiom_report)
    nC, nD = C.dim, D.dim
    sw = _split(mm.P, nC, nD)

    def product(x, y):
        i, j = divmod(x, nD)
        k, l = divmod(y, nD)
        out: dict = {}
        for k2, j2, r in sw[j][k]:
            if l == 0:
                for m, c in C.basis_product(i, k2).items():
                    add_into(out, {m * nD + j2: r * c})
            else:
                cp = C.basis_product(k2, i)
                if not cp:
                    continue
                dp = D.basis_product(j2, l)
                for u, c1 in cp.items():
                    for w, c2 in dp.items():
                        add_into(out, {u * nD + w: r * c1 * c2})
        return out

    alg = algebra_from_products(
        name or f"{C.name}#{D.name}", C.field, labels or _product_labels(C, D), product
    )
    left, right = _embeddings(nC, nD, C.field)
    tw = TwistedAlgebra(alg, C, D, mm, left, right)
    return TwistedAlgebra(alg, C, D, mm, left, right, check_embeddings(tw))


def flip_map(A: Algebra, B: Algebra) -> LinearMap:
    """tau : B (x) A -> A (x) B."""
    return flip(B.dim, A.dim, A.field)


def check_braid(B: Algebra, A: Algebra, R: LinearMap) -> CheckReport:
    """(id_A (x) tau_BB)(R (x) id_B)(id_B (x) R) = (R (x) id_B)(id_B (x) R)(tau_BB (x) id_A).

    Evaluated on every basis triple b1 (x) b2 (x) a of B (x) B (x) A.
    """
    _check_shape(R, A, B, "R")
    nA, nB = A.dim, B.dim
    sw = _split(R, nA, nB)
    for b1 in range(nB):
        for b2 in range(nB):
            for a in range(nA):
                lhs: dict = {}
                for i, j, c1 in sw[b2][a]:
                    for k, l, c2 in sw[b1][i]:
                        add_into(lhs, {(k * nB + j) * nB + l: c1 * c2})
                rhs: dict = {}
                for i, j, c1 in sw[b1][a]:
                    for k, l, c2 in sw[b2][i]:
                        add_into(rhs, {(k * nB + l) * nB + j: c1 * c2})
                if lhs != rhs:
                    return CheckReport.fail("braid", (b1, b2, a), "braid relation fails on b1 (x) b2 (x) a")
    return CheckReport.ok("braid")


class Stability(enum.Enum):
    EQUALITY = "equality"
    CONTAINMENT_ONLY = "containment_only"
    NEITHER = "neither"


def check_A0_stability(B: Algebra, A: Algebra, R: LinearMap) -> Stability:
    """Compare R(B (x) A0) with A0 (x) B by exact rank."""
    _check_shape(R, A, B, "R")
    nA, nB = A.dim, B.dim
    images = [R.column(b * nA + a) for b in range(nB) for a in range(1, nA)]
    for img in images:
        if any(idx // nB == 0 for idx in img):
            return Stability.NEITHER
    if span_rank(images, nA * nB, A.field) == (nA - 1) * nB:
        return Stability.EQUALITY
    return Stability.CONTAINMENT_ONLY


def stability_report(B: Algebra, A: Algebra, R: LinearMap, tag: str, need_equality: bool) -> CheckReport:
    grade = check_A0_stability(B, A, R)
    ok = grade is Stability.EQUALITY or (grade is Stability.CONTAINMENT_ONLY and not need_equality)
    detail = f"R(B (x) A0) vs A0 (x) B: {grade.value}"
    if ok:
        return CheckReport.ok(tag, detail)
    return CheckReport.fail(tag, (grade.value,), detail)


def lifted_involution_map(A: Algebra, B: Algebra, R: LinearMap, sA: LinearMap, sB: LinearMap) -> LinearMap:
    """sigma_bar = R o (sigma_B (x) sigma_A) o tau_{A,B}."""
    return compose(R, compose(tensor(sB, sA), flip(A.dim, B.dim, A.field)))


def _map_of(s):
    return s.map if isinstance(s, Involution) else s


def lift_involution_reports(tm: TwistingMap, sA, sB) -> tuple[LinearMap, list[CheckReport], list[CheckReport]]:
    """sigma_bar together with hypothesis and conclusion reports, nothing raised."""
    A, B, R = tm.A, tm.B, tm.R
    mA, mB = _map_of(sA), _map_of(sB)
    sbar = lifted_involution_map(A, B, R, mA, mB)
    hyps = [check_braid(B, A, R), stability_report(B, A, R, "inv1", need_equality=False)]
    bad = next((i for i in range(1, A.dim) if 0 in mA.column(i)), None)
    if bad is None:
        hyps.append(CheckReport.ok("inv2"))
    else:
        hyps.append(CheckReport.fail("inv2", (bad,), "sigma_A(A0) not inside A0"))
    sq = compose(sbar, sbar)
    bad = next((j for j in range(sq.domain_dim) if sq.column(j) != {j: 1}), None)
    hyps.append(CheckReport.ok("inv3") if bad is None else CheckReport.fail("inv3", (bad,), "sigma_bar^2 != id"))

    prod = alt_twisted_product(A, B, tm, check=False)
    inv = check_involution(prod.algebra, sbar)
    concl = [CheckReport("involution", inv.passed, inv.witness, inv.detail or "sigma_bar on the product")]
    # (consinv): sigma_bar o R = (sigma_A (x) sigma_B) o tau_{B,A}
    lhs = compose(sbar, R)
    rhs = compose(tensor(mA, mB), flip(B.dim, A.dim, A.field))
    bad = next((j for j in range(lhs.domain_dim) if lhs.column(j) != rhs.column(j)), None)
    if bad is None:
        concl.append(CheckReport.ok("consinv"))
    else:
        concl.append(CheckReport.fail("consinv", divmod(bad, A.dim), "sigma_A(a_R)_r (x) sigma_B(b_R)_r != sigma_A(a) (x) sigma_B(b)"))
    return sbar, hyps, concl


def lift_involution(tm: TwistingMap, sA, sB, strict: bool = True) -> tuple[LinearMap, CheckReport]:
    """Lift two involutions to the alternative twisted product.

    With ``strict`` a failing hypothesis raises HypothesisFailed (tagged with
    the hypothesis); otherwise the combined report is returned as is.
    """
    if not tm.axiom_report.passed:
        raise AxiomsFailed(tm.axiom_report)
    sbar, hyps, concl = lift_involution_reports(tm, sA, sB)
    if strict:
        for h in hyps:
            if not h.passed:
                raise HypothesisFailed(h)
    return sbar, combine("lift_involution", hyps + concl)


def tensor_hom_check(f: LinearMap, g: LinearMap, prodAB: TwistedAlgebra, prodEF: TwistedAlgebra, strict: bool = True) -> CheckReport:
    """f (x) g between two alternative twisted products.

    Hypotheses: f, g unital algebra maps, f(A0) inside E0 and
    (f (x) g) o R = T o (g (x) f).  Conclusion: f (x) g is an algebra map.
    """
    from .properties import check_homomorphism

    A, B, E, F = prodAB.left, prodAB.right, prodEF.left, prodEF.right
    if f.shape != (E.dim, A.dim) or g.shape != (F.dim, B.dim):
        raise DimensionMismatch("f: A -> E and g: B -> F have the wrong shapes")
    R, T = prodAB.twisting.R, prodEF.twisting.R
    hyps = [
        _retag(check_homomorphism(f, A, E), "f_algebra_map"),
        _retag(check_homomorphism(g, B, F), "g_algebra_map"),
    ]
    bad = next((i for i in range(1, A.dim) if 0 in f.column(i)), None)
    hyps.append(CheckReport.ok("f_preserves_A0") if bad is None else CheckReport.fail("f_preserves_A0", (bad,), "f(A0) not inside E0"))
    lhs = compose(tensor(f, g), R)
    rhs = compose(T, tensor(g, f))
    bad = next((j for j in range(lhs.domain_dim) if lhs.column(j) != rhs.column(j)), None)
    hyps.append(CheckReport.ok("intertwines") if bad is None else CheckReport.fail("intertwines", divmod(bad, A.dim), "(f (x) g) R != T (g (x) f)"))
    if strict:
        for h in hyps:
            if not h.passed:
                raise HypothesisFailed(h)
    concl = _retag(check_homomorphism(tensor(f, g), prodAB.algebra, prodEF.algebra), "tensor_algebra_map")
    return combine("tensor_hom", hyps + [concl])


def _retag(report: CheckReport, tag: str) -> CheckReport:
    return CheckReport(tag, report.passed, report.witness, report.detail, report.elements)
