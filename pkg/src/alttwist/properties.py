"""Exhaustive identity checkers and norm forms for table-defined algebras.

The alternative and flexible laws are quadratic in one variable, so they are
checked in polarized form on basis triples:

* left alternative:  (x, y, z) + (y, x, z) = 0
* right alternative: (x, y, z) + (x, z, y) = 0
* flexible:          (x, y, z) + (z, y, x) = 0

where (x, y, z) = (xy)z - x(yz).  Over a field of characteristic not 2 this
is equivalent to the law holding for all elements.  Witnesses are the
lexicographically smallest failing basis tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .algebra import Algebra, Element, StrongInvolutionData, strong_involution_data
from .errors import AlgebraMismatch, DimensionMismatch, NotStrong, PreconditionFailed
from .linalg import LinearMap, add_into, dense_to_sparse, is_invertible, matrix_rank, sparse_sub
from .report import CheckReport
from .rng import DEFAULT_SEED, LCG

if TYPE_CHECKING:
    from .twisting import TwistedAlgebra


def _assoc(A: Algebra, x: dict, y: dict, z: dict) -> dict:
    return sparse_sub(A.mul_sparse(A.mul_sparse(x, y), z), A.mul_sparse(x, A.mul_sparse(y, z)))


def associator(A: Algebra, x: Element, y: Element, z: Element) -> Element:
    for e in (x, y, z):
        if e.algebra is not A and not e.algebra.same_table(A):
            raise AlgebraMismatch("associator arguments must lie in the algebra")
    return A.element(_assoc(A, x.sparse(), y.sparse(), z.sparse()))


class _BasisAssociators:
    """Lazily computed associators of basis triples."""

    def __init__(self, A: Algebra):
        self.A = A
        self._cache: dict = {}

    def __call__(self, i: int, j: int, k: int) -> dict:
        key = (i, j, k)
        v = self._cache.get(key)
        if v is None:
            A = self.A
            left = A.mul_sparse(A.basis_product(i, j), {k: 1})
            right = A.mul_sparse({i: 1}, A.basis_product(j, k))
            v = sparse_sub(left, right)
            self._cache[key] = v
        return v



def _dense(A: Algebra, vec: dict) -> tuple:
    return tuple(vec.get(k, A.field.zero) for k in range(A.dim))


def is_associative(A: Algebra) -> CheckReport:
    asc = _BasisAssociators(A)
    n = A.dim
    for i in range(1, n):
        for j in range(1, n):
            for k in range(1, n):
                if asc(i, j, k):
                    return CheckReport.fail(
                        "associative", (i, j, k), f"({A.labels[i]}, {A.labels[j]}, {A.labels[k]}) != 0"
                    )
    return CheckReport.ok("associative")


def is_commutative(A: Algebra) -> CheckReport:
    n = A.dim
    for i in range(1, n):
        for j in range(i + 1, n):
            if A.basis_product(i, j) != A.basis_product(j, i):
                return CheckReport.fail("commutative", (i, j), f"{A.labels[i]}{A.labels[j]} != {A.labels[j]}{A.labels[i]}")
    return CheckReport.ok("commutative")


def _first_nonzero(candidates, fn):
    for c in candidates:
        if fn(c):
            return c
    raise AssertionError("polarization argument violated")  # unreachable in char != 2


def _sum(x: dict, y: dict) -> dict:
    out = dict(x)
    add_into(out, y)
    return out


def left_alternative_defect(A: Algebra, x: dict, y: dict) -> dict:
    """(xx)y - x(xy)."""
    return _assoc(A, x, x, y)


def right_alternative_defect(A: Algebra, x: dict, y: dict) -> dict:
    """x(yy) - (xy)y, up to sign."""
    return _assoc(A, x, y, y)


def flexible_defect(A: Algebra, x: dict, y: dict) -> dict:
    """(xy)x - x(yx)."""
    return _assoc(A, x, y, x)


def _random_pair_check(A: Algebra, defect, samples: int, seed: int):
    rng = LCG(seed)
    for _ in range(samples):
        x = dense_to_sparse(rng.coords(A.dim, A.field))
        y = dense_to_sparse(rng.coords(A.dim, A.field))
        if defect(A, x, y):
            return x, y
    return None


def is_alternative(A: Algebra, crosscheck: int = 0, seed: int = DEFAULT_SEED) -> CheckReport:
    """Left and right alternative laws; ``crosscheck`` random pairs re-test a pass."""
    asc = _BasisAssociators(A)
    n = A.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                a = asc(i, j, k)
                left = dict(a)
                add_into(left, asc(j, i, k))
                if left:
                    ei, ej, ek = {i: 1}, {j: 1}, {k: 1}
                    x = _first_nonzero([ei, ej, _sum(ei, ej)], lambda x: left_alternative_defect(A, x, ek))
                    return CheckReport.fail(
                        "alternative", (i, j, k), "left law (xx)y = x(xy) fails",
                        elements=(_dense(A, x), _dense(A, ek)),
                    )
                right = dict(a)
                add_into(right, asc(i, k, j))
                if right:
                    ei, ej, ek = {i: 1}, {j: 1}, {k: 1}
                    y = _first_nonzero([ej, ek, _sum(ej, ek)], lambda y: right_alternative_defect(A, ei, y))
                    return CheckReport.fail(
                        "alternative", (i, j, k), "right law x(yy) = (xy)y fails",
                        elements=(_dense(A, ei), _dense(A, y)),
                    )
    for defect, law in ((left_alternative_defect, "left"), (right_alternative_defect, "right")):
        hit = _random_pair_check(A, defect, crosscheck, seed)
        if hit:
            raise AssertionError(f"polarized {law} alternative check passed but random pair fails")
    return CheckReport.ok("alternative")


def is_flexible(A: Algebra, crosscheck: int = 0, seed: int = DEFAULT_SEED) -> CheckReport:
    asc = _BasisAssociators(A)
    n = A.dim
    for i in range(n):
        for j in range(n):
            for k in range(i, n):
                s = dict(asc(i, j, k))
                add_into(s, asc(k, j, i))
                if s:
                    ei, ej, ek = {i: 1}, {j: 1}, {k: 1}
                    x = _first_nonzero([ei, ek, _sum(ei, ek)], lambda x: flexible_defect(A, x, ej))
                    return CheckReport.fail(
                        "flexible", (i, j, k), "(xy)x = x(yx) fails",
                        elements=(_dense(A, x), _dense(A, ej)),
                    )
    if _random_pair_check(A, flexible_defect, crosscheck, seed):
        raise AssertionError("polarized flexible check passed but random pair fails")
    return CheckReport.ok("flexible")


def _all_powers(A: Algebra, x: dict, N: int) -> list[set]:
    """powers[k] = set of values of all parenthesizations of x^k."""
    powers: list[set] = [set(), {tuple(sorted(x.items()))}]
    for k in range(2, N + 1):
        vals = set()
        for i in range(1, k):
            for u in powers[i]:
                for w in powers[k - i]:
                    vals.add(tuple(sorted(A.mul_sparse(dict(u), dict(w)).items())))
        powers.append(vals)
    return powers


def power_associative_bounded(A: Algebra, N: int = 5, samples: int = 50, seed: int = DEFAULT_SEED) -> CheckReport:
    """All bracketings of x^k agree for 3 <= k <= N, on basis and sampled x.

    A pass means no counterexample at this bound, not a proof.
    """
    if N < 3:
        raise ValueError("N must be at least 3")
    rng = LCG(seed)
    candidates = [("basis", i, {i: 1}) for i in range(A.dim)]
    candidates += [("sample", s, dense_to_sparse(rng.coords(A.dim, A.field))) for s in range(samples)]
    for kind, idx, x in candidates:
        powers = _all_powers(A, x, N)
        for k in range(3, N + 1):
            if len(powers[k]) > 1:
                return CheckReport.fail(
                    "power_associative", (k, kind, idx), f"bracketings of x^{k} disagree",
                    elements=(_dense(A, x),),
                )
    return CheckReport.ok("power_associative", f"no counterexample at bound N={N}, samples={samples}, seed={seed}")


def _polarized_basis(n: int) -> list[dict]:
    vecs = [{i: 1} for i in range(n)]
    vecs += [{i: 1, j: 1} for i in range(n) for j in range(i + 1, n)]
    return vecs


@dataclass(frozen=True)
class StrongIdentityReport:
    alternative_applicable: bool
    flexible_applicable: bool
    reports: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def by_tag(self, tag: str) -> CheckReport:
        return next(r for r in self.reports if r.property == tag)

    def to_report(self) -> CheckReport:
        from .report import combine

        return combine("strong_identities", self.reports, self.summary())

    def summary(self) -> str:
        return "; ".join(f"{r.property}: {r.verdict}" for r in self.reports)


def strong_identities_check(B: Algebra, s: StrongInvolutionData) -> StrongIdentityReport:
    """(consalt1/2) when B is alternative; (sch1)-(sch3) when B is flexible.

    Quadratic arguments range over basis vectors and pairwise sums, which is
    complete by polarization; linear arguments range over the basis.
    """
    sig = s.involution.map
    n = B.dim
    mul = B.mul_sparse
    alt = is_alternative(B).passed
    flex = is_flexible(B).passed
    quad = _polarized_basis(n)
    basis = [{i: 1} for i in range(n)]
    reports = []

    if alt:
        r1 = r2 = None
        for bi, b in enumerate(quad):
            sb = sig.apply_sparse(b)
            nb = s.norm(_dense(B, b))
            for j, b2 in enumerate(basis):
                target = {k: nb * c for k, c in b2.items()} if nb else {}
                if r1 is None and mul(mul(b2, sb), b) != target:
                    r1 = CheckReport.fail("consalt1", (bi, j), "(b' sigma(b)) b != n(b) b'", elements=(_dense(B, b), _dense(B, b2)))
                if r2 is None and mul(mul(b2, b), sb) != target:
                    r2 = CheckReport.fail("consalt2", (bi, j), "(b' b) sigma(b) != n(b) b'", elements=(_dense(B, b), _dense(B, b2)))
        reports.append(r1 or CheckReport.ok("consalt1"))
        reports.append(r2 or CheckReport.ok("consalt2"))

    if flex:
        r = None
        for yi, y in enumerate(quad):
            sy = sig.apply_sparse(y)
            for xi, x in enumerate(basis):
                v1 = mul(mul(x, y), sy)
                v2 = mul(sy, mul(y, x))
                v3 = mul(y, mul(sy, x))
                v4 = mul(mul(x, sy), y)
                if not (v1 == v2 == v3 == v4):
                    r = CheckReport.fail("sch1", (xi, yi), "(xy)s(y) = s(y)(yx) = y(s(y)x) = (xs(y))y fails", elements=(_dense(B, x), _dense(B, y)))
                    break
            if r:
                break
        reports.append(r or CheckReport.ok("sch1"))
        r2 = r3 = None
        sbasis = [sig.apply_sparse(b) for b in basis]
        for xi in range(n):
            x, sx = basis[xi], sbasis[xi]
            for yi in range(n):
                y, sy = basis[yi], sbasis[yi]
                for ui in range(n):
                    u, su = basis[ui], sbasis[ui]
                    if r2 is None:
                        lhs = _sum(mul(mul(u, sy), x), mul(y, mul(su, x)))
                        rhs = _sum(mul(x, mul(y, su)), mul(mul(x, u), sy))
                        if lhs != rhs:
                            r2 = CheckReport.fail("sch2", (xi, yi, ui), "(u s(y))x + y(s(u)x) != x(y s(u)) + (xu)s(y)")
                    if r3 is None:
                        lhs = _sum(mul(mul(su, sx), y), mul(x, mul(u, y)))
                        rhs = _sum(mul(sx, mul(su, y)), mul(mul(u, x), y))
                        if lhs != rhs:
                            r3 = CheckReport.fail("sch3", (xi, yi, ui), "(s(u)s(x))y + x(uy) != s(x)(s(u)y) + (ux)y")
        reports.append(r2 or CheckReport.ok("sch2"))
        reports.append(r3 or CheckReport.ok("sch3"))
    return StrongIdentityReport(alt, flex, tuple(reports))


def check_grad(A: Algebra) -> CheckReport:
    """A0 . A0 inside K . 1."""
    for i in range(1, A.dim):
        for j in range(1, A.dim):
            if any(k != 0 for k in A.basis_product(i, j)):
                return CheckReport.fail("grad", (i, j), "A0 A0 not inside K 1")
    return CheckReport.ok("grad")


def graded_involution_of(prod: "TwistedAlgebra") -> LinearMap | None:
    """Recover sigma from R(b (x) a) = a (x) sigma(b) (a in A0), or None."""
    A, B = prod.left, prod.right
    R = prod.twisting.R
    nA, nB = A.dim, B.dim
    if nA < 2:
        return None
    cols = []
    for b in range(nB):
        img = R.column(b * nA + 1)
        if any(idx // nB != 1 for idx in img):
            return None
        cols.append({idx % nB: c for idx, c in img.items()})
    sigma = LinearMap.from_columns(cols, nB, B.field)
    for a in range(1, nA):
        for b in range(nB):
            if R.column(b * nA + a) != {a * nB + k: c for k, c in cols[b].items()}:
                return None
    return sigma


def homogeneous_alternative_laws(
    prod: "TwistedAlgebra",
    samples: int = 4,
    seed: int = DEFAULT_SEED,
    check_preconditions: bool = True,
) -> CheckReport:
    """Left/right alternative laws for homogeneous tensor monomials.

    The quadratic monomial runs over a (x) b with a in {1} + A0 basis (and
    pairwise sums inside A0) and b over the basis, pairwise sums and
    ``samples`` random elements; the linear monomial over basis monomials.
    """
    from .algebra import Involution

    A, B = prod.left, prod.right
    if check_preconditions:
        g = check_grad(A)
        if not g.passed:
            raise PreconditionFailed(g)
        for alg, tag in ((A, "A_alternative"), (B, "B_alternative")):
            rep = is_alternative(alg)
            if not rep.passed:
                raise PreconditionFailed(CheckReport(tag, False, rep.witness, rep.detail))
        sigma = graded_involution_of(prod)
        if sigma is None:
            raise PreconditionFailed(CheckReport.fail("graded_R", (0,), "R is not of the form a (x) sigma(b) on A0"))
        try:
            strong_involution_data(B, Involution(B, sigma))
        except NotStrong as exc:
            raise PreconditionFailed(CheckReport.fail("strong", exc.witness, str(exc))) from None
        except Exception as exc:
            raise PreconditionFailed(CheckReport.fail("involution", (0,), str(exc))) from None

    P = prod.algebra
    nA, nB = A.dim, B.dim
    rng = LCG(seed)
    a_quad = [{0: 1}] + [{i: 1} for i in range(1, nA)]
    a_quad += [{i: 1, j: 1} for i in range(1, nA) for j in range(i + 1, nA)]
    b_quad = _polarized_basis(nB) + [dense_to_sparse(rng.nonzero_coords(nB, B.field)) for _ in range(samples)]
    a_lin = [{i: 1} for i in range(nA)]
    b_lin = [{j: 1} for j in range(nB)]

    def mono(a: dict, b: dict) -> dict:
        return {i * nB + j: x * y for i, x in a.items() for j, y in b.items()}

    lin = [(ai, bi, mono(a, b)) for ai, a in enumerate(a_lin) for bi, b in enumerate(b_lin)]
    for qa, a in enumerate(a_quad):
        for qb, b in enumerate(b_quad):
            X = mono(a, b)
            XX = P.mul_sparse(X, X)
            for ai, bi, Y in lin:
                if P.mul_sparse(XX, Y) != P.mul_sparse(X, P.mul_sparse(X, Y)):
                    return CheckReport.fail(
                        "homogeneous_alternative", ("left", qa, qb, ai, bi),
                        "[(a(x)b)(a(x)b)](a'(x)b') != (a(x)b)[(a(x)b)(a'(x)b')]",
                        elements=(_dense(P, X), _dense(P, Y)),
                    )
                if P.mul_sparse(Y, XX) != P.mul_sparse(P.mul_sparse(Y, X), X):
                    return CheckReport.fail(
                        "homogeneous_alternative", ("right", ai, bi, qa, qb),
                        "(a(x)b)[(a'(x)b')(a'(x)b')] != [(a(x)b)(a'(x)b')](a'(x)b')",
                        elements=(_dense(P, Y), _dense(P, X)),
                    )
    return CheckReport.ok("homogeneous_alternative", f"{len(a_quad) * len(b_quad)} quadratic x {len(lin)} linear monomials")


@dataclass(frozen=True)
class NormForm:
    gram: tuple
    rank: int

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def nondegenerate(self) -> bool:
        return self.rank == self.dim

    def report(self) -> CheckReport:
        if self.nondegenerate:
            return CheckReport.ok("norm_nondegenerate", f"rank {self.rank}/{self.dim}")
        return CheckReport.fail("norm_nondegenerate", (self.rank, self.dim), f"rank {self.rank}/{self.dim}")


def norm_form(B: Algebra, s: StrongInvolutionData) -> NormForm:
    """Gram matrix of (x, y) = 1/2 (n(x+y) - n(x) - n(y)) and its exact rank."""
    return NormForm(s.gram, matrix_rank(s.gram, B.field))


def check_homomorphism(f: LinearMap, A: Algebra, B: Algebra) -> CheckReport:
    """f : A -> B is unital and multiplicative on basis pairs."""
    if f.shape != (B.dim, A.dim):
        raise DimensionMismatch(f"map of shape {f.shape} is not {A.dim} -> {B.dim}")
    if f.column(0) != {0: 1}:
        return CheckReport.fail("homomorphism", (0,), "f(1) != 1")
    for i in range(A.dim):
        for j in range(A.dim):
            if f.apply_sparse(A.basis_product(i, j)) != B.mul_sparse(f.column(i), f.column(j)):
                return CheckReport.fail("homomorphism", (i, j), "f(e_i e_j) != f(e_i) f(e_j)")
    return CheckReport.ok("homomorphism")


def check_isomorphism(f: LinearMap, A: Algebra, B: Algebra) -> CheckReport:
    rep = check_homomorphism(f, A, B)
    if not rep.passed:
        return CheckReport("isomorphism", False, rep.witness, rep.detail)
    if not is_invertible(f):
        return CheckReport.fail("isomorphism", ("singular",), "map is not bijective")
    return CheckReport.ok("isomorphism")


def witness_reproduces(A: Algebra, report: CheckReport) -> bool:
    """Re-evaluate a failing identity report at its witness."""
    if report.passed:
        return False
    prop, w = report.property, report.witness
    if prop == "associative":
        return bool(_assoc(A, {w[0]: 1}, {w[1]: 1}, {w[2]: 1}))
    if prop == "commutative":
        return A.basis_product(w[0], w[1]) != A.basis_product(w[1], w[0])
    if prop in ("alternative", "flexible"):
        x, y = (dense_to_sparse(e) for e in report.elements)
        if prop == "flexible":
            return bool(flexible_defect(A, x, y))
        if "left" in report.detail:
            return bool(left_alternative_defect(A, x, y))
        return bool(right_alternative_defect(A, x, y))
    if prop == "power_associative":
        x = dense_to_sparse(report.elements[0])
        return len(_all_powers(A, x, w[0])[w[0]]) > 1
    raise ValueError(f"no re-evaluation rule for {prop!r}")


PROPERTY_CHECKERS = {
    "assoc": is_associative,
    "comm": is_commutative,
    "alt": is_alternative,
    "flex": is_flexible,
}
