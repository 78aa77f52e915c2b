from fractions import Fraction

import pytest

from alttwist.algebra import identity_involution, make_involution
from alttwist.constructions import (
    CATALOG_NAMES,
    base_field,
    c_algebra,
    catalog,
    cayley_dickson,
    cayley_dickson_underline,
    cd_iso,
    clifford_step,
    fresh_symbol,
    tripling,
    tripling_base,
)
from alttwist.errors import NotAutomorphism, NotStrong, UnknownName, ZeroParameter
from alttwist.linalg import LinearMap, identity
from alttwist.properties import associator, check_homomorphism, is_associative, is_commutative
from alttwist.scalars import QQ


def cd_oracle_mul(x, y, qs):
    """Nested-pair Cayley-Dickson product, written independently of the package.

    x, y are coordinate lists of length 2**len(qs); the high half is the
    v-block: (a + vb)(c + vd) = (ac + q d conj(b)) + v(conj(a) d + c b).
    """
    if not qs:
        return [x[0] * y[0]]
    h = len(x) // 2
    a, b, c, d = x[:h], x[h:], y[:h], y[h:]
    q, rest = qs[-1], qs[:-1]

    def conj(u, level):
        if not level:
            return list(u)
        k = len(u) // 2
        return conj(u[:k], level[:-1]) + [-t for t in u[k:]]

    def add(u, w):
        return [s + t for s, t in zip(u, w)]

    first = add(cd_oracle_mul(a, c, rest), [q * t for t in cd_oracle_mul(d, conj(b, rest), rest)])
    second = add(cd_oracle_mul(conj(a, rest), d, rest), cd_oracle_mul(c, b, rest))
    return first + second


def tower_from_oracle_matches(alg, qs):
    n = alg.dim
    for i in range(n):
        for j in range(n):
            x = [Fraction(int(k == i)) for k in range(n)]
            y = [Fraction(int(k == j)) for k in range(n)]
            if tuple(cd_oracle_mul(x, y, qs)) != alg.table[i][j]:
                return False
    return True


def test_c_algebra():
    C = c_algebra(-1)
    assert C.labels == ("1", "v") and C.basis_product(1, 1) == {0: -1}
    assert c_algebra(1).basis_product(1, 1) == {0: 1}
    with pytest.raises(ZeroParameter, match="q must be nonzero"):
        c_algebra(0)


@pytest.mark.parametrize("name,qs", [("complex", [-1]), ("quaternions", [-1, -1]), ("octonions", [-1, -1, -1]), ("sedenions", [-1] * 4)])
def test_tower_matches_nested_pair_oracle(name, qs, tower):
    assert tower_from_oracle_matches(tower[name].algebra, [Fraction(q) for q in qs])


def test_mixed_parameters_match_oracle():
    res = base_field()
    qs = [Fraction(2), Fraction(-3), Fraction(1, 2)]
    for q in qs:
        res = cayley_dickson(res.algebra, res.involution, q)
        assert res.cross_check.passed
    assert tower_from_oracle_matches(res.algebra, qs)


def test_first_doubling_is_complex():
    K = base_field()
    assert cayley_dickson(K.algebra, K.involution, -1).algebra.same_table(c_algebra(-1))


def test_cd_lifted_involution(tower):
    H = tower["quaternions"]
    assert H.involution.map == LinearMap([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]], QQ)


def test_cd_associativity_pattern(tower):
    # B-bar(q) associative iff B associative and commutative
    names = ["K", "complex", "quaternions", "octonions"]
    for prev, nxt in zip(names, names[1:] + ["sedenions"]):
        B, D = tower[prev].algebra, tower[nxt].algebra
        expected = is_associative(B).passed and is_commutative(B).passed
        assert is_associative(D).passed == expected


def test_zero_parameter(tower):
    c = tower["complex"]
    for fn in (cayley_dickson, cayley_dickson_underline):
        with pytest.raises(ZeroParameter, match="q must be nonzero"):
            fn(c.algebra, c.involution, 0)
    with pytest.raises(ZeroParameter):
        tripling(c.algebra, c.involution, 1, 0)
    with pytest.raises(ZeroParameter):
        tripling_base(0, 1)


def test_underline_base_field():
    K = base_field()
    under = cayley_dickson_underline(K.algebra, K.involution, -1)
    over = cayley_dickson(K.algebra, K.involution, -1)
    assert under.algebra.same_table(over.algebra)
    assert under.cross_check.passed


def test_underline_differs_but_is_isomorphic(tower):
    H = tower["quaternions"]
    under = cayley_dickson_underline(H.algebra, H.involution, -1)
    over = cayley_dickson(H.algebra, H.involution, -1)
    assert under.cross_check.passed
    assert under.algebra.table_differences(over.algebra)
    phi, rep = cd_iso(H.algebra, H.involution, -1)
    assert rep.passed


@pytest.mark.parametrize("name", ["complex", "quaternions", "octonions"])
def test_cd_iso(name, tower):
    res = tower[name]
    phi, rep = cd_iso(res.algebra, res.involution, -1)
    n = res.algebra.dim
    assert rep.passed
    assert phi.shape == (2 * n, 2 * n)


def test_cd_iso_identity_for_trivial_involution():
    B = c_algebra(3)
    phi, rep = cd_iso(B, identity_involution(B), 2)
    assert rep.passed and phi.is_identity()


def test_clifford_from_k():
    K = base_field()
    res = clifford_step(K.algebra, identity(1), 5)
    assert res.algebra.same_table(c_algebra(5))
    assert is_associative(res.algebra).passed


def test_clifford_two_steps():
    res = catalog("clifford:2:1,1")
    assert res.dim == 4 and is_associative(res.algebra).passed
    assert res.cross_check.passed
    res = catalog("clifford:2:-1,-1")
    assert is_associative(res.algebra).passed and not is_commutative(res.algebra).passed


def test_clifford_nonassociative_input(tower):
    O = tower["octonions"].algebra
    res = clifford_step(O, identity(8), 1)
    assert res.dim == 16 and res.cross_check.passed
    assert not is_associative(res.algebra).passed


def test_clifford_rejects_antiautomorphism(tower):
    H = tower["quaternions"]
    with pytest.raises(NotAutomorphism):
        clifford_step(H.algebra, H.involution.map, 1)


def test_tripling_base():
    T = tripling_base(Fraction(2), Fraction(3))
    v, z = T.basis(1), T.basis(2)
    assert T.labels == ("1", "v", "z")
    assert v * z == T.zero == z * v
    assert associator(T, v, v, z) == 2 * z
    assert (v * v) * z == 2 * z and v * (v * z) == T.zero
    T1 = tripling_base(1, 1)
    assert T1.basis(1) * T1.basis(1) == T1.unit == T1.basis(2) * T1.basis(2)


def test_tripling_norm_and_trace_on_k():
    K = base_field()
    res = tripling(K.algebra, K.involution, 2, 3)
    data = res.strong_data()
    x = res.algebra.element([1, 1, 1])
    assert data.norm(x) == -4 and data.trace(x) == 2
    assert res.cross_check.passed


def test_tripling_vz_zero_but_double_doubling_nonzero(tower):
    H = tower["quaternions"]
    T = tripling(H.algebra, H.involution, 2, 3).algebra
    n = H.algebra.dim
    assert T.basis_product(n, 2 * n) == {} == T.basis_product(2 * n, n)
    d1 = cayley_dickson(H.algebra, H.involution, 2)
    d2 = cayley_dickson(d1.algebra, d1.involution, 3).algebra
    # in the iterated doubling v sits at index n and the new generator at 2n
    assert d2.basis_product(n, 2 * n) != {}


def test_tripling_subalgebras(tower):
    H = tower["quaternions"]
    res = tripling(H.algebra, H.involution, 2, 3)
    for key, q in (("Bq", 2), ("Br", 3)):
        cd = cayley_dickson(H.algebra, H.involution, q).algebra
        assert check_homomorphism(res.embeddings[key], cd, res.algebra).passed


def test_tripling_requires_strong():
    B = c_algebra(2)
    with pytest.raises(NotStrong):
        tripling(B, identity_involution(B), 1, 1)


def test_fresh_symbols_unique(tower):
    for res in tower.values():
        assert len(set(res.algebra.labels)) == res.dim
    assert fresh_symbol("v", ["1", "v", "v2"]) == "v3"
    assert fresh_symbol("z", ["1", "v"]) == "z"


def test_catalog_names():
    for name in CATALOG_NAMES:
        res = catalog(name)
        assert res.algebra.name == name
    assert catalog("octonions").dim == 8
    assert catalog("tripling:quaternions:2,3").dim == 12
    assert catalog("split-complex").algebra.basis_product(1, 1) == {0: 1}


@pytest.mark.parametrize("name", ["foo", "clifford:x:1", "clifford:2:1", "tripling:quaternions:2", "tripling::1,2"])
def test_unknown_names(name):
    with pytest.raises(UnknownName):
        catalog(name)


def test_catalog_is_deterministic():
    a = catalog("octonions").algebra
    b = cayley_dickson(catalog("quaternions").algebra, catalog("quaternions").involution, -1).algebra
    assert a.same_table(b)


def test_make_involution_on_tripling(tower):
    res = catalog("tripling:quaternions:2,3")
    assert make_involution(res.algebra, res.involution.map).verified
