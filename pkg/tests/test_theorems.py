from fractions import Fraction

import pytest

from alttwist.algebra import check_involution, make_algebra
from alttwist.constructions import (
    c_algebra,
    cayley_dickson,
    cayley_dickson_underline,
    cd_iso,
    graded_twisting_map,
    tripling,
)
from alttwist.errors import AxiomsFailed, PreconditionFailed
from alttwist.linalg import LinearMap, compose, identity
from alttwist.properties import is_alternative, is_flexible
from alttwist.scalars import QQ
from alttwist.theorems import (
    verify_associativity_prop,
    verify_theorem_ext,
    verify_theorem_main,
    verify_tripling_suite,
)
from alttwist.twisting import alt_twisted_product, flip_map

from test_properties import planted_nonflexible
from test_twisting import perturbed_c_map

CONJ2 = LinearMap([[1, 0], [0, -1]], QQ)


def cd_setup(res, q=-1):
    A = c_algebra(q, symbol="u")
    return A, res.algebra, graded_twisting_map(A, res.algebra, res.involution.map)


@pytest.mark.parametrize("name", ["complex", "quaternions"])
def test_main_on_cayley_dickson(name, tower):
    res = tower[name]
    rep = verify_theorem_main(*cd_setup(res))
    assert rep.overall == "pass"
    assert [r.property for r in rep.hypothesis_reports] == ["bijective", "braid", "cucu"]
    under = cayley_dickson_underline(res.algebra, res.involution, -1)
    over = cayley_dickson(res.algebra, res.involution, -1)
    # the mirror map is the underline construction's P, and R realises cd_iso
    assert rep.artifacts["P"] == under.twisting.P
    phi, _ = cd_iso(res.algebra, res.involution, -1)
    assert compose(over.to_twisted, phi) == compose(rep.artifacts["isomorphism"], under.to_twisted)


def test_main_flip_commutative():
    A, B = c_algebra(-1), c_algebra(2, symbol="w")
    rep = verify_theorem_main(A, B, flip_map(A, B))
    assert rep.overall == "pass"
    assert rep.conclusion("isomorphism").passed


def test_main_vacuous_records_conclusions():
    A, B, R = perturbed_c_map(Fraction(1))
    rep = verify_theorem_main(A, B, R)
    assert rep.overall == "vacuous"
    assert not rep.hypothesis("braid").passed and not rep.hypothesis("cucu").passed
    assert rep.hypothesis("bijective").passed
    # conclusions are still evaluated; here they hold despite the hypotheses failing
    assert len(rep.conclusion_reports) == 2
    assert rep.conclusion("mirror_axioms").passed and rep.conclusion("isomorphism").passed


def test_main_singular_is_vacuous():
    # dual numbers on both sides with R(w (x) u) = 0 satisfy the axioms
    dual = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    A = make_algebra(QQ, 2, ["1", "u"], dual)
    B = make_algebra(QQ, 2, ["1", "w"], dual)
    R = LinearMap.from_columns([{0: 1}, {2: 1}, {1: 1}, {}], 4, QQ)
    rep = verify_theorem_main(A, B, R)
    assert rep.overall == "vacuous"
    assert not rep.hypothesis("bijective").passed and rep.hypothesis("braid").passed
    assert rep.conclusion("isomorphism").witness == ("unevaluable",)


def test_main_rejects_non_twisting(tower):
    A, B = c_algebra(-1), tower["quaternions"].algebra
    with pytest.raises(AxiomsFailed):
        verify_theorem_main(A, B, flip_map(A, B))


def test_report_serialisation(tower):
    rep = verify_theorem_main(*cd_setup(tower["complex"]))
    js = rep.to_json()
    assert js["theorem"] == "main" and js["overall"] == "pass"
    assert rep.lines()[0] == "theorem main: pass"
    assert '"overall": "pass"' in rep.dumps()


@pytest.mark.parametrize("name", ["complex", "quaternions", "octonions"])
def test_ext_on_cayley_dickson(name, tower):
    res = tower[name]
    A, B, R = cd_setup(res)
    rep = verify_theorem_ext(A, B, R, CONJ2, res.involution)
    assert rep.overall == "pass"
    assert [r.property for r in rep.hypothesis_reports] == ["braid", "inv1", "inv2", "inv3"]
    over = cayley_dickson(res.algebra, res.involution, -1)
    sbar = rep.artifacts["sigma_bar"]
    assert compose(sbar, over.to_twisted) == compose(over.to_twisted, over.involution.map)
    # the involution conclusion agrees with a direct check on the product table
    assert check_involution(over.twisted.algebra, sbar).passed == rep.conclusion("involution").passed


def test_ext_on_tripling(tower):
    H = tower["quaternions"]
    res = tripling(H.algebra, H.involution, 2, 3)
    A, B = res.twisted.left, res.twisted.right
    sA = LinearMap([[1, 0, 0], [0, -1, 0], [0, 0, -1]], QQ)
    rep = verify_theorem_ext(A, B, res.twisting.R, sA, H.involution)
    assert rep.overall == "pass"
    sbar = rep.artifacts["sigma_bar"]
    assert compose(sbar, res.to_twisted) == compose(res.to_twisted, res.involution.map)


def test_ext_flip_is_tensor(tower):
    A, B = c_algebra(-1), c_algebra(-1, symbol="w")
    rep = verify_theorem_ext(A, B, flip_map(A, B), CONJ2, CONJ2)
    assert rep.overall == "pass"
    assert rep.artifacts["sigma_bar"] == LinearMap([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]], QQ)


def test_ext_conclusion_matches_check_involution_on_bad_lift():
    # identity on A is an involution of the commutative C(-1); the lift need not be
    A, B, R = perturbed_c_map(Fraction(1))
    rep = verify_theorem_ext(A, B, R, identity(2), CONJ2)
    assert rep.overall == "vacuous"
    prod_alg = alt_twisted_product(A, B, R).algebra
    assert check_involution(prod_alg, rep.artifacts["sigma_bar"]).passed == rep.conclusion("involution").passed


def test_associativity_commutative_b(tower):
    rep = verify_associativity_prop(*cd_setup(tower["complex"]))
    assert rep.overall == "pass"
    assert rep.artifacts["associative"].passed
    assert [r.property for r in rep.conclusion_reports] == ["consequences"]


def test_associativity_noncommutative_b(tower):
    A, B, R = cd_setup(tower["quaternions"])
    rep = verify_associativity_prop(A, B, R)
    assert rep.overall == "pass"
    c = rep.conclusion("noncommutative_B_gives_nonassociative")
    a, b, b2 = c.witness
    assert a == B.dim and b != b2  # u (x) 1 times two noncommuting B basis elements
    assert not rep.artifacts["associative"].passed


def test_associativity_dim_one(tower):
    K = tower["K"].algebra
    H = tower["quaternions"].algebra
    with pytest.raises(PreconditionFailed) as exc:
        verify_associativity_prop(K, H, flip_map(K, H))
    assert exc.value.report.property == "dim_A"


def test_tripling_suite_quaternions(tower):
    H = tower["quaternions"]
    rep = verify_tripling_suite(H.algebra, H.involution, 2, 3)
    assert rep.overall == "pass", rep.lines()
    tags = [r.property for r in rep.conclusion_reports]
    assert tags == [
        "cross_check", "strong_lift", "trace_norm", "degree_two", "subalgebra_Bq", "subalgebra_Br",
        "never_alternative", "flexible_iff", "gram_blocks", "norm_transfer", "power_associative",
    ]
    assert rep.conclusion("never_alternative").witness == (4, 4, 8)
    assert not rep.artifacts["alternative"].passed
    assert rep.artifacts["norm_form"].rank == 12


def test_tripling_suite_octonions(tower):
    O = tower["octonions"]
    rep = verify_tripling_suite(O.algebra, O.involution, -1, -1, samples=30)
    assert rep.overall == "pass", rep.lines()
    assert rep.artifacts["flexible"].passed


def test_tripling_suite_planted_nonflexible():
    B, s = planted_nonflexible()
    rep = verify_tripling_suite(B, s, 2, 3, samples=20)
    assert rep.conclusion("flexible_iff").passed
    assert not is_flexible(B).passed and not rep.artifacts["flexible"].passed
    assert rep.overall == "pass", rep.lines()


def test_tripling_suite_is_seed_deterministic(tower):
    C = tower["complex"]
    a = verify_tripling_suite(C.algebra, C.involution, 1, -2, samples=10, seed=5).dumps()
    b = verify_tripling_suite(C.algebra, C.involution, 1, -2, samples=10, seed=5).dumps()
    assert a == b


def test_tripling_suite_k_matches_global_alternativity(tower):
    K = tower["K"]
    rep = verify_tripling_suite(K.algebra, K.involution, 1, 1)
    assert rep.conclusion("never_alternative").passed
    assert not is_alternative(rep.artifacts["result"].algebra).passed
