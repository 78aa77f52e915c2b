from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from alttwist.errors import Singular
from alttwist.linalg import (
    LinearMap,
    compose,
    flip,
    identity,
    invert,
    is_invertible,
    matrix_rank,
    permutation,
    rank,
    span_rank,
    tensor,
)
from alttwist.scalars import QQ, FieldSpec, make_field

GF7 = make_field(FieldSpec.prime(7))

small = st.integers(-4, 4).map(Fraction)


def matrices(rows=st.integers(1, 5), cols=st.integers(1, 5)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    )


def square(n_max=5):
    return st.integers(1, n_max).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)
    )


def naive_rank(rows):
    """Plain Fraction Gauss elimination, the oracle for the fraction-free rank."""
    m = [list(map(Fraction, r)) for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


@given(matrices())
def test_rank_matches_oracle(rows):
    assert matrix_rank(rows, QQ) == naive_rank(rows)


@given(matrices())
def test_rank_of_transpose(rows):
    t = [list(c) for c in zip(*rows)]
    assert matrix_rank(rows, QQ) == matrix_rank(t, QQ)


def test_rank_fractions():
    rows = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]
    assert matrix_rank(rows, QQ) == 1


def test_rank_gfp():
    # rank 2 over Q, rank 1 mod 7
    rows = [[GF7(1), GF7(2)], [GF7(3), GF7(13)]]
    assert matrix_rank(rows, GF7) == 1
    assert matrix_rank([[1, 2], [3, 13]], QQ) == 2


def test_span_rank():
    assert span_rank([{0: 1}, {1: 1}, {0: 1, 1: 1}], 3, QQ) == 2


@given(square())
def test_invert_round_trip(rows):
    m = LinearMap(rows, QQ)
    if naive_rank(rows) < len(rows):
        assert not is_invertible(m)
        with pytest.raises(Singular):
            invert(m)
        return
    inv = invert(m)
    assert (m @ inv).is_identity()
    assert (inv @ m).is_identity()


@given(matrices(), matrices())
def test_compose_matches_matmul(a, b):
    if len(a[0]) != len(b):
        b = [list(r) for r in b[:1]] * len(a[0])
    ma, mb = LinearMap(a, QQ), LinearMap(b, QQ)
    assert compose(ma, mb) == LinearMap(matmul(a, b), QQ)


def test_identity_and_tensor():
    assert invert(identity(3)) == identity(3)
    assert tensor(identity(2), identity(3)) == identity(6)


@given(matrices(st.integers(1, 3), st.integers(1, 3)), matrices(st.integers(1, 3), st.integers(1, 3)))
def test_tensor_index_convention(a, b):
    t = tensor(LinearMap(a, QQ), LinearMap(b, QQ))
    p, q = len(b), len(b[0])
    for i in range(len(a)):
        for j in range(len(a[0])):
            for k in range(p):
                for l in range(q):
                    assert t.entries[i * p + k][j * q + l] == a[i][j] * b[k][l]


def test_flip():
    f = flip(2, 3)
    # v_i (x) w_j at i*3+j goes to w_j (x) v_i at j*2+i
    for i in range(2):
        for j in range(3):
            assert f.column(i * 3 + j) == {j * 2 + i: 1}
    assert compose(flip(3, 2), f).is_identity()


def test_permutation():
    p = permutation([2, 0, 1])
    assert p.column(0) == {2: 1}
    assert p.apply([1, 2, 3]) == (2, 3, 1)


def test_linear_map_json_round_trip():
    m = LinearMap([[Fraction(1, 2), 0], [-3, 1]], QQ)
    assert LinearMap.from_json(m.to_json(), QQ) == m
    assert m.to_json() == [["1/2", "0"], ["-3", "1"]]


def test_rank_of_map():
    assert rank(LinearMap([[1, 2], [2, 4]], QQ)) == 1
