from gmpy2 import mpq
import pytest
from hypothesis import given, settings, strategies as st

from unitgroup.shortvec import (
    lll_transform, minimal_vectors, enumerate_up_to, box_oracle,
    nearest_int, canonical_sign,
)
from unitgroup.scalars import scalar_domain, make_field
from unitgroup.errors import NotPositive
from unitgroup import linalg

QD = scalar_domain(None)


def qmat(rows):
    return [[mpq(x) for x in row] for row in rows]


def test_nearest_int():
    assert nearest_int(mpq(7, 2), QD) == 4      # ties go up
    assert nearest_int(mpq(-7, 2), QD) == -3
    assert nearest_int(mpq(10, 3), QD) == 3
    K = make_field((-2, 0, 1), 1, "3/2")
    assert nearest_int(K.gen, K) == 1
    assert nearest_int(3 * K.gen, K) == 4       # 4.24...
    assert nearest_int(-K.gen, K) == -1


def test_canonical_sign():
    assert canonical_sign([0, -1, 2]) == (0, 1, -2)
    assert canonical_sign([1, -1]) == (1, -1)
    assert canonical_sign([0, 0]) == (0, 0)


def test_minimal_vectors_identity():
    m, vecs = minimal_vectors(qmat([[1, 0], [0, 1]]), QD)
    assert m == 1
    assert vecs == [(0, 1), (1, 0)]


def test_minimal_vectors_hexagonal():
    # the hexagonal form has three minimal pairs, by hand
    m, vecs = minimal_vectors(qmat([[2, 1], [1, 2]]), QD)
    assert m == 2
    assert vecs == [(0, 1), (1, -1), (1, 0)]


def test_minimal_vectors_skewed():
    # 5x^2+6xy+2y^2: minimum 1 at (1,-1) and (1,-2), by hand
    m, vecs = minimal_vectors(qmat([[5, 3], [3, 2]]), QD)
    assert m == 1
    assert vecs == [(1, -2), (1, -1)]
    oracle = box_oracle(qmat([[5, 3], [3, 2]]), 4, QD)
    assert (m, vecs) == oracle


def test_enumerate_up_to():
    out = enumerate_up_to(qmat([[1, 0], [0, 1]]), mpq(2), QD)
    assert [v for v, _ in out] == [(0, 1), (1, -1), (1, 0), (1, 1)]
    assert all(val <= 2 for _, val in out)


def test_rejects_indefinite():
    with pytest.raises(NotPositive):
        minimal_vectors(qmat([[1, 0], [0, -1]]), QD)


def test_lll_preserves_gram_class():
    G = qmat([[10, 7], [7, 5]])
    red, U = lll_transform(G, QD)
    Um = [[mpq(x) for x in row] for row in U]
    back = linalg.mat_mul(linalg.mat_mul(Um, G), linalg.transpose(Um))
    assert back == red
    assert abs(linalg.det(Um)) == 1
    assert red[0][0] <= G[0][0]


def test_field_gram_frozen():
    # 2x^2 + 2 sqrt2 xy + 2y^2: minimum 4 - 2 sqrt2 at (1,-1), by hand
    K = make_field((-2, 0, 1), 1, "3/2")
    r = K.gen
    two = K.from_rational(2)
    G = [[two, r], [r, two]]
    m, vecs = minimal_vectors(G, K)
    assert m == K.element([4, -2])
    assert vecs == [(1, -1)]
    oracle = box_oracle(G, 3, K)
    assert (m, vecs) == oracle


# entry bound 2 keeps every diagonal below 16, so no minimal vector can
# have a coordinate outside the radius-3 oracle box
small_entries = st.integers(min_value=-2, max_value=2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small_entries, min_size=3, max_size=3),
                min_size=3, max_size=3))
def test_minimal_vectors_match_box_oracle(rows):
    # build a PD Gram as U^T U + I from random integer entries
    U = qmat(rows)
    G = linalg.mat_mul(linalg.transpose(U), U)
    for i in range(3):
        G[i][i] += 1
    m, vecs = minimal_vectors(G, QD)
    om, ovecs = box_oracle(G, 3, QD)
    assert m == om
    assert vecs == ovecs
