import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from unitgroup.scalars import make_field, rational_field, to_qq, QQ
from unitgroup.errors import (
    ReduciblePolynomial, NoRootInInterval, MultipleRootsInInterval,
    FieldMismatch, DimensionMismatch,
)

# Hand-checked values, frozen before the implementation existed:
#   sqrt2 = 1.41421...;  2 - sqrt2 > 0;  sqrt2 - 3/2 < 0
#   t^3 - 3t + 1 has roots near -1.879, 0.347, 1.532
#   for t = 1.53209 (the root in [3/2, 8/5]):
#     t^3      = 3t - 1          -> coords (-1, 3, 0)
#     1/t      = 3 - t^2         -> coords (3, 0, -1)
#     t^2-t-1  = 2.34730-2.53209 -> negative

SQRT2 = ((-2, 0, 1), 1, "3/2")
CUBIC = ((1, -3, 0, 1), "3/2", "8/5")


def sqrt2_field():
    return make_field(*SQRT2)


def test_to_qq_accepts_common_inputs():
    assert to_qq(3) == mpq(3)
    assert to_qq("3/2") == mpq(3, 2)
    from fractions import Fraction
    assert to_qq(Fraction(-7, 5)) == mpq(-7, 5)
    with pytest.raises(TypeError):
        to_qq(1.5)


def test_sqrt2_sign_oracles():
    K = sqrt2_field()
    r = K.gen
    assert (2 - r).sign() == 1
    assert (r - QQ(3) / 2).sign() == -1
    assert (r * r - 2).sign() == 0
    assert r * r == K.from_rational(2)


def test_sqrt2_inverse():
    K = sqrt2_field()
    r = K.gen
    assert 1 / r == K.element([0, "1/2"])
    assert (1 / r) * r == K.one


def test_cubic_frozen_coords():
    K = make_field(*CUBIC)
    t = K.gen
    assert (t * t * t).c == (mpq(-1), mpq(3), mpq(0))
    assert (1 / t).c == (mpq(3), mpq(0), mpq(-1))
    assert (t * t - t - 1).sign() == -1
    assert t > 1 and t < 2


def test_comparisons_follow_real_embedding():
    K = sqrt2_field()
    r = K.gen
    assert r < QQ(3) / 2
    assert r > QQ(7) / 5
    assert sorted([r, K.from_rational(1), 2 - r])[0] == 2 - r


def test_float_approximation():
    K = sqrt2_field()
    x = float(K.gen)
    assert abs(x * x - 2) < 1e-12
    Kc = make_field(*CUBIC)
    t = float(Kc.gen)
    assert abs(t ** 3 - 3 * t + 1) < 1e-10


def test_degree_one_field():
    Q = rational_field()
    a = Q.from_rational("7/3")
    b = Q.from_rational(-2)
    assert (a * b).c == (mpq(-14, 3),)
    assert (a + b).sign() == 1
    assert float(b) == -2.0


def test_validation_errors():
    with pytest.raises(ReduciblePolynomial):
        make_field((-4, 0, 1), 1, 3)          # (x-2)(x+2)
    with pytest.raises(ReduciblePolynomial):
        make_field((0, 0, 2), 0, 1)           # not monic
    with pytest.raises(NoRootInInterval):
        make_field((-2, 0, 1), 2, 3)
    with pytest.raises(MultipleRootsInInterval):
        make_field((-2, 0, 1), -2, 2)
    with pytest.raises(DimensionMismatch):
        make_field((1,), 0, 1)


def test_cross_field_mixing_is_rejected():
    K = sqrt2_field()
    L = make_field(*CUBIC)
    with pytest.raises(FieldMismatch):
        K.gen < L.gen
    # addition returns NotImplemented on both sides -> TypeError
    with pytest.raises(TypeError):
        K.gen + L.gen


def test_rational_subfield_interop():
    K = sqrt2_field()
    r = K.gen
    assert r + 1 == K.element([1, 1])
    assert 1 + r == K.element([1, 1])
    assert 3 * r - r == 2 * r
    assert (r / 2).c == (mpq(0), mpq(1, 2))
    assert K.coerce("5/4") == K.element(["5/4", 0])


rationals = st.fractions(min_value=-10 ** 6, max_value=10 ** 6,
                         max_denominator=10 ** 3)


@st.composite
def sqrt2_elements(draw):
    K = _SHARED_SQRT2
    return K.element([draw(rationals), draw(rationals)])


_SHARED_SQRT2 = make_field(*SQRT2)


@settings(max_examples=120, deadline=None)
@given(sqrt2_elements(), sqrt2_elements())
def test_sign_is_multiplicative(x, y):
    assert (x * y).sign() == x.sign() * y.sign()


@settings(max_examples=120, deadline=None)
@given(sqrt2_elements(), sqrt2_elements())
def test_field_axioms_spotcheck(x, y):
    assert x + y == y + x
    assert x + (-x) == _SHARED_SQRT2.zero
    if y:
        assert (x / y) * y == x
    assert (x - y) + y == x


@settings(max_examples=120, deadline=None)
@given(sqrt2_elements())
def test_galois_norm_is_rational(x):
    conj = _SHARED_SQRT2.element([x.c[0], -x.c[1]])
    assert (x * conj).as_rational() is not None


@settings(max_examples=60, deadline=None)
@given(sqrt2_elements())
def test_squares_are_nonnegative(x):
    assert (x * x).sign() >= 0
    assert abs(x).sign() >= 0
