"""Exact arithmetic in one embedded real number field.

A field is Q[x]/(p) for a monic irreducible integer polynomial p together
with an isolating rational interval pinning down one real root.  Elements
are coordinate vectors over the power basis; every comparison is decided
exactly, by coordinate zero-test first and adaptive interval refinement
otherwise, so no floating answer ever leaks into a predicate.
"""

from fractions import Fraction

from gmpy2 import mpq

from .errors import (
    ReduciblePolynomial, NoRootInInterval, MultipleRootsInInterval,
    FieldMismatch, DimensionMismatch,
)

QQ = mpq

_QQ_ZERO = mpq(0)
_QQ_ONE = mpq(1)


def to_qq(value):
    """Coerce ints, Fractions, strings like '3/2', and mpq to mpq."""
    if isinstance(value, type(_QQ_ZERO)):
        return value
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(value)
    raise TypeError("cannot interpret %r as an exact rational" % (value,))


def qq_sign(q):
    if q > 0:
        return 1
    if q < 0:
        return -1
    return 0


def _poly_eval(coeffs, point):
    # Horner; coefficients low degree first.
    acc = _QQ_ZERO
    for c in reversed(coeffs):
        acc = acc * point + c
    return acc


class FieldElement:
    """One element of a NumberField, as power-basis coordinates."""

    __slots__ = ("field", "c", "_hash")

    def __init__(self, field, coords):
        self.field = field
        self.c = coords
        self._hash = None

    # -- basic protocol -------------------------------------------------

    def __bool__(self):
        for x in self.c:
            if x:
                return True
        return False

    def is_zero(self):
        return not self

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(self.c)
        return h

    def __eq__(self, other):
        other = self.field.coerce(other, strict=False)
        if other is None:
            return NotImplemented
        return self.c == other.c

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __repr__(self):
        return "<%s>" % (self.as_str(),)

    def as_str(self, var="r"):
        if not self:
            return "0"
        parts = []
        for k, x in enumerate(self.c):
            if not x:
                continue
            if k == 0:
                parts.append(str(x))
            else:
                mon = var if k == 1 else "%s^%d" % (var, k)
                if x == 1:
                    parts.append(mon)
                elif x == -1:
                    parts.append("-" + mon)
                else:
                    parts.append("%s*%s" % (x, mon))
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        other = self.field.coerce(other, strict=False)
        if other is None:
            return NotImplemented
        return FieldElement(self.field,
                            tuple(a + b for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self.field.coerce(other, strict=False)
        if other is None:
            return NotImplemented
        return FieldElement(self.field,
                            tuple(a - b for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        other = self.field.coerce(other, strict=False)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.c))

    def __mul__(self, other):
        other = self.field.coerce(other, strict=False)
        if other is None:
            return NotImplemented
        return self.field._mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.field.coerce(other, strict=False)
        if other is None:
            return NotImplemented
        return self.field._mul(self, self.field.inverse(other))

    def __rtruediv__(self, other):
        other = self.field.coerce(other, strict=False)
        if other is None:
            return NotImplemented
        return self.field._mul(other, self.field.inverse(self))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- order ----------------------------------------------------------

    def sign(self):
        return self.field.sign_of(self)

    def __lt__(self, other):
        other = self.field.coerce(other)
        return (self - other).sign() < 0

    def __le__(self, other):
        other = self.field.coerce(other)
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = self.field.coerce(other)
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = self.field.coerce(other)
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return self.field.approx_float(self)

    def as_rational(self):
        """The mpq value, if this element is rational; else None."""
        for x in self.c[1:]:
            if x:
                return None
        return self.c[0]


class NumberField:
    """Q[x]/(minpoly) embedded in R by an isolating interval.

    minpoly is monic with integer coefficients, low degree first.  The
    interval only ever shrinks, so signs already reported stay valid.
    """

    def __init__(self, minpoly, lo, hi):
        self.minpoly = tuple(to_qq(c) for c in minpoly)
        self.degree = len(self.minpoly) - 1
        self.lo = to_qq(lo)
        self.hi = to_qq(hi)
        d = self.degree
        # x^d = -(lower coefficients); extend to every power used by products.
        red = [None] * max(2 * d - 1, d)
        for k in range(d):
            red[k] = tuple(_QQ_ONE if i == k else _QQ_ZERO for i in range(d))
        if d >= 1:
            top = tuple(-c for c in self.minpoly[:d])
            if 2 * d - 1 > d:
                red[d] = top
                for k in range(d + 1, 2 * d - 1):
                    prev = red[k - 1]
                    shifted = (_QQ_ZERO,) + prev[: d - 1]
                    carry = prev[d - 1]
                    red[k] = tuple(s + carry * t for s, t in zip(shifted, top))
        self._reduction = red
        self.zero = FieldElement(self, (_QQ_ZERO,) * d)
        self.one = FieldElement(
            self, tuple(_QQ_ONE if i == 0 else _QQ_ZERO for i in range(d)))
        self.gen = FieldElement(
            self, tuple(_QQ_ONE if i == 1 else _QQ_ZERO for i in range(d))) \
            if d >= 2 else None
        self._float_root = None

    def __repr__(self):
        return "NumberField(%s, [%s, %s])" % (
            list(self.minpoly), self.lo, self.hi)

    def __eq__(self, other):
        return (isinstance(other, NumberField)
                and self.minpoly == other.minpoly
                and self._overlaps(other))

    def _overlaps(self, other):
        return not (self.hi < other.lo or other.hi < self.lo)

    def __hash__(self):
        return hash(self.minpoly)

    # -- construction ----------------------------------------------------

    def element(self, coords):
        cs = tuple(to_qq(c) for c in coords)
        if len(cs) != self.degree:
            raise DimensionMismatch(
                "expected %d coordinates, got %d" % (self.degree, len(cs)))
        return FieldElement(self, cs)

    def from_rational(self, q):
        q = to_qq(q)
        return FieldElement(
            self, (q,) + (_QQ_ZERO,) * (self.degree - 1))

    def coerce(self, value, strict=True):
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            if value.field == self:
                return FieldElement(self, value.c)
            rat = value.as_rational()
            if rat is not None:
                return self.from_rational(rat)
            if strict:
                raise FieldMismatch("element of %r used in %r"
                                    % (value.field, self))
            return None
        try:
            return self.from_rational(to_qq(value))
        except TypeError:
            if strict:
                raise FieldMismatch("cannot coerce %r into %r" % (value, self))
            return None

    # -- ring operations ---------------------------------------------------

    def _mul(self, a, b):
        d = self.degree
        if d == 1:
            return FieldElement(self, (a.c[0] * b.c[0],))
        ac, bc = a.c, b.c
        prod = [_QQ_ZERO] * (2 * d - 1)
        for i, ai in enumerate(ac):
            if not ai:
                continue
            for j, bj in enumerate(bc):
                if bj:
                    prod[i + j] += ai * bj
        out = list(prod[:d])
        red = self._reduction
        for k in range(d, 2 * d - 1):
            pk = prod[k]
            if pk:
                rk = red[k]
                for i in range(d):
                    if rk[i]:
                        out[i] += pk * rk[i]
        return FieldElement(self, tuple(out))

    def inverse(self, a):
        if not a:
            raise ZeroDivisionError("division by zero field element")
        d = self.degree
        if d == 1:
            return FieldElement(self, (1 / a.c[0],))
        # Extended Euclid in Q[x] against the (irreducible) minimal polynomial.
        r0 = list(self.minpoly)
        r1 = list(a.c)
        while r1 and not r1[-1]:
            r1.pop()
        s0, s1 = [], [_QQ_ONE]
        while True:
            if len(r1) == 1:
                inv = 1 / r1[0]
                coeffs = [c * inv for c in s1]
                coeffs += [_QQ_ZERO] * (d - len(coeffs))
                return FieldElement(self, tuple(coeffs[:d]))
            q, rem = _poly_divmod(r0, r1)
            s_next = _poly_sub(s0, _poly_mul(q, s1))
            r0, r1 = r1, rem
            s0, s1 = s1, s_next
            if not r1:
                raise ArithmeticError("minimal polynomial not irreducible")

    # -- signs -------------------------------------------------------------

    def sign_of(self, a):
        """Exact sign of the real number a represents."""
        if not a:
            return 0
        if self.degree == 1:
            # Single rational root: minpoly = x - c up to scale.
            return qq_sign(a.c[0] * self._rational_root_power_sign())
        while True:
            lo_v, hi_v = self._interval_value(a)
            if lo_v > 0:
                return 1
            if hi_v < 0:
                return -1
            self._refine()

    def _rational_root_power_sign(self):
        # Degree 1 keeps coords as multiples of 1; root irrelevant.
        return _QQ_ONE

    def _interval_value(self, a):
        val_lo = val_hi = _QQ_ZERO
        ivs = self._interval_powers()
        for k, coeff in enumerate(a.c):
            if not coeff:
                continue
            plo, phi = ivs[k]
            t1, t2 = coeff * plo, coeff * phi
            if t1 > t2:
                t1, t2 = t2, t1
            val_lo += t1
            val_hi += t2
        return val_lo, val_hi

    def _interval_powers(self):
        powers = [(_QQ_ONE, _QQ_ONE), (self.lo, self.hi)]
        for _ in range(2, self.degree):
            a, b = powers[-1]
            lo, hi = self.lo, self.hi
            cands = (a * lo, a * hi, b * lo, b * hi)
            powers.append((min(cands), max(cands)))
        return powers

    def _refine(self):
        mid = (self.lo + self.hi) / 2
        v = _poly_eval(self.minpoly, mid)
        if v == 0:
            # Irreducibility of degree >= 2 forbids rational roots.
            raise ArithmeticError("rational root hit during refinement")
        v_lo = _poly_eval(self.minpoly, self.lo)
        if qq_sign(v) == qq_sign(v_lo):
            self.lo = mid
        else:
            self.hi = mid
        self._float_root = None

    def refine_to(self, width):
        width = to_qq(width)
        while self.hi - self.lo > width:
            self._refine()

    def approx_float(self, a):
        if self.degree == 1:
            return float(a.c[0])
        if self._float_root is None:
            self.refine_to(mpq(1, 1 << 80))
            self._float_root = float((self.lo + self.hi) / 2)
        root = self._float_root
        acc = 0.0
        for c in reversed(a.c):
            acc = acc * root + float(c)
        return acc


def _poly_divmod(num, den):
    num = list(num)
    d = len(den) - 1
    lead = den[-1]
    q = [_QQ_ZERO] * max(len(num) - d, 1)
    while len(num) - 1 >= d and any(num):
        while num and not num[-1]:
            num.pop()
        if len(num) - 1 < d:
            break
        factor = num[-1] / lead
        shift = len(num) - 1 - d
        q[shift] = factor
        for i, c in enumerate(den):
            num[shift + i] -= factor * c
        num.pop()
    while num and not num[-1]:
        num.pop()
    return q, num


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [_QQ_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [_QQ_ZERO] * (n - len(a))
    b = list(b) + [_QQ_ZERO] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


class RationalDomain:
    """Scalar domain of plain gmpy2 rationals.

    Mirrors the small part of the NumberField interface the rest of the
    package relies on (zero, one, from_rational, sign_of, approx_float),
    so degree-one problems run on raw mpq without wrapper overhead.
    """

    degree = 1
    zero = _QQ_ZERO
    one = _QQ_ONE

    def from_rational(self, q):
        return to_qq(q)

    coerce = from_rational

    def sign_of(self, q):
        return qq_sign(q)

    def approx_float(self, q):
        return float(q)

    def __repr__(self):
        return "RationalDomain()"

    def __eq__(self, other):
        return isinstance(other, RationalDomain)

    def __hash__(self):
        return hash("RationalDomain")


_RATIONAL_DOMAIN = RationalDomain()


def scalar_domain(field):
    """The working scalar domain for a base field: raw rationals when the
    field is Q itself, the field otherwise."""
    if field is None or field.degree == 1:
        return _RATIONAL_DOMAIN
    return field


_RATIONALS = None


def rational_field():
    """The degree-1 field Q, with minimal polynomial x - 1."""
    global _RATIONALS
    if _RATIONALS is None:
        _RATIONALS = NumberField((-1, 1), 1, 1)
    return _RATIONALS


def make_field(minpoly, lo, hi):
    """Validated field constructor.

    minpoly: monic integer coefficients, low degree first.
    [lo, hi]: rational interval that must isolate exactly one real root.
    """
    coeffs = [to_qq(c) for c in minpoly]
    if len(coeffs) < 2:
        raise DimensionMismatch("minimal polynomial must have degree >= 1")
    if coeffs[-1] != 1:
        raise ReduciblePolynomial("minimal polynomial must be monic")
    for c in coeffs:
        if c.denominator != 1:
            raise ReduciblePolynomial(
                "minimal polynomial must have integer coefficients")
    if len(coeffs) == 2:
        return NumberField(coeffs, -coeffs[0], -coeffs[0])

    import sympy
    x = sympy.Symbol("x")
    poly = sympy.Poly(sum(int(c) * x ** k for k, c in enumerate(coeffs)), x)
    if not poly.is_irreducible:
        raise ReduciblePolynomial("%s is reducible over Q" % (poly.expr,))
    lo_q, hi_q = to_qq(lo), to_qq(hi)
    if hi_q < lo_q:
        lo_q, hi_q = hi_q, lo_q
    frac = lambda q: Fraction(int(q.numerator), int(q.denominator))
    n_roots = poly.count_roots(frac(lo_q), frac(hi_q))
    if n_roots == 0:
        raise NoRootInInterval("no real root of %s in [%s, %s]"
                               % (poly.expr, lo_q, hi_q))
    if n_roots > 1:
        raise MultipleRootsInInterval(
            "%d roots of %s in [%s, %s]" % (n_roots, poly.expr, lo_q, hi_q))
    # Nudge endpoints off the root so bisection signs are clean.
    fld = NumberField(coeffs, lo_q, hi_q)
    if _poly_eval(fld.minpoly, fld.lo) == 0 or \
            _poly_eval(fld.minpoly, fld.hi) == 0:
        raise MultipleRootsInInterval(
            "interval endpoint is a root; irreducible polynomials of degree "
            ">= 2 cannot have rational roots, so the input is inconsistent")
    return fld
