"""Exact model of a simple rational algebra acting on a lattice.

Three layers:

  * StructureAlgebra -- a container algebra over an embedded real scalar
    domain, given by sparse structure constants, together with a positive
    involution (dagger) and a trace functional.  All ambient computation
    (products, inverses, form evaluation) happens here.
  * EmbeddedAlgebra -- the rational algebra of interest, as a Q-basis of
    container elements.  Rational structure constants are recovered by
    exact linear solves, which simultaneously proves the basis closed.
  * Lattice -- a full Z-lattice in a simple left module, stored through
    its container images.  Units act on the left; their matrices are the
    integer data everything downstream (stabilizers, words) runs on.

Elements are plain coordinate tuples; classes carry the operations.
"""

from gmpy2 import mpq

from . import linalg
from .errors import (
    DimensionMismatch, NotInAlgebra, OrderNotClosed, PositivityFailure,
    NotAUnit,
)
from .scalars import to_qq, qq_sign


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def flatten_scalar(x):
    """Rational coordinates of one scalar: mpq -> (x,), field element -> x.c"""
    c = getattr(x, "c", None)
    return c if c is not None else (x,)


def flatten_vector(v):
    out = []
    for x in v:
        out.extend(flatten_scalar(x))
    return out


class StructureAlgebra:
    """Associative algebra with involution and trace over a scalar domain.

    table[i][j] is a sparse tuple of (k, coeff) pairs with
    e_i * e_j = sum coeff * e_k.  dagger_rows acts on coordinate vectors,
    trace_row pairs against them; both are scalar-domain linear.
    """

    def __init__(self, domain, table, one_coords, dagger_rows, trace_row,
                 label=""):
        self.domain = domain
        self.dim = len(table)
        self.table = table
        self.one = tuple(one_coords)
        self.dagger_rows = [tuple(r) for r in dagger_rows]
        self.trace_row = tuple(trace_row)
        self.label = label
        self.zero = (domain.zero,) * self.dim

    def __repr__(self):
        return "StructureAlgebra(%s, dim=%d)" % (self.label or "?", self.dim)

    def basis_vector(self, i):
        return tuple(self.domain.one if j == i else self.domain.zero
                     for j in range(self.dim))

    def mul(self, a, b):
        out = list(self.zero)
        table = self.table
        for i, ai in enumerate(a):
            if not ai:
                continue
            ti = table[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                p = ai * bj
                for k, coeff in ti[j]:
                    out[k] = out[k] + p * coeff
        return tuple(out)

    def dagger(self, a):
        return tuple(linalg.mat_vec(self.dagger_rows, list(a)))

    def trace(self, a):
        acc = self.domain.zero
        for t, x in zip(self.trace_row, a):
            if t and x:
                acc = acc + t * x
        return acc

    def pairing(self, a, b):
        """Trace form <a, b> = trace(a * b)."""
        return self.trace(self.mul(a, b))

    def is_symmetric(self, a):
        return self.dagger(a) == tuple(a)

    def left_mult_rows(self, a):
        cols = [self.mul(a, self.basis_vector(j)) for j in range(self.dim)]
        return [list(col) for col in zip(*cols)]

    def inv(self, a):
        """Two-sided inverse, or None."""
        solver = linalg.LinearSolver(self.left_mult_rows(a))
        x = solver.solve(list(self.one))
        if x is None:
            return None
        x = tuple(x)
        if self.mul(x, a) != self.one:
            return None
        return x

    def sign(self, x):
        return self.domain.sign_of(x)

    def validate(self):
        """Check every axiom the downstream theory leans on."""
        n = self.dim
        basis = [self.basis_vector(i) for i in range(n)]
        for j in range(n):
            if self.mul(self.one, basis[j]) != basis[j] or \
                    self.mul(basis[j], self.one) != basis[j]:
                raise NotInAlgebra("identity fails on basis vector %d" % j)
        prods = [[self.mul(basis[i], basis[j]) for j in range(n)]
                 for i in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.mul(prods[i][j], basis[k]) != \
                            self.mul(basis[i], prods[j][k]):
                        raise NotInAlgebra(
                            "associativity fails at (%d, %d, %d)" % (i, j, k))
        dag = [self.dagger(b) for b in basis]
        for i in range(n):
            if self.dagger(dag[i]) != basis[i]:
                raise NotInAlgebra("dagger is not an involution")
        for i in range(n):
            for j in range(n):
                if self.dagger(prods[i][j]) != self.mul(dag[j], dag[i]):
                    raise NotInAlgebra("dagger is not an anti-automorphism")
        if self.dagger(self.one) != self.one:
            raise NotInAlgebra("dagger moves the identity")
        for i in range(n):
            for j in range(n):
                if self.trace(prods[i][j]) != self.trace(prods[j][i]):
                    raise NotInAlgebra("trace is not symmetric")
            if self.trace(dag[i]) != self.trace(basis[i]):
                raise NotInAlgebra("trace is not dagger-invariant")
        gram = [[self.trace(self.mul(basis[i], dag[j])) for j in range(n)]
                for i in range(n)]
        if not linalg.is_positive_definite(gram, self.sign):
            raise PositivityFailure(
                "trace form x -> trace(x * dagger(x)) is not positive "
                "definite; the involution is not positive")
        return True


class EmbeddedAlgebra:
    """Rational algebra A presented by container images of a Q-basis."""

    def __init__(self, ambient, img_basis, label=""):
        self.ambient = ambient
        self.dim = len(img_basis)
        self.img_basis = [tuple(v) for v in img_basis]
        self.label = label
        cols = [flatten_vector(v) for v in self.img_basis]
        rows = [list(r) for r in zip(*cols)]
        self._img_solver = linalg.LinearSolver(rows)
        if self._img_solver.rank != self.dim:
            raise DimensionMismatch(
                "algebra basis images are linearly dependent")
        one = self.from_img(ambient.one)
        if one is None:
            raise NotInAlgebra("container identity is not in the algebra")
        self.one = one
        self.table = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                w = ambient.mul(self.img_basis[i], self.img_basis[j])
                coords = self.from_img(w)
                if coords is None:
                    raise NotInAlgebra(
                        "product of basis elements %d and %d leaves the "
                        "algebra" % (i, j))
                row.append(tuple((k, c) for k, c in enumerate(coords) if c))
            self.table.append(row)
        self.zero = (mpq(0),) * self.dim

    def __repr__(self):
        return "EmbeddedAlgebra(%s, dim=%d)" % (self.label or "?", self.dim)

    def img(self, a):
        out = list(self.ambient.zero)
        for t, at in enumerate(a):
            if at:
                for i, x in enumerate(self.img_basis[t]):
                    if x:
                        out[i] = out[i] + at * x
        return tuple(out)

    def from_img(self, w):
        x = self._img_solver.solve(flatten_vector(w))
        return tuple(x) if x is not None else None

    def mul(self, a, b):
        out = [mpq(0)] * self.dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            ti = self.table[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                p = ai * bj
                for k, coeff in ti[j]:
                    out[k] += p * coeff
        return tuple(out)

    def basis_vector(self, t):
        return tuple(mpq(1 if i == t else 0) for i in range(self.dim))

    def coerce(self, coords):
        cs = tuple(to_qq(c) for c in coords)
        if len(cs) != self.dim:
            raise DimensionMismatch(
                "expected %d algebra coordinates, got %d"
                % (self.dim, len(cs)))
        return cs

    def inv(self, a):
        """Inverse inside A, or None if a is not invertible."""
        cols = [self.mul(a, self.basis_vector(j)) for j in range(self.dim)]
        rows = [list(r) for r in zip(*cols)]
        x = linalg.LinearSolver(rows).solve(list(self.one))
        if x is None:
            return None
        x = tuple(x)
        if self.mul(x, a) != self.one:
            return None
        return x


class ZSpan:
    """Z-span of a rational basis; exact membership by integrality."""

    def __init__(self, basis_rows):
        self.basis = [tuple(to_qq(x) for x in row) for row in basis_rows]
        n = len(self.basis)
        if any(len(row) != n for row in self.basis):
            raise DimensionMismatch("span basis must be square full-rank")
        cols = [[row[i] for row in self.basis] for i in range(n)]
        try:
            self._inv_rows = linalg.inverse(cols)
        except ZeroDivisionError:
            raise DimensionMismatch("span basis rows are dependent")
        self.rank = n

    def coords(self, v):
        return tuple(linalg.mat_vec(self._inv_rows, list(v)))

    def contains(self, v):
        return all(c.denominator == 1 for c in self.coords(v))

    def element(self, int_coords):
        out = [mpq(0)] * self.rank
        for c, row in zip(int_coords, self.basis):
            if c:
                for i, x in enumerate(row):
                    out[i] += c * x
        return tuple(out)


class Lattice:
    """Full Z-lattice in a simple left A-module, via container images.

    sigma_images[i] is the container image of the i-th basis vector; the
    module itself never needs separate coordinates.  Unit action matrices
    are integer B x B, with columns u * basis[j] in lattice coordinates.
    """

    def __init__(self, ambient, algebra, sigma_images, endo_elements):
        self.ambient = ambient
        self.algebra = algebra
        self.sigma_images = [tuple(v) for v in sigma_images]
        self.rank = len(self.sigma_images)
        cols = [flatten_vector(v) for v in self.sigma_images]
        rows = [list(r) for r in zip(*cols)]
        self._solver = linalg.LinearSolver(rows)
        if self._solver.rank != self.rank:
            raise DimensionMismatch("lattice basis images are dependent")
        for t in range(algebra.dim):
            gen = algebra.img(algebra.basis_vector(t))
            for j in range(self.rank):
                w = ambient.mul(gen, self.sigma_images[j])
                if self.coords_of(w) is None:
                    raise NotInAlgebra(
                        "algebra action does not preserve the module span")
        self.endo_matrices = []
        for c in endo_elements:
            M = self._right_mult_matrix(c)
            if M is None:
                raise NotInAlgebra(
                    "declared endomorphism does not preserve the module")
            self.endo_matrices.append(M)

    def coords_of(self, w):
        x = self._solver.solve(flatten_vector(w))
        return tuple(x) if x is not None else None

    def vector_image(self, int_coords):
        """Container image of an integer lattice vector."""
        out = list(self.ambient.zero)
        for c, img in zip(int_coords, self.sigma_images):
            if c:
                for i, x in enumerate(img):
                    if x:
                        out[i] = out[i] + c * x
        return tuple(out)

    def _right_mult_matrix(self, c):
        cols = []
        for j in range(self.rank):
            w = self.ambient.mul(self.sigma_images[j], c)
            coords = self.coords_of(w)
            if coords is None:
                return None
            cols.append(coords)
        return [list(r) for r in zip(*cols)]

    def left_action_matrix(self, img_u):
        """Matrix of x -> u.x, columns over the lattice basis, or None."""
        cols = []
        for j in range(self.rank):
            w = self.ambient.mul(img_u, self.sigma_images[j])
            coords = self.coords_of(w)
            if coords is None:
                return None
            cols.append(coords)
        return [[cols[j][i] for j in range(self.rank)]
                for i in range(self.rank)]


def _int_matrix(rows):
    out = []
    for row in rows:
        new = []
        for x in row:
            if x.denominator != 1:
                return None
            new.append(int(x))
        out.append(tuple(new))
    return tuple(out)


def int_mat_mul(A, B):
    n = len(A)
    Bt = tuple(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt)
                 for row in A)


def int_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n))
                 for i in range(n))


class UnitElement:
    """A unit of the order, with its exact inverse and lattice action.

    Equality and hashing go through the integer action matrix, which is
    faithful because the module is and the lattice is full.
    """

    __slots__ = ("group", "a", "a_inv", "rho", "rho_inv", "_hash")

    def __init__(self, group, a, a_inv, rho, rho_inv):
        self.group = group
        self.a = a
        self.a_inv = a_inv
        self.rho = rho
        self.rho_inv = rho_inv
        self._hash = None

    def __repr__(self):
        return "UnitElement(%s)" % (list(self.a),)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rho)
        return self._hash

    def __eq__(self, other):
        return isinstance(other, UnitElement) and self.rho == other.rho

    def __mul__(self, other):
        return UnitElement(
            self.group,
            self.group.algebra.mul(self.a, other.a),
            self.group.algebra.mul(other.a_inv, self.a_inv),
            int_mat_mul(self.rho, other.rho),
            int_mat_mul(other.rho_inv, self.rho_inv))

    def inverse(self):
        return UnitElement(self.group, self.a_inv, self.a,
                           self.rho_inv, self.rho)

    def is_identity(self):
        return self.rho == self.group.identity.rho

    def img(self):
        return self.group.algebra.img(self.a)

    def element_order(self, cap=10000):
        power = self
        for n in range(1, cap + 1):
            if power.is_identity():
                return n
            power = power * self
        return None


class UnitContext:
    """Factory tying together algebra, order, and lattice for units."""

    def __init__(self, algebra, lattice, order_span):
        self.algebra = algebra
        self.lattice = lattice
        self.order = order_span
        one = algebra.one
        ident = int_identity(lattice.rank)
        self.identity = UnitElement(self, one, one, ident, ident)

    def unit(self, a_coords):
        """Build the unit with the given order-element coordinates.

        Raises NotAUnit unless the element and its inverse both lie in
        the order and both act integrally on the lattice.
        """
        a = self.algebra.coerce(a_coords)
        if not self.order.contains(a):
            raise NotAUnit("element is not in the order")
        a_inv = self.algebra.inv(a)
        if a_inv is None or not self.order.contains(a_inv):
            raise NotAUnit("element is not invertible in the order")
        rho = self.lattice.left_action_matrix(self.algebra.img(a))
        rho_i = self.lattice.left_action_matrix(self.algebra.img(a_inv))
        rho = _int_matrix(rho) if rho is not None else None
        rho_i = _int_matrix(rho_i) if rho_i is not None else None
        if rho is None or rho_i is None:
            raise NotAUnit("unit does not act integrally on the lattice")
        return UnitElement(self, a, a_inv, rho, rho_i)

    def try_unit(self, a_coords):
        try:
            return self.unit(a_coords)
        except NotAUnit:
            return None

    def minus_one(self):
        return self.unit(tuple(-x for x in self.algebra.one))


class AlgebraSetup:
    """Everything a named construction provides before options apply."""

    def __init__(self, ambient, img_basis, order_basis, sigma_images,
                 endo_elements, label):
        self.ambient = ambient
        self.img_basis = img_basis
        self.order_basis = order_basis
        self.sigma_images = sigma_images
        self.endo_elements = endo_elements
        self.label = label


def _quaternion_table(a, b):
    """Structure constants of (a, b): i*i = a, j*j = b, i*j = -j*i = k."""
    a, b = to_qq(a), to_qq(b)
    one, i, j, k = range(4)
    t = {}
    t[one, one] = ((one, 1),)
    t[one, i] = ((i, 1),)
    t[one, j] = ((j, 1),)
    t[one, k] = ((k, 1),)
    t[i, one] = ((i, 1),)
    t[j, one] = ((j, 1),)
    t[k, one] = ((k, 1),)
    t[i, i] = ((one, a),)
    t[i, j] = ((k, 1),)
    t[i, k] = ((j, a),)
    t[j, i] = ((k, -1),)
    t[j, j] = ((one, b),)
    t[j, k] = ((i, -b),)
    t[k, i] = ((j, -a),)
    t[k, j] = ((i, b),)
    t[k, k] = ((one, -a * b),)
    return [[tuple((kk, mpq(c)) for kk, c in t[x, y]) for y in range(4)]
            for x in range(4)]


def matrix_algebra(n):
    """M_n(Q) with transpose and matrix trace; module Q^n, lattice Z^n."""
    from .scalars import scalar_domain
    dom = scalar_domain(None)
    m = n * n
    idx = lambda r, s: r * n + s
    table = [[() for _ in range(m)] for _ in range(m)]
    for r in range(n):
        for s in range(n):
            for t in range(n):
                for u in range(n):
                    if s == t:
                        table[idx(r, s)][idx(t, u)] = ((idx(r, u), mpq(1)),)
    one = [mpq(1 if r == s else 0) for r in range(n) for s in range(n)]
    dagger = [[mpq(0)] * m for _ in range(m)]
    for r in range(n):
        for s in range(n):
            dagger[idx(s, r)][idx(r, s)] = mpq(1)
    trace = [mpq(1 if r == s else 0) for r in range(n) for s in range(n)]
    amb = StructureAlgebra(dom, table, one, dagger, trace,
                           label="M%d(Q)" % n)
    img_basis = [amb.basis_vector(i) for i in range(m)]
    order_basis = [tuple(mpq(1 if i == t else 0) for i in range(m))
                   for t in range(m)]
    sigma = [amb.basis_vector(idx(r, 0)) for r in range(n)]
    endo = [amb.basis_vector(idx(0, 0))]
    return AlgebraSetup(amb, img_basis, order_basis, sigma, endo,
                        "M%d(Q)" % n)


def _matrix_container(field, n, label):
    """n x n matrices over a scalar domain, transpose, matrix trace."""
    m = n * n
    idx = lambda r, s: r * n + s
    zero, one = field.zero, field.one
    table = [[() for _ in range(m)] for _ in range(m)]
    for r in range(n):
        for s in range(n):
            for t in range(n):
                for u in range(n):
                    if s == t:
                        table[idx(r, s)][idx(t, u)] = ((idx(r, u), one),)
    one_c = [one if r == s else zero for r in range(n) for s in range(n)]
    dagger = [[zero] * m for _ in range(m)]
    for r in range(n):
        for s in range(n):
            dagger[idx(s, r)][idx(r, s)] = one
    trace = [one if r == s else zero for r in range(n) for s in range(n)]
    return StructureAlgebra(field, table, one_c, dagger, trace, label=label)


def quaternion_split(a, b, split_on="a"):
    """Rational quaternion algebra (a, b) split into 2x2 matrices over
    Q(sqrt(a)) or Q(sqrt(b)); the split entry must be positive."""
    from .scalars import make_field
    a, b = to_qq(a), to_qq(b)
    root_of = a if split_on == "a" else b
    if split_on not in ("a", "b"):
        raise ValueError("split_on must be 'a' or 'b'")
    if root_of <= 0:
        raise PositivityFailure(
            "cannot split on a nonpositive parameter; the matrix model "
            "needs a real square root")
    field = make_field((-root_of, 0, 1), 0, root_of + 1)
    amb = _matrix_container(field, 2, "M2(Q(sqrt(%s)))" % root_of)
    s = field.gen
    zero, one = field.zero, field.one
    f = field.from_rational
    if split_on == "a":
        img_i = (s, zero, zero, -s)
        img_j = (zero, one, f(b), zero)
    else:
        img_j = (s, zero, zero, -s)
        img_i = (zero, one, f(a), zero)
    img_k = amb.mul(img_i, img_j)
    img_basis = [amb.one, img_i, img_j, img_k]
    return AlgebraSetup(amb, img_basis, None, None, img_basis,
                        "(%s,%s) split on %s" % (a, b, split_on))


def quaternion_definite(a, b):
    """Definite rational quaternion algebra with conjugation."""
    a, b = to_qq(a), to_qq(b)
    if a >= 0 or b >= 0:
        raise PositivityFailure(
            "conjugation is positive only for definite parameters")
    from .scalars import scalar_domain
    dom = scalar_domain(None)
    table = _quaternion_table(a, b)
    one = (mpq(1), mpq(0), mpq(0), mpq(0))
    dagger = [[mpq(0)] * 4 for _ in range(4)]
    dagger[0][0] = mpq(1)
    for i in (1, 2, 3):
        dagger[i][i] = mpq(-1)
    trace = [mpq(2), mpq(0), mpq(0), mpq(0)]
    amb = StructureAlgebra(dom, table, one, dagger, trace,
                           label="(%s,%s) definite" % (a, b))
    img_basis = [amb.basis_vector(i) for i in range(4)]
    return AlgebraSetup(amb, img_basis, None, None, img_basis,
                        "(%s,%s) definite" % (a, b))


def quaternion_cm(a, b, d):
    """Definite quaternions tensored with an imaginary quadratic field.

    Container basis q x w^s with q the quaternion basis and w*w = -d;
    dagger is conjugation on both factors, trace is the full rational
    trace of the reduced trace.
    """
    a, b, d = to_qq(a), to_qq(b), to_qq(d)
    if a >= 0 or b >= 0 or d <= 0:
        raise PositivityFailure(
            "need definite quaternion parameters and d > 0")
    from .scalars import scalar_domain
    dom = scalar_domain(None)
    qt = _quaternion_table(a, b)
    m = 8
    idx = lambda q, s2: 2 * q + s2
    table = [[() for _ in range(m)] for _ in range(m)]
    for q1 in range(4):
        for s1 in range(2):
            for q2 in range(4):
                for s2 in range(2):
                    entries = []
                    for qk, qc in qt[q1][q2]:
                        if s1 + s2 <= 1:
                            entries.append((idx(qk, s1 + s2), qc))
                        else:
                            entries.append((idx(qk, 0), -d * qc))
                    table[idx(q1, s1)][idx(q2, s2)] = tuple(entries)
    one = [mpq(0)] * m
    one[0] = mpq(1)
    dagger = [[mpq(0)] * m for _ in range(m)]
    for q in range(4):
        for s2 in range(2):
            sign = (1 if q == 0 else -1) * (1 if s2 == 0 else -1)
            dagger[idx(q, s2)][idx(q, s2)] = mpq(sign)
    trace = [mpq(0)] * m
    trace[0] = mpq(4)
    amb = StructureAlgebra(dom, table, one, dagger, trace,
                           label="(%s,%s) x Q(sqrt(-%s))" % (a, b, d))
    img_basis = [amb.basis_vector(i) for i in range(m)]
    return AlgebraSetup(amb, img_basis, None, None, img_basis,
                        "(%s,%s) x Q(sqrt(-%s))" % (a, b, d))


def matrix_quaternion(a, b, n=2):
    """n x n matrices over a definite rational quaternion algebra.

    Dagger is quaternion-conjugate transpose; trace sums the reduced
    traces down the diagonal.  Module is the column space, so the
    lattice has rank 4 n over Z.
    """
    a, b = to_qq(a), to_qq(b)
    if a >= 0 or b >= 0:
        raise PositivityFailure("matrix model needs definite parameters")
    from .scalars import scalar_domain
    dom = scalar_domain(None)
    qt = _quaternion_table(a, b)
    m = 4 * n * n
    idx = lambda r, s, q: (r * n + s) * 4 + q
    table = [[() for _ in range(m)] for _ in range(m)]
    for r in range(n):
        for s in range(n):
            for t in range(n):
                for u in range(n):
                    if s != t:
                        continue
                    for q1 in range(4):
                        for q2 in range(4):
                            table[idx(r, s, q1)][idx(t, u, q2)] = tuple(
                                (idx(r, u, qk), qc) for qk, qc in qt[q1][q2])
    one = [mpq(0)] * m
    for r in range(n):
        one[idx(r, r, 0)] = mpq(1)
    conj_sign = (1, -1, -1, -1)
    dagger = [[mpq(0)] * m for _ in range(m)]
    for r in range(n):
        for s in range(n):
            for q in range(4):
                dagger[idx(s, r, q)][idx(r, s, q)] = mpq(conj_sign[q])
    trace = [mpq(0)] * m
    for r in range(n):
        trace[idx(r, r, 0)] = mpq(2)
    amb = StructureAlgebra(dom, table, one, dagger, trace,
                           label="M%d((%s,%s))" % (n, a, b))
    img_basis = [amb.basis_vector(i) for i in range(m)]
    endo = [amb.basis_vector(idx(0, 0, q)) for q in range(4)]
    return AlgebraSetup(amb, img_basis, None, None, endo,
                        "M%d((%s,%s))" % (n, a, b))


def _echelon_insert(rows, vec):
    """Insert one rational vector into a running echelon basis.

    rows holds (pivot, normalized row) pairs; returns True when vec was
    independent of the span so far."""
    v = list(vec)
    for piv, row in rows:
        c = v[piv]
        if c:
            v = [a - c * b for a, b in zip(v, row)]
    for k, a in enumerate(v):
        if a:
            rows.append((k, [x / a for x in v]))
            return True
    return False


def generated_matrix(field, n, generators):
    """Rational subalgebra of n x n matrices over a real number field,
    generated by explicit matrices; transpose involution, matrix trace.

    Each generator is a flat row-major tuple of n * n field entries
    (plain rationals are accepted and coerced).  The embedded basis is
    built deterministically: the identity, then each generator that is
    rationally independent of what came before, then products in
    discovery order until the span closes.  Order rows in problem files
    refer to that basis.  Division algebras handed over as a pair of
    generating matrices fit this construction; pass field=None to work
    inside n x n rational matrices.
    """
    from .scalars import scalar_domain
    dom = scalar_domain(field)
    m = n * n
    amb = _matrix_container(dom, n, "M%d over degree-%d field"
                            % (n, dom.degree))

    def entry(x):
        return x if getattr(x, "c", None) is not None \
            else dom.from_rational(to_qq(x))

    gens = []
    for g in generators:
        g = tuple(g)
        if len(g) != m:
            raise DimensionMismatch(
                "generator needs %d entries, got %d" % (m, len(g)))
        gens.append(tuple(entry(x) for x in g))
    if not gens:
        raise DimensionMismatch("need at least one generator")
    basis = [tuple(amb.one)]
    rows = []
    _echelon_insert(rows, flatten_vector(amb.one))
    for g in gens:
        if _echelon_insert(rows, flatten_vector(g)):
            basis.append(g)
    grew = True
    while grew:
        grew = False
        for x in list(basis):
            for y in list(basis):
                p = amb.mul(x, y)
                if _echelon_insert(rows, flatten_vector(p)):
                    basis.append(tuple(p))
                    grew = True
    label = "dim-%d subalgebra of %s" % (len(basis), amb.label)
    return AlgebraSetup(amb, basis, None, None, list(basis), label)


CONSTRUCTIONS = {
    "matrix": matrix_algebra,
    "quaternion_split": quaternion_split,
    "quaternion_definite": quaternion_definite,
    "quaternion_cm": quaternion_cm,
    "matrix_quaternion": matrix_quaternion,
    "generated_matrix": generated_matrix,
}


def hurwitz_order_rows():
    """Z-basis of the maximal order in (-1,-1): 1, i, j, (1+i+j+k)/2."""
    h = mpq(1, 2)
    return [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (h, h, h, h)]


def order_rows_23():
    """Z-basis of a maximal order in (2,3): 1, i, (1+j+k)/2, (i+k)/2."""
    h = mpq(1, 2)
    return [(1, 0, 0, 0), (0, 1, 0, 0), (h, 0, h, h), (0, h, 0, h)]


def order_rows_m1m3():
    """Z-basis of the maximal order in (-1,-3): 1, i, (i+k)/2, (1+j)/2."""
    h = mpq(1, 2)
    return [(1, 0, 0, 0), (0, 1, 0, 0), (0, h, 0, h), (h, 0, h, 0)]


def cm_order_rows():
    """Z-basis of the tensor of the Hurwitz order with Z[(1+w)/2]."""
    h, q = mpq(1, 2), mpq(1, 4)
    return [
        (1, 0, 0, 0, 0, 0, 0, 0),
        (0, 0, 1, 0, 0, 0, 0, 0),
        (0, 0, 0, 0, 1, 0, 0, 0),
        (h, 0, h, 0, h, 0, h, 0),
        (h, h, 0, 0, 0, 0, 0, 0),
        (0, 0, h, h, 0, 0, 0, 0),
        (0, 0, 0, 0, h, h, 0, 0),
        (q, q, q, q, q, q, q, q),
    ]


def matrix_quaternion_order(quat_rows, n=2):
    """Order basis of n x n matrices over the span of quat_rows."""
    rows = []
    for r in range(n):
        for s in range(n):
            for w in quat_rows:
                vec = [mpq(0)] * (4 * n * n)
                for q in range(4):
                    vec[(r * n + s) * 4 + q] = to_qq(w[q])
                rows.append(tuple(vec))
    return rows


def matrix_quaternion_lattice(quat_rows, n=2):
    """Lattice images for the column module: slot r times each basis unit."""
    rows = []
    for r in range(n):
        for w in quat_rows:
            vec = [mpq(0)] * (4 * n * n)
            for q in range(4):
                vec[(r * n + 0) * 4 + q] = to_qq(w[q])
            rows.append(tuple(vec))
    return rows
