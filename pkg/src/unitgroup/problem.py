"""Full working context for one unit-group computation.

A Problem ties together the container algebra, the embedded rational
algebra, the order whose units we want, and the lattice they act on.  On
top of that it builds the chart of symmetric elements (the fixed space of
dagger), the trace-form Gram data on that chart, and the rank-one tensor
that evaluates forms on lattice vectors.  Forms are stored as chart
coordinate tuples throughout the package.
"""

from gmpy2 import mpq

from . import linalg
from .algebra import (
    EmbeddedAlgebra, Lattice, UnitContext, ZSpan, vec_add, vec_scale,
    flatten_vector,
)
from .errors import ChartMismatch, OrderNotClosed, DimensionMismatch
from .scalars import to_qq


class Problem:
    """Everything downstream algorithms need, precomputed once."""

    def __init__(self, setup, order_basis=None, sigma_images=None,
                 endo_elements=None, label="", validate=True):
        self.ambient = setup.ambient
        self.domain = setup.ambient.domain
        self.label = label or setup.label
        if validate:
            self.ambient.validate()
        self.algebra = EmbeddedAlgebra(self.ambient, setup.img_basis,
                                       label=self.label)
        rows = order_basis if order_basis is not None else setup.order_basis
        if rows is None:
            raise DimensionMismatch("no order basis given for %s"
                                    % self.label)
        self.order_basis = [self.algebra.coerce(r) for r in rows]
        self.order = ZSpan(self.order_basis)
        self._check_order_closed()
        sigma = sigma_images if sigma_images is not None \
            else setup.sigma_images
        if sigma is None:
            sigma = [self.algebra.img(r) for r in self.order_basis]
        endos = endo_elements if endo_elements is not None \
            else setup.endo_elements
        self.lattice = Lattice(self.ambient, self.algebra, sigma, endos)
        self.rank = self.lattice.rank
        self.units = UnitContext(self.algebra, self.lattice, self.order)
        self._build_chart()
        self._build_tensor()
        self._build_action_solver()
        self._rank_one_cache = {}

    def __repr__(self):
        return "Problem(%s, chart dim %d, lattice rank %d)" % (
            self.label or "?", self.chart_dim, self.rank)

    # -- construction helpers ---------------------------------------------

    def _check_order_closed(self):
        one = self.algebra.one
        if not self.order.contains(one):
            raise OrderNotClosed("identity is not in the order")
        n = len(self.order_basis)
        for i in range(n):
            for j in range(n):
                p = self.algebra.mul(self.order_basis[i], self.order_basis[j])
                if not self.order.contains(p):
                    raise OrderNotClosed(
                        "order basis is not multiplicatively closed: "
                        "row %d times row %d leaves the span" % (i, j),
                        witness=(i, j))

    def _build_chart(self):
        amb = self.ambient
        m = amb.dim
        one = self.domain.one
        rows = [[amb.dagger_rows[i][j] - (one if i == j else self.domain.zero)
                 for j in range(m)] for i in range(m)]
        basis = linalg.kernel(rows)
        self.chart = [tuple(v) for v in basis]
        self.chart_dim = len(self.chart)
        cols = [list(v) for v in self.chart]
        solver_rows = [list(r) for r in zip(*cols)]
        self._chart_solver = linalg.LinearSolver(solver_rows)
        self.chart_gram = [
            [amb.pairing(self.chart[k], self.chart[l])
             for l in range(self.chart_dim)]
            for k in range(self.chart_dim)]
        self.identity_form = self.chart_coords(amb.one)
        if self.identity_form is None:
            raise ChartMismatch("container identity is not symmetric")

    def _build_tensor(self):
        amb = self.ambient
        half = self.domain.from_rational(mpq(1, 2))
        B = self.rank
        sl = self.lattice.sigma_images
        dag = [amb.dagger(v) for v in sl]
        T = [[None] * B for _ in range(B)]
        for i in range(B):
            for j in range(i, B):
                v = amb.mul(sl[i], dag[j])
                w = amb.mul(sl[j], dag[i])
                s = vec_scale(half, vec_add(v, w))
                T[i][j] = T[j][i] = tuple(
                    amb.pairing(self.chart[k], s)
                    for k in range(self.chart_dim))
        self._tensor = T

    def _build_action_solver(self):
        B, dA = self.rank, self.algebra.dim
        cols = []
        self._action_basis_mats = []
        for t in range(dA):
            img = self.algebra.img(self.algebra.basis_vector(t))
            M = self.lattice.left_action_matrix(img)
            self._action_basis_mats.append(M)
            cols.append([M[i][j] for i in range(B) for j in range(B)])
        rows = [list(r) for r in zip(*cols)]
        self._action_solver = linalg.LinearSolver(rows)

    # -- chart and forms ----------------------------------------------------

    def chart_coords(self, w):
        """Chart coordinates of a symmetric container element, or None."""
        x = self._chart_solver.solve(list(w))
        return tuple(x) if x is not None else None

    def ambient_form(self, f):
        out = list(self.ambient.zero)
        for fk, ck in zip(f, self.chart):
            if fk:
                for i, x in enumerate(ck):
                    if x:
                        out[i] = out[i] + fk * x
        return tuple(out)

    def chart_pairing(self, f, g):
        acc = self.domain.zero
        G = self.chart_gram
        for k, fk in enumerate(f):
            if not fk:
                continue
            row = G[k]
            for l, gl in enumerate(g):
                if gl:
                    acc = acc + fk * gl * row[l]
        return acc

    def zero_form(self):
        return (self.domain.zero,) * self.chart_dim

    def form_value(self, f, x):
        """f evaluated at the lattice vector x (integer coordinates)."""
        acc = self.domain.zero
        T = self._tensor
        nz = [(i, xi) for i, xi in enumerate(x) if xi]
        for ii, (i, xi) in enumerate(nz):
            Ti = T[i]
            for j, xj in nz[ii:]:
                row = Ti[j]
                cell = self.domain.zero
                for fk, tk in zip(f, row):
                    if fk and tk:
                        cell = cell + fk * tk
                if i == j:
                    acc = acc + xi * xj * cell
                else:
                    acc = acc + 2 * xi * xj * cell
        return acc

    def form_gram_rows(self, f):
        """Gram matrix of f on the lattice basis, B x B scalars."""
        B = self.rank
        T = self._tensor
        out = [[None] * B for _ in range(B)]
        for i in range(B):
            for j in range(i, B):
                row = T[i][j]
                cell = self.domain.zero
                for fk, tk in zip(f, row):
                    if fk and tk:
                        cell = cell + fk * tk
                out[i][j] = out[j][i] = cell
        return out

    def rank_one_chart(self, x):
        """Chart coordinates of sigma(x) sigma(x)^dagger for integer x."""
        key = tuple(x)
        cached = self._rank_one_cache.get(key)
        if cached is not None:
            return cached
        amb = self.ambient
        v = self.lattice.vector_image(key)
        r = amb.mul(v, amb.dagger(v))
        coords = self.chart_coords(r)
        if coords is None:
            raise ChartMismatch("rank-one element fell outside the chart")
        self._rank_one_cache[key] = coords
        return coords

    def is_pd_form(self, f):
        return linalg.is_positive_definite(self.form_gram_rows(f),
                                           self.domain.sign_of)

    def sign(self, x):
        return self.domain.sign_of(x)

    # -- group action ---------------------------------------------------------

    def act_form(self, u, f):
        """Form pullback along u: the result takes at u.x the value f took
        at x, so minimal vectors transport forward."""
        amb = self.ambient
        gi = self.algebra.img(u.a_inv)
        w = amb.mul(amb.dagger(gi), amb.mul(self.ambient_form(f), gi))
        coords = self.chart_coords(w)
        if coords is None:
            raise ChartMismatch("unit action left the chart")
        return coords

    def act_point(self, u, X):
        """Push an ambient symmetric point forward along u."""
        amb = self.ambient
        g = self.algebra.img(u.a)
        return amb.mul(g, amb.mul(X, amb.dagger(g)))

    def action_to_unit(self, X):
        """Unit whose lattice action is the integer matrix X, or None."""
        flat = [to_qq(X[i][j]) for i in range(self.rank)
                for j in range(self.rank)]
        a = self._action_solver.solve(flat)
        if a is None:
            return None
        return self.units.try_unit(tuple(a))

    def unit(self, a_coords):
        return self.units.unit(a_coords)
