from gmpy2 import mpq
import pytest

from unitgroup.algebra import (matrix_algebra, quaternion_split,
                               generated_matrix, order_rows_23)
from unitgroup.errors import NoProgress
from unitgroup.problem import Problem
from unitgroup.scalars import RationalDomain
from unitgroup.voronoi import (
    canonical_ray, dual_rays, enumerate_perfect_forms, facet_directions,
    initial_perfect_form, neighbor_form,
)
from unitgroup.isometry import form_minimum, first_isometry_unit


def Q(*xs):
    return tuple(mpq(x) for x in xs)


@pytest.fixture(scope="module")
def gl2():
    return Problem(matrix_algebra(2), label="gl2")


@pytest.fixture(scope="module")
def q23_sqrt2():
    return Problem(quaternion_split(2, 3, split_on="a"),
                   order_basis=order_rows_23(), label="q23_sqrt2")


@pytest.fixture(scope="module")
def q23_sqrt3():
    return Problem(quaternion_split(2, 3, split_on="b"),
                   order_basis=order_rows_23(), label="q23_sqrt3")


class TestDualRays:
    def test_octant(self):
        dom = RationalDomain()
        lin, rays = dual_rays([Q(1, 0, 0), Q(0, 1, 0), Q(0, 0, 1)], 3, dom)
        assert lin == []
        assert rays == [Q(0, 0, 1), Q(0, 1, 0), Q(1, 0, 0)]

    def test_square_cone(self):
        # dual of the cone over the square (+-1, +-1, 1)
        dom = RationalDomain()
        cons = [Q(1, 0, 1), Q(-1, 0, 1), Q(0, 1, 1), Q(0, -1, 1)]
        lin, rays = dual_rays(cons, 3, dom)
        assert lin == []
        assert rays == [Q(-1, -1, 1), Q(-1, 1, 1), Q(1, -1, 1), Q(1, 1, 1)]

    def test_halfspace_keeps_lineality(self):
        dom = RationalDomain()
        lin, rays = dual_rays([Q(1, 0)], 2, dom)
        assert len(lin) == 1 and rays == [Q(1, 0)]

    def test_redundant_constraint(self):
        dom = RationalDomain()
        cons = [Q(1, 0), Q(0, 1), Q(1, 1)]
        lin, rays = dual_rays(cons, 2, dom)
        assert rays == [Q(0, 1), Q(1, 0)]

    def test_canonical_ray_sign(self):
        dom = RationalDomain()
        assert canonical_ray(Q(0, -3, 6), dom) == Q(0, -1, 2)
        assert canonical_ray(Q(4, -2, 0), dom) == Q(1, mpq(-1, 2), 0)


class TestPerfectionWalk:
    def test_gl2_initial(self, gl2):
        f, vecs = initial_perfect_form(gl2)
        assert f == Q(1, "1/2", 1)
        assert set(vecs) == {(0, 1), (1, -1), (1, 0)}
        m, _ = form_minimum(gl2, f)
        assert m == 1

    def test_gl2_facets(self, gl2):
        f, vecs = initial_perfect_form(gl2)
        facets = facet_directions(gl2, f, vecs)
        assert len(facets) == 3
        for fd in facets:
            assert len(fd.incidence) == 2
            # outward positivity on the one vector off the facet
            (x,) = set(vecs) - fd.incidence
            assert gl2.sign(gl2.form_value(fd.normal, x)) > 0

    def test_gl2_neighbor_is_reflected_hexagonal(self, gl2):
        f, vecs = initial_perfect_form(gl2)
        facets = facet_directions(gl2, f, vecs)
        fd = [d for d in facets if d.incidence == {(0, 1), (1, 0)}][0]
        g, gv = neighbor_form(gl2, f, fd, vecs)
        assert g == Q(1, "-1/2", 1)
        assert set(gv) == {(0, 1), (1, 1), (1, 0)}

    def test_neighbor_rejects_bad_facet(self, gl2):
        f, vecs = initial_perfect_form(gl2)
        facets = facet_directions(gl2, f, vecs)
        broken = type(facets[0])(facets[0].normal, frozenset(vecs))
        with pytest.raises(Exception):
            neighbor_form(gl2, f, broken, vecs)


class TestEnumerationGL2:
    def test_single_orbit_hexagonal(self, gl2):
        g = enumerate_perfect_forms(gl2)
        assert len(g.forms) == 1
        assert g.stabilizer_orders() == [12]
        edges = g.facet_edges[0]
        assert len(edges) == 3
        assert all(e.dst == 0 and not e.is_tree for e in edges)
        # representative is unit-equivalent to the hexagonal form
        hexagonal = gl2.chart_coords(Q(2, 1, 1, 2))
        scaled = tuple(x / mpq(2) for x in hexagonal)
        assert first_isometry_unit(gl2, g.forms[0].chart, scaled) is not None

    def test_invariants(self, gl2):
        g = enumerate_perfect_forms(gl2)
        assert g.check_invariants()

    def test_transporters_verify(self, gl2):
        g = enumerate_perfect_forms(gl2)
        for edges in g.facet_edges:
            for e in edges:
                u = e.transporter
                assert (u * u.inverse()).is_identity


class TestEnumerationGL3:
    def test_single_orbit(self):
        p = Problem(matrix_algebra(3), label="gl3")
        g = enumerate_perfect_forms(p)
        assert len(g.forms) == 1
        assert g.stabilizer_orders() == [48]
        assert g.check_invariants()


class TestEnumerationGenerated:
    def test_regenerated_m2_matches_matrix_model(self):
        # same algebra as gl2, reached through span closure and a
        # different basis; every invariant must come out identical
        setup = generated_matrix(None, 2, [(0, 1, 1, 0), (1, 0, 0, 0)])
        std = [tuple(mpq(1 if i == j else 0) for j in range(4))
               for i in range(4)]
        p = Problem(setup, order_basis=std, label="gen-gl2")
        g = enumerate_perfect_forms(p)
        assert len(g.forms) == 1
        assert g.stabilizer_orders() == [12]
        assert len(g.facet_edges[0]) == 3
        assert g.check_invariants()


class TestEnumerationQuaternion:
    def test_sqrt2_three_orbits(self, q23_sqrt2):
        g = enumerate_perfect_forms(q23_sqrt2)
        assert len(g.forms) == 3
        assert sorted(g.stabilizer_orders()) == [2, 4, 6]
        assert g.check_invariants()

    def test_sqrt3_two_orbits(self, q23_sqrt3):
        g = enumerate_perfect_forms(q23_sqrt3)
        assert len(g.forms) == 2
        assert sorted(g.stabilizer_orders()) == [2, 6]
        assert g.check_invariants()

    def test_minima_are_exactly_one(self, q23_sqrt2):
        g = enumerate_perfect_forms(q23_sqrt2)
        for form in g.forms:
            m, vecs = form_minimum(q23_sqrt2, form.chart)
            assert m == q23_sqrt2.domain.one
            assert list(vecs) == sorted(form.min_vectors)

    def test_budget(self, q23_sqrt2):
        from unitgroup.errors import BudgetExceeded
        with pytest.raises(BudgetExceeded):
            enumerate_perfect_forms(q23_sqrt2, max_orbits=1)
