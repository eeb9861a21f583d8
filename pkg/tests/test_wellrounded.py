from gmpy2 import mpq
import pytest

from unitgroup.algebra import matrix_algebra, quaternion_split, order_rows_23
from unitgroup.problem import Problem
from unitgroup.voronoi import enumerate_perfect_forms
from unitgroup.wellrounded import (
    face_barycenter, face_rank, form_fixers, is_well_rounded,
    ridges_of_form, swap_witnesses, transport_incidence,
)


@pytest.fixture(scope="module")
def gl2():
    return Problem(matrix_algebra(2), label="gl2")


@pytest.fixture(scope="module")
def gl2_graph(gl2):
    return enumerate_perfect_forms(gl2)


@pytest.fixture(scope="module")
def q23_graph():
    prob = Problem(quaternion_split(2, 3, split_on="a"),
                   order_basis=order_rows_23(), label="q23_sqrt2")
    return prob, enumerate_perfect_forms(prob)


class TestWellRounded:
    def test_perfect_form_is_well_rounded(self, gl2, gl2_graph):
        form = gl2_graph.forms[0]
        assert is_well_rounded(gl2, form.min_vectors)

    def test_single_vector_is_not(self, gl2):
        assert not is_well_rounded(gl2, [(1, 0)])

    def test_pd_barycenter_beats_rank(self, gl2):
        # two unit vectors span only a rank-2 face of the 3-dim chart,
        # but their barycenter is already positive definite
        inc = [(1, 0), (0, 1)]
        assert face_rank(gl2, inc) == 2
        assert is_well_rounded(gl2, inc)

    def test_quaternionic_perfect_forms_pass(self, q23_graph):
        prob, graph = q23_graph
        for form in graph.forms:
            assert is_well_rounded(prob, form.min_vectors)

    def test_barycenter_matches_sum(self, gl2):
        inc = [(1, 0), (0, 1)]
        total = face_barycenter(gl2, inc)
        want = tuple(a + b for a, b in zip(gl2.rank_one_chart((1, 0)),
                                           gl2.rank_one_chart((0, 1))))
        assert total == want


class TestRidges:
    def test_hexagonal_domain_has_three(self, gl2, gl2_graph):
        ridges = ridges_of_form(gl2, gl2_graph.facet_edges[0])
        assert len(ridges) == 3
        for inc, (fa, fb) in ridges:
            assert fa != fb
            assert face_rank(gl2, inc) == gl2.chart_dim - 2
            for fi in (fa, fb):
                assert inc <= gl2_graph.facet_edges[0][fi].incidence

    def test_known_incidences(self, gl2, gl2_graph):
        ridges = ridges_of_form(gl2, gl2_graph.facet_edges[0])
        assert [set(inc) for inc, _ in ridges] == \
            [{(1, 0)}, {(0, 1)}, {(1, -1)}]


class TestTransport:
    def test_identity_fixes(self, gl2, gl2_graph):
        inc = frozenset(gl2_graph.forms[0].min_vectors)
        assert transport_incidence(gl2.units.identity, inc) == inc

    def test_minus_one_fixes(self, gl2, gl2_graph):
        inc = frozenset(gl2_graph.forms[0].min_vectors)
        assert transport_incidence(gl2.units.minus_one(), inc) == inc

    def test_stabilizer_permutes(self, gl2, gl2_graph):
        inc = frozenset(gl2_graph.forms[0].min_vectors)
        for u in gl2_graph.stabilizers[0]:
            assert transport_incidence(u, inc) == inc


class TestFixersAndSwaps:
    def test_whole_stabilizer_fixes_its_form(self, gl2, gl2_graph):
        chart = gl2_graph.forms[0].chart
        stab = gl2_graph.stabilizers[0]
        assert form_fixers(gl2, stab, chart) == list(stab)

    def test_swap_witnesses_symmetric(self, gl2, gl2_graph):
        f = gl2_graph.forms[0].chart
        stab = gl2_graph.stabilizers[0]
        assert swap_witnesses(gl2, stab, f, f) == list(stab)
