import pytest

from unitgroup.algebra import matrix_algebra, quaternion_split, order_rows_23
from unitgroup.errors import RelatorEvaluationFailure
from unitgroup.presentation import (
    GroupPresentation, assemble_presentation, cayley_relators, cayley_words,
    cyclic_reduce, free_reduce, inverse_word, verify_presentation,
)
from unitgroup.problem import Problem
from unitgroup.tietze import (
    abelianization, preferred_survivors, two_generator_reduction,
)
from unitgroup.voronoi import enumerate_perfect_forms


@pytest.fixture(scope="module")
def gl2():
    return Problem(matrix_algebra(2), label="gl2")


@pytest.fixture(scope="module")
def gl2_pres(gl2):
    return assemble_presentation(enumerate_perfect_forms(gl2))


@pytest.fixture(scope="module")
def q23():
    return Problem(quaternion_split(2, 3, split_on="a"),
                   order_basis=order_rows_23(), label="q23_sqrt2")


@pytest.fixture(scope="module")
def q23_pres(q23):
    graph = enumerate_perfect_forms(q23)
    return assemble_presentation(graph, mode="units-mod-center")


class TestWordHelpers:
    def test_inverse_word(self):
        assert inverse_word((1, -2, 3)) == (-3, 2, -1)
        assert inverse_word(()) == ()

    def test_free_reduce(self):
        assert free_reduce((1, -1)) == ()
        assert free_reduce((2, 1, -1, -2, 3)) == (3,)
        assert free_reduce((1, 2, -2, 2)) == (1, 2)

    def test_cyclic_reduce(self):
        assert cyclic_reduce((1, 2, -1)) == (2,)
        assert cyclic_reduce((1, 2)) == (1, 2)


class TestCayley:
    def test_words_order_two(self, gl2):
        minus = gl2.units.minus_one()
        elements, words = cayley_words(gl2.units.identity, [minus])
        assert len(elements) == 2
        assert words[gl2.units.identity.rho] == ()
        assert words[minus.rho] == (1,)

    def test_relators_order_two(self, gl2):
        minus = gl2.units.minus_one()
        elements, words = cayley_words(gl2.units.identity, [minus])
        rels = cayley_relators(elements, words, [minus])
        assert (1, 1) in rels
        for r in rels:
            assert gl2.units.identity.rho == _eval(gl2, [minus], r).rho


def _eval(problem, images, word):
    u = problem.units.identity
    for c in word:
        g = images[abs(c) - 1]
        u = u * (g if c > 0 else g.inverse())
    return u


class TestGl2Presentation:
    def test_letters(self, gl2_pres):
        assert gl2_pres.letters == ["a", "b", "t"]
        assert gl2_pres.vertex_letters == [[1, 2]]

    def test_single_inverted_edge(self, gl2_pres):
        kinds = [(e["kind"], e["letter"]) for e in gl2_pres.edge_orbits]
        assert kinds == [("minus", "t")]

    def test_verifies(self, gl2_pres):
        assert verify_presentation(gl2_pres)

    def test_abelianization(self, gl2_pres):
        assert abelianization(gl2_pres) == (0, (2, 2))
        assert abelianization(gl2_pres, simplified=True) == (0, (2, 2))

    def test_slot_tokens_exact(self, gl2_pres):
        graph = gl2_pres.graph
        assert set(gl2_pres.slot_tokens) == {(0, 0), (0, 1), (0, 2)}
        for (m, fi), token in gl2_pres.slot_tokens.items():
            want = graph.facet_edges[m][fi].transporter
            assert gl2_pres.evaluate(token).rho == want.rho


class TestQ23Presentation:
    def test_letters_and_orders(self, q23, q23_pres):
        assert q23_pres.letters == ["a", "b", "c", "t"]
        orders = [img.element_order(cap=30) for img in q23_pres.images[:3]]
        assert orders == [2, 6, 4]

    def test_edge_kinds_all_forward(self, q23_pres):
        kinds = sorted(e["kind"] for e in q23_pres.edge_orbits)
        assert kinds == ["plus", "tree", "tree"]

    def test_verifies(self, q23_pres):
        assert verify_presentation(q23_pres)

    def test_abelianization_z12(self, q23_pres):
        assert abelianization(q23_pres) == (0, (12,))
        assert abelianization(q23_pres, simplified=True) == (0, (12,))

    def test_slot_tokens_exact(self, q23_pres):
        graph = q23_pres.graph
        for (m, fi), token in q23_pres.slot_tokens.items():
            want = graph.facet_edges[m][fi].transporter
            assert q23_pres.evaluate(token).rho == want.rho

    def test_preferred_survivors(self, q23_pres):
        assert sorted(preferred_survivors(q23_pres)) == [2, 3]

    def test_corrupted_relator_detected(self, q23_pres):
        p = q23_pres
        broken = GroupPresentation(
            p.graph, p.mode, p.letters, p.images, p.relators + ((2,),),
            p.vertex_letters, p.vertex_gens, p.vertex_words, p.slot_tokens,
            p.edge_letters, p.edge_orbits)
        with pytest.raises(RelatorEvaluationFailure):
            verify_presentation(broken)

    def test_two_generator_reduction_needs_matching_edge(self, q23_pres):
        # the only edge letter has infinite order, so no (6, 4) pair
        assert two_generator_reduction(q23_pres) is None


class TestModes:
    def test_units_mode_differs_by_center(self, q23):
        graph = enumerate_perfect_forms(q23)
        full = assemble_presentation(graph, mode="units")
        quot = assemble_presentation(graph, mode="units-mod-center")
        assert verify_presentation(full)
        assert len(quot.relators) > len(full.relators)
