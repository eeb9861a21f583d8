import pytest
from hypothesis import given, settings, strategies as st

from unitgroup.tietze import (
    _dedupe, _primitive_root, abelian_invariants, abelian_str, deficiency,
    simplify,
)


class TestPrimitiveRoot:
    def test_pure_power(self):
        assert _primitive_root((1, 1, 1)) == ((1,), 3)

    def test_period_two(self):
        assert _primitive_root((1, -2, 1, -2)) == ((1, -2), 2)

    def test_primitive(self):
        assert _primitive_root((1, 2, -1)) == ((1, 2, -1), 1)


class TestDedupe:
    def test_drops_trivial(self):
        assert _dedupe([(), (1, -1)]) == []

    def test_rotation_and_inverse_collapse(self):
        rels = _dedupe([(1, 2), (2, 1), (-2, -1)])
        assert rels == [(1, 2)]

    def test_power_merge_gcd(self):
        # a^4 and a^6 together force a^2
        rels = _dedupe([(1, 1, 1, 1), (1, 1, 1, 1, 1, 1)])
        assert rels == [(1, 1)]

    def test_power_merge_keeps_root_word(self):
        rels = _dedupe([(1, 2, 1, 2), (1, 2, 1, 2, 1, 2)])
        assert rels == [(1, 2)]


class TestSimplify:
    def test_trivial_letter_removed(self):
        names, rels, traces = simplify(["a", "b"], [(2,), (1, 1, 1)])
        assert names == ["a"]
        assert rels == ((1, 1, 1),)
        assert traces == [(1,)]

    def test_single_occurrence_elimination(self):
        # b = a^2 from the second relator, so one generator remains
        names, rels, traces = simplify(
            ["a", "b"], [(1, 1, 1, 1, 1, 1), (2, -1, -1)])
        assert names == ["a"]
        assert rels == ((1, 1, 1, 1, 1, 1),)

    def test_keep_steers_survivor(self):
        # a and b are interchangeable; keep decides which survives
        rels = [(1, -2)]
        kept_a = simplify(["a", "b"], rels, keep=(1,))[0]
        kept_b = simplify(["a", "b"], rels, keep=(2,))[0]
        assert kept_a == ["a"] and kept_b == ["b"]

    def test_deterministic(self):
        rels = [(1, 1), (2, 2, 2), (1, 2, 1, 2), (3, -1, -2)]
        first = simplify(["a", "b", "c"], rels)
        second = simplify(["a", "b", "c"], rels)
        assert first == second

    def test_traces_cover_survivors(self):
        names, rels, traces = simplify(
            ["a", "b", "c"], [(1, 1), (2, 2, 2), (3, -1, -2)])
        assert len(traces) == len(names)
        assert all(isinstance(w, tuple) for w in traces)

    def test_shorten_exposes_elimination(self):
        # acb needs the relator ab to be seen inside the longer word
        rels = [(1, 2), (1, 3, 2)]
        names, rels2, _ = simplify(["a", "b", "c"], rels)
        assert "c" not in names or (3,) in rels2


class TestAbelianInvariants:
    def test_free_group(self):
        assert abelian_invariants(3, []) == (3, ())

    def test_trivial_group(self):
        assert abelian_invariants(1, [(1,)]) == (0, ())

    def test_klein_four(self):
        rels = [(1, 1), (2, 2), (1, 2, -1, -2)]
        assert abelian_invariants(2, rels) == (0, (2, 2))

    def test_z12_from_three_generator_shape(self):
        # a^3, b^2, a t b t abelianizes to Z/12
        rels = [(1, 1, 1), (2, 2), (1, 3, 2, 3)]
        assert abelian_invariants(3, rels) == (0, (12,))

    def test_mixed_free_and_torsion(self):
        assert abelian_invariants(2, [(1, 1)]) == (1, (2,))

    def test_str(self):
        assert abelian_str(0, ()) == "1"
        assert abelian_str(1, (12,)) == "Z x Z/12"
        assert abelian_str(0, (2, 2)) == "Z/2 x Z/2"


def test_deficiency():
    assert deficiency(["a", "b"], [(1, 1)]) == 1
    assert deficiency(["a"], [(1,), (1, 1)]) == -1


words = st.lists(st.integers(min_value=-4, max_value=4).filter(bool),
                 min_size=0, max_size=6).map(tuple)


@settings(max_examples=60, deadline=None)
@given(st.lists(words, min_size=0, max_size=5))
def test_simplify_preserves_abelianization(rels):
    letters = ["a", "b", "c", "d"]
    names, rels2, traces = simplify(letters, rels)
    assert abelian_invariants(len(letters), rels) == \
        abelian_invariants(len(names), rels2)


@settings(max_examples=60, deadline=None)
@given(st.lists(words, min_size=0, max_size=5))
def test_simplify_idempotent(rels):
    names, rels2, _ = simplify(["a", "b", "c", "d"], rels)
    names3, rels3, _ = simplify(names, list(rels2))
    assert len(names3) == len(names)
    assert rels3 == rels2
