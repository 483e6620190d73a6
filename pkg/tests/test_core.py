from __future__ import annotations

import pickle

import pytest

from cspace import (
    CONTINUUM,
    COUNTABLY_INFINITE,
    EMPTY,
    Finite,
    ParallelC,
    ParallelClass,
    Primitive,
    PrimitiveC,
    SequentialC,
    SequentialClass,
    UpperBound,
    absent_spaces,
    agg,
    canonical_key,
    cardinality,
    classify_parallel,
    classify_sequential,
    load_program,
    order,
    par,
    prim,
    reduce,
    seq,
    subsumed,
    subsumes,
)
from cspace.core import Aggregated, Sequential, operands_of, shape
from cspace.errors import (
    ConstructionError,
    EmptyOperand,
    KindMismatch,
    NotAMember,
    OrderUndefined,
    TooFewDistinctOperands,
)
from cspace.formula import SeqIndexEq

from conftest import S1, S2, S3, S4, S5

S6 = seq(S1, S2)
S7 = agg(S3, S4)
S8 = par(S5, S6, S7)


class TestCanonicalKey:
    def test_commutative_operands_share_a_key(self):
        assert canonical_key(seq(S1, S2)) == canonical_key(seq(S2, S1))
        assert par(S1, S2, S3) == par(S3, S1, S2)

    def test_distinct_primitives(self):
        assert canonical_key(S1) != canonical_key(S2)
        assert S1 != S2

    def test_aggregation_flattens(self):
        assert agg(S1, agg(S2, S3)) == agg(agg(S1, S2), S3)
        assert agg(S1, agg(S2, S3)).operands == (S1, S2, S3)

    def test_seq_and_par_do_not_flatten(self):
        assert seq(S1, seq(S2, S3)) != seq(seq(S1, S2), S3)
        assert par(S1, par(S2, S3)) != par(par(S1, S2), S3)

    def test_kind_is_part_of_identity(self):
        assert seq(S1, S2) != par(S1, S2) != agg(S1, S2)

    def test_key_is_stable_text(self):
        assert S6.key == 'seq(prim("S1"),prim("S2"))'
        assert EMPTY.key == "empty"

    def test_label_quoting_keeps_keys_injective(self):
        odd = prim('a",prim("b')
        assert agg(odd, S1) != agg(prim("a"), prim("b"), S1)

    def test_hash_matches_equality(self):
        assert len({seq(S1, S2), seq(S2, S1), Sequential((S1, S2))}) == 1

    def test_pickle_round_trip(self):
        assert pickle.loads(pickle.dumps(S8)) == S8

    def test_immutable(self):
        with pytest.raises(Exception):
            S6.operands = (S3, S4)


class TestConstruction:
    def test_duplicates_collapse(self):
        with pytest.raises(TooFewDistinctOperands):
            Sequential((S1, S1))
        assert seq(S1, S2, S1) == seq(S1, S2)

    def test_empty_operand_rejected(self):
        with pytest.raises(EmptyOperand):
            Sequential((S1, EMPTY))

    def test_aggregated_drops_empty(self):
        assert Aggregated((S1, S2, EMPTY)) == Aggregated((S1, S2))

    def test_primitive_needs_label(self):
        with pytest.raises(ConstructionError):
            Primitive("")


class TestSubsumption:
    def test_direct_operand(self):
        assert subsumes(S6, S1)
        assert subsumes(S8, S6)

    def test_primitive_subsumes_nothing(self):
        assert not subsumes(S1, S1)
        assert subsumed(S1) == ()

    def test_one_level_only(self):
        assert not subsumes(S8, S1)

    def test_empty_subsumes_nothing(self):
        assert subsumed(EMPTY) == ()

    def test_unmaterialised_reduction_uses_base(self):
        r = reduce(seq(S1, S2, S3), SeqIndexEq(1, S1))
        assert subsumed(r) == (S1, S2, S3)

    def test_materialised_reduction_uses_members(self):
        env = load_program("S = seq(S1, S2, S3)\nR = reduce(S, \"p(1)=S1 & p(2)=S2 & |p|=2\")")
        assert subsumed(env["R"]) == (S1, S2)


class TestOrder:
    def test_primitive(self):
        assert order(S1) == 0

    def test_first_order(self):
        assert order(S6) == order(S7) == 1

    def test_second_order(self):
        assert order(S8) == 2

    def test_empty_undefined(self):
        with pytest.raises(OrderUndefined):
            order(EMPTY)

    def test_worked_example_is_third_order(self):
        env = load_program(
            "S6 = par(S1, S2)\n"
            "A = reduce(S6, \"p(S1)=1 & p(S2)=1\")\n"
            "S7 = seq(S3, S4)\n"
            "B = reduce(S7, \"p(1)=S3 & p(2)=S4 & |p|=2\")\n"
            "S8 = par(A, B)\n"
            "C = reduce(S8, \"p(A)=2 & p(B)=1\")\n"
            "S9 = seq(C, S5)\n"
            "D = reduce(S9, \"p(1)=C & p(2)=S5 & |p|=2\")\n"
        )
        assert [order(env[n]) for n in ("A", "B", "C", "S9", "D")] == [1, 1, 2, 3, 3]


class TestCardinality:
    def test_sequential_is_continuum(self):
        assert cardinality(seq(S1, S2, S3, S4)) == CONTINUUM

    def test_parallel_is_countable(self):
        assert cardinality(par(S1, S2)) == COUNTABLY_INFINITE

    def test_base_cases(self):
        assert cardinality(EMPTY) == Finite(0)
        assert cardinality(S1) == Finite(1)
        assert cardinality(agg(EMPTY, EMPTY)) == Finite(0)

    def test_aggregated_takes_the_max(self):
        assert cardinality(agg(S1, S6)) == CONTINUUM
        assert cardinality(agg(S1, par(S2, S3))) == COUNTABLY_INFINITE

    def test_finite_union_adds(self):
        assert cardinality(agg(S1, S2, S3)) == Finite(3)

    def test_unproven_reduction_is_bounded(self):
        r = reduce(seq(S1, S2), SeqIndexEq(1, S1))
        assert cardinality(r) == UpperBound(CONTINUUM)
        assert str(cardinality(r)) == "at-most(continuum)"

    def test_ranks_are_ordered(self):
        assert Finite(7).rank < COUNTABLY_INFINITE.rank < CONTINUUM.rank


ALL5 = seq(S1, S2, S3, S4, S5)
P4 = par(S1, S2, S3, S4)


class TestClassification:
    @pytest.mark.parametrize("items, space, expected", [
        ((S2, S1, S4, S3), seq(S1, S2, S3, S4), SequentialClass.BIJECTIVE),
        ((S3, S2, S1, S2), ALL5, SequentialClass.NON_INJECTIVE_NON_SURJECTIVE),
        ((S1,), seq(S1, S2), SequentialClass.INJECTIVE_NON_SURJECTIVE),
        ((S1, S2, S1), seq(S1, S2), SequentialClass.NON_INJECTIVE_SURJECTIVE),
    ])
    def test_sequential(self, items, space, expected):
        assert classify_sequential(SequentialC(items), space) is expected

    @pytest.mark.parametrize("counts, space, expected", [
        (((S1, 2), (S2, 1), (S3, 3), (S4, 1)), P4, ParallelClass.TOTAL_NON_INJECTIVE),
        (((S1, 5),), par(S1, par(S2, S3)), ParallelClass.PARTIAL_INJECTIVE),
        (((S1, 1), (S2, 2)), par(S1, S2), ParallelClass.TOTAL_INJECTIVE),
        (((S1, 1), (S2, 1)), par(S1, S2, S3), ParallelClass.PARTIAL_NON_INJECTIVE),
    ])
    def test_parallel(self, counts, space, expected):
        assert classify_parallel(ParallelC(counts), space) is expected

    def test_bijective_length_equals_operand_count(self):
        p = SequentialC((S2, S1, S4, S3))
        assert classify_sequential(p, seq(S1, S2, S3, S4)) is SequentialClass.BIJECTIVE
        assert len(p.items) == 4

    def test_non_member(self):
        with pytest.raises(NotAMember):
            classify_sequential(SequentialC((S3,)), seq(S1, S2))

    def test_wrong_kind(self):
        with pytest.raises(KindMismatch):
            classify_parallel(SequentialC((S1,)), seq(S1, S2))
        with pytest.raises(KindMismatch):
            classify_sequential(PrimitiveC("S1"), S1)

    def test_reduced_classifies_against_its_base(self):
        r = reduce(ALL5, SeqIndexEq(1, S3))
        p = SequentialC((S3, S2, S1, S2))
        assert classify_sequential(p, r) is SequentialClass.NON_INJECTIVE_NON_SURJECTIVE


class TestAbsent:
    def test_none_absent(self):
        assert absent_spaces(SequentialC((S3, S4)), seq(S3, S4)) == frozenset()

    def test_parallel_domain(self):
        p = ParallelC(((S1, 1), (S2, 2), (S3, 1)))
        assert absent_spaces(p, par(S1, S2, S3, S4, S5)) == {S4, S5}

    def test_sequential_image(self):
        assert absent_spaces(SequentialC((S3, S2, S1, S2)), ALL5) == {S4, S5}

    def test_aggregated_rejected(self):
        with pytest.raises(KindMismatch):
            absent_spaces(PrimitiveC("S1"), agg(S1, S2))


def test_shape_and_operands_see_through_reduction():
    r = reduce(S6, SeqIndexEq(1, S1))
    assert shape(r) == S6
    assert operands_of(r) == S6.operands


def test_computons_are_canonical():
    a = ParallelC(((S2, 1), (S1, 3)))
    b = ParallelC(((S1, 3), (S2, 1)))
    assert a == b and hash(a) == hash(b)
    with pytest.raises(ValueError):
        ParallelC(((S1, 0),))
    with pytest.raises(ValueError):
        SequentialC(())
