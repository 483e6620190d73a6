from __future__ import annotations

import doctest

import pytest

import cspace.compose
from cspace import (
    EMPTY,
    ParallelC,
    PrimitiveC,
    SequentialC,
    agg,
    difference,
    enumerate_space,
    intersect,
    member,
    par,
    prim,
    seq,
)
from cspace.core import Aggregated, Intersect
from cspace.errors import EmptyOperand, TooFewDistinctOperands

from conftest import S1, S2, S3, S4


def test_docstring_examples():
    assert doctest.testmod(cspace.compose).failed == 0


def test_list_or_varargs():
    assert seq([S1, S2]) == seq(S1, S2)
    assert prim("S1") == S1


def test_sequential_space_contains_permutation():
    assert member(SequentialC((S2, S1, S4, S3)), seq(S1, S2, S3, S4))


@pytest.mark.parametrize("op", [seq, par])
def test_duplicate_operands(op):
    with pytest.raises(TooFewDistinctOperands):
        op(S1, S1)


@pytest.mark.parametrize("op", [seq, par])
def test_single_operand(op):
    with pytest.raises(TooFewDistinctOperands):
        op(S1)


@pytest.mark.parametrize("op", [seq, par])
def test_empty_operand(op):
    with pytest.raises(EmptyOperand):
        op(S1, EMPTY)


def test_sequencing_witness():
    p = SequentialC((S1, S1))
    assert member(p, seq(S1, seq(S2, S3)))
    assert not member(p, seq(seq(S1, S2), S3))


def test_parallel_witness():
    p = ParallelC(((S1, 5),))
    assert member(p, par(S1, par(S2, S3)))
    assert not member(p, par(par(S1, S2), S3))


class TestAgg:
    def test_union_membership(self):
        s = agg(S1, S2, S3, S4)
        assert isinstance(s, Aggregated)
        assert member(PrimitiveC("S3"), s)

    def test_identity(self):
        assert agg(S1, EMPTY) == S1
        assert agg(seq(S1, S2), EMPTY) == seq(S1, S2)

    def test_all_empty(self):
        assert agg(EMPTY, EMPTY) == EMPTY

    def test_idempotent(self):
        assert agg(S1, S1) == S1

    def test_child_computons_are_members(self):
        inner = seq(S1, S2)
        s = agg(inner, S3)
        for p in enumerate_space(inner, 20):
            assert member(p, s)


class TestSetCombinators:
    def test_intersect_is_symmetric(self):
        assert intersect(S1, S2) == intersect(S2, S1)
        assert isinstance(intersect(S1, S2), Intersect)

    def test_difference_of_self_is_empty_extensionally(self):
        s = seq(S1, S2)
        d = difference(s, s)
        assert not any(member(p, d) for p in enumerate_space(s, 50))

    def test_intersection_membership(self):
        a, b = seq(S1, S2), seq(S2, S3)
        both = intersect(a, b)
        assert member(SequentialC((S2, S2)), both)
        assert not member(SequentialC((S1, S2)), both)

    def test_difference_membership(self):
        d = difference(seq(S1, S2), seq(S2, S3))
        assert member(SequentialC((S1, S2)), d)
        assert not member(SequentialC((S2,)), d)
