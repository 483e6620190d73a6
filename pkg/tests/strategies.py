from __future__ import annotations

from hypothesis import strategies as st

from cspace import (
    AggMember,
    And,
    Not,
    Or,
    ParAbsent,
    ParCountCountEq,
    ParCountEq,
    SeqIndexEq,
    SeqIndexIndexEq,
    SeqLenEq,
    agg,
    difference,
    intersect,
    par,
    prim,
    reduce,
    seq,
)
from cspace.core import Aggregated, Parallel, Sequential, shape

PRIMS = tuple(prim(f"S{i}") for i in range(1, 4))


def _atoms(space):
    under = shape(space)
    ops = list(under.operands)
    if isinstance(under, Sequential):
        return st.one_of(
            st.builds(SeqIndexEq, st.integers(1, 3), st.sampled_from(ops)),
            st.builds(SeqIndexIndexEq, st.integers(1, 3), st.integers(1, 3)),
            st.builds(SeqLenEq, st.integers(1, 3)),
        )
    if isinstance(under, Parallel):
        return st.one_of(
            st.builds(ParCountEq, st.sampled_from(ops), st.integers(1, 3)),
            st.builds(ParCountCountEq, st.sampled_from(ops), st.sampled_from(ops)),
            st.builds(ParAbsent, st.sampled_from(ops)),
        )
    assert isinstance(under, Aggregated)
    return st.builds(AggMember, st.sampled_from(ops))


def formulas_for(space, max_leaves=4):
    return st.recursive(
        _atoms(space),
        lambda inner: st.one_of(
            st.builds(lambda a, b: And((a, b)), inner, inner),
            st.builds(lambda a, b: Or((a, b)), inner, inner),
            st.builds(Not, inner),
        ),
        max_leaves=max_leaves,
    )


def _distinct(children, lo=2, hi=3):
    return st.lists(children, min_size=lo, max_size=hi, unique_by=lambda s: s.key)


def composites(children):
    return st.one_of(
        _distinct(children).map(lambda ops: seq(*ops)),
        _distinct(children).map(lambda ops: par(*ops)),
        _distinct(children).map(lambda ops: agg(*ops)),
    )


@st.composite
def reduced(draw, bases):
    base = draw(bases)
    if isinstance(shape(base), (Sequential, Parallel, Aggregated)):
        return reduce(base, draw(formulas_for(base)))
    return base


def small_spaces():
    """Spaces over at most three primitives with at most three operands per node."""
    leaves = st.sampled_from(PRIMS)
    first = composites(leaves)
    second = composites(st.one_of(leaves, first))
    plain = st.one_of(first, second)
    return st.one_of(
        plain,
        reduced(plain),
        st.builds(intersect, plain, plain),
        st.builds(difference, plain, plain),
    )


def structural_spaces(max_depth=3):
    leaves = st.sampled_from(PRIMS + tuple(prim(f"S{i}") for i in range(4, 7)))
    return st.recursive(leaves, composites, max_leaves=8)
