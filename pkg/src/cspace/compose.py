"""The three composition operators and the set combinators used by the reductor laws.

Every operator returns a :class:`~cspace.core.Space`, so results can be fed
back in as operands to build higher-order spaces::

    >>> s1, s2, s3 = (prim(f"S{i}") for i in (1, 2, 3))
    >>> seq(s1, s2) == seq(s2, s1)
    True
    >>> agg(s1, agg(s2, s3)) == agg(agg(s1, s2), s3)
    True
"""
from __future__ import annotations

from .core import (
    EMPTY,
    Aggregated,
    Difference,
    Empty,
    Intersect,
    Parallel,
    Primitive,
    Sequential,
    Space,
)
from .errors import TooFewDistinctOperands

__all__ = ["seq", "par", "agg", "intersect", "difference", "prim"]


def _flatten_args(operands):
    if len(operands) == 1 and isinstance(operands[0], (list, tuple)):
        return tuple(operands[0])
    return tuple(operands)


def _arity(name, ops):
    if len(ops) < 2:
        raise TooFewDistinctOperands(f"{name} takes at least 2 operands, got {len(ops)}")


def prim(label: str) -> Primitive:
    return Primitive(label)


def seq(*operands: Space) -> Sequential:
    """Sequencer: the space of all finite sequences over the distinct operands.

    Accepts the operands either as positional arguments or as a single list.
    """
    ops = _flatten_args(operands)
    _arity("seq", ops)
    return Sequential(ops)


def par(*operands: Space) -> Parallel:
    """Paralleliser: the space of all non-empty finite maps operand -> instance count."""
    ops = _flatten_args(operands)
    _arity("par", ops)
    return Parallel(ops)


def agg(*operands: Space) -> Space:
    """Aggregator: union of the operands' members.

    Nested aggregations flatten and empty operands vanish.  When a single
    distinct child survives it is returned unchanged (``agg(S, EMPTY) == S``);
    when none survive the result is :data:`~cspace.core.EMPTY`.
    """
    ops = _flatten_args(operands)
    _arity("agg", ops)
    children = {}
    for op in ops:
        if not isinstance(op, Space):
            raise TypeError(f"operand {op!r} is not a Space")
        parts = op.operands if isinstance(op, Aggregated) else (op,)
        for part in parts:
            if not isinstance(part, Empty):
                children.setdefault(part.key, part)
    if not children:
        return EMPTY
    if len(children) == 1:
        return next(iter(children.values()))
    return Aggregated(tuple(children.values()))


def intersect(a: Space, b: Space) -> Intersect:
    """Symbolic intersection; an extension used to state the reductor laws."""
    return Intersect(a, b)


def difference(a: Space, b: Space) -> Difference:
    """Symbolic difference ``a \\ b``; an extension used to state the reductor laws."""
    return Difference(a, b)
