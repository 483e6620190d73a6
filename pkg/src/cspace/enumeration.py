"""Membership decision and canonical, budgeted enumeration of computons.

Sequential spaces are uncountable; only their finite sequences are ever
produced, which is a countable dense part of the space.  Selections that are
not provably finite are enumerated by filtering their base, and give up with
:class:`~cspace.errors.BudgetExceeded` after ``cap`` consecutive rejected
candidates.
"""
from __future__ import annotations

import itertools
from typing import Iterator, Set

from .core import (
    Aggregated,
    Computon,
    Difference,
    Empty,
    Intersect,
    Parallel,
    ParallelC,
    Primitive,
    PrimitiveC,
    Reduced,
    Sequential,
    SequentialC,
    Space,
    cardinality,
)
from .errors import BudgetExceeded, BudgetZero, KindMismatch
from .formula import computon_sort_key, finite_members

__all__ = [
    "member", "EnumerationStream", "enumerate_space", "count_up_to",
    "bounded_members", "DEFAULT_CAP",
]

DEFAULT_CAP = 1_000_000


def member(p: Computon, s: Space) -> bool:
    """Decide whether ``p`` belongs to ``s``; total over well-formed inputs."""
    if isinstance(s, Sequential):
        if not isinstance(p, SequentialC):
            return False
        ops = s.operands
        return all(x in ops for x in p.items)
    if isinstance(s, Parallel):
        if not isinstance(p, ParallelC):
            return False
        ops = s.operands
        return all(x in ops for x, _ in p.counts)
    if isinstance(s, Reduced):
        return member(p, s.base) and s.formula.holds(p)
    if isinstance(s, Aggregated):
        return any(member(p, c) for c in s.operands)
    if isinstance(s, Primitive):
        return isinstance(p, PrimitiveC) and p.label == s.label
    if isinstance(s, Intersect):
        return member(p, s.left) and member(p, s.right)
    if isinstance(s, Difference):
        return member(p, s.left) and not member(p, s.right)
    if isinstance(s, Empty):
        return False
    raise TypeError(f"not a space: {s!r}")


# --------------------------------------------------------------------------
# Generators in canonical order


def _compositions(total: int, parts: int):
    """Ordered ways to write ``total`` as ``parts`` positive integers, lexicographically."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _sequences(ops) -> Iterator[SequentialC]:
    for length in itertools.count(1):
        for items in itertools.product(ops, repeat=length):
            yield SequentialC(items)


def _subsets_lex(ops):
    n = len(ops)
    idx = [c for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]
    idx.sort()
    return [tuple(ops[i] for i in c) for c in idx]


def _maps(ops) -> Iterator[ParallelC]:
    domains = _subsets_lex(ops)
    for total in itertools.count(1):
        for dom in domains:
            if len(dom) > total:
                continue
            for counts in _compositions(total, len(dom)):
                yield ParallelC(tuple(zip(dom, counts)))


def _filtered(source, keep, cap, space):
    misses = 0
    for p in source:
        if keep(p):
            misses = 0
            yield p
        else:
            misses += 1
            if misses >= cap:
                raise BudgetExceeded(misses, space)


def _interleave(streams) -> Iterator[Computon]:
    seen: Set[Computon] = set()
    live = list(streams)
    while live:
        still = []
        for it in live:
            p = next(it, None)
            if p is None:
                continue
            still.append(it)
            if p not in seen:
                seen.add(p)
                yield p
        live = still


def _generate(s: Space, cap: int) -> Iterator[Computon]:
    if isinstance(s, Empty):
        return iter(())
    if isinstance(s, Primitive):
        return iter((PrimitiveC(s.label),))
    if isinstance(s, Sequential):
        return _sequences(s.operands)
    if isinstance(s, Parallel):
        return _maps(s.operands)
    if isinstance(s, Aggregated):
        return _interleave([_generate(c, cap) for c in s.operands])
    known = finite_members(s)
    if known is not None:
        return iter(known)
    if isinstance(s, Reduced):
        return _filtered(_generate(s.base, cap), s.formula.holds, cap, s)
    if isinstance(s, Intersect):
        outer, inner = s.left, s.right
        if cardinality(inner).rank < cardinality(outer).rank:
            outer, inner = inner, outer
        return _filtered(_generate(outer, cap), lambda p: member(p, inner), cap, s)
    if isinstance(s, Difference):
        right = s.right
        return _filtered(_generate(s.left, cap), lambda p: not member(p, right), cap, s)
    raise TypeError(f"not a space: {s!r}")


class EnumerationStream:
    """Single-consumer iterator over at most ``budget`` members of ``source``."""

    def __init__(self, source: Space, budget: int, cap: int = DEFAULT_CAP):
        if budget < 1:
            raise BudgetZero("enumeration budget must be a positive integer")
        self.source = source
        self.budget = budget
        self.cap = cap
        self.yielded = 0
        self._it = _generate(source, cap)

    def __iter__(self):
        return self

    def __next__(self) -> Computon:
        if self.yielded >= self.budget:
            raise StopIteration
        p = next(self._it)
        self.yielded += 1
        return p

    def __repr__(self):
        return f"EnumerationStream({self.source!r}, budget={self.budget}, yielded={self.yielded})"


def enumerate_space(s: Space, budget: int, cap: int = DEFAULT_CAP) -> EnumerationStream:
    return EnumerationStream(s, budget, cap)


# --------------------------------------------------------------------------
# Bounded exhaustive generation


def bounded_members(s: Space, bound: int) -> Set[Computon]:
    """All members whose length (sequences) or largest count (maps) is at most ``bound``."""
    if isinstance(s, Empty):
        return set()
    if isinstance(s, Primitive):
        return {PrimitiveC(s.label)}
    if isinstance(s, Sequential):
        return {
            SequentialC(items)
            for n in range(1, bound + 1)
            for items in itertools.product(s.operands, repeat=n)
        }
    if isinstance(s, Parallel):
        out = set()
        for dom in _subsets_lex(s.operands):
            for counts in itertools.product(range(1, bound + 1), repeat=len(dom)):
                out.add(ParallelC(tuple(zip(dom, counts))))
        return out
    if isinstance(s, Aggregated):
        return set().union(*(bounded_members(c, bound) for c in s.operands))
    if isinstance(s, Reduced):
        return {p for p in bounded_members(s.base, bound) if s.formula.holds(p)}
    if isinstance(s, Intersect):
        return {p for p in bounded_members(s.left, bound) if member(p, s.right)}
    if isinstance(s, Difference):
        return {p for p in bounded_members(s.left, bound) if not member(p, s.right)}
    raise TypeError(f"not a space: {s!r}")


def count_up_to(s: Space, bound: int) -> int:
    """Exact number of members within the structural bound."""
    if isinstance(s, Empty):
        raise KindMismatch("count_up_to is not defined on the empty space")
    if bound < 1:
        raise ValueError("bound must be a positive integer")
    return len(bounded_members(s, bound))


def sorted_members(members):
    return sorted(members, key=computon_sort_key)
