"""Spaces, computons, canonical identity and the structural analyses over them.

Spaces are intensional: every space is a finite expression tree and is never
materialised as a set.  Membership and enumeration live in
:mod:`cspace.enumeration`; the reductor formula language in
:mod:`cspace.formula`.

Identity is carried by :func:`canonical_key`.  Operand collections are stored
deduplicated and sorted by key, so ``Sequential((a, b)) == Sequential((b, a))``
holds as plain equality.
"""
from __future__ import annotations

import enum
import functools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Tuple, Union

from .errors import (
    ConstructionError,
    EmptyOperand,
    KindMismatch,
    NotAMember,
    OrderUndefined,
    SelfReference,
    TooFewDistinctOperands,
)

__all__ = [
    "Space", "Empty", "EMPTY", "Primitive", "Sequential", "Parallel", "Aggregated",
    "Reduced", "Intersect", "Difference",
    "PrimitiveC", "SequentialC", "ParallelC", "Computon", "computon_key",
    "Cardinality", "Finite", "CountablyInfinite", "Continuum", "UpperBound",
    "COUNTABLY_INFINITE", "CONTINUUM",
    "SequentialClass", "ParallelClass",
    "canonical_key", "shape", "operands_of", "subsumed", "subsumes", "order",
    "cardinality", "classify_sequential", "classify_parallel", "absent_spaces",
]


# --------------------------------------------------------------------------
# Spaces


class Space:
    """Base class of every space expression.

    Equality and hashing go through the canonical key, never through object
    identity, so two independent constructions of the same space are equal.
    """

    kind = "space"

    @cached_property
    def key(self) -> str:
        return self._make_key()

    def _make_key(self) -> str:  # pragma: no cover - abstract
        raise NotImplementedError

    def __eq__(self, other):
        if not isinstance(other, Space):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.key < other.key

    @property
    def children(self) -> Tuple["Space", ...]:
        return ()


def _sorted_unique(spaces: Iterable[Space]) -> Tuple[Space, ...]:
    seen = {}
    for s in spaces:
        if not isinstance(s, Space):
            raise TypeError(f"operand {s!r} is not a Space")
        seen.setdefault(s.key, s)
    return tuple(seen[k] for k in sorted(seen))


@dataclass(frozen=True, eq=False, repr=False)
class Empty(Space):
    kind = "empty"

    def _make_key(self):
        return "empty"

    def __repr__(self):
        return "EMPTY"


EMPTY = Empty()


@dataclass(frozen=True, eq=False, repr=False)
class Primitive(Space):
    """Singleton space holding one opaque primitive computon."""

    label: str
    kind = "primitive"

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise ConstructionError("primitive label must be a non-empty string")

    def _make_key(self):
        return "prim(" + json.dumps(self.label, ensure_ascii=False) + ")"

    def __repr__(self):
        return f"Primitive({self.label!r})"


class _Composite(Space):
    operands: Tuple[Space, ...]
    _tag = ""

    def _make_key(self):
        return self._tag + "(" + ",".join(s.key for s in self.operands) + ")"

    @property
    def children(self):
        return self.operands

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(repr, self.operands))})"

    def _check_occurs(self):
        # Unreachable through inductive construction, kept as a guard.
        if any(op.key == self.key for op in self.operands):
            raise SelfReference(f"{self._tag} space cannot contain itself")


class _Operator(_Composite):
    """Shared validation of the sequencer and paralleliser results."""

    def __post_init__(self):
        ops = tuple(self.operands)
        if any(isinstance(op, Empty) for op in ops):
            raise EmptyOperand(f"{self._tag} does not accept the empty space as an operand")
        ops = _sorted_unique(ops)
        if len(ops) < 2:
            raise TooFewDistinctOperands(
                f"{self._tag} needs at least 2 distinct operands, got {len(ops)}"
            )
        object.__setattr__(self, "operands", ops)
        self._check_occurs()


@dataclass(frozen=True, eq=False, repr=False)
class Sequential(_Operator):
    """All finite sequences over the operand set."""

    operands: Tuple[Space, ...]
    kind = "sequential"
    _tag = "seq"


@dataclass(frozen=True, eq=False, repr=False)
class Parallel(_Operator):
    """All non-empty finite maps from operands to positive instance counts."""

    operands: Tuple[Space, ...]
    kind = "parallel"
    _tag = "par"


@dataclass(frozen=True, eq=False, repr=False)
class Aggregated(_Composite):
    """Union of the member computons of its children.

    Nested aggregations are flattened and empty children dropped, which makes
    associativity and the identity law hold as equality.
    """

    operands: Tuple[Space, ...]
    kind = "aggregated"
    _tag = "agg"

    def __post_init__(self):
        flat = []
        for op in self.operands:
            if isinstance(op, Aggregated):
                flat.extend(op.operands)
            elif not isinstance(op, Empty):
                flat.append(op)
        ops = _sorted_unique(flat)
        if len(ops) < 2:
            raise TooFewDistinctOperands(
                "an aggregated space needs at least 2 distinct non-empty children"
            )
        object.__setattr__(self, "operands", ops)
        self._check_occurs()


@dataclass(frozen=True, eq=False, repr=False)
class Reduced(Space):
    """Lazy selection ``{p in base | formula(p)}``."""

    base: Space
    formula: object
    kind = "reduced"

    def _make_key(self):
        return "reduce(" + self.base.key + "," + self.formula.key + ")"

    @property
    def children(self):
        return (self.base,)

    def __repr__(self):
        return f"Reduced({self.base!r}, {self.formula!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Intersect(Space):
    left: Space
    right: Space
    kind = "intersect"

    def __post_init__(self):
        a, b = sorted((self.left, self.right), key=lambda s: s.key)
        object.__setattr__(self, "left", a)
        object.__setattr__(self, "right", b)

    def _make_key(self):
        return "intersect(" + self.left.key + "," + self.right.key + ")"

    @property
    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Intersect({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Difference(Space):
    left: Space
    right: Space
    kind = "difference"

    def _make_key(self):
        return "difference(" + self.left.key + "," + self.right.key + ")"

    @property
    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Difference({self.left!r}, {self.right!r})"


def canonical_key(s: Space) -> str:
    """Deterministic identity token; equal iff the spaces are structurally equal."""
    return s.key


def shape(s: Space) -> Space:
    """The space whose kind and operands govern the members of ``s``.

    Reductions and set combinators only ever select from their (left) base, so
    their members are computons of the underlying composite.
    """
    while isinstance(s, (Reduced, Intersect, Difference)):
        s = s.base if isinstance(s, Reduced) else s.left
    return s


def operands_of(s: Space) -> Tuple[Space, ...]:
    return getattr(shape(s), "operands", ())


# --------------------------------------------------------------------------
# Computons


@dataclass(frozen=True)
class PrimitiveC:
    label: str

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class SequentialC:
    """A finite non-empty sequence of spaces, ``<S1,S2,...>``."""

    items: Tuple[Space, ...]

    def __post_init__(self):
        items = tuple(self.items)
        if not items:
            raise ValueError("a sequential computon has at least one element")
        object.__setattr__(self, "items", items)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]


@dataclass(frozen=True)
class ParallelC:
    """A finite non-empty map from spaces to positive instance counts.

    Accepts a mapping or an iterable of ``(space, count)`` pairs; entries are
    stored sorted by space key.
    """

    counts: Tuple[Tuple[Space, int], ...] = field()

    def __post_init__(self):
        raw = self.counts
        pairs = list(raw.items()) if isinstance(raw, Mapping) else list(raw)
        merged = {}
        for space, n in pairs:
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise ValueError(f"instance count must be a positive integer, got {n!r}")
            if space in merged:
                raise ValueError(f"space {space!r} listed twice")
            merged[space] = n
        if not merged:
            raise ValueError("a parallel computon parallelises at least one space")
        ordered = tuple(sorted(merged.items(), key=lambda kv: kv[0].key))
        object.__setattr__(self, "counts", ordered)

    @property
    def domain(self) -> Tuple[Space, ...]:
        return tuple(s for s, _ in self.counts)

    def as_dict(self):
        return dict(self.counts)

    def get(self, space, default=None):
        for s, n in self.counts:
            if s == space:
                return n
        return default


Computon = Union[PrimitiveC, SequentialC, ParallelC]


def computon_key(p: Computon) -> str:
    if isinstance(p, PrimitiveC):
        return "prim(" + json.dumps(p.label, ensure_ascii=False) + ")"
    if isinstance(p, SequentialC):
        return "<" + ",".join(s.key for s in p.items) + ">"
    if isinstance(p, ParallelC):
        return "{" + ",".join(f"{s.key}:{n}" for s, n in p.counts) + "}"
    raise TypeError(f"not a computon: {p!r}")


# --------------------------------------------------------------------------
# Cardinality


class Cardinality:
    rank = 0


@dataclass(frozen=True)
class Finite(Cardinality):
    n: int
    rank = 0

    def __str__(self):
        return f"finite({self.n})"


@dataclass(frozen=True)
class CountablyInfinite(Cardinality):
    rank = 1

    def __str__(self):
        return "countably-infinite"


@dataclass(frozen=True)
class Continuum(Cardinality):
    rank = 2

    def __str__(self):
        return "continuum"


@dataclass(frozen=True)
class UpperBound(Cardinality):
    """At most ``bound``; the exact size depends on a formula."""

    bound: Cardinality

    def __post_init__(self):
        if not isinstance(self.bound, (CountablyInfinite, Continuum)):
            raise ValueError("UpperBound wraps only infinite cardinalities")

    @property
    def rank(self):
        return self.bound.rank

    def __str__(self):
        return f"at-most({self.bound})"


COUNTABLY_INFINITE = CountablyInfinite()
CONTINUUM = Continuum()


class SequentialClass(enum.Enum):
    BIJECTIVE = "bijective"
    INJECTIVE_NON_SURJECTIVE = "injective/non-surjective"
    NON_INJECTIVE_SURJECTIVE = "non-injective/surjective"
    NON_INJECTIVE_NON_SURJECTIVE = "non-injective/non-surjective"

    def __str__(self):
        return self.value


class ParallelClass(enum.Enum):
    PARTIAL_INJECTIVE = "partial/injective"
    TOTAL_INJECTIVE = "total/injective"
    PARTIAL_NON_INJECTIVE = "partial/non-injective"
    TOTAL_NON_INJECTIVE = "total/non-injective"

    def __str__(self):
        return self.value


# --------------------------------------------------------------------------
# Structural analyses


def _materialized(s: Space):
    from .formula import finite_members

    if isinstance(s, (Reduced, Intersect, Difference)):
        return finite_members(s)
    return None


def _member_spaces(members) -> Tuple[Space, ...]:
    found = []
    for p in members:
        if isinstance(p, SequentialC):
            found.extend(p.items)
        elif isinstance(p, ParallelC):
            found.extend(p.domain)
        else:
            found.append(Primitive(p.label))
    return _sorted_unique(found)


@functools.lru_cache(maxsize=4096)
def subsumed(s: Space) -> Tuple[Space, ...]:
    """Spaces directly subsumed by ``s`` (one level, not transitive).

    Selections that are provably finite use the spaces occurring in their
    members; other selections over-approximate with their base's operands.
    """
    if isinstance(s, (Empty, Primitive)):
        return ()
    if isinstance(s, _Composite):
        return s.operands
    members = _materialized(s)
    if members is not None:
        if len(members) == 1 and isinstance(members[0], PrimitiveC):
            return ()
        return _member_spaces(members)
    if isinstance(s, Reduced):
        return subsumed(s.base)
    if isinstance(s, Intersect):
        right = set(subsumed(s.right))
        return tuple(t for t in subsumed(s.left) if t in right)
    if isinstance(s, Difference):
        return subsumed(s.left)
    raise TypeError(f"not a space: {s!r}")


def subsumes(parent: Space, child: Space) -> bool:
    return child in subsumed(parent)


@functools.lru_cache(maxsize=4096)
def order(s: Space) -> int:
    """Hierarchical level: 0 for primitives, 1 + the highest subsumed order otherwise."""
    if isinstance(s, Empty):
        raise OrderUndefined("the empty space has no order")
    if isinstance(s, Primitive):
        return 0
    members = _materialized(s)
    if members is not None:
        if not members:
            raise OrderUndefined(f"{s!r} is provably empty")
        if len(members) == 1 and isinstance(members[0], PrimitiveC):
            return 0
    below = subsumed(s)
    if not below:
        raise OrderUndefined(f"{s!r} subsumes no space")
    levels = []
    for t in below:
        try:
            levels.append(order(t))
        except OrderUndefined:
            continue
    return 1 + max(levels, default=0)


@functools.lru_cache(maxsize=4096)
def cardinality(s: Space) -> Cardinality:
    if isinstance(s, Empty):
        return Finite(0)
    if isinstance(s, Primitive):
        return Finite(1)
    if isinstance(s, Parallel):
        return COUNTABLY_INFINITE
    if isinstance(s, Sequential):
        return CONTINUUM
    if isinstance(s, Aggregated):
        return _union_cardinality(s)
    members = _materialized(s)
    if members is not None:
        return Finite(len(members))
    if isinstance(s, Reduced):
        inner = cardinality(s.base)
    elif isinstance(s, Intersect):
        inner = min(cardinality(s.left), cardinality(s.right), key=lambda c: c.rank)
    else:
        inner = cardinality(s.left)
    if isinstance(inner, UpperBound):
        inner = inner.bound
    if isinstance(inner, Finite):  # pragma: no cover - finite bases are always materialised
        raise AssertionError(f"finite base of {s!r} was not materialised")
    return UpperBound(inner)


def _union_cardinality(s: Aggregated) -> Cardinality:
    from .formula import finite_members

    cards = [cardinality(c) for c in s.operands]
    if all(isinstance(c, Finite) for c in cards):
        seen = set()
        for child in s.operands:
            seen.update(finite_members(child))
        return Finite(len(seen))
    exact = max((c.rank for c in cards if not isinstance(c, (Finite, UpperBound))), default=0)
    bounded = max((c.rank for c in cards if isinstance(c, UpperBound)), default=0)
    by_rank = {1: COUNTABLY_INFINITE, 2: CONTINUUM}
    if exact >= bounded:
        return by_rank[exact]
    return UpperBound(by_rank[bounded])


# --------------------------------------------------------------------------
# Classification (Tables of sequential and parallel computon classes)


def _require_member(p, s, kind, computon_type):
    from .enumeration import member

    base = shape(s)
    if not isinstance(base, kind):
        raise KindMismatch(f"expected a {kind.kind} space, got {base.kind}")
    if not isinstance(p, computon_type):
        raise KindMismatch(f"expected a {computon_type.__name__}, got {type(p).__name__}")
    if not member(p, s):
        raise NotAMember(f"{computon_key(p)} is not a member of {s.key}")
    return base.operands


def classify_sequential(p: SequentialC, s: Space) -> SequentialClass:
    ops = _require_member(p, s, Sequential, SequentialC)
    injective = len(set(p.items)) == len(p.items)
    surjective = set(ops) <= set(p.items)
    if injective and surjective:
        return SequentialClass.BIJECTIVE
    if injective:
        return SequentialClass.INJECTIVE_NON_SURJECTIVE
    if surjective:
        return SequentialClass.NON_INJECTIVE_SURJECTIVE
    return SequentialClass.NON_INJECTIVE_NON_SURJECTIVE


def classify_parallel(p: ParallelC, s: Space) -> ParallelClass:
    ops = _require_member(p, s, Parallel, ParallelC)
    total = len(p.counts) == len(ops)
    values = [n for _, n in p.counts]
    injective = len(set(values)) == len(values)
    return {
        (False, True): ParallelClass.PARTIAL_INJECTIVE,
        (True, True): ParallelClass.TOTAL_INJECTIVE,
        (False, False): ParallelClass.PARTIAL_NON_INJECTIVE,
        (True, False): ParallelClass.TOTAL_NON_INJECTIVE,
    }[(total, injective)]


def absent_spaces(p: Computon, s: Space) -> frozenset:
    """Operands of ``s`` missing from the image (sequential) or domain (parallel) of ``p``."""
    base = shape(s)
    if isinstance(base, Parallel):
        ops = _require_member(p, s, Parallel, ParallelC)
        present = set(p.domain)
    elif isinstance(base, Sequential):
        ops = _require_member(p, s, Sequential, SequentialC)
        present = set(p.items)
    else:
        raise KindMismatch(f"absence is defined for sequential and parallel spaces, not {base.kind}")
    return frozenset(op for op in ops if op not in present)
