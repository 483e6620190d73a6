"""Reductor formulas: a propositional language over kind-specific atomic terms.

The free variable ``p`` is implicit.  Terms by space kind:

========== ==========================================================
sequential ``p(i)=Sj`` :class:`SeqIndexEq`, ``p(i)=p(k)``
           :class:`SeqIndexIndexEq`, ``|p|=l`` :class:`SeqLenEq`
parallel   ``p(Sj)=i`` :class:`ParCountEq`, ``p(Sj)=p(Sk)``
           :class:`ParCountCountEq`, ``Sj !in dom(p)`` :class:`ParAbsent`
aggregated ``p in Si`` :class:`AggMember`
primitive  ``p in self`` :class:`PrimSelf`
========== ==========================================================

Formulas combine with ``&``, ``|`` and ``~``.  A term whose index or key
falls outside the computon is simply false.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

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
    computon_key,
    shape,
)
from .errors import IllFormedFormula, UnsupportedOnEmpty

__all__ = [
    "Formula", "And", "Or", "Not", "Atom",
    "SeqIndexEq", "SeqIndexIndexEq", "SeqLenEq",
    "ParCountEq", "ParCountCountEq", "ParAbsent", "AggMember", "PrimSelf",
    "Violation", "check_wellformed", "evaluate", "reduce", "prove_finite",
    "finite_members", "to_dnf", "atoms", "computon_sort_key", "DNF_ATOM_CAP",
]

DNF_ATOM_CAP = 64
_CANDIDATE_CAP = 1_000_000


def _default_name(s: Space) -> str:
    return s.label if isinstance(s, Primitive) else s.key


class Formula:
    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)

    @property
    def key(self) -> str:
        return self.render(lambda s: s.key)

    def __str__(self):
        return self.render(_default_name)

    def render(self, name: Callable[[Space], str]) -> str:
        raise NotImplementedError

    def holds(self, p: Computon) -> bool:
        raise NotImplementedError


def _wrap(f: Formula, name) -> str:
    text = f.render(name)
    if isinstance(f, (And, Or)):
        # a nested connective keeps its own parentheses so the tree round-trips
        return "(" + text + ")"
    return text


@dataclass(frozen=True)
class And(Formula):
    operands: Tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        if len(self.operands) < 2:
            raise ValueError("And needs at least two operands")

    def render(self, name):
        return " & ".join(_wrap(f, name) for f in self.operands)

    def holds(self, p):
        return all(f.holds(p) for f in self.operands)


@dataclass(frozen=True)
class Or(Formula):
    operands: Tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        if len(self.operands) < 2:
            raise ValueError("Or needs at least two operands")

    def render(self, name):
        return " | ".join(_wrap(f, name) for f in self.operands)

    def holds(self, p):
        return any(f.holds(p) for f in self.operands)


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula

    def render(self, name):
        inner = self.operand.render(name)
        if isinstance(self.operand, (And, Or)):
            inner = "(" + inner + ")"
        elif isinstance(self.operand, ParAbsent):
            inner = "(" + inner + ")"
        return "!" + inner

    def holds(self, p):
        return not self.operand.holds(p)


class Atom(Formula):
    applies_to: type = Space

    def spaces(self) -> Tuple[Space, ...]:
        return ()


def _positive_int(value, what):
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{what} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class SeqIndexEq(Atom):
    """``p(i)=S``: the i-th element (1-based) of the sequence is ``target``."""

    index: int
    target: Space
    applies_to = Sequential

    def __post_init__(self):
        _positive_int(self.index, "index")

    def render(self, name):
        return f"p({self.index})={name(self.target)}"

    def spaces(self):
        return (self.target,)

    def holds(self, p):
        return (
            isinstance(p, SequentialC)
            and self.index <= len(p.items)
            and p.items[self.index - 1] == self.target
        )


@dataclass(frozen=True)
class SeqIndexIndexEq(Atom):
    first: int
    second: int
    applies_to = Sequential

    def __post_init__(self):
        _positive_int(self.first, "index")
        _positive_int(self.second, "index")

    def render(self, name):
        return f"p({self.first})=p({self.second})"

    def holds(self, p):
        if not isinstance(p, SequentialC):
            return False
        n = len(p.items)
        return self.first <= n and self.second <= n and (
            p.items[self.first - 1] == p.items[self.second - 1]
        )


@dataclass(frozen=True)
class SeqLenEq(Atom):
    length: int
    applies_to = Sequential

    def __post_init__(self):
        _positive_int(self.length, "length")

    def render(self, name):
        return f"|p|={self.length}"

    def holds(self, p):
        return isinstance(p, SequentialC) and len(p.items) == self.length


@dataclass(frozen=True)
class ParCountEq(Atom):
    """``p(S)=i``: ``target`` runs with exactly ``count`` parallel instances."""

    target: Space
    count: int
    applies_to = Parallel

    def __post_init__(self):
        _positive_int(self.count, "instance count")

    def render(self, name):
        return f"p({name(self.target)})={self.count}"

    def spaces(self):
        return (self.target,)

    def holds(self, p):
        return isinstance(p, ParallelC) and p.get(self.target) == self.count


@dataclass(frozen=True)
class ParCountCountEq(Atom):
    """``p(A)=p(B)``; false when either side is outside ``dom(p)``, as ``p`` is partial."""

    left: Space
    right: Space
    applies_to = Parallel

    def render(self, name):
        return f"p({name(self.left)})=p({name(self.right)})"

    def spaces(self):
        return (self.left, self.right)

    def holds(self, p):
        if not isinstance(p, ParallelC):
            return False
        a = p.get(self.left)
        return a is not None and a == p.get(self.right)


@dataclass(frozen=True)
class ParAbsent(Atom):
    target: Space
    applies_to = Parallel

    def render(self, name):
        return f"{name(self.target)} !in dom(p)"

    def spaces(self):
        return (self.target,)

    def holds(self, p):
        return isinstance(p, ParallelC) and p.get(self.target) is None


@dataclass(frozen=True)
class AggMember(Atom):
    child: Space
    applies_to = Aggregated

    def render(self, name):
        return f"p in {name(self.child)}"

    def spaces(self):
        return (self.child,)

    def holds(self, p):
        from .enumeration import member

        return member(p, self.child)


@dataclass(frozen=True)
class PrimSelf(Atom):
    """``p in self``; trivially true of every member of the reduced space."""

    applies_to = Primitive

    def render(self, name):
        return "p in self"

    def holds(self, p):
        return True


def atoms(f: Formula) -> List[Atom]:
    if isinstance(f, (And, Or)):
        return [a for g in f.operands for a in atoms(g)]
    if isinstance(f, Not):
        return atoms(f.operand)
    return [f]


# --------------------------------------------------------------------------
# Well-formedness


@dataclass(frozen=True)
class Violation:
    term_index: int
    term: Atom
    reason: str
    code: str = "kind-mismatch"

    def __str__(self):
        return f"term {self.term_index} ({self.term}): {self.reason}"


def _term_problem(term: Atom, s: Space):
    """``(code, reason)`` when ``term`` is not meaningful for ``s``, else None."""
    if isinstance(s, Reduced):
        return _term_problem(term, s.base)
    if isinstance(s, Intersect):
        return _term_problem(term, s.left) or _term_problem(term, s.right)
    if isinstance(s, Difference):
        return _term_problem(term, s.left)
    if isinstance(s, Empty):
        return ("empty", "the empty space cannot be reduced")
    if isinstance(s, Aggregated):
        if isinstance(term, AggMember):
            if term.child in s.operands:
                return None
            return ("foreign-space",
                    f"{_default_name(term.child)} is not a child of the aggregated space")
        # A union of same-shaped children accepts the terms its children share.
        for child in s.operands:
            problem = _term_problem(term, child)
            if problem:
                return problem[0], f"not meaningful for every child: {problem[1]}"
        return None
    if not isinstance(s, term.applies_to):
        return ("kind-mismatch", f"{term.applies_to.kind} term used on a {s.kind} space")
    ops = getattr(s, "operands", ())
    for ref in term.spaces():
        if ref not in ops:
            return ("foreign-space",
                    f"{_default_name(ref)} is not an operand of the {s.kind} space")
    return None


@functools.lru_cache(maxsize=4096)
def check_wellformed(f: Formula, s: Space) -> Tuple[Violation, ...]:
    """Every violation of the term grammar for ``s``; empty when ``f`` is well formed."""
    found = []
    for i, term in enumerate(atoms(f)):
        problem = _term_problem(term, s)
        if problem:
            code, reason = problem
            found.append(Violation(i, term, reason, code))
    return tuple(found)


def evaluate(f: Formula, p: Computon, s: Optional[Space] = None) -> bool:
    """Truth of ``f`` for computon ``p``.

    When ``s`` is given the formula is first checked against it and
    :class:`IllFormedFormula` is raised on any violation.
    """
    if s is not None:
        violations = check_wellformed(f, s)
        if violations:
            raise IllFormedFormula(violations)
    return f.holds(p)


def reduce(s: Space, f: Formula) -> Space:
    """The reductor: lazily select the members of ``s`` satisfying ``f``."""
    if isinstance(s, Empty):
        raise UnsupportedOnEmpty("the empty space cannot be reduced")
    violations = check_wellformed(f, s)
    if violations:
        raise IllFormedFormula(violations)
    if isinstance(s, Primitive) and f == PrimSelf():
        return s
    return Reduced(s, f)


# --------------------------------------------------------------------------
# Disjunctive normal form and finiteness


def _nnf(f: Formula, positive: bool = True):
    if isinstance(f, Not):
        return _nnf(f.operand, not positive)
    if isinstance(f, (And, Or)):
        parts = [_nnf(g, positive) for g in f.operands]
        is_and = isinstance(f, And) == positive
        return ("and" if is_and else "or", parts)
    return ("lit", (f, positive))


def to_dnf(f: Formula, cap: int = DNF_ATOM_CAP):
    """Conjuncts of ``(atom, polarity)`` literals, or None when ``f`` exceeds ``cap`` atoms."""
    if len(atoms(f)) > cap:
        return None

    def expand(node):
        tag, body = node
        if tag == "lit":
            return [[body]]
        if tag == "or":
            return [c for part in body for c in expand(part)]
        result = [[]]
        for part in body:
            result = [a + b for a in result for b in expand(part)]
            if len(result) > 4096:
                raise OverflowError
        return result

    try:
        return expand(_nnf(f))
    except OverflowError:
        return None


def computon_sort_key(p: Computon):
    """Canonical order: primitives, then sequences by length, then maps by total count."""
    if isinstance(p, PrimitiveC):
        return (0, 0, (p.label,), ())
    if isinstance(p, SequentialC):
        return (1, len(p.items), tuple(s.key for s in p.items), ())
    return (2, sum(n for _, n in p.counts), tuple(s.key for s in p.domain),
            tuple(n for _, n in p.counts))


def _canonical(members) -> Tuple[Computon, ...]:
    unique = {computon_key(p): p for p in members}
    return tuple(sorted(unique.values(), key=computon_sort_key))


def _seq_candidates(conjunct, ops):
    lengths = {a.length for a, pos in conjunct if pos and isinstance(a, SeqLenEq)}
    if not lengths:
        return None
    if len(lengths) > 1:
        return []
    (length,) = lengths
    slots = [list(ops) for _ in range(length)]
    for a, pos in conjunct:
        if pos and isinstance(a, SeqIndexEq):
            if a.index > length:
                return []
            slot = slots[a.index - 1]
            slots[a.index - 1] = [t for t in slot if t == a.target]
    total = 1
    for slot in slots:
        total *= len(slot)
    if total > _CANDIDATE_CAP:
        return None
    return [SequentialC(items) for items in itertools.product(*slots)]


def _par_candidates(conjunct, ops):
    pinned, absent = {}, set()
    for a, pos in conjunct:
        if not pos:
            continue
        if isinstance(a, ParCountEq):
            if pinned.setdefault(a.target, a.count) != a.count:
                return []
        elif isinstance(a, ParAbsent):
            absent.add(a.target)
    if any(op not in pinned and op not in absent for op in ops):
        return None
    if absent & set(pinned) or not pinned:
        return []
    return [ParallelC(pinned)]


def _agg_candidates(conjunct):
    for a, pos in conjunct:
        if pos and isinstance(a, AggMember):
            members = finite_members(a.child)
            if members is not None:
                return list(members)
    return None


def _pinned_candidates(f: Formula, base: Space):
    dnf = to_dnf(f)
    if dnf is None:
        return None
    under = shape(base)
    found = []
    for conjunct in dnf:
        if isinstance(under, Sequential):
            cands = _seq_candidates(conjunct, under.operands)
        elif isinstance(under, Parallel):
            cands = _par_candidates(conjunct, under.operands)
        elif isinstance(under, Aggregated):
            cands = _agg_candidates(conjunct)
        else:
            cands = None
        if cands is None:
            return None
        found.extend(cands)
    return found


@functools.lru_cache(maxsize=4096)
def finite_members(s: Space) -> Optional[Tuple[Computon, ...]]:
    """Exact member list in canonical order when finiteness is syntactically provable."""
    from .enumeration import member

    if isinstance(s, Empty):
        return ()
    if isinstance(s, Primitive):
        return (PrimitiveC(s.label),)
    if isinstance(s, (Sequential, Parallel)):
        return None
    if isinstance(s, Aggregated):
        parts = [finite_members(c) for c in s.operands]
        if any(part is None for part in parts):
            return None
        return _canonical(p for part in parts for p in part)
    if isinstance(s, Reduced):
        inner = finite_members(s.base)
        if inner is not None:
            return _canonical(p for p in inner if s.formula.holds(p))
        cands = _pinned_candidates(s.formula, s.base)
        if cands is None:
            return None
        return _canonical(p for p in cands if s.formula.holds(p) and member(p, s.base))
    if isinstance(s, Intersect):
        for this, other in ((s.left, s.right), (s.right, s.left)):
            inner = finite_members(this)
            if inner is not None:
                return _canonical(p for p in inner if member(p, other))
        return None
    if isinstance(s, Difference):
        inner = finite_members(s.left)
        if inner is None:
            return None
        return _canonical(p for p in inner if not member(p, s.right))
    raise TypeError(f"not a space: {s!r}")


def prove_finite(r: Space) -> Optional[Tuple[Computon, ...]]:
    """Materialised members of ``r`` when its formula pins a finite set, else None.

    Sequential reductions are finite when every disjunct fixes the length;
    parallel ones when every disjunct pins or excludes each operand;
    aggregated ones when a disjunct selects a finite child or all children
    are finite.
    """
    return finite_members(r)
