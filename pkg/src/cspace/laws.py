"""Machine checks of the algebraic laws of composition and reduction.

Composition laws are checked as canonical-key equalities.  Reductor laws are
checked by bounded extensional equivalence: two spaces agree when every
candidate computon gets the same membership verdict from both, where the
candidates are an enumeration prefix of the ambient space(s) plus seeded
random samples.

All randomness flows from a single :class:`random.Random`, so a run is fully
determined by its seed.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

from .compose import agg, difference, intersect, par, seq
from .core import (
    EMPTY,
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
)
from .enumeration import enumerate_space, member
from .errors import ConstructionError
from .formula import (
    AggMember,
    And,
    Formula,
    Not,
    Or,
    ParAbsent,
    ParCountCountEq,
    ParCountEq,
    PrimSelf,
    SeqIndexEq,
    SeqIndexIndexEq,
    SeqLenEq,
    reduce,
)

__all__ = [
    "LawResult", "Triple", "STRUCTURAL_LAWS", "REDUCTOR_LAWS", "REFUTATIONS", "KINDS",
    "random_space", "random_formula", "random_computon", "make_triple",
    "candidates", "counterexample", "check_structural", "check_refutations",
    "check_reductor_laws", "run_laws",
]

KINDS = ("sequential", "parallel", "aggregated", "primitive")
POOL = tuple(Primitive(f"S{i}") for i in range(1, 7))


@dataclass
class LawResult:
    name: str
    passed: bool
    checks: int = 0
    detail: str = ""
    kind: str = "law"

    def row(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        text = f"{verdict:4}  {self.name:<34} checks={self.checks}"
        return text + (f"  {self.detail}" if self.detail else "")


# --------------------------------------------------------------------------
# Random generation


def random_space(rng: random.Random, depth: int = 3, pool: Sequence[Space] = POOL) -> Space:
    """A composite-or-primitive space of nesting depth at most ``depth``."""
    if depth <= 0 or rng.random() < 0.3:
        return rng.choice(pool)
    while True:
        op = rng.choice((seq, par, agg))
        n = rng.randint(2, 4)
        args = [random_space(rng, depth - 1, pool) for _ in range(n)]
        if op is agg and rng.random() < 0.2:
            args.append(EMPTY)
        try:
            result = op(*args)
        except ConstructionError:
            continue
        if not isinstance(result, Empty):
            return result


def _composite(rng, kind, depth, pool=POOL) -> Space:
    while True:
        s = random_space(rng, depth, pool)
        if s.kind == kind:
            return s
        if isinstance(s, Primitive) or rng.random() < 0.5:
            # build one of the wanted kind directly from random operands
            ops = [random_space(rng, max(depth - 1, 0), pool) for _ in range(rng.randint(2, 4))]
            try:
                s = {"sequential": seq, "parallel": par, "aggregated": agg}[kind](*ops)
            except ConstructionError:
                continue
            if s.kind == kind:
                return s


def _atom(rng, kind, ops):
    if kind == "sequential":
        choice = rng.randrange(3)
        if choice == 0:
            return SeqIndexEq(rng.randint(1, 4), rng.choice(ops))
        if choice == 1:
            return SeqIndexIndexEq(rng.randint(1, 4), rng.randint(1, 4))
        return SeqLenEq(rng.randint(1, 5))
    if kind == "parallel":
        choice = rng.randrange(3)
        if choice == 0:
            return ParCountEq(rng.choice(ops), rng.randint(1, 3))
        if choice == 1:
            return ParCountCountEq(rng.choice(ops), rng.choice(ops))
        return ParAbsent(rng.choice(ops))
    if kind == "aggregated":
        return AggMember(rng.choice(ops))
    return PrimSelf()


def random_formula(rng: random.Random, kind: str, ops: Sequence[Space], depth: int = 3) -> Formula:
    """Random formula built from terms meaningful for a ``kind`` space over ``ops``."""
    if depth <= 0 or rng.random() < 0.35:
        return _atom(rng, kind, ops)
    r = rng.random()
    if r < 0.2:
        return Not(random_formula(rng, kind, ops, depth - 1))
    parts = tuple(random_formula(rng, kind, ops, depth - 1) for _ in range(rng.randint(2, 3)))
    return And(parts) if r < 0.6 else Or(parts)


def random_computon(rng: random.Random, s: Space) -> Computon:
    """A computon drawn from the ambient shape of ``s``; not necessarily a member."""
    while isinstance(s, (Reduced, Intersect, Difference)):
        s = s.base if isinstance(s, Reduced) else rng.choice((s.left, s.right))
    if isinstance(s, Primitive):
        return PrimitiveC(s.label)
    if isinstance(s, Sequential):
        return SequentialC(tuple(rng.choice(s.operands) for _ in range(rng.randint(1, 8))))
    if isinstance(s, Parallel):
        k = rng.randint(1, len(s.operands))
        dom = rng.sample(s.operands, k)
        return ParallelC(tuple((d, rng.randint(1, 4)) for d in dom))
    if isinstance(s, Aggregated):
        return random_computon(rng, rng.choice(s.operands))
    raise ValueError(f"cannot sample from {s!r}")


# --------------------------------------------------------------------------
# Triples of (space, formula, formula) per kind


@dataclass
class Triple:
    kind: str
    space: Space
    phi: Formula
    psi: Formula
    left: Space
    right: Space
    shared_phi: Formula


def _sibling(rng, kind, shared, depth):
    extra = [random_space(rng, max(depth - 1, 0)) for _ in range(rng.randint(0, 2))]
    op = {"sequential": seq, "parallel": par, "aggregated": agg}[kind]
    return op(*(list(shared) + extra))


def make_triple(rng: random.Random, kind: str, depth: int = 3, base: Optional[Space] = None) -> Triple:
    """Space, two formulas over it, and a pair of same-kind spaces sharing operands.

    ``shared_phi`` only mentions the shared operands, so it is meaningful for
    both spaces of the pair, their union and their intersection.
    """
    if kind == "primitive":
        space = base if base is not None else rng.choice(POOL)
        other = rng.choice([p for p in POOL if p != space])
        f = PrimSelf()
        phi = random_formula(rng, kind, (), 2)
        psi = random_formula(rng, kind, (), 2)
        return Triple(kind, space, phi, psi, space, other, f)
    while True:
        space = base if base is not None else _composite(rng, kind, depth)
        ops = space.operands
        phi = random_formula(rng, kind, ops)
        psi = random_formula(rng, kind, ops)
        k = min(len(ops), rng.randint(1, 2) if kind == "aggregated" else rng.randint(2, 3))
        shared = rng.sample(ops, k)
        try:
            left = _sibling(rng, kind, shared, depth)
            right = _sibling(rng, kind, shared, depth)
        except ConstructionError:
            continue
        if left.kind != kind or right.kind != kind:
            continue
        common = [o for o in left.operands if o in right.operands]
        if not common:
            continue
        return Triple(kind, space, phi, psi, left, right, random_formula(rng, kind, common))


# --------------------------------------------------------------------------
# Extensional comparison


def candidates(spaces: Sequence[Space], budget: int, samples: int, rng: random.Random) -> List[Computon]:
    """Enumeration prefix of each space plus random samples, deduplicated."""
    seen = {}
    for s in spaces:
        if budget > 0:
            for p in enumerate_space(s, budget):
                seen.setdefault(computon_key(p), p)
        for _ in range(samples):
            p = random_computon(rng, s)
            seen.setdefault(computon_key(p), p)
    return list(seen.values())


def counterexample(lhs: Space, rhs: Space, pool: Sequence[Computon]) -> Optional[Computon]:
    for p in pool:
        if member(p, lhs) != member(p, rhs):
            return p
    return None


REDUCTOR_LAWS = (
    "reduce-conjunction",
    "reduce-disjunction",
    "reduce-negation",
    "reduce-union",
    "reduce-intersection",
    "reduce-intersection-left",
    "reduce-intersection-right",
    "reduce-commutes",
)

STRUCTURAL_LAWS = (
    "agg-identity",
    "agg-commutativity",
    "agg-associativity",
    "seq-commutativity",
    "par-commutativity",
)

REFUTATIONS = (
    "seq-not-associative",
    "par-not-associative",
    "seq-no-identity",
    "par-no-identity",
)


def _law_pairs(t: Triple):
    """Each reductor law as (name, ambient spaces, lhs, rhs) for one triple."""
    S, phi, psi = t.space, t.phi, t.psi
    S1, S2, f = t.left, t.right, t.shared_phi
    both = intersect(S1, S2)
    return [
        (REDUCTOR_LAWS[0], (S,), lambda: reduce(S, And((phi, psi))),
         lambda: intersect(reduce(S, phi), reduce(S, psi))),
        (REDUCTOR_LAWS[1], (S,), lambda: reduce(S, Or((phi, psi))),
         lambda: agg(reduce(S, phi), reduce(S, psi))),
        (REDUCTOR_LAWS[2], (S,), lambda: reduce(S, Not(phi)),
         lambda: difference(S, reduce(S, phi))),
        (REDUCTOR_LAWS[3], (S1, S2), lambda: reduce(agg(S1, S2), f),
         lambda: agg(reduce(S1, f), reduce(S2, f))),
        (REDUCTOR_LAWS[4], (S1, S2), lambda: reduce(both, f),
         lambda: intersect(reduce(S1, f), reduce(S2, f))),
        (REDUCTOR_LAWS[5], (S1, S2), lambda: reduce(both, f),
         lambda: intersect(reduce(S1, f), S2)),
        (REDUCTOR_LAWS[6], (S1, S2), lambda: reduce(both, f),
         lambda: intersect(S1, reduce(S2, f))),
        (REDUCTOR_LAWS[7], (S,), lambda: reduce(reduce(S, psi), phi),
         lambda: reduce(reduce(S, phi), psi)),
    ]


def check_reductor_laws(triples: Sequence[Triple], budget: int, samples: int,
                        rng: random.Random, show: Callable = str) -> List[LawResult]:
    results = {name: LawResult(name, True) for name in REDUCTOR_LAWS}
    pools = {}
    for t in triples:
        for name, ambient, lhs, rhs in _law_pairs(t):
            res = results[name]
            key = tuple(s.key for s in ambient)
            if key not in pools:
                pools[key] = candidates(ambient, budget, samples, rng)
            pool = pools[key]
            left, right = lhs(), rhs()
            bad = counterexample(left, right, pool)
            res.checks += len(pool)
            if bad is not None and res.passed:
                res.passed = False
                res.detail = f"counterexample {show(bad)} in {t.kind} space {t.space.key}"
    return [results[name] for name in REDUCTOR_LAWS]


# --------------------------------------------------------------------------
# Composition laws


def _permutations(ops, rng, limit=24):
    """All orderings when there are at most ``limit``, else ``limit`` random shuffles."""
    if math.factorial(len(ops)) <= limit:
        return list(itertools.permutations(ops))
    return [rng.sample(list(ops), len(ops)) for _ in range(limit)]


def check_structural(spaces: Sequence[Space], rng: random.Random) -> List[LawResult]:
    """Identity, commutativity and associativity as canonical-key equalities."""
    results = {name: LawResult(name, True) for name in STRUCTURAL_LAWS}

    def record(name, ok, detail):
        r = results[name]
        r.checks += 1
        if not ok and r.passed:
            r.passed = False
            r.detail = detail

    pool = list(spaces)
    for s in pool:
        record("agg-identity", agg(s, EMPTY) == s and agg(EMPTY, s) == s, f"agg({s.key}, empty)")
        b, c = rng.choice(pool), rng.choice(pool)
        try:
            lhs, rhs = agg(s, agg(b, c)), agg(agg(s, b), c)
        except ConstructionError:
            pass
        else:
            record("agg-associativity", lhs == rhs, f"{lhs.key} != {rhs.key}")
        ops = [s, b, c] + ([rng.choice(pool)] if rng.random() < 0.5 else [])
        for name, op, own_kind in (("agg-commutativity", agg, Aggregated),
                                   ("seq-commutativity", seq, Sequential),
                                   ("par-commutativity", par, Parallel)):
            tries = [ops]
            if isinstance(s, own_kind):
                tries.append(list(s.operands))
            for operands in tries:
                try:
                    ref = op(*operands)
                except ConstructionError:
                    continue
                for perm in _permutations(operands, rng):
                    other = op(*perm)
                    record(name, other == ref, f"{other.key} != {ref.key}")
    return [results[name] for name in STRUCTURAL_LAWS]


def check_refutations(spaces: Sequence[Space], rng: random.Random, show: Callable = str) -> List[LawResult]:
    """The non-associativity witnesses and the absence of identities for seq and par.

    A row passes when the law is refuted, i.e. the witness behaves as claimed.
    """
    results = {name: LawResult(name, True, kind="refutation") for name in REFUTATIONS}
    s1, s2, s3 = POOL[:3]
    triples = [(s1, s2, s3)]
    distinct = list({s.key: s for s in spaces}.values())
    for _ in range(min(len(distinct), 50)):
        if len(distinct) >= 3:
            triples.append(tuple(rng.sample(distinct, 3)))

    seq_w = SequentialC((s1, s1))
    par_w = ParallelC(((s1, 5),))
    for a, b, c in triples:
        try:
            right_nested = seq(a, seq(b, c)), seq(seq(a, b), c)
            par_nested = par(a, par(b, c)), par(par(a, b), c)
        except ConstructionError:
            continue
        w = SequentialC((a, a))
        r = results["seq-not-associative"]
        r.checks += 1
        if not (member(w, right_nested[0]) and not member(w, right_nested[1])):
            r.passed = False
            r.detail = f"witness {show(w)} failed"
        w = ParallelC(((a, 5),))
        r = results["par-not-associative"]
        r.checks += 1
        if not (member(w, par_nested[0]) and not member(w, par_nested[1])):
            r.passed = False
            r.detail = f"witness {show(w)} failed"
    if results["seq-not-associative"].passed:
        results["seq-not-associative"].detail = f"not associative (witness {show(seq_w)})"
    if results["par-not-associative"].passed:
        results["par-not-associative"].detail = f"not associative (witness {show(par_w)})"

    for s in distinct or list(POOL):
        e = rng.choice(distinct or list(POOL))
        for name, op in (("seq-no-identity", seq), ("par-no-identity", par)):
            try:
                composed = op(s, e)
            except ConstructionError:
                continue
            r = results[name]
            r.checks += 1
            if composed == s:
                r.passed = False
                r.detail = f"{op.__name__}({s.key}, {e.key}) == {s.key}"
    for name in ("seq-no-identity", "par-no-identity"):
        if results[name].passed:
            results[name].detail = "no operand acts as identity"
    return [results[name] for name in REFUTATIONS]


# --------------------------------------------------------------------------
# Driver


def _triples_for(spaces, rng, per_kind, depth):
    triples = []
    for s in spaces:
        if s.kind in KINDS:
            triples.append(make_triple(rng, s.kind, depth, base=s))
    for kind in KINDS:
        for _ in range(per_kind):
            triples.append(make_triple(rng, kind, depth))
    return triples


def run_laws(spaces: Sequence[Space] = (), budget: int = 100, samples: int = 50, seed: int = 0,
             random_spaces: int = 50, per_kind: int = 10, depth: int = 3,
             show: Callable = str) -> List[LawResult]:
    """Check every law over ``spaces`` plus seeded random spaces and triples."""
    rng = random.Random(seed)
    pool = [s for s in spaces if not isinstance(s, Empty)]
    pool += [random_space(rng, depth) for _ in range(random_spaces)]
    results = check_structural(pool, rng)
    triples = _triples_for([s for s in spaces if not isinstance(s, Empty)], rng, per_kind, depth)
    results += check_reductor_laws(triples, budget, samples, rng, show)
    results += check_refutations(pool, rng, show)
    return results
