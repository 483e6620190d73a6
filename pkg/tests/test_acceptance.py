"""Acceptance criteria, one test each.

Every test prints a single ``AC<n> PASS|FAIL`` line; under pytest the lines
are also collected into a summary section at the end of the run.  Run this
file directly with ``python3 tests/test_acceptance.py`` to get just the
lines.
"""
from __future__ import annotations

import contextlib
import itertools
import random
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

import cspace.core as core
import cspace.formula as formula
from cspace import (
    CONTINUUM,
    COUNTABLY_INFINITE,
    EMPTY,
    ParallelC,
    ParallelClass,
    SequentialC,
    SequentialClass,
    agg,
    cardinality,
    classify_parallel,
    classify_sequential,
    count_up_to,
    format_program,
    load_program,
    member,
    order,
    par,
    parse_program,
    prim,
    prove_finite,
    reduce,
    seq,
    to_dot,
)
from cspace.dsl import corpus_names, corpus_text
from cspace.core import Parallel, Sequential
from cspace.laws import KINDS, check_reductor_laws, make_triple, random_formula, random_space

from conftest import ACCEPTANCE_LINES
from oracle import brute_count
from test_dot import census

S1, S2, S3, S4, S5 = (prim(f"S{i}") for i in range(1, 6))


@contextlib.contextmanager
def criterion(n, title):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"AC{n} FAIL  {title}  ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"AC{n} PASS  {title}  [{time.perf_counter() - start:.2f}s]"
    ACCEPTANCE_LINES.append(line)
    print(line)


def _clear_caches():
    for fn in (core.subsumed, core.order, core.cardinality, formula.finite_members,
               formula.check_wellformed):
        fn.cache_clear()


def _random_spaces(seed, n=200, depth=3):
    rng = random.Random(seed)
    return [random_space(rng, depth) for _ in range(n)]


def test_ac1_pipeline_golden():
    with criterion(1, "worked example pipeline: A, B, C, D singletons, order(S9)=3, < 1 s"):
        _clear_caches()
        start = time.perf_counter()
        env = load_program(corpus_text("worked_example"))
        a, b, c, d = (prove_finite(env[n]) for n in "ABCD")
        s9_order = order(env["S9"])
        elapsed = time.perf_counter() - start
        A, B, C = env["A"], env["B"], env["C"]
        assert a == (ParallelC(((S1, 1), (S2, 1))),)
        assert b == (SequentialC((S3, S4)),)
        assert c == (ParallelC(((A, 2), (B, 1))),)
        assert d == (SequentialC((C, S5)),)
        assert [cardinality(env[n]).n for n in "ABCD"] == [1, 1, 1, 1]
        assert s9_order == 3
        assert elapsed < 1.0, f"took {elapsed:.3f}s"


def test_ac2_non_associativity_witnesses():
    with criterion(2, "non-associativity witnesses <S1,S1> and {S1:5}"):
        w = SequentialC((S1, S1))
        assert member(w, seq(S1, seq(S2, S3))) is True
        assert member(w, seq(seq(S1, S2), S3)) is False
        v = ParallelC(((S1, 5),))
        assert member(v, par(S1, par(S2, S3))) is True
        assert member(v, par(par(S1, S2), S3)) is False


def test_ac3_commutativity_identity_associativity():
    with criterion(3, "200 random spaces: permutations, agg identity, agg re-association"):
        spaces = _random_spaces(seed=3)
        failures = []
        builders = {Sequential: seq, Parallel: par, core.Aggregated: agg}
        shuffler = random.Random(3)

        def orderings(ops):
            # exhaustive up to 5 operands; flattened aggregates can hold a dozen
            if len(ops) <= 5:
                return itertools.permutations(ops)
            return (shuffler.sample(ops, len(ops)) for _ in range(120))

        for s in spaces:
            op = builders.get(type(s))
            if op is not None:
                for perm in orderings(s.operands):
                    if op(*perm).key != s.key:
                        failures.append(("perm", s.key))
            if agg(s, EMPTY).key != s.key:
                failures.append(("identity", s.key))
        rng = random.Random(33)
        for _ in range(200):
            x, y, z = rng.sample(spaces, 3)
            if agg(x, agg(y, z)).key != agg(agg(x, y), z).key:
                failures.append(("assoc", x.key, y.key, z.key))
            for op in (seq, par, agg):
                try:
                    lhs = op(x, y, z)
                except core.ConstructionError:
                    continue
                if any(op(*p).key != lhs.key for p in itertools.permutations((x, y, z))):
                    failures.append(("perm3", op.__name__))
        assert failures == []


def test_ac4_reductor_laws():
    with criterion(4, "eight reductor laws, B=500, 200 samples, 50 triples per kind, < 60 s"):
        start = time.perf_counter()
        rng = random.Random(4)
        triples = [make_triple(rng, kind, 3) for kind in KINDS for _ in range(50)]
        results = check_reductor_laws(triples, 500, 200, rng)
        elapsed = time.perf_counter() - start
        assert len(results) == 8
        bad = [r.row() for r in results if not r.passed]
        assert bad == []
        assert all(r.checks > 0 for r in results)
        assert elapsed < 60.0, f"took {elapsed:.1f}s"


def test_ac5_cardinality_classification():
    with criterion(5, "Sequential -> continuum, Parallel -> countably infinite"):
        spaces = _random_spaces(seed=5)
        for name in corpus_names():
            spaces.extend(load_program(corpus_text(name)).values())
        seen = {Sequential: 0, Parallel: 0}

        def walk(s):
            if isinstance(s, Sequential):
                assert cardinality(s) == CONTINUUM, s.key
                seen[Sequential] += 1
            elif isinstance(s, Parallel):
                assert cardinality(s) == COUNTABLY_INFINITE, s.key
                seen[Parallel] += 1
            for child in s.children:
                walk(child)

        for s in spaces:
            walk(s)
        assert seen[Sequential] > 100 and seen[Parallel] > 100


def _small_spaces():
    prims = [S1, S2, S3]
    first = [op(*c) for op in (seq, par, agg) for k in (2, 3) for c in itertools.combinations(prims, k)]
    atoms = prims + first
    out = list(atoms)
    for k in (2, 3):
        for ops in itertools.combinations(atoms, k):
            for op in (seq, par, agg):
                try:
                    out.append(op(*ops))
                except core.ConstructionError:
                    pass
    return list({s.key: s for s in out}.values())


def test_ac6_count_up_to_matches_oracle():
    with criterion(6, "count_up_to equals independent brute force, <=3 operands, bounds <=3"):
        assert count_up_to(seq(S1, S2), 3) == 14 == brute_count(seq(S1, S2), 3)
        assert count_up_to(par(S1, S2), 2) == 8 == brute_count(par(S1, S2), 2)
        assert count_up_to(par(S1, S2, S3), 1) == 7 == brute_count(par(S1, S2, S3), 1)
        spaces = _small_spaces()
        rng = random.Random(6)
        for base in [s for s in spaces if s.kind in ("sequential", "parallel", "aggregated")][:300]:
            f = random_formula(rng, base.kind, base.operands, 3)
            spaces.append(reduce(base, f))
        mismatches = []
        for s in spaces:
            for bound in (1, 2, 3):
                if count_up_to(s, bound) != brute_count(s, bound):
                    mismatches.append((s.key, bound))
        assert len(spaces) > 1000
        assert mismatches == []


def test_ac7_classification_tables():
    with criterion(7, "two reference computons plus 12 hand cases cover every class"):
        P4 = par(S1, S2, S3, S4)
        assert classify_sequential(SequentialC((S2, S1, S4, S3)), seq(S1, S2, S3, S4)) is SequentialClass.BIJECTIVE
        assert classify_parallel(ParallelC(((S1, 2), (S2, 1), (S3, 3), (S4, 1))), P4) is ParallelClass.TOTAL_NON_INJECTIVE
        Sq = SequentialClass
        Pc = ParallelClass
        s3 = seq(S1, S2, S3)
        cases = [
            (SequentialC((S3, S1, S2)), s3, Sq.BIJECTIVE),
            (SequentialC((S1,)), seq(S1, S2), Sq.INJECTIVE_NON_SURJECTIVE),
            (SequentialC((S2, S3)), s3, Sq.INJECTIVE_NON_SURJECTIVE),
            (SequentialC((S1, S2, S1)), seq(S1, S2), Sq.NON_INJECTIVE_SURJECTIVE),
            (SequentialC((S3, S1, S2, S3)), s3, Sq.NON_INJECTIVE_SURJECTIVE),
            (SequentialC((S3, S2, S1, S2)), seq(S1, S2, S3, S4, S5), Sq.NON_INJECTIVE_NON_SURJECTIVE),
            (ParallelC(((S1, 1), (S2, 2))), par(S1, S2), Pc.TOTAL_INJECTIVE),
            (ParallelC(((S1, 3), (S2, 1), (S3, 2))), par(S1, S2, S3), Pc.TOTAL_INJECTIVE),
            (ParallelC(((S1, 5),)), par(S1, par(S2, S3)), Pc.PARTIAL_INJECTIVE),
            (ParallelC(((S1, 1), (S2, 2), (S3, 1))), par(S1, S2, S3, S4, S5), Pc.PARTIAL_NON_INJECTIVE),
            (ParallelC(((S1, 4), (S2, 4))), par(S1, S2), Pc.TOTAL_NON_INJECTIVE),
            (ParallelC(((S2, 2), (S3, 1), (S4, 2))), P4, Pc.PARTIAL_NON_INJECTIVE),
        ]
        assert len(cases) == 12
        for p, s, expected in cases:
            got = classify_sequential(p, s) if isinstance(p, SequentialC) else classify_parallel(p, s)
            assert got is expected, (p, expected)
        assert {c[2] for c in cases} == set(Sq) | set(Pc)


def test_ac8_dot_structure():
    with criterion(8, "expanded S8 diagram: 3 operators, 5 leaves, 7 edges, byte-stable"):
        env = load_program(corpus_text("second_order"))
        text = to_dot(env["S8"], env, title="S8")
        ops, leaves, edges = census(text)
        assert (len(ops), len(leaves), len(edges)) == (3, 5, 7)
        assert to_dot(env["S8"], env, title="S8") == text
        proc = subprocess.run([sys.executable, "-m", "cspace.cli", "dot", "second_order", "S8"],
                              capture_output=True, check=True)
        assert proc.stdout.decode("utf-8") == text


def test_ac9_corpus_round_trip():
    with criterion(9, "every corpus file parses cleanly and round-trips"):
        names = corpus_names()
        assert len(names) >= 10
        for name in names:
            prog = parse_program(corpus_text(name))
            load_program(corpus_text(name))
            text = format_program(prog)
            again = parse_program(text)
            assert again == prog, name
            assert format_program(again) == text, name


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
