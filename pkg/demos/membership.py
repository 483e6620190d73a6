"""Membership, enumeration and the classification tables.

Sequential computons are finite sequences over the operands; parallel ones
are maps from operands to positive instance counts.
"""
from cspace import (
    ParallelC,
    SequentialC,
    absent_spaces,
    classify_parallel,
    classify_sequential,
    count_up_to,
    enumerate_space,
    member,
    par,
    prim,
    seq,
)
from cspace.dsl import format_computon

S1, S2, S3, S4, S5 = (prim(f"S{i}") for i in range(1, 6))

S = seq(S1, S2, S3, S4)
p = SequentialC((S2, S1, S4, S3))
print(format_computon(p), "in S:", member(p, S), "->", classify_sequential(p, S))

P = par(S1, S2, S3, S4)
q = ParallelC({S1: 2, S2: 1, S3: 3, S4: 1})
print(format_computon(q), "in P:", member(q, P), "->", classify_parallel(q, P))

r = ParallelC({S1: 1, S2: 2, S3: 1})
wide = par(S1, S2, S3, S4, S5)
print(format_computon(r), "->", classify_parallel(r, wide),
      "absent:", sorted(s.label for s in absent_spaces(r, wide)))

# The witnesses that neither operator is associative.
w = SequentialC((S1, S1))
print("<S1,S1> in seq(S1, seq(S2,S3)):", member(w, seq(S1, seq(S2, S3))))
print("<S1,S1> in seq(seq(S1,S2), S3):", member(w, seq(seq(S1, S2), S3)))

print("first members of seq(S1,S2):",
      " ".join(format_computon(x) for x in enumerate_space(seq(S1, S2), 8)))
print("first members of par(S1,S2):",
      " ".join(format_computon(x) for x in enumerate_space(par(S1, S2), 8)))
print("sequences of length <= 3 over two operands:", count_up_to(seq(S1, S2), 3))
