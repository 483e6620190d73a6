"""Composing primitive spaces into higher-order ones.

Run with ``python3 demos/building_spaces.py``.
"""
from cspace import EMPTY, agg, cardinality, order, par, prim, seq, subsumes

S1, S2, S3, S4, S5 = (prim(f"S{i}") for i in range(1, 6))

# First-order spaces: every operand is a primitive.
S6 = seq(S1, S2)
S7 = agg(S3, S4)
print("S6 =", S6.key, "order", order(S6))
print("S7 =", S7.key, "order", order(S7))

# S8 subsumes S6 and S7 directly, and S1 only through S6.
S8 = par(S5, S6, S7)
print("S8 order", order(S8))
print("S8 subsumes S6:", subsumes(S8, S6), " S8 subsumes S1:", subsumes(S8, S1))

# Operand order never matters: the operators are commutative, so
# identity is a canonical key over a sorted operand set.
print("seq(S1,S2) == seq(S2,S1):", seq(S1, S2) == seq(S2, S1))

# Aggregation is a union: associative, with the empty space as identity.
print("agg assoc:", agg(S1, agg(S2, S3)) == agg(agg(S1, S2), S3))
print("agg identity:", agg(S6, EMPTY) == S6)

# Sequencing and parallelisation do not flatten.
print("seq assoc:", seq(S1, seq(S2, S3)) == seq(seq(S1, S2), S3))

for s in (S1, S6, S7, S8, agg(S1, S2, S3)):
    print(f"{s.kind:<11} {str(cardinality(s))}")
