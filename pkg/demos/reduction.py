"""Narrowing spaces with reductor formulas.

A reduced space stays lazy.  When every disjunct of the formula pins the
shape of its computons, the members are materialised and the space is known
to be finite.
"""
from cspace import cardinality, enumerate_space, load_program, prove_finite
from cspace.dsl import format_computon, format_space

PROGRAM = """
S = seq(S1, S2, S3, S4, S5)
Open = reduce(S, "p(1)=S3 & p(2)=p(4)")
Single = reduce(S, "p(1)=S3 & p(2)=S2 & p(3)=S1 & p(4)=S2 & |p|=4")
M = par(S1, S2, S3, S4, S5)
Pinned = reduce(M, "p(S1)=1 & p(S2)=2 & p(S3)=1 & S4 !in dom(p) & S5 !in dom(p)")
U = agg(S1, S2, S3)
Pick = reduce(U, "p in S1 | p in S3")
"""

env = load_program(PROGRAM)
for name in ("Open", "Single", "Pinned", "Pick"):
    space = env[name]
    members = prove_finite(space)
    print(f"{name}: {format_space(space, env)}")
    print(f"  cardinality {cardinality(space)}")
    if members is None:
        sample = [format_computon(p, env) for p in enumerate_space(space, 4)]
        print("  not provably finite; first members:", " ".join(sample))
    else:
        print("  members:", " ".join(format_computon(p, env) for p in members))
