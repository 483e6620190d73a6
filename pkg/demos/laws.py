"""Checking the algebraic laws on a small budget.

The same run is available as ``cspace laws worked_example``.
"""
from cspace import load_corpus, run_laws
from cspace.dsl import format_computon

env = load_corpus("algebra_laws")
results = run_laws(list(env.values()), budget=60, samples=20, seed=1,
                   show=lambda p: format_computon(p, env))
for r in results:
    print(r.row())
print("all hold:", all(r.passed for r in results))
