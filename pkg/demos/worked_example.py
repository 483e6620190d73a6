"""The bottom-up construction of a third-order singleton space, plus its
diagram.

Writes ``D.gv`` to the working directory; render it with
``dot -Tpng D.gv -o D.png``.
"""
from pathlib import Path

from cspace import load_corpus, order, prove_finite, to_dot
from cspace.dsl import format_computon

env = load_corpus("worked_example")

for name in env:
    space = env[name]
    members = prove_finite(space)
    shown = "infinite" if members is None else "{" + ", ".join(format_computon(p, env) for p in members) + "}"
    print(f"{name:<3} order {order(space)}  {shown}")

out = Path("D.gv")
out.write_text(to_dot(env["D"], env, title="D"), encoding="utf-8")
print("wrote", out)
