"""Graphviz DOT rendering of space expression trees.

Operators become circle nodes labelled ``SEQ``, ``PAR``, ``AGG`` or ``σ``;
primitives become boxes.  Every named composite is wrapped in a dashed
cluster carrying its name.  Node ids are assigned in pre-order, so the
output is byte-stable.

Render with e.g. ``dot -Tpng space.gv -o space.png``.
"""
from __future__ import annotations

import json

from .core import (
    Aggregated,
    Difference,
    Empty,
    Intersect,
    Parallel,
    Primitive,
    Reduced,
    Sequential,
    Space,
)

__all__ = ["to_dot"]

_OPERATOR_LABELS = {
    Sequential: "SEQ",
    Parallel: "PAR",
    Aggregated: "AGG",
    Reduced: "σ",
    Intersect: "∩",
    Difference: "∖",
}


def _q(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


class _Emitter:
    def __init__(self, names, expand):
        self.names = names
        self.expand = expand
        self.lines = []
        self.edges = []
        self.counter = 0
        self.clusters = 0

    def name_of(self, space):
        return self.names.name_of(space) if self.names is not None else None

    def fresh(self):
        nid = f"n{self.counter}"
        self.counter += 1
        return nid

    def leaf(self, label, indent, dashed=False):
        nid = self.fresh()
        style = ", style=dashed" if dashed else ""
        self.lines.append(f"{indent}{nid} [label={_q(label)}, shape=box{style}];")
        return nid

    def visit(self, space: Space, indent: str, root=False) -> str:
        if isinstance(space, Primitive):
            return self.leaf(space.label, indent)
        if isinstance(space, Empty):
            return self.leaf("∅", indent)
        name = self.name_of(space)
        if not root and not self.expand and name is not None:
            return self.leaf(name, indent, dashed=True)
        if name is not None:
            self.lines.append(f"{indent}subgraph cluster_{self.clusters} {{")
            self.clusters += 1
            self.lines.append(f"{indent}  label={_q(name)};")
            self.lines.append(f"{indent}  style=dashed;")
            inner = indent + "  "
        else:
            inner = indent
        nid = self.fresh()
        label = _OPERATOR_LABELS[type(space)]
        if isinstance(space, Reduced):
            from .dsl import format_formula

            label += "\n" + format_formula(space.formula, self._short)
        self.lines.append(f"{inner}{nid} [label={_q(label)}, shape=circle];")
        children = space.children
        if isinstance(space, (Sequential, Parallel, Aggregated)):
            children = sorted(children, key=self._short)
        for child in children:
            slot = len(self.edges)
            self.edges.append(None)
            self.edges[slot] = (nid, self.visit(child, inner))
        if name is not None:
            self.lines.append(f"{indent}}}")
        return nid

    def _short(self, space):
        name = self.name_of(space)
        if name is not None:
            return name
        if isinstance(space, Primitive):
            return space.label
        return space.key


def to_dot(space: Space, names=None, expand: bool = True, title: str = "space") -> str:
    """DOT digraph for ``space``.

    ``names`` is an object with a ``name_of(space)`` method, typically a
    :class:`cspace.dsl.Environment`.  With ``expand=False`` named operands are
    drawn as dashed boxes instead of being opened up.
    """
    em = _Emitter(names, expand)
    em.visit(space, "  ", root=True)
    out = [f"digraph {_q(title)} {{", '  node [fontname="Helvetica"];']
    out.extend(em.lines)
    out.extend(f"  {a} -> {b};" for a, b in em.edges)
    out.append("}")
    return "\n".join(out) + "\n"
