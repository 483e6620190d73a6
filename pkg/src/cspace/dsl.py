"""Text syntax for space programs, reductor formulas and computon literals.

A program is a list of bindings, one per line, ``#`` starting a comment::

    S1 = prim("S1")
    S2 = prim("S2")
    S6 = par(S1, S2)
    A = reduce(S6, "p(S1)=1 & p(S2)=1")

Formula syntax, loosest binding first: ``|``, ``&``, ``!``.  Atoms are
``p(3)=S2``, ``p(2)=p(4)``, ``|p|=4``, ``p(S1)=2``, ``p(S1)=p(S2)``,
``S4 !in dom(p)``, ``p in S2`` and ``p in self``.  The Unicode forms
``∧ ∨ ¬ ∈ ∉`` are accepted as well.

Parsing happens in two phases.  :func:`parse_program` checks syntax and name
scoping and returns a :class:`Program`; :func:`build` constructs the spaces,
which is where arity and formula-kind problems surface.  Every problem is
reported as a :class:`Diagnostic` inside a :class:`DslError`.
"""
from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Tuple

from . import compose
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
    operands_of,
    shape,
)
from .errors import CspaceError
from .formula import (
    AggMember,
    And,
    Atom,
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
    check_wellformed,
    reduce,
)

__all__ = [
    "Diagnostic", "DslError", "Program", "Binding", "Name", "PrimLit", "EmptyLit",
    "Call", "ReduceExpr", "Ref", "Environment",
    "parse_program", "build", "load_program", "evaluate_expression", "format_program",
    "corpus_names", "corpus_text", "load_corpus",
    "parse_formula_text", "parse_formula", "resolve_formula", "format_formula",
    "parse_computon", "format_computon", "format_space", "RESERVED",
]

OPERATORS = {"seq": 2, "par": 2, "agg": 2, "intersect": 2, "difference": 2}
RESERVED = frozenset({"empty", "prim", "reduce", "p", "self", "in", "dom", "Dom"}) | set(OPERATORS)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int = 0
    column: int = 0

    def __str__(self):
        return f"{self.line}:{self.column}: {self.code}: {self.message}"


class DslError(CspaceError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


# --------------------------------------------------------------------------
# Lexing

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<int>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>!in\b|[()=,<>{}:&|!]|[∧∨¬∈∉⟨⟩])
    """,
    re.VERBOSE,
)

_ALIASES = {"∧": "&", "∨": "|", "¬": "!", "∈": "in", "∉": "!in", "⟨": "<", "⟩": ">"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str, line: int = 1, column: int = 1) -> List[Token]:
    tokens = []
    pos = 0
    line_start = pos - (column - 1)
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise DslError([Diagnostic("syntax", f"unexpected character {text[pos]!r}", line, col)])
        kind = m.lastgroup
        value = m.group()
        if kind == "newline":
            tokens.append(Token("newline", value, line, col))
            line += 1
            line_start = m.end()
        elif kind == "punct":
            tokens.append(Token("punct", _ALIASES.get(value, value), line, col))
        elif kind == "name" and value == "in":
            tokens.append(Token("punct", "in", line, col))
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Cursor:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def at(self, text, kind="punct") -> bool:
        return self.tok.kind == kind and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else (
            "end of line" if tok.kind == "newline" else repr(tok.text))
        raise DslError([Diagnostic("syntax", f"{message}, found {found}", tok.line, tok.column)])

    def expect(self, text, kind="punct") -> Token:
        if not self.at(text, kind):
            self.error(f"expected {text!r}")
        return self.advance()

    def expect_kind(self, kind, what) -> Token:
        if self.tok.kind != kind:
            self.error(f"expected {what}")
        return self.advance()


# --------------------------------------------------------------------------
# Formula text


@dataclass(frozen=True)
class Ref:
    """A not-yet-resolved space name inside formula text."""

    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


def _name_of(x) -> str:
    return x.name if isinstance(x, Ref) else getattr(x, "label", None) or x.key


class _FormulaParser:
    def __init__(self, cur: _Cursor):
        self.cur = cur

    def parse(self) -> Formula:
        f = self.disjunction()
        if self.cur.tok.kind != "eof":
            self.cur.error("expected '&', '|' or end of formula")
        return f

    def disjunction(self):
        parts = [self.conjunction()]
        while self.cur.at("|"):
            self.cur.advance()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self):
        parts = [self.unary()]
        while self.cur.at("&"):
            self.cur.advance()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        cur = self.cur
        if cur.at("!"):
            cur.advance()
            return Not(self.unary())
        if cur.at("("):
            cur.advance()
            f = self.disjunction()
            cur.expect(")")
            return f
        if cur.at("|"):
            cur.advance()
            cur.expect("p", "name")
            cur.expect("|")
            cur.expect("=")
            return SeqLenEq(self.positive())
        if cur.at("p", "name"):
            return self.p_atom()
        if cur.tok.kind == "name":
            ref = self.ref()
            cur.expect("!in")
            if not (cur.at("dom", "name") or cur.at("Dom", "name")):
                cur.error("expected 'dom'")
            cur.advance()
            cur.expect("(")
            cur.expect("p", "name")
            cur.expect(")")
            return ParAbsent(ref)
        cur.error("expected a term")

    def positive(self) -> int:
        tok = self.cur.expect_kind("int", "a positive integer")
        value = int(tok.text)
        if value < 1:
            self.cur.error("expected a positive integer", tok)
        return value

    def ref(self) -> Ref:
        tok = self.cur.expect_kind("name", "a space name")
        if tok.text in RESERVED:
            self.cur.error("expected a space name", tok)
        return Ref(tok.text, tok.line, tok.column)

    def p_atom(self):
        cur = self.cur
        cur.advance()
        if cur.at("in"):
            cur.advance()
            if cur.at("self", "name"):
                cur.advance()
                return PrimSelf()
            return AggMember(self.ref())
        cur.expect("(")
        if cur.tok.kind == "int":
            i = self.positive()
            cur.expect(")")
            cur.expect("=")
            if cur.at("p", "name"):
                cur.advance()
                cur.expect("(")
                k = self.positive()
                cur.expect(")")
                return SeqIndexIndexEq(i, k)
            return SeqIndexEq(i, self.ref())
        left = self.ref()
        cur.expect(")")
        cur.expect("=")
        if cur.at("p", "name"):
            cur.advance()
            cur.expect("(")
            right = self.ref()
            cur.expect(")")
            return ParCountCountEq(left, right)
        return ParCountEq(left, self.positive())


def parse_formula_text(text: str, line: int = 1, column: int = 1) -> Formula:
    """Syntax-only parse; space names stay as :class:`Ref` placeholders."""
    tokens = [t for t in _tokenize(text, line, column) if t.kind != "newline"]
    return _FormulaParser(_Cursor(tokens)).parse()


def _refs(f: Formula) -> List[Ref]:
    if isinstance(f, (And, Or)):
        return [r for g in f.operands for r in _refs(g)]
    if isinstance(f, Not):
        return _refs(f.operand)
    return [v for v in (getattr(f, fl.name) for fl in dataclasses.fields(f)) if isinstance(v, Ref)]


def _substitute(f: Formula, env) -> Formula:
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_substitute(g, env) for g in f.operands))
    if isinstance(f, Not):
        return Not(_substitute(f.operand, env))
    changes = {fl.name: env[getattr(f, fl.name).name]
               for fl in dataclasses.fields(f) if isinstance(getattr(f, fl.name), Ref)}
    return dataclasses.replace(f, **changes) if changes else f


def resolve_formula(raw: Formula, env: Dict[str, Space], implicit=None) -> Formula:
    """Replace name placeholders by spaces.

    ``implicit`` is the set of names that stand for primitives of the same
    label when ``env`` does not bind them.
    """
    implicit = implicit or set()
    lookup = dict(env)
    missing = []
    for r in _refs(raw):
        if r.name in lookup:
            continue
        if r.name in implicit:
            lookup[r.name] = Primitive(r.name)
        else:
            missing.append(r)
    if missing:
        raise DslError([Diagnostic("unbound-name", f"unbound name {r.name}", r.line, r.column)
                        for r in missing])
    return _substitute(raw, lookup)


def _kind_check(f: Formula, target: Space, line=0, column=0):
    violations = check_wellformed(f, target)
    if violations:
        raise DslError([Diagnostic(v.code, str(v), line, column) for v in violations])


def _operand_env(target: Space) -> Dict[str, Space]:
    env = {}
    for op in operands_of(target):
        if isinstance(op, Primitive):
            env.setdefault(op.label, op)
    return env


def parse_formula(text: str, target: Space, env: Optional[Dict[str, Space]] = None) -> Formula:
    """Parse ``text`` and check it against ``target``.

    Names resolve against ``env``; without one, against the primitive labels
    of the target's operands, any other name meaning a primitive of that
    label (and so failing the operand check).
    """
    raw = parse_formula_text(text)
    if env is None:
        f = resolve_formula(raw, _operand_env(target), {r.name for r in _refs(raw)})
    else:
        f = resolve_formula(raw, env, getattr(env, "implicit", None))
    _kind_check(f, target)
    return f


def format_formula(f: Formula, names=None) -> str:
    if names is None:
        return f.render(_name_of)
    return f.render(lambda s: s.name if isinstance(s, Ref) else names(s))


# --------------------------------------------------------------------------
# Program AST


@dataclass(frozen=True)
class Name:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PrimLit:
    label: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class EmptyLit:
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    op: str
    args: Tuple[object, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ReduceExpr:
    base: object
    formula: Formula
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Binding:
    name: str
    expr: object
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Program:
    """Parsed bindings.

    Names that are used but never bound anywhere in the program denote
    primitive spaces labelled by the name itself, so ``seq(S1, S2)`` needs
    no ``prim`` declarations.  Using a name before its own binding is an
    error.
    """

    bindings: Tuple[Binding, ...]

    def names(self) -> List[str]:
        return [b.name for b in self.bindings]

    def implicit_primitives(self) -> List[str]:
        bound = set(self.names())
        seen = {}
        for b in self.bindings:
            for name, _, _ in _free_names(b.expr):
                if name not in bound:
                    seen.setdefault(name, None)
        return list(seen)

    def __len__(self):
        return len(self.bindings)


class _ProgramParser:
    def __init__(self, text: str):
        self.cur = _Cursor(_tokenize(text))
        self.depth = 0

    def skip_newlines(self):
        while self.cur.tok.kind == "newline":
            self.cur.advance()

    def program(self) -> Program:
        bindings = []
        self.skip_newlines()
        while self.cur.tok.kind != "eof":
            bindings.append(self.binding())
            if self.cur.tok.kind not in ("newline", "eof"):
                self.cur.error("expected end of line after binding")
            self.skip_newlines()
        return Program(tuple(bindings))

    def binding(self) -> Binding:
        tok = self.cur.expect_kind("name", "a binding name")
        if tok.text in RESERVED:
            raise DslError([Diagnostic("reserved-name", f"{tok.text} is a reserved word",
                                       tok.line, tok.column)])
        self.cur.expect("=")
        return Binding(tok.text, self.expr(), tok.line, tok.column)

    def expr(self):
        cur = self.cur
        tok = cur.expect_kind("name", "an expression")
        if tok.text == "empty":
            return EmptyLit(tok.line, tok.column)
        if tok.text == "prim":
            cur.expect("(")
            s = cur.expect_kind("string", "a quoted label")
            cur.expect(")")
            label = json.loads(s.text)
            if not label:
                cur.error("expected a non-empty label", s)
            return PrimLit(label, tok.line, tok.column)
        if tok.text == "reduce":
            cur.expect("(")
            base = self.expr()
            cur.expect(",")
            s = cur.expect_kind("string", "a quoted formula")
            cur.expect(")")
            raw = parse_formula_text(json.loads(s.text), s.line, s.column + 1)
            return ReduceExpr(base, raw, tok.line, tok.column)
        if tok.text in OPERATORS:
            cur.expect("(")
            args = [self.expr()]
            while cur.at(","):
                cur.advance()
                args.append(self.expr())
            cur.expect(")")
            if tok.text in ("intersect", "difference") and len(args) != 2:
                raise DslError([Diagnostic("arity", f"{tok.text} takes exactly 2 operands",
                                           tok.line, tok.column)])
            return Call(tok.text, tuple(args), tok.line, tok.column)
        if tok.text in RESERVED:
            cur.error("expected an expression", tok)
        return Name(tok.text, tok.line, tok.column)


def _free_names(expr) -> List[Tuple[str, int, int]]:
    if isinstance(expr, Name):
        return [(expr.name, expr.line, expr.column)]
    if isinstance(expr, Call):
        return [n for a in expr.args for n in _free_names(a)]
    if isinstance(expr, ReduceExpr):
        return _free_names(expr.base) + [(r.name, r.line, r.column) for r in _refs(expr.formula)]
    return []


def parse_program(text: str) -> Program:
    """Parse and scope-check a program; raises :class:`DslError` on any problem."""
    if not isinstance(text, str):
        raise DslError([Diagnostic("syntax", "program text must be a string")])
    try:
        program = _ProgramParser(text).program()
    except RecursionError:
        raise DslError([Diagnostic("syntax", "expression nested too deeply")]) from None
    diagnostics = []
    bound = set()
    everywhere = set(program.names())
    for b in program.bindings:
        for name, line, col in _free_names(b.expr):
            if name not in bound and name in everywhere:
                diagnostics.append(Diagnostic("unbound-name", f"unbound name {name}", line, col))
        if b.name in bound:
            diagnostics.append(Diagnostic("rebinding", f"{b.name} is already bound", b.line, b.column))
        bound.add(b.name)
    if diagnostics:
        raise DslError(diagnostics)
    return program


# --------------------------------------------------------------------------
# Construction


class Environment(dict):
    """Ordered ``name -> Space`` bindings with reverse lookup for printing."""

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        self._names = {}
        self.implicit = set()

    def lookup(self, name: str) -> Space:
        if name in self:
            return self[name]
        if name in self.implicit:
            return Primitive(name)
        raise KeyError(name)

    def __setitem__(self, name, space):
        super().__setitem__(name, space)
        self._names.setdefault(space.key, name)

    def name_of(self, space: Space) -> Optional[str]:
        return self._names.get(space.key)

    def label(self, space: Space) -> str:
        return format_space(space, self)


def _construct(expr, env: Environment) -> Space:
    if isinstance(expr, Name):
        return env.lookup(expr.name)
    if isinstance(expr, PrimLit):
        return Primitive(expr.label)
    if isinstance(expr, EmptyLit):
        return Empty()
    if isinstance(expr, Call):
        args = [_construct(a, env) for a in expr.args]
        return getattr(compose, expr.op)(*args)
    if isinstance(expr, ReduceExpr):
        base = _construct(expr.base, env)
        f = resolve_formula(expr.formula, env, env.implicit)
        _kind_check(f, base, expr.line, expr.column)
        return reduce(base, f)
    raise TypeError(f"unknown expression node {expr!r}")


def build(program: Program) -> Environment:
    env = Environment()
    env.implicit = set(program.implicit_primitives())
    for b in program.bindings:
        try:
            env[b.name] = _construct(b.expr, env)
        except DslError:
            raise
        except CspaceError as exc:
            raise DslError([Diagnostic("construction", f"{b.name}: {exc}", b.line, b.column)]) from None
    return env


def load_program(text: str) -> Environment:
    return build(parse_program(text))


def corpus_names() -> List[str]:
    """Stems of the bundled ``.cspace`` programs."""
    root = resources.files("cspace") / "corpus"
    return sorted(p.name[: -len(".cspace")] for p in root.iterdir() if p.name.endswith(".cspace"))


def corpus_text(name: str) -> str:
    path = resources.files("cspace") / "corpus" / f"{name}.cspace"
    if not path.is_file():
        raise KeyError(f"no bundled program named {name!r}")
    return path.read_text(encoding="utf-8")


def load_corpus(name: str) -> Environment:
    return load_program(corpus_text(name))


def evaluate_expression(text: str, env: Environment) -> Space:
    """Evaluate a single DSL expression against the bindings of ``env``."""
    parser = _ProgramParser(text)
    parser.skip_newlines()
    expr = parser.expr()
    parser.skip_newlines()
    if parser.cur.tok.kind != "eof":
        parser.cur.error("expected end of expression")
    known = set(env) | env.implicit
    missing = [Diagnostic("unbound-name", f"unbound name {n}", line, col)
               for n, line, col in _free_names(expr) if n not in known]
    if missing:
        raise DslError(missing)
    try:
        return _construct(expr, env)
    except DslError:
        raise
    except CspaceError as exc:
        raise DslError([Diagnostic("construction", str(exc), 1, 1)]) from None


# --------------------------------------------------------------------------
# Printing


def _format_expr(expr) -> str:
    if isinstance(expr, Name):
        return expr.name
    if isinstance(expr, PrimLit):
        return "prim(" + json.dumps(expr.label, ensure_ascii=False) + ")"
    if isinstance(expr, EmptyLit):
        return "empty"
    if isinstance(expr, Call):
        return f"{expr.op}(" + ", ".join(_format_expr(a) for a in expr.args) + ")"
    if isinstance(expr, ReduceExpr):
        text = format_formula(expr.formula)
        return f"reduce({_format_expr(expr.base)}, {json.dumps(text, ensure_ascii=False)})"
    raise TypeError(f"unknown expression node {expr!r}")


def format_program(program: Program) -> str:
    return "".join(f"{b.name} = {_format_expr(b.expr)}\n" for b in program.bindings)


def format_space(space: Space, names=None, top: bool = True) -> str:
    """DSL expression for ``space``, using bound names for sub-spaces when known."""
    if names is not None and not top:
        n = names.name_of(space)
        if n is not None:
            return n
    if isinstance(space, Empty):
        return "empty"
    if isinstance(space, Primitive):
        if space.label in getattr(names, "implicit", ()):
            return space.label
        return "prim(" + json.dumps(space.label, ensure_ascii=False) + ")"
    if isinstance(space, (Sequential, Parallel, Aggregated)):
        tag = {Sequential: "seq", Parallel: "par", Aggregated: "agg"}[type(space)]
        parts = sorted(format_space(o, names, False) for o in space.operands)
        return f"{tag}(" + ", ".join(parts) + ")"
    if isinstance(space, Reduced):
        text = format_formula(space.formula, lambda s: _short(s, names))
        return f"reduce({format_space(space.base, names, False)}, {json.dumps(text, ensure_ascii=False)})"
    if isinstance(space, (Intersect, Difference)):
        return f"{space.kind}({format_space(space.left, names, False)}, {format_space(space.right, names, False)})"
    raise TypeError(f"not a space: {space!r}")


def _short(space: Space, names=None) -> str:
    if names is not None:
        n = names.name_of(space)
        if n is not None:
            return n
    if isinstance(space, Primitive):
        return space.label
    return format_space(space, names, False)


# --------------------------------------------------------------------------
# Computon literals


def parse_computon(text: str, env: Dict[str, Space]) -> Computon:
    """``<A, B>`` (sequential), ``{A:2, B:1}`` (parallel) or a primitive space name."""
    cur = _Cursor([t for t in _tokenize(text) if t.kind != "newline"])

    def space_name():
        tok = cur.expect_kind("name", "a space name")
        try:
            return env.lookup(tok.text) if isinstance(env, Environment) else env[tok.text]
        except KeyError:
            raise DslError([Diagnostic("unbound-name", f"unbound name {tok.text}",
                                       tok.line, tok.column)]) from None

    if cur.at("<"):
        cur.advance()
        items = [space_name()]
        while cur.at(","):
            cur.advance()
            items.append(space_name())
        cur.expect(">")
        result = SequentialC(tuple(items))
    elif cur.at("{"):
        cur.advance()
        pairs = []
        while True:
            s = space_name()
            cur.expect(":")
            n = cur.expect_kind("int", "an instance count")
            if int(n.text) < 1:
                cur.error("expected a positive instance count", n)
            pairs.append((s, int(n.text)))
            if not cur.at(","):
                break
            cur.advance()
        cur.expect("}")
        try:
            result = ParallelC(tuple(pairs))
        except ValueError as exc:
            raise DslError([Diagnostic("syntax", str(exc), 1, 1)]) from None
    else:
        s = space_name()
        if not isinstance(s, Primitive):
            raise DslError([Diagnostic("syntax", f"{text.strip()} is not a primitive space", 1, 1)])
        result = PrimitiveC(s.label)
    if cur.tok.kind != "eof":
        cur.error("expected end of computon")
    return result


def format_computon(p: Computon, names=None) -> str:
    if isinstance(p, PrimitiveC):
        return p.label
    if isinstance(p, SequentialC):
        return "<" + ",".join(_short(s, names) for s in p.items) + ">"
    return "{" + ",".join(f"{_short(s, names)}:{n}" for s, n in p.counts) + "}"
