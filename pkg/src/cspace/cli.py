"""``cspace`` command-line front end.

Every subcommand takes a ``.cspace`` program and a target, which is either a
name bound in the program or an inline expression such as ``empty`` or
``seq(S1, S2)``.  A bare file stem like ``worked_example`` that is not an
existing path is looked up in the bundled corpus.

Exit codes: 0 success, 1 law or type failure, 2 name resolution, 3 budget
abort, 4 I/O.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import (
    Empty,
    Primitive,
    Space,
    UpperBound,
    absent_spaces,
    cardinality,
    classify_parallel,
    classify_sequential,
    operands_of,
    order,
    shape,
    Parallel,
    Sequential,
)
from .dot import to_dot
from .dsl import (
    DslError,
    Environment,
    corpus_names,
    corpus_text,
    evaluate_expression,
    format_computon,
    format_space,
    load_program,
    parse_computon,
    parse_formula,
)
from .enumeration import DEFAULT_CAP, enumerate_space, member
from .errors import BudgetExceeded, CspaceError, OrderUndefined
from .formula import finite_members, reduce
from .laws import run_laws

EXIT_OK, EXIT_FAIL, EXIT_NAME, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4


class _Abort(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    p = Path(path)
    try:
        if p.exists() or path.endswith(".cspace") or path == "-":
            return sys.stdin.read() if path == "-" else p.read_text(encoding="utf-8")
        if path in corpus_names():
            return corpus_text(path)
        return p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Abort(EXIT_IO, f"cannot read {path}: {exc}") from None


def _diag_exit(path, err: DslError):
    lines = [f"{path}:{d.line}:{d.column}: {d.code}: {d.message}" for d in err.diagnostics]
    code = EXIT_NAME if any(d.code == "unbound-name" for d in err.diagnostics) else EXIT_FAIL
    return _Abort(code, "\n".join(lines))


def _load(path: str) -> Environment:
    text = _read(path)
    try:
        return load_program(text)
    except DslError as err:
        raise _diag_exit(path, err) from None


def _target(env: Environment, text: str) -> Space:
    if text in env:
        return env[text]
    try:
        return evaluate_expression(text, env)
    except DslError as err:
        raise _diag_exit("<target>", err) from None


def _computon(env, text):
    try:
        return parse_computon(text, env)
    except DslError as err:
        raise _diag_exit("<computon>", err) from None


def _short(space, env):
    name = env.name_of(space)
    if name is not None:
        return name
    if isinstance(space, Primitive):
        return space.label
    return format_space(space, env, top=False)


# --------------------------------------------------------------------------
# Subcommands


def cmd_eval(args, out):
    env = _load(args.file)
    return _report(env, args.name, _target(env, args.name), args.limit, out)


def _report(env, name, s, limit, out):
    out(f"name={name}")
    out(f"expression={format_space(s, env)}")
    out(f"kind={s.kind}")
    ops = operands_of(s)
    out("operands=" + (", ".join(sorted(_short(o, env) for o in ops)) if ops else "-"))
    try:
        out(f"order={order(s)}")
    except OrderUndefined:
        out("order=undefined")
    card = cardinality(s)
    out(f"cardinality={card}")
    members = finite_members(s)
    if members is not None:
        out(f"finite={len(members)}")
        for p in members[:limit]:
            out(f"member={format_computon(p, env)}")
        if len(members) > limit:
            out(f"more={len(members) - limit}")
    elif isinstance(card, UpperBound):
        out("finite=unknown")
    else:
        out("finite=no")
    return EXIT_OK


def cmd_enumerate(args, out):
    env = _load(args.file)
    s = _target(env, args.name)
    try:
        for p in enumerate_space(s, args.limit, cap=args.budget):
            out(format_computon(p, env))
    except BudgetExceeded as exc:
        raise _Abort(EXIT_BUDGET, f"budget exhausted: {exc}") from None
    return EXIT_OK


def cmd_member(args, out):
    env = _load(args.file)
    s = _target(env, args.name)
    out("true" if member(_computon(env, args.computon), s) else "false")
    return EXIT_OK


def cmd_classify(args, out):
    env = _load(args.file)
    s = _target(env, args.name)
    p = _computon(env, args.computon)
    base = shape(s)
    try:
        if isinstance(base, Parallel):
            cls = classify_parallel(p, s)
        elif isinstance(base, Sequential):
            cls = classify_sequential(p, s)
        else:
            raise _Abort(EXIT_FAIL, f"{args.name} is neither a sequential nor a parallel space")
        absent = absent_spaces(p, s)
    except CspaceError as exc:
        raise _Abort(EXIT_FAIL, str(exc)) from None
    out(f"class={cls.value}")
    out("absent=" + ", ".join(sorted(_short(a, env) for a in absent)))
    return EXIT_OK


def cmd_reduce(args, out):
    env = _load(args.file)
    s = _target(env, args.name)
    try:
        f = parse_formula(args.formula, s, env)
        reduced = reduce(s, f)
    except DslError as err:
        raise _diag_exit("<formula>", err) from None
    except CspaceError as exc:
        raise _Abort(EXIT_FAIL, str(exc)) from None
    return _report(env, f"{args.name}|{args.formula}", reduced, args.limit, out)


def cmd_laws(args, out):
    env = _load(args.file)
    spaces = list({s.key: s for s in env.values() if not isinstance(s, Empty)}.values())
    results = run_laws(spaces, budget=args.budget, samples=args.samples, seed=args.seed,
                       show=lambda p: format_computon(p, env))
    laws = [r for r in results if r.kind == "law"]
    refutations = [r for r in results if r.kind != "law"]
    for r in results:
        out(r.row())
    passed = sum(r.passed for r in laws)
    held = sum(r.passed for r in refutations)
    out(f"{len(laws)} laws: {passed} pass; {len(refutations)} refutations: {held} hold")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_dot(args, out):
    env = _load(args.file)
    s = _target(env, args.name)
    text = to_dot(s, env, expand=not args.collapse, title=args.name)
    if args.out is None:
        out(text.rstrip("\n"))
        return EXIT_OK
    try:
        Path(args.out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _Abort(EXIT_IO, f"cannot write {args.out}: {exc}") from None
    return EXIT_OK


# --------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cspace", description="Algebra of computon spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def target(p):
        p.add_argument("file", help="a .cspace program, '-' for stdin, or a bundled corpus name")
        p.add_argument("name", help="a bound name or an inline expression")

    p = sub.add_parser("eval", help="kind, operands, order, cardinality and finiteness")
    target(p)
    p.add_argument("--limit", type=int, default=20, help="members listed for finite spaces")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("enumerate", help="canonical members, in order")
    target(p)
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--budget", type=int, default=DEFAULT_CAP,
                   help="candidates tried per yielded member of a filtered space")
    p.set_defaults(func=cmd_enumerate)

    for name, func, text in (("member", cmd_member, "membership test"),
                             ("classify", cmd_classify, "class and absent spaces of a computon")):
        p = sub.add_parser(name, help=text)
        target(p)
        p.add_argument("computon", help="<A,B> for a sequence, {A:2,B:1} for a map")
        p.set_defaults(func=func)

    p = sub.add_parser("reduce", help="apply a reductor formula and report the result")
    target(p)
    p.add_argument("formula")
    p.add_argument("--limit", type=int, default=20)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("laws", help="check the algebraic laws")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=100, help="enumerated candidates per check")
    p.add_argument("--samples", type=int, default=50, help="random candidates per check")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("dot", help="Graphviz diagram of a space")
    target(p)
    p.add_argument("--out", help="write to this path instead of stdout")
    p.add_argument("--collapse", action="store_true", help="draw named operands as boxes")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for flag in ("limit", "budget", "samples"):
        if getattr(args, flag, 1) < 1:
            print(f"cspace: --{flag} must be a positive integer", file=sys.stderr)
            return EXIT_FAIL
    lines = []
    try:
        code = args.func(args, lines.append)
    except _Abort as exc:
        code = exc.code
        _flush(lines)
        print(f"cspace: {exc}" if "\n" not in str(exc) else str(exc), file=sys.stderr)
        return code
    _flush(lines)
    return code


def _flush(lines):
    if lines:
        sys.stdout.write("\n".join(lines) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
