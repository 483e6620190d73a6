"""Symbolic algebra of computon spaces.

Spaces are built from primitives with :func:`seq`, :func:`par` and
:func:`agg`, narrowed with :func:`reduce`, and analysed with
:func:`member`, :func:`enumerate_space`, :func:`order` and
:func:`cardinality`.  Programs in the small ``.cspace`` language are loaded
with :func:`load_program`.

    >>> from cspace import load_program, prove_finite
    >>> env = load_program('S = seq(S1, S2)\\nB = reduce(S, "p(1)=S2 & |p|=1")')
    >>> prove_finite(env["B"])
    (SequentialC(items=(Primitive('S2'),)),)
"""
from .compose import agg, difference, intersect, par, prim, seq
from .core import (
    CONTINUUM,
    COUNTABLY_INFINITE,
    EMPTY,
    Aggregated,
    Cardinality,
    Computon,
    Continuum,
    CountablyInfinite,
    Difference,
    Empty,
    Finite,
    Intersect,
    Parallel,
    ParallelC,
    ParallelClass,
    Primitive,
    PrimitiveC,
    Reduced,
    Sequential,
    SequentialC,
    SequentialClass,
    Space,
    UpperBound,
    absent_spaces,
    canonical_key,
    cardinality,
    classify_parallel,
    classify_sequential,
    operands_of,
    order,
    subsumed,
    subsumes,
)
from .dot import to_dot
from .dsl import (
    Diagnostic,
    DslError,
    Environment,
    corpus_names,
    evaluate_expression,
    format_computon,
    format_formula,
    format_program,
    format_space,
    load_corpus,
    load_program,
    parse_computon,
    parse_formula,
    parse_program,
)
from .enumeration import EnumerationStream, count_up_to, enumerate_space, member
from .errors import (
    BudgetExceeded,
    BudgetZero,
    ConstructionError,
    CspaceError,
    EmptyOperand,
    IllFormedFormula,
    KindMismatch,
    NotAMember,
    OrderUndefined,
    SelfReference,
    TooFewDistinctOperands,
    UnsupportedOnEmpty,
)
from .formula import (
    AggMember,
    And,
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
    evaluate,
    prove_finite,
    reduce,
)
from .laws import run_laws

__version__ = "0.1.0"
