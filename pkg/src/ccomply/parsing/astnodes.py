"""AST node definitions for the supported C99 subset.

Nodes use identity equality (they serve as map keys in the analyses);
`structural_equal` provides the span-insensitive comparison used by the
unparse/reparse round-trip checks. Sema fills the `ctype`/`symbol`
attributes in place after parsing.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Any, Iterator, Optional

from ccomply.source import Span

__all__ = [
    "Node", "Expr", "Stmt", "SynBase", "SynPtr", "SynArr", "SynFunc", "SynType",
    "SynParam", "RecordMember", "TranslationUnitAst", "DeclEntry", "Declaration", "for_clauses",
    "FunctionDef", "CompoundStmt", "If", "Switch", "While", "DoWhile", "For",
    "Goto", "Label", "Break", "Continue", "Return", "ExprStmt", "Identifier",
    "Constant", "StringLiteral", "Unary", "Binary", "Assign", "CompoundAssign",
    "IncDec", "Call", "Index", "Member", "Deref", "AddrOf", "Cast", "Conditional",
    "Comma", "Sizeof", "InitList", "children", "walk", "structural_equal",
]


@dataclass(eq=False)
class Node:
    span: Span = field(kw_only=True, default=None)  # type: ignore[assignment]
    first_tok: int = field(kw_only=True, default=-1)
    last_tok: int = field(kw_only=True, default=-1)


@dataclass(eq=False)
class Expr(Node):
    # Filled by sema.
    ctype: Any = field(kw_only=True, default=None, repr=False)
    behavior: Optional[str] = field(kw_only=True, default=None, repr=False)


@dataclass(eq=False)
class Stmt(Node):
    pass


# ---- syntactic types (pre-sema) -------------------------------------------


@dataclass(eq=False)
class SynBase:
    """Base type specifier: keyword multiset, typedef name, or tag type."""

    specs: tuple[str, ...] = ()          # e.g. ('unsigned', 'long')
    typedef_name: str | None = None
    record_kind: str | None = None       # 'struct' | 'union' | 'enum'
    tag: str | None = None
    members: list["RecordMember"] | None = None     # struct/union definition
    enumerators: list[tuple[str, Optional["Expr"]]] | None = None
    quals: frozenset[str] = frozenset()
    storage: str | None = None           # 'typedef' | 'static' | 'extern' | 'auto'


@dataclass(eq=False)
class SynPtr:
    quals: frozenset[str] = frozenset()


@dataclass(eq=False)
class SynArr:
    size: Optional["Expr"] = None


@dataclass(eq=False)
class SynFunc:
    params: list["SynParam"] | None = None   # None = unspecified ()
    variadic: bool = False


@dataclass(eq=False)
class SynType:
    base: SynBase
    derivs: tuple[Any, ...] = ()  # outermost first: (SynPtr, SynArr, ...)


@dataclass(eq=False)
class SynParam:
    syntype: SynType
    name: str | None
    span: Span
    symbol: Any = None  # filled by sema


@dataclass(eq=False)
class RecordMember:
    syntype: SynType
    name: str
    span: Span


# ---- declarations -----------------------------------------------------------


@dataclass(eq=False)
class DeclEntry:
    name: str
    syntype: SynType
    init: Optional[Expr]
    span: Span
    symbol: Any = None  # filled by sema


@dataclass(eq=False)
class Declaration(Stmt):
    entries: list[DeclEntry]
    base: SynBase  # carries tag/enum definitions even with no declarators


@dataclass(eq=False)
class FunctionDef(Node):
    name: str
    syntype: SynType
    params: list[SynParam]
    body: "CompoundStmt"
    symbol: Any = field(default=None, repr=False)


@dataclass(eq=False)
class TranslationUnitAst(Node):
    decls: list[Node]  # Declaration | FunctionDef
    path: str = ""


# ---- statements -------------------------------------------------------------


@dataclass(eq=False)
class CompoundStmt(Stmt):
    items: list[Node]


@dataclass(eq=False)
class If(Stmt):
    cond: Expr
    then: Stmt
    els: Optional[Stmt]


@dataclass(eq=False)
class Switch(Stmt):
    cond: Expr
    body: Stmt


@dataclass(eq=False)
class While(Stmt):
    cond: Expr
    body: Stmt


@dataclass(eq=False)
class DoWhile(Stmt):
    body: Stmt
    cond: Expr


@dataclass(eq=False)
class For(Stmt):
    init: Optional[Node]  # Declaration or Expr
    cond: Optional[Expr]
    step: Optional[Expr]
    body: Stmt


@dataclass(eq=False)
class Goto(Stmt):
    label: str


@dataclass(eq=False)
class Label(Stmt):
    kind: str  # 'named' | 'case' | 'default'
    name: str | None
    case_expr: Optional[Expr]
    stmt: Stmt


@dataclass(eq=False)
class Break(Stmt):
    pass


@dataclass(eq=False)
class Continue(Stmt):
    pass


@dataclass(eq=False)
class Return(Stmt):
    value: Optional[Expr]


@dataclass(eq=False)
class ExprStmt(Stmt):
    expr: Optional[Expr]  # None = empty statement ';'


# ---- expressions ------------------------------------------------------------


@dataclass(eq=False)
class Identifier(Expr):
    name: str
    symbol: Any = field(default=None, repr=False)


@dataclass(eq=False)
class Constant(Expr):
    text: str
    value: Any = None      # int | float, set by parser
    is_float: bool = False


@dataclass(eq=False)
class StringLiteral(Expr):
    value: str             # decoded contents
    literal_id: int = -1   # per-TU id, set by sema


@dataclass(eq=False)
class Unary(Expr):
    op: str  # + - ~ !
    operand: Expr


@dataclass(eq=False)
class Binary(Expr):
    op: str  # * / % + - << >> < > <= >= == != & ^ | && ||
    left: Expr
    right: Expr


@dataclass(eq=False)
class Assign(Expr):
    target: Expr
    value: Expr


@dataclass(eq=False)
class CompoundAssign(Expr):
    op: str  # base operator, e.g. '+' for '+='
    target: Expr
    value: Expr


@dataclass(eq=False)
class IncDec(Expr):
    op: str        # '++' | '--'
    prefix: bool
    operand: Expr


@dataclass(eq=False)
class Call(Expr):
    callee: Expr
    args: list[Expr]


@dataclass(eq=False)
class Index(Expr):
    base: Expr
    index: Expr


@dataclass(eq=False)
class Member(Expr):
    base: Expr
    name: str
    arrow: bool


@dataclass(eq=False)
class Deref(Expr):
    operand: Expr


@dataclass(eq=False)
class AddrOf(Expr):
    operand: Expr


@dataclass(eq=False)
class Cast(Expr):
    type_name: SynType
    operand: Expr


@dataclass(eq=False)
class Conditional(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass(eq=False)
class Comma(Expr):
    left: Expr
    right: Expr


@dataclass(eq=False)
class Sizeof(Expr):
    type_name: Optional[SynType]
    operand: Optional[Expr]
    type_name_type: Any = field(default=None, repr=False)  # resolved TypeDesc


@dataclass(eq=False)
class InitList(Expr):
    elements: list[Expr]


def for_clauses(node: "For") -> tuple[Optional[Node], Optional["Expr"], Optional["Expr"]]:
    """The three for-loop clauses; absent clauses are returned as None."""
    if not isinstance(node, For):
        raise TypeError(f"expected a for-loop node, got {type(node).__name__}")
    return node.init, node.cond, node.step


# ---- generic traversal ------------------------------------------------------

_SKIP_FIELDS = {"span", "first_tok", "last_tok", "ctype", "symbol", "behavior"}


def children(node: Node) -> list[Node]:
    """Direct child nodes, in source order."""
    out: list[Node] = []

    def collect(value: Any) -> None:
        if isinstance(value, Node):
            out.append(value)
        elif isinstance(value, list):
            for v in value:
                collect(v)
        elif isinstance(value, DeclEntry):
            if value.init is not None:
                out.append(value.init)
        elif isinstance(value, SynParam):
            pass
        elif isinstance(value, SynType):
            collect_syntype(value)
        elif isinstance(value, SynBase):
            collect_base(value)

    def collect_syntype(st: SynType) -> None:
        collect_base(st.base)
        for d in st.derivs:
            if isinstance(d, SynArr) and d.size is not None:
                out.append(d.size)
            elif isinstance(d, SynFunc) and d.params:
                for p in d.params:
                    collect_syntype(p.syntype)

    def collect_base(b: SynBase) -> None:
        if b.members:
            for m in b.members:
                collect_syntype(m.syntype)
        if b.enumerators:
            for _, e in b.enumerators:
                if e is not None:
                    out.append(e)

    for f in fields(node):
        if f.name in _SKIP_FIELDS:
            continue
        collect(getattr(node, f.name))
    return out


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal of a subtree."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(children(n)))


_ATOM_FIELDS = {
    Identifier: ("name",),
    Constant: ("text",),
    StringLiteral: ("value",),
    Unary: ("op",), Binary: ("op",), CompoundAssign: ("op",),
    IncDec: ("op", "prefix"),
    Member: ("name", "arrow"),
    Goto: ("label",),
    Label: ("kind", "name"),
    FunctionDef: ("name",),
    DeclEntry: ("name",),
    TranslationUnitAst: (),
}


def _atoms(node: Any) -> tuple:
    for klass, names in _ATOM_FIELDS.items():
        if type(node) is klass:
            return tuple(getattr(node, n) for n in names)
    return ()


def _syn_sig(st: SynType) -> tuple:
    base = st.base
    parts: list[Any] = [tuple(sorted(base.specs)), base.typedef_name, base.record_kind,
                        base.tag, tuple(sorted(base.quals)), base.storage]
    if base.members is not None:
        parts.append(tuple((m.name, _syn_sig(m.syntype)) for m in base.members))
    if base.enumerators is not None:
        parts.append(tuple(name for name, _ in base.enumerators))
    derivs = []
    for d in st.derivs:
        if isinstance(d, SynPtr):
            derivs.append(("ptr", tuple(sorted(d.quals))))
        elif isinstance(d, SynArr):
            derivs.append(("arr", d.size is not None))
        elif isinstance(d, SynFunc):
            sig = None
            if d.params is not None:
                sig = tuple((p.name, _syn_sig(p.syntype)) for p in d.params)
            derivs.append(("func", sig, d.variadic))
    parts.append(tuple(derivs))
    return tuple(parts)


def structural_equal(a: Node, b: Node) -> bool:
    """Compare trees ignoring spans, token indices, and sema results."""
    if type(a) is not type(b):
        return False
    if _atoms(a) != _atoms(b):
        return False
    if isinstance(a, (Declaration,)) and isinstance(b, (Declaration,)):
        if len(a.entries) != len(b.entries):
            return False
        for ea, eb in zip(a.entries, b.entries):
            if ea.name != eb.name or _syn_sig(ea.syntype) != _syn_sig(eb.syntype):
                return False
            if (ea.init is None) != (eb.init is None):
                return False
    if isinstance(a, FunctionDef) and isinstance(b, FunctionDef):
        if _syn_sig(a.syntype) != _syn_sig(b.syntype):
            return False
    if isinstance(a, Cast) and isinstance(b, Cast):
        if _syn_sig(a.type_name) != _syn_sig(b.type_name):
            return False
    if isinstance(a, Sizeof) and isinstance(b, Sizeof):
        if (a.type_name is None) != (b.type_name is None):
            return False
        if a.type_name is not None and _syn_sig(a.type_name) != _syn_sig(b.type_name):
            return False
    ca, cb = children(a), children(b)
    if len(ca) != len(cb):
        return False
    return all(structural_equal(x, y) for x, y in zip(ca, cb))
