"""Symbols, scopes, and cross-TU linkage unification."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ccomply.errors import SemaError
from ccomply.sema.typesys import TypeDesc, same_type
from ccomply.source import Span


class SymKind(Enum):
    OBJECT = "object"
    FUNCTION = "function"
    TYPEDEF = "typedef"
    ENUM_CONST = "enum-constant"
    TAG = "tag"


class Storage(Enum):
    AUTO = "automatic"
    STATIC = "static"
    EXTERN = "extern"


class Linkage(Enum):
    NONE = "none"
    INTERNAL = "internal"
    EXTERNAL = "external"


@dataclass(eq=False)
class Symbol:
    name: str
    kind: SymKind
    type: TypeDesc
    scope_id: int
    storage: Storage
    linkage: Linkage
    def_span: Span
    quals: frozenset = frozenset()
    is_param: bool = False
    enum_value: int | None = None
    uid: int = -1
    tu_path: str = ""
    defined: bool = False  # function has a body / object has an initializer
    is_temp: bool = False  # synthetic temporary introduced by CFG lowering

    @property
    def is_local_object(self) -> bool:
        return (
            self.kind is SymKind.OBJECT
            and self.storage is Storage.AUTO
            and self.linkage is Linkage.NONE
        )

    def canonical_id(self) -> str:
        """Stable cross-TU identity for linkage-based unification."""
        if self.linkage is Linkage.EXTERNAL:
            return self.name
        if self.linkage is Linkage.INTERNAL:
            return f"{self.tu_path}::{self.name}"
        return f"{self.tu_path}::scope{self.scope_id}::{self.name}#{self.uid}"


@dataclass(eq=False)
class Scope:
    id: int
    parent: int | None
    names: dict[str, Symbol] = field(default_factory=dict)
    tags: dict[str, TypeDesc] = field(default_factory=dict)


class SymbolTable:
    def __init__(self, tu_path: str = "<tu>"):
        self.tu_path = tu_path
        self.scopes: list[Scope] = [Scope(0, None)]
        self._stack: list[int] = [0]
        self.symbols: list[Symbol] = []

    # -- scope management --------------------------------------------------

    @property
    def current(self) -> Scope:
        return self.scopes[self._stack[-1]]

    @property
    def file_scope(self) -> Scope:
        return self.scopes[0]

    def push(self) -> Scope:
        scope = Scope(len(self.scopes), self._stack[-1])
        self.scopes.append(scope)
        self._stack.append(scope.id)
        return scope

    def pop(self) -> None:
        self._stack.pop()

    # -- declaration and lookup --------------------------------------------

    def declare(self, sym: Symbol) -> Symbol:
        sym.uid = len(self.symbols)
        sym.tu_path = self.tu_path
        sym.scope_id = self.current.id
        existing = self.current.names.get(sym.name)
        if existing is not None:
            merged = self._merge(existing, sym)
            if merged is not None:
                return merged
        self.current.names[sym.name] = sym
        self.symbols.append(sym)
        return sym

    def _merge(self, old: Symbol, new: Symbol) -> Symbol | None:
        """Allow compatible redeclarations; reject conflicts."""
        if old.kind is not new.kind or not same_type(old.type, new.type):
            raise SemaError(
                f"conflicting redeclaration of {new.name!r}", new.def_span.start
            )
        if old.kind in (SymKind.FUNCTION, SymKind.OBJECT) and old.scope_id == 0:
            old.defined = old.defined or new.defined
            return old
        if old.kind is SymKind.TYPEDEF:
            return old
        raise SemaError(f"redeclaration of {new.name!r}", new.def_span.start)

    def lookup(self, name: str) -> Symbol | None:
        sid: int | None = self._stack[-1]
        while sid is not None:
            scope = self.scopes[sid]
            if name in scope.names:
                return scope.names[name]
            sid = scope.parent
        return None

    def declare_tag(self, tag: str, t: TypeDesc) -> None:
        self.current.tags[tag] = t

    def lookup_tag(self, tag: str) -> TypeDesc | None:
        sid: int | None = self._stack[-1]
        while sid is not None:
            scope = self.scopes[sid]
            if tag in scope.tags:
                return scope.tags[tag]
            sid = scope.parent
        return None

    def lookup_tag_current(self, tag: str) -> TypeDesc | None:
        return self.current.tags.get(tag)


@dataclass
class LinkedProgram:
    """External-linkage unification across translation units."""

    functions: dict[str, list[Symbol]] = field(default_factory=dict)
    objects: dict[str, list[Symbol]] = field(default_factory=dict)

    def function_ids(self) -> list[str]:
        return sorted(self.functions)


def link_units(tables: list[SymbolTable]) -> LinkedProgram:
    """Unify file-scope symbols by canonical id (name for external linkage)."""
    prog = LinkedProgram()
    for table in tables:
        for sym in table.file_scope.names.values():
            if sym.kind is SymKind.FUNCTION:
                prog.functions.setdefault(sym.canonical_id(), []).append(sym)
            elif sym.kind is SymKind.OBJECT:
                prog.objects.setdefault(sym.canonical_id(), []).append(sym)
    for name, syms in list(prog.objects.items()) + list(prog.functions.items()):
        first = syms[0]
        for other in syms[1:]:
            if not same_type(first.type, other.type):
                raise SemaError(
                    f"conflicting types for external symbol {name!r}",
                    other.def_span.start,
                )
    return prog
