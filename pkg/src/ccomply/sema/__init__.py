"""Semantic analysis: types, symbols, name resolution, constant evaluation."""
from ccomply.sema.consteval import ConstValue, const_eval
from ccomply.sema.resolve import Resolver, resolve
from ccomply.sema.symbols import Linkage, Scope, Storage, SymKind, Symbol, SymbolTable, link_units
from ccomply.sema.typesys import (
    TK, IntegerModel, TypeDesc, integer_promote, is_arithmetic, is_integer,
    is_object_pointer, is_pointer, promoted_width, rvalue_type, same_type,
    sizeof_type, type_range, usual_arith_conversion,
)

__all__ = [
    "ConstValue", "const_eval", "Resolver", "resolve",
    "Linkage", "Scope", "Storage", "SymKind", "Symbol", "SymbolTable", "link_units",
    "TK", "IntegerModel", "TypeDesc", "integer_promote", "is_arithmetic",
    "is_integer", "is_object_pointer", "is_pointer", "promoted_width",
    "rvalue_type", "same_type", "sizeof_type", "type_range",
    "usual_arith_conversion",
]
