"""Names and macros predefined for every translation unit.

Fixed-width integer typedefs are built in so bare embedded-style code
analyzes without system headers; bool/true/false/NULL are provided as
ordinary object-like macros.
"""
from __future__ import annotations

BUILTIN_TYPEDEF_NAMES = frozenset({
    "int8_t", "int16_t", "int32_t", "int64_t",
    "uint8_t", "uint16_t", "uint32_t", "uint64_t",
    "intptr_t", "uintptr_t", "size_t", "ptrdiff_t",
})

# NAME=body specs consumed by macro_from_define_flag.
BUILTIN_MACRO_SPECS = (
    "bool=_Bool",
    "true=1",
    "false=0",
    "NULL=((void *)0)",
)
