"""Strict constant-expression evaluation over typed AST nodes.

Evaluation is total: anything outside the constant subset yields
not-constant rather than an error. Signed overflow wraps to the fixed
two's-complement model and tags the node as undefined behavior;
division or shift out of range also degrades to not-constant with the
same tag.
"""
from __future__ import annotations

from dataclasses import dataclass

from ccomply.parsing.astnodes import (
    Binary, Cast, Conditional, Constant, Expr, Identifier, Sizeof, Unary,
)
from ccomply.sema.symbols import SymKind
from ccomply.sema.typesys import (
    DEFAULT_MODEL, TK, IntegerModel, TypeDesc, convert_int, effective_int,
    integer_promote, is_integer, make_int, sizeof_type, usual_arith_conversion,
)


@dataclass(frozen=True)
class ConstValue:
    value: int | None
    type: TypeDesc | None

    @property
    def is_constant(self) -> bool:
        return self.value is not None


NOT_CONSTANT = ConstValue(None, None)


def _tag(node: Expr, behavior: str) -> None:
    if node.behavior is None:
        node.behavior = behavior


def const_eval(expr: Expr, model: IntegerModel = DEFAULT_MODEL) -> ConstValue:
    """Evaluate an integer constant expression; strict in all operands."""
    if isinstance(expr, Constant):
        if expr.is_float or expr.ctype is None or not is_integer(expr.ctype):
            return NOT_CONSTANT
        return ConstValue(expr.value, expr.ctype)

    if isinstance(expr, Identifier):
        sym = expr.symbol
        if sym is not None and sym.kind is SymKind.ENUM_CONST:
            return ConstValue(sym.enum_value, make_int(32, True))
        return NOT_CONSTANT

    if isinstance(expr, Sizeof):
        target = expr.type_name_type if expr.type_name is not None else None
        if target is None and expr.operand is not None:
            target = expr.operand.ctype
        if target is None:
            return NOT_CONSTANT
        try:
            size = sizeof_type(target, model)
        except Exception:
            return NOT_CONSTANT
        return ConstValue(size, make_int(model.pointer_bits, False))

    if isinstance(expr, Unary):
        inner = const_eval(expr.operand, model)
        if not inner.is_constant:
            return NOT_CONSTANT
        if expr.op == "!":
            return ConstValue(0 if inner.value else 1, make_int(model.int_bits, True))
        promoted = integer_promote(inner.type, model)
        if expr.op == "+":
            return ConstValue(*_convert(inner.value, promoted, model, expr))
        if expr.op == "-":
            return ConstValue(*_convert(-inner.value, promoted, model, expr))
        if expr.op == "~":
            return ConstValue(*_convert(~inner.value, promoted, model, expr))
        return NOT_CONSTANT

    if isinstance(expr, Cast):
        if expr.ctype is None or not is_integer(expr.ctype):
            return NOT_CONSTANT
        inner = const_eval(expr.operand, model)
        if not inner.is_constant:
            return NOT_CONSTANT
        value, overflowed = convert_int(inner.value, expr.ctype, model)
        return ConstValue(value, expr.ctype)

    if isinstance(expr, Conditional):
        cond = const_eval(expr.cond, model)
        then = const_eval(expr.then, model)
        other = const_eval(expr.other, model)
        # Operand inspection is strict: every operand must be constant.
        if not (cond.is_constant and then.is_constant and other.is_constant):
            return NOT_CONSTANT
        picked = then if cond.value else other
        result_type = usual_arith_conversion(then.type, other.type, model)
        return ConstValue(*_convert(picked.value, result_type, model, expr))

    if isinstance(expr, Binary):
        return _binary(expr, model)

    return NOT_CONSTANT


def _convert(raw: int, target: TypeDesc, model: IntegerModel, node: Expr) -> tuple[int, TypeDesc]:
    value, overflowed = convert_int(raw, target, model)
    if overflowed and target.kind is TK.INT:
        _tag(node, "undefined")
    return value, target


def _binary(expr: Binary, model: IntegerModel) -> ConstValue:
    op = expr.op
    left = const_eval(expr.left, model)
    right = const_eval(expr.right, model)
    if not (left.is_constant and right.is_constant):
        return NOT_CONSTANT
    int_t = make_int(model.int_bits, True)

    if op in ("&&", "||"):
        a, b = left.value != 0, right.value != 0
        value = (a and b) if op == "&&" else (a or b)
        return ConstValue(int(value), int_t)
    if op in ("==", "!=", "<", ">", "<=", ">="):
        table = {
            "==": left.value == right.value, "!=": left.value != right.value,
            "<": left.value < right.value, ">": left.value > right.value,
            "<=": left.value <= right.value, ">=": left.value >= right.value,
        }
        return ConstValue(int(table[op]), int_t)

    if op in ("<<", ">>"):
        result_type = integer_promote(left.type, model)
        width, signed = effective_int(result_type, model)
        shift = right.value
        if shift < 0 or shift >= width:
            _tag(expr, "undefined")
            return NOT_CONSTANT
        if op == "<<":
            if signed and left.value < 0:
                _tag(expr, "undefined")
                return NOT_CONSTANT
            return ConstValue(*_convert(left.value << shift, result_type, model, expr))
        return ConstValue(*_convert(left.value >> shift, result_type, model, expr))

    result_type = usual_arith_conversion(left.type, right.type, model)
    a, _ = convert_int(left.value, result_type, model)
    b, _ = convert_int(right.value, result_type, model)
    if op in ("/", "%"):
        if b == 0:
            _tag(expr, "undefined")
            return NOT_CONSTANT
        q = abs(a) // abs(b)
        if (a < 0) != (b < 0):
            q = -q
        raw = q if op == "/" else a - q * b
    elif op == "+":
        raw = a + b
    elif op == "-":
        raw = a - b
    elif op == "*":
        raw = a * b
    elif op == "&":
        raw = _bitop(a, b, result_type, model, lambda x, y: x & y)
    elif op == "|":
        raw = _bitop(a, b, result_type, model, lambda x, y: x | y)
    elif op == "^":
        raw = _bitop(a, b, result_type, model, lambda x, y: x ^ y)
    else:
        return NOT_CONSTANT
    return ConstValue(*_convert(raw, result_type, model, expr))


def _bitop(a: int, b: int, t: TypeDesc, model: IntegerModel, fn) -> int:
    width, signed = effective_int(t, model)
    mask = (1 << width) - 1
    raw = fn(a & mask, b & mask)
    if signed and raw >= 1 << (width - 1):
        raw -= 1 << width
    return raw
