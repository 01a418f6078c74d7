"""Name resolution and expression typing.

Binds every identifier to a symbol, annotates every expression with a
TypeDesc under the configured integer model, evaluates declaration
constants, and assigns per-TU string literal ids. The stdint/stddef
integer typedefs (uint32_t and friends) are predefined so bare
fixed-width code analyzes without headers.
"""
from __future__ import annotations

from ccomply.errors import SemaError, UnsupportedConstructError
from ccomply.parsing.astnodes import (
    AddrOf, Assign, Binary, Break, Call, Cast, Comma, CompoundAssign,
    CompoundStmt, Conditional, Constant, Continue, DeclEntry, Declaration,
    Deref, DoWhile, Expr, ExprStmt, For, FunctionDef, Goto, Identifier, If,
    IncDec, Index, InitList, Label, Member, Node, Return, Sizeof,
    StringLiteral, Switch, SynArr, SynBase, SynFunc, SynPtr, SynType,
    TranslationUnitAst, Unary, While,
)
from ccomply.sema.consteval import const_eval
from ccomply.sema.symbols import Linkage, Storage, SymKind, Symbol, SymbolTable
from ccomply.sema.typesys import (
    BOOL_T, DEFAULT_MODEL, DOUBLE_T, FLOAT_T, TK, VOID_T, EnumInfo,
    IntegerModel, RecordInfo, TypeDesc, is_arithmetic, is_integer, is_pointer,
    is_scalar, make_array, make_function, make_int, make_pointer, rvalue_type,
    same_type, type_range, usual_arith_conversion,
)
from ccomply.source import Span

_SPEC_COMBOS = {
    ("void",): "void",
    ("char",): "char",
    ("char", "signed"): "schar",
    ("char", "unsigned"): "uchar",
    ("short",): "short", ("int", "short"): "short",
    ("short", "signed"): "short", ("int", "short", "signed"): "short",
    ("short", "unsigned"): "ushort", ("int", "short", "unsigned"): "ushort",
    ("int",): "int", ("signed",): "int", ("int", "signed"): "int",
    ("unsigned",): "uint", ("int", "unsigned"): "uint",
    ("long",): "long", ("int", "long"): "long",
    ("long", "signed"): "long", ("int", "long", "signed"): "long",
    ("long", "unsigned"): "ulong", ("int", "long", "unsigned"): "ulong",
    ("long", "long"): "llong", ("int", "long", "long"): "llong",
    ("long", "long", "signed"): "llong", ("int", "long", "long", "signed"): "llong",
    ("long", "long", "unsigned"): "ullong", ("int", "long", "long", "unsigned"): "ullong",
    ("float",): "float",
    ("double",): "double",
    ("double", "long"): "double",  # long double maps onto the 64-bit model
    ("_Bool",): "bool",
}

_BUILTIN_TYPEDEFS = {
    "int8_t": (8, True), "int16_t": (16, True), "int32_t": (32, True),
    "int64_t": (64, True), "uint8_t": (8, False), "uint16_t": (16, False),
    "uint32_t": (32, False), "uint64_t": (64, False),
}


def _builtin_span() -> Span:
    from ccomply.source import Location

    loc = Location(-1, 1, 1)
    return Span(loc, loc)


class Resolver:
    def __init__(self, model: IntegerModel = DEFAULT_MODEL, path: str = "<tu>"):
        self.model = model
        self.table = SymbolTable(path)
        self.literal_count = 0
        self.current_function: FunctionDef | None = None
        self._install_builtins()

    # -- builtins -----------------------------------------------------------

    def _install_builtins(self) -> None:
        span = _builtin_span()
        for name, (width, signed) in _BUILTIN_TYPEDEFS.items():
            self._declare_builtin_typedef(name, make_int(width, signed), span)
        ptr_bits = self.model.pointer_bits
        self._declare_builtin_typedef("intptr_t", make_int(ptr_bits, True), span)
        self._declare_builtin_typedef("uintptr_t", make_int(ptr_bits, False), span)
        self._declare_builtin_typedef("size_t", make_int(ptr_bits, False), span)
        self._declare_builtin_typedef("ptrdiff_t", make_int(ptr_bits, True), span)

    def _declare_builtin_typedef(self, name: str, t: TypeDesc, span: Span) -> None:
        self.table.declare(Symbol(
            name, SymKind.TYPEDEF, t, 0, Storage.STATIC, Linkage.NONE, span,
        ))

    # -- entry point ----------------------------------------------------------

    def resolve(self, tu: TranslationUnitAst) -> SymbolTable:
        for decl in tu.decls:
            if isinstance(decl, FunctionDef):
                self._function_def(decl)
            elif isinstance(decl, Declaration):
                self._declaration(decl)
            else:
                raise SemaError(f"unexpected top-level node {type(decl).__name__}")
        return self.table

    # -- types from syntax -----------------------------------------------------

    def syn_base_type(self, base: SynBase) -> TypeDesc:
        if base.record_kind in ("struct", "union"):
            return self._record_type(base)
        if base.record_kind == "enum":
            return self._enum_type(base)
        if base.typedef_name is not None:
            sym = self.table.lookup(base.typedef_name)
            if sym is None or sym.kind is not SymKind.TYPEDEF:
                raise SemaError(f"unknown type name {base.typedef_name!r}")
            t = sym.type
        else:
            key = tuple(sorted(base.specs))
            name = _SPEC_COMBOS.get(key)
            if name is None:
                raise SemaError(f"invalid type specifier combination {' '.join(base.specs)!r}")
            t = self._named_type(name)
        if base.quals:
            t = _with_quals(t, base.quals)
        return t

    def _named_type(self, name: str) -> TypeDesc:
        m = self.model
        table = {
            "void": VOID_T, "bool": BOOL_T, "float": FLOAT_T, "double": DOUBLE_T,
            "char": make_int(m.char_bits, m.char_signed),
            "schar": make_int(m.char_bits, True),
            "uchar": make_int(m.char_bits, False),
            "short": make_int(m.short_bits, True),
            "ushort": make_int(m.short_bits, False),
            "int": make_int(m.int_bits, True),
            "uint": make_int(m.int_bits, False),
            "long": make_int(m.long_bits, True),
            "ulong": make_int(m.long_bits, False),
            "llong": make_int(m.long_long_bits, True),
            "ullong": make_int(m.long_long_bits, False),
        }
        return table[name]

    def _record_type(self, base: SynBase) -> TypeDesc:
        if base.members is None:
            existing = self.table.lookup_tag(base.tag) if base.tag is not None else None
            if existing is not None:
                if existing.kind is not TK.RECORD:
                    raise SemaError(f"tag {base.tag!r} is not a {base.record_kind}")
                return existing
            info = RecordInfo(base.record_kind, base.tag)
            t = TypeDesc(TK.RECORD, record=info)
            if base.tag is not None:
                self.table.declare_tag(base.tag, t)
            return t
        # Definition: complete an incomplete tag from this scope, else a new one.
        existing = (
            self.table.lookup_tag_current(base.tag) if base.tag is not None else None
        )
        if existing is not None:
            if existing.kind is not TK.RECORD or existing.record is None:
                raise SemaError(f"tag {base.tag!r} is not a {base.record_kind}")
            if existing.record.complete:
                raise SemaError(f"redefinition of {base.record_kind} {base.tag!r}")
            t, info = existing, existing.record
        else:
            info = RecordInfo(base.record_kind, base.tag)
            t = TypeDesc(TK.RECORD, record=info)
            if base.tag is not None:
                self.table.declare_tag(base.tag, t)
        for member in base.members:
            mt = self.syn_type(member.syntype)
            info.members.append((member.name, mt, mt.quals))
        info.complete = True
        return t

    def _enum_type(self, base: SynBase) -> TypeDesc:
        if base.enumerators is None:
            if base.tag is not None:
                existing = self.table.lookup_tag(base.tag)
                if existing is not None:
                    return existing
            info = EnumInfo(base.tag)
            t = TypeDesc(TK.ENUM, enum=info)
            if base.tag is not None:
                self.table.declare_tag(base.tag, t)
            return t
        info = EnumInfo(base.tag)
        t = TypeDesc(TK.ENUM, enum=info)
        if base.tag is not None:
            self.table.declare_tag(base.tag, t)
        next_value = 0
        for name, value_expr in base.enumerators:
            if value_expr is not None:
                self.type_expr(value_expr)
                cv = const_eval(value_expr, self.model)
                if not cv.is_constant:
                    raise SemaError(f"enumerator {name!r} requires a constant value")
                next_value = cv.value
            info.constants[name] = next_value
            self.table.declare(Symbol(
                name, SymKind.ENUM_CONST, make_int(32, True), 0,
                Storage.STATIC, Linkage.NONE, _builtin_span(),
                enum_value=next_value,
            ))
            next_value += 1
        return t

    def syn_type(self, syntype: SynType) -> TypeDesc:
        t = self.syn_base_type(syntype.base)
        for deriv in reversed(syntype.derivs):
            if isinstance(deriv, SynPtr):
                # Each TypeDesc carries its own qualifiers: the pointee's
                # live on the pointee, `* const` lands on the pointer itself.
                t = make_pointer(t)
                if deriv.quals:
                    t = _with_quals(t, deriv.quals)
            elif isinstance(deriv, SynArr):
                length: int | None = None
                if deriv.size is not None:
                    self.type_expr(deriv.size)
                    cv = const_eval(deriv.size, self.model)
                    if not cv.is_constant:
                        raise UnsupportedConstructError(
                            "variable-length arrays are not supported",
                            deriv.size.span.start if deriv.size.span else None,
                        )
                    if cv.value < 0:
                        raise SemaError(f"array length must be non-negative, got {cv.value}")
                    length = cv.value
                t = make_array(t, length)
            elif isinstance(deriv, SynFunc):
                params: tuple[TypeDesc, ...] | None = None
                if deriv.params is not None:
                    params = tuple(
                        _adjust_param(self.syn_type(p.syntype)) for p in deriv.params
                    )
                t = make_function(t, params, deriv.variadic)
        return t

    # -- declarations -----------------------------------------------------------

    def _declaration(self, decl: Declaration) -> None:
        if not decl.entries:
            self.syn_base_type(decl.base)  # register tags / enum constants
            return
        for entry in decl.entries:
            entry.symbol = self._declare_entry(entry, decl.base)
            if entry.init is not None:
                self._resolve_initializer(entry.init)

    def _declare_entry(self, entry: DeclEntry, base: SynBase) -> Symbol:
        t = self.syn_type(entry.syntype)
        storage_kw = base.storage
        at_file_scope = self.table.current.id == 0

        if storage_kw == "typedef":
            return self.table.declare(Symbol(
                entry.name, SymKind.TYPEDEF, t, 0, Storage.STATIC, Linkage.NONE,
                entry.span, quals=t.quals,
            ))
        if t.kind is TK.FUNCTION:
            linkage = Linkage.INTERNAL if storage_kw == "static" else Linkage.EXTERNAL
            return self.table.declare(Symbol(
                entry.name, SymKind.FUNCTION, t, 0, Storage.EXTERN, linkage,
                entry.span,
            ))
        if at_file_scope:
            storage = Storage.EXTERN if storage_kw == "extern" else Storage.STATIC
            linkage = Linkage.INTERNAL if storage_kw == "static" else Linkage.EXTERNAL
        elif storage_kw == "extern":
            storage, linkage = Storage.EXTERN, Linkage.EXTERNAL
        elif storage_kw == "static":
            storage, linkage = Storage.STATIC, Linkage.NONE
        else:
            storage, linkage = Storage.AUTO, Linkage.NONE
        if t.kind is TK.VOID:
            raise SemaError(f"variable {entry.name!r} declared void", entry.span.start)
        sym = Symbol(
            entry.name, SymKind.OBJECT, t, 0, storage, linkage, entry.span,
            quals=t.quals, defined=entry.init is not None,
        )
        return self.table.declare(sym)

    def _resolve_initializer(self, init: Expr) -> None:
        if isinstance(init, InitList):
            init.ctype = VOID_T
            for element in init.elements:
                self._resolve_initializer(element)
        else:
            self.type_expr(init)

    def _function_def(self, fn: FunctionDef) -> None:
        t = self.syn_type(fn.syntype)
        if t.kind is not TK.FUNCTION:
            raise SemaError(f"{fn.name!r} is not a function type", fn.span.start)
        linkage = Linkage.INTERNAL if fn.syntype.base.storage == "static" else Linkage.EXTERNAL
        sym = self.table.declare(Symbol(
            fn.name, SymKind.FUNCTION, t, 0, Storage.EXTERN, linkage, fn.span,
            defined=True,
        ))
        sym.defined = True
        fn.symbol = sym
        self.current_function = fn
        self.table.push()
        for p in fn.params:
            pt = _adjust_param(self.syn_type(p.syntype))
            p.symbol = self.table.declare(Symbol(
                p.name, SymKind.OBJECT, pt, 0, Storage.AUTO, Linkage.NONE,
                p.span, quals=pt.quals, is_param=True, defined=True,
            ))
        self._stmt(fn.body, push=False)
        self.table.pop()
        self.current_function = None

    # -- statements ----------------------------------------------------------------

    def _stmt(self, node: Node, push: bool = True) -> None:
        if isinstance(node, CompoundStmt):
            if push:
                self.table.push()
            for item in node.items:
                if isinstance(item, Declaration):
                    self._declaration(item)
                else:
                    self._stmt(item)
            if push:
                self.table.pop()
        elif isinstance(node, ExprStmt):
            if node.expr is not None:
                self.type_expr(node.expr)
        elif isinstance(node, If):
            self.type_expr(node.cond)
            self._stmt(node.then)
            if node.els is not None:
                self._stmt(node.els)
        elif isinstance(node, Switch):
            self.type_expr(node.cond)
            self._stmt(node.body)
        elif isinstance(node, While):
            self.type_expr(node.cond)
            self._stmt(node.body)
        elif isinstance(node, DoWhile):
            self._stmt(node.body)
            self.type_expr(node.cond)
        elif isinstance(node, For):
            self.table.push()
            if isinstance(node.init, Declaration):
                self._declaration(node.init)
            elif node.init is not None:
                self.type_expr(node.init)
            if node.cond is not None:
                self.type_expr(node.cond)
            if node.step is not None:
                self.type_expr(node.step)
            self._stmt(node.body)
            self.table.pop()
        elif isinstance(node, Return):
            if node.value is not None:
                self.type_expr(node.value)
        elif isinstance(node, Label):
            if node.case_expr is not None:
                self.type_expr(node.case_expr)
                cv = const_eval(node.case_expr, self.model)
                if not cv.is_constant:
                    raise SemaError(
                        "case label requires a constant expression",
                        node.span.start,
                    )
            self._stmt(node.stmt)
        elif isinstance(node, (Goto, Break, Continue)):
            pass
        else:
            raise SemaError(f"unexpected statement {type(node).__name__}")

    # -- expressions ------------------------------------------------------------------

    def type_expr(self, e: Expr) -> TypeDesc:
        t = self._type_expr(e)
        e.ctype = t
        return t

    def _rvalue(self, e: Expr) -> TypeDesc:
        return rvalue_type(self.type_expr(e))

    def _type_expr(self, e: Expr) -> TypeDesc:
        model = self.model

        if isinstance(e, Identifier):
            sym = self.table.lookup(e.name)
            if sym is None:
                raise SemaError(
                    f"use of undeclared identifier {e.name!r}",
                    e.span.start if e.span else None,
                )
            if sym.kind is SymKind.TYPEDEF:
                raise SemaError(
                    f"unexpected type name {e.name!r} in expression",
                    e.span.start if e.span else None,
                )
            e.symbol = sym
            return sym.type

        if isinstance(e, Constant):
            if e.is_float:
                return FLOAT_T if e.text[-1] in "fF" else DOUBLE_T
            if e.text.startswith("'"):
                return make_int(model.int_bits, True)
            return self._int_const_type(e)

        if isinstance(e, StringLiteral):
            e.literal_id = self.literal_count
            self.literal_count += 1
            return make_array(make_int(model.char_bits, model.char_signed), len(e.value) + 1)

        if isinstance(e, Unary):
            op_t = self._rvalue(e.operand)
            if e.op == "!":
                self._require(is_scalar(op_t), e, "operand of ! must be scalar")
                return make_int(model.int_bits, True)
            self._require(is_arithmetic(op_t), e, f"operand of unary {e.op} must be arithmetic")
            if e.op == "~":
                self._require(is_integer(op_t), e, "operand of ~ must be an integer")
            if is_integer(op_t):
                from ccomply.sema.typesys import integer_promote

                return integer_promote(op_t, model)
            return op_t

        if isinstance(e, Binary):
            return self._type_binary(e)

        if isinstance(e, Assign):
            target_t = self.type_expr(e.target)
            self._require_lvalue(e.target)
            self.type_expr(e.value)
            return rvalue_type(target_t)

        if isinstance(e, CompoundAssign):
            target_t = self.type_expr(e.target)
            self._require_lvalue(e.target)
            self.type_expr(e.value)
            return rvalue_type(target_t)

        if isinstance(e, IncDec):
            t = self.type_expr(e.operand)
            self._require_lvalue(e.operand)
            self._require(is_scalar(rvalue_type(t)), e, "++/-- requires a scalar operand")
            return rvalue_type(t)

        if isinstance(e, Call):
            callee_t = self.type_expr(e.callee)
            ft = callee_t
            if ft.kind is TK.POINTER and ft.pointee is not None:
                ft = ft.pointee
            if ft.kind is not TK.FUNCTION:
                raise SemaError(
                    "called object is not a function or function pointer",
                    e.span.start if e.span else None,
                )
            for a in e.args:
                self.type_expr(a)
            if ft.params is not None:
                n, got = len(ft.params), len(e.args)
                if got < n or (got > n and not ft.variadic):
                    raise SemaError(
                        f"call expects {n}{'+' if ft.variadic else ''} argument(s), got {got}",
                        e.span.start if e.span else None,
                    )
            return ft.ret if ft.ret is not None else VOID_T

        if isinstance(e, Index):
            base_t = self._rvalue(e.base)
            index_t = self._rvalue(e.index)
            if is_pointer(base_t) and is_integer(index_t):
                return base_t.pointee
            if is_pointer(index_t) and is_integer(base_t):
                return index_t.pointee
            raise SemaError(
                "subscripted value is not a pointer or array",
                e.span.start if e.span else None,
            )

        if isinstance(e, Member):
            base_t = self.type_expr(e.base)
            if e.arrow:
                base_t = rvalue_type(base_t)
                if not is_pointer(base_t) or base_t.pointee is None:
                    raise SemaError("'->' requires a pointer to a record",
                                    e.span.start if e.span else None)
                base_t = base_t.pointee
            if base_t.kind is not TK.RECORD or base_t.record is None:
                raise SemaError("member access requires a struct or union",
                                e.span.start if e.span else None)
            if not base_t.record.complete:
                raise SemaError(
                    f"member access into incomplete type "
                    f"{base_t.record.kind} {base_t.record.tag or '<anon>'}",
                    e.span.start if e.span else None,
                )
            for name, mt, quals in base_t.record.members:
                if name == e.name:
                    return mt
            raise SemaError(
                f"no member named {e.name!r} in "
                f"{base_t.record.kind} {base_t.record.tag or '<anon>'}",
                e.span.start if e.span else None,
            )

        if isinstance(e, Deref):
            t = self._rvalue(e.operand)
            if not is_pointer(t) or t.pointee is None:
                raise SemaError("cannot dereference a non-pointer",
                                e.span.start if e.span else None)
            return t.pointee

        if isinstance(e, AddrOf):
            t = self.type_expr(e.operand)
            self._require_lvalue(e.operand, allow_function=True)
            return make_pointer(t)

        if isinstance(e, Cast):
            target = self.syn_type(e.type_name)
            self.type_expr(e.operand)
            return target

        if isinstance(e, Conditional):
            cond_t = self._rvalue(e.cond)
            self._require(is_scalar(cond_t), e, "condition must be scalar")
            then_t = self._rvalue(e.then)
            other_t = self._rvalue(e.other)
            if is_arithmetic(then_t) and is_arithmetic(other_t):
                return usual_arith_conversion(then_t, other_t, model)
            if then_t.kind is TK.VOID or other_t.kind is TK.VOID:
                return VOID_T
            return then_t

        if isinstance(e, Comma):
            self.type_expr(e.left)
            return self._rvalue(e.right)

        if isinstance(e, Sizeof):
            if e.type_name is not None:
                e.type_name_type = self.syn_type(e.type_name)
            else:
                self.type_expr(e.operand)
            return make_int(model.pointer_bits, False)

        if isinstance(e, InitList):
            for element in e.elements:
                self._resolve_initializer(element)
            return VOID_T

        raise SemaError(f"cannot type expression {type(e).__name__}")

    def _type_binary(self, e: Binary) -> TypeDesc:
        model = self.model
        op = e.op
        left_t = self._rvalue(e.left)
        right_t = self._rvalue(e.right)

        if op in ("&&", "||"):
            self._require(is_scalar(left_t) and is_scalar(right_t), e,
                          f"operands of {op} must be scalar")
            return make_int(model.int_bits, True)
        if op in ("==", "!=", "<", ">", "<=", ">="):
            return make_int(model.int_bits, True)
        if op in ("<<", ">>"):
            self._require(is_integer(left_t) and is_integer(right_t), e,
                          f"operands of {op} must be integers")
            from ccomply.sema.typesys import integer_promote

            return integer_promote(left_t, model)
        if op in ("&", "|", "^", "%"):
            self._require(is_integer(left_t) and is_integer(right_t), e,
                          f"operands of {op} must be integers")
            return usual_arith_conversion(left_t, right_t, model)
        if op in ("+", "-"):
            if is_pointer(left_t) and is_integer(right_t):
                return left_t
            if op == "+" and is_integer(left_t) and is_pointer(right_t):
                return right_t
            if op == "-" and is_pointer(left_t) and is_pointer(right_t):
                return make_int(model.pointer_bits, True)
            self._require(is_arithmetic(left_t) and is_arithmetic(right_t), e,
                          f"invalid operands of {op}")
            return usual_arith_conversion(left_t, right_t, model)
        if op in ("*", "/"):
            self._require(is_arithmetic(left_t) and is_arithmetic(right_t), e,
                          f"operands of {op} must be arithmetic")
            return usual_arith_conversion(left_t, right_t, model)
        raise SemaError(f"unknown binary operator {op!r}")

    # -- helpers ---------------------------------------------------------------------

    def _int_const_type(self, e: Constant) -> TypeDesc:
        model = self.model
        text = e.text
        value = e.value
        suffix = ""
        body = text
        while body and body[-1] in "uUlL":
            suffix = body[-1].lower() + suffix
            body = body[:-1]
        unsigned = "u" in suffix
        long_count = suffix.count("l")
        is_decimal = not (body.startswith("0x") or body.startswith("0X")
                          or (len(body) > 1 and body[0] == "0"))

        candidates: list[TypeDesc] = []

        def add(width: int, signed: bool) -> None:
            candidates.append(make_int(width, signed))

        if unsigned:
            widths = [model.int_bits, model.long_bits, model.long_long_bits]
            start = 0 if long_count == 0 else (1 if long_count == 1 else 2)
            for w in widths[start:]:
                add(w, False)
        elif is_decimal:
            widths = [model.int_bits, model.long_bits, model.long_long_bits]
            start = 0 if long_count == 0 else (1 if long_count == 1 else 2)
            for w in widths[start:]:
                add(w, True)
        else:
            pairs = [
                (model.int_bits, True), (model.int_bits, False),
                (model.long_bits, True), (model.long_bits, False),
                (model.long_long_bits, True), (model.long_long_bits, False),
            ]
            start = 0 if long_count == 0 else (2 if long_count == 1 else 4)
            for w, s in pairs[start:]:
                add(w, s)
        for t in candidates:
            lo, hi = type_range(t, model)
            if lo <= value <= hi:
                return t
        raise SemaError(
            f"integer constant {text!r} does not fit any supported type",
            e.span.start if e.span else None,
        )

    def _require(self, cond: bool, e: Expr, message: str) -> None:
        if not cond:
            raise SemaError(message, e.span.start if e.span else None)

    def _require_lvalue(self, e: Expr, allow_function: bool = False) -> None:
        if isinstance(e, Identifier):
            sym = e.symbol
            if sym is not None and sym.kind is SymKind.ENUM_CONST:
                raise SemaError(f"{e.name!r} is not assignable",
                                e.span.start if e.span else None)
            if sym is not None and sym.kind is SymKind.FUNCTION and not allow_function:
                raise SemaError(f"function {e.name!r} is not assignable",
                                e.span.start if e.span else None)
            return
        if isinstance(e, (Deref, Index, Member, StringLiteral)):
            return
        raise SemaError(
            f"expression is not an lvalue ({type(e).__name__})",
            e.span.start if e.span else None,
        )


def _adjust_param(t: TypeDesc) -> TypeDesc:
    if t.kind is TK.ARRAY:
        return make_pointer(t.elem)
    if t.kind is TK.FUNCTION:
        return make_pointer(t)
    return t


def _with_quals(t: TypeDesc, quals: frozenset) -> TypeDesc:
    merged = frozenset(q for q in (t.quals | quals) if q in ("const", "volatile"))
    clone = TypeDesc(
        kind=t.kind, width=t.width, pointee=t.pointee, quals=merged,
        elem=t.elem, length=t.length, ret=t.ret, params=t.params,
        variadic=t.variadic, record=t.record, enum=t.enum,
    )
    return clone


def resolve(tu: TranslationUnitAst, model: IntegerModel = DEFAULT_MODEL) -> SymbolTable:
    """Bind names and compute types for one translation unit (in place)."""
    return Resolver(model, tu.path).resolve(tu)
