"""Syntax-driven checkers: R11.4, R13.1, R13.5, R13.2, R8.13, R14.1, R14.2."""
from __future__ import annotations

from dataclasses import dataclass

from ccomply.flow.effects import is_volatile_access, walk_effects
from ccomply.parsing.astnodes import (
    AddrOf, Assign, Binary, Call, Cast, Comma, CompoundAssign, Conditional,
    Constant, DeclEntry, Declaration, Deref, Expr, ExprStmt, For, FunctionDef,
    Identifier, IncDec, Index, InitList, Member, Node, Return, Sizeof,
    StringLiteral, Unary, children, for_clauses, walk,
)
from ccomply.rules.context import TUFacts
from ccomply.rules.findings import BehaviorClass, Certainty, Evidence, Finding
from ccomply.sema.consteval import const_eval
from ccomply.sema.symbols import Linkage, SymKind, Symbol
from ccomply.sema.typesys import TK, TypeDesc, is_integer, is_object_pointer, rvalue_type


# ---- R11.4: no integer <-> object-pointer conversion ---------------------------


def check_int_pointer_conversion(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []

    def site(dst: TypeDesc | None, src_expr: Expr, node: Expr, what: str) -> None:
        src = rvalue_type(src_expr.ctype)
        if dst is None or src is None:
            return
        int_to_ptr = is_integer(src) and is_object_pointer(dst)
        ptr_to_int = is_object_pointer(src) and is_integer(dst)
        if not (int_to_ptr or ptr_to_int):
            return
        if int_to_ptr:
            cv = const_eval(src_expr, facts.model)
            if cv.is_constant and cv.value == 0:
                return  # null pointer constant
        direction = "integer to object pointer" if int_to_ptr else "object pointer to integer"
        out.append(Finding(
            "R11.4", node.span, Certainty.DEFINITE,
            f"{what} converts {direction}",
            behavior_class=BehaviorClass.IMPLEMENTATION_DEFINED,
            evidence=(Evidence(src_expr.span, f"operand has type {src!r}"),),
        ))

    for decl in facts.tu.decls:
        ret_t = None
        if isinstance(decl, FunctionDef) and decl.symbol is not None:
            ret_t = decl.symbol.type.ret
        for node in walk(decl):
            if isinstance(node, Cast):
                site(node.ctype, node.operand, node, "cast")
            elif isinstance(node, Assign):
                site(node.target.ctype, node.value, node, "assignment")
            elif isinstance(node, Call):
                callee_t = node.callee.ctype
                ft = callee_t.pointee if callee_t is not None and callee_t.kind is TK.POINTER else callee_t
                if ft is not None and ft.kind is TK.FUNCTION and ft.params is not None:
                    for param_t, arg in zip(ft.params, node.args):
                        site(param_t, arg, arg, "argument passing")
            elif isinstance(node, Return) and node.value is not None and ret_t is not None:
                site(ret_t, node.value, node, "return")
            elif isinstance(node, Declaration):
                for entry in node.entries:
                    if (
                        entry.init is not None
                        and not isinstance(entry.init, InitList)
                        and entry.symbol is not None
                    ):
                        site(entry.symbol.type, entry.init, entry.init, "initialization")
    return out


# ---- side-effect predicate shared by R13.1 / R13.5 ------------------------------


def _has_side_effect(e: Expr) -> bool:
    for node in walk(e):
        if isinstance(node, (Assign, CompoundAssign, IncDec, Call)):
            return True
        if isinstance(node, Identifier):
            sym = node.symbol
            if sym is not None and "volatile" in getattr(sym, "quals", frozenset()):
                return True
        if isinstance(node, (Deref, Index, Member)) and is_volatile_access(node):
            return True
    return False


def check_initializer_side_effects(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for node in walk_tu(facts.tu):
        if isinstance(node, Declaration):
            for entry in node.entries:
                if entry.init is not None and _has_side_effect(entry.init):
                    out.append(Finding(
                        "R13.1", entry.init.span, Certainty.DEFINITE,
                        f"initializer of '{entry.name}' contains a side effect",
                        evidence=(Evidence(entry.init.span,
                                           "side effects in initializers are not permitted"),),
                    ))
    return out


def check_logical_operand_side_effects(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for node in walk_tu(facts.tu):
        if isinstance(node, Binary) and node.op in ("&&", "||"):
            if _has_side_effect(node.right):
                out.append(Finding(
                    "R13.5", node.right.span, Certainty.DEFINITE,
                    f"right-hand operand of {node.op} contains a persistent side effect",
                    evidence=(Evidence(node.right.span,
                                       "this operand is conditionally evaluated"),),
                ))
    return out


def walk_tu(tu) -> list[Node]:
    out = []
    for decl in tu.decls:
        out.extend(walk(decl))
    return out


# ---- R13.2: no reliance on unspecified evaluation order --------------------------

_WORLD = ("world", -1)


@dataclass(frozen=True)
class _Access:
    write: bool
    key: tuple
    deref: bool
    span: object
    name: str


def _accesses(e: Expr, facts: TUFacts, conflicts: list) -> list[_Access]:
    """Collect accesses of a subtree, checking unsequenced sibling groups."""

    def var_key(sym: Symbol) -> tuple:
        return ("var", sym.uid)

    def cross(groups: list[list[_Access]], node: Expr) -> None:
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                for a in groups[i]:
                    for b in groups[j]:
                        _check_pair(a, b, node, facts, conflicts)

    if isinstance(e, Identifier):
        sym = e.symbol
        if isinstance(sym, Symbol) and sym.kind is SymKind.OBJECT:
            volatile = "volatile" in sym.quals
            return [_Access(volatile, var_key(sym), False, e.span, sym.name)]
        return []
    if isinstance(e, (Constant, StringLiteral, Sizeof)):
        return []
    if isinstance(e, (Assign, CompoundAssign)):
        value_acc = _accesses(e.value, facts, conflicts)
        target_reads, target_write = _lvalue_accesses(e.target, facts, conflicts)
        if isinstance(e, CompoundAssign) and target_write is not None:
            target_reads = target_reads + [_Access(False, target_write.key,
                                                   target_write.deref,
                                                   target_write.span,
                                                   target_write.name)]
        # The updating store is exempt from conflicts with reads that feed
        # the stored value, but two writes of one object always conflict.
        write_half = [a for a in value_acc + target_reads if a.write]
        if target_write is not None:
            for other in write_half:
                _check_pair(target_write, other, e, facts, conflicts)
        cross([value_acc, target_reads], e)
        result = value_acc + target_reads
        if target_write is not None:
            result.append(target_write)
        return result
    if isinstance(e, IncDec):
        reads, write = _lvalue_accesses(e.operand, facts, conflicts)
        out = reads[:]
        if write is not None:
            out.append(write)
            out.append(_Access(False, write.key, write.deref, write.span, write.name))
        return out
    if isinstance(e, Call):
        groups = [_accesses(e.callee, facts, conflicts)]
        for a in e.args:
            groups.append(_accesses(a, facts, conflicts))
        cross(groups, e)
        flat = [x for g in groups for x in g]
        flat.append(_Access(True, _WORLD, False, e.span, "<call>"))
        return flat
    if isinstance(e, Binary):
        left = _accesses(e.left, facts, conflicts)
        right = _accesses(e.right, facts, conflicts)
        if e.op in ("&&", "||"):
            return left + right  # sequence point between the operands
        cross([left, right], e)
        return left + right
    if isinstance(e, Comma):
        return _accesses(e.left, facts, conflicts) + _accesses(e.right, facts, conflicts)
    if isinstance(e, Conditional):
        acc = _accesses(e.cond, facts, conflicts)
        acc += _accesses(e.then, facts, conflicts)
        acc += _accesses(e.other, facts, conflicts)
        return acc
    if isinstance(e, (Unary, Cast)):
        return _accesses(e.operand, facts, conflicts)
    if isinstance(e, AddrOf):
        return _accesses(e.operand, facts, conflicts)
    if isinstance(e, Deref):
        inner = _accesses(e.operand, facts, conflicts)
        return inner + [_Access(False, _deref_key(e.operand), True, e.span,
                                _expr_name(e.operand))]
    if isinstance(e, Index):
        base = _accesses(e.base, facts, conflicts)
        index = _accesses(e.index, facts, conflicts)
        cross([base, index], e)
        acc = base + index
        acc.append(_Access(False, _deref_key(e.base), True, e.span, _expr_name(e.base)))
        return acc
    if isinstance(e, Member):
        inner = _accesses(e.base, facts, conflicts)
        if e.arrow:
            inner = inner + [_Access(False, _deref_key(e.base), True, e.span,
                                     _expr_name(e.base))]
        return inner
    if isinstance(e, InitList):
        groups = [_accesses(el, facts, conflicts) for el in e.elements]
        cross(groups, e)
        return [x for g in groups for x in g]
    return []


def _lvalue_accesses(target: Expr, facts, conflicts) -> tuple[list[_Access], _Access | None]:
    """(address-computation accesses, the store access)."""
    if isinstance(target, Identifier) and isinstance(target.symbol, Symbol):
        sym = target.symbol
        return [], _Access(True, ("var", sym.uid), False, target.span, sym.name)
    if isinstance(target, Deref):
        reads = _accesses(target.operand, facts, conflicts)
        return reads, _Access(True, _deref_key(target.operand), True, target.span,
                              _expr_name(target.operand))
    if isinstance(target, Index):
        reads = _accesses(target.base, facts, conflicts) + _accesses(target.index, facts, conflicts)
        return reads, _Access(True, _deref_key(target.base), True, target.span,
                              _expr_name(target.base))
    if isinstance(target, Member):
        if target.arrow:
            reads = _accesses(target.base, facts, conflicts)
            return reads, _Access(True, _deref_key(target.base), True, target.span,
                                  _expr_name(target.base))
        reads, write = _lvalue_accesses(target.base, facts, conflicts)
        return reads, write
    if isinstance(target, Cast):
        return _lvalue_accesses(target.operand, facts, conflicts)
    return _accesses(target, facts, conflicts), None


def _deref_key(pointer: Expr) -> tuple:
    if isinstance(pointer, Identifier) and isinstance(pointer.symbol, Symbol):
        return ("deref", pointer.symbol.uid)
    return ("deref", None)


def _expr_name(e: Expr) -> str:
    if isinstance(e, Identifier):
        return f"*{e.name}"
    return "*<expr>"


def _is_escaped(key: tuple, facts: TUFacts) -> bool:
    if key[0] != "var":
        return True
    uid = key[1]
    for fn in facts.functions:
        if uid in fn.addr_taken:
            return True
    for sym in facts.table.symbols:
        if sym.uid == uid:
            return not (sym.is_local_object or sym.is_param or sym.is_temp)
    return True


def _check_pair(a: _Access, b: _Access, node: Expr, facts: TUFacts, conflicts: list) -> None:
    if not (a.write or b.write):
        return
    if a.key == _WORLD or b.key == _WORLD:
        if a.key == _WORLD and b.key == _WORLD:
            conflicts.append(("definite", node, "two unsequenced calls both carry side effects"))
        return
    if not a.deref and not b.deref:
        if a.key == b.key:
            conflicts.append((
                "definite", node,
                f"unsequenced side effect and access on '{a.name}'",
            ))
        return
    # At least one access goes through a dereference: the don't-know
    # channel owns every aliasing question, so these never escalate
    # past caution.
    involved_var = a if not a.deref else (b if not b.deref else None)
    if involved_var is not None and not _is_escaped(involved_var.key, facts):
        return  # a never-escaping local cannot alias a dereference
    conflicts.append((
        "caution", node,
        "unsequenced accesses through possibly aliasing lvalues",
    ))


def _full_expressions(fn: FunctionDef) -> list[Expr]:
    out: list[Expr] = []
    from ccomply.parsing.astnodes import DoWhile, If, Label, Switch, While

    for node in walk(fn.body):
        if isinstance(node, ExprStmt) and node.expr is not None:
            out.append(node.expr)
        elif isinstance(node, (If, While, DoWhile, Switch)):
            out.append(node.cond)
        elif isinstance(node, For):
            for clause in for_clauses(node):
                if clause is not None and isinstance(clause, Expr):
                    out.append(clause)
        elif isinstance(node, Return) and node.value is not None:
            out.append(node.value)
        elif isinstance(node, Declaration):
            for entry in node.entries:
                if entry.init is not None:
                    out.append(entry.init)
    return out


def check_evaluation_order(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for decl in facts.tu.decls:
        if not isinstance(decl, FunctionDef):
            continue
        for full in _full_expressions(decl):
            conflicts: list = []
            _accesses(full, facts, conflicts)
            seen: set[tuple] = set()
            for level, node, message in conflicts:
                key = (level, message)
                if key in seen:
                    continue
                seen.add(key)
                out.append(Finding(
                    "R13.2", full.span,
                    Certainty.DEFINITE if level == "definite" else Certainty.CAUTION,
                    message,
                    behavior_class=BehaviorClass.UNSPECIFIED,
                    evidence=(Evidence(node.span, "within one full expression"),),
                ))
    return out


# ---- R8.13: pointer to const where possible ---------------------------------------


def check_const_pointer(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for decl in facts.tu.decls:
        if not isinstance(decl, FunctionDef):
            continue
        candidates = _const_candidates(decl)
        if not candidates:
            continue
        parents = _parent_map(decl.body)
        ret_t = decl.symbol.type.ret if decl.symbol is not None else None
        verdicts = {sym.uid: "const-ok" for sym in candidates}
        by_uid = {sym.uid: sym for sym in candidates}
        for node in walk(decl.body):
            if not isinstance(node, Identifier) or not isinstance(node.symbol, Symbol):
                continue
            uid = node.symbol.uid
            if uid not in verdicts or verdicts[uid] != "const-ok":
                continue
            verdicts[uid] = _classify_use(node, parents, ret_t)
        for uid, verdict in verdicts.items():
            if verdict == "const-ok":
                sym = by_uid[uid]
                out.append(Finding(
                    "R8.13", sym.def_span, Certainty.DEFINITE,
                    f"'{sym.name}' is never used to modify its pointee and could "
                    f"point to a const-qualified type",
                    evidence=(Evidence(sym.def_span, "no write through this pointer"),),
                ))
    return out


def _const_candidates(fn: FunctionDef) -> list[Symbol]:
    syms: list[Symbol] = []
    for p in fn.params:
        if p.symbol is not None:
            syms.append(p.symbol)
    for node in walk(fn.body):
        if isinstance(node, Declaration):
            for entry in node.entries:
                if entry.symbol is not None:
                    syms.append(entry.symbol)
    return [
        s for s in syms
        if s.type.kind is TK.POINTER
        and s.type.pointee is not None
        and s.type.pointee.kind is not TK.FUNCTION
        and "const" not in s.type.pointee.quals
    ]


def _parent_map(root: Node) -> dict[int, Node]:
    parents: dict[int, Node] = {}
    stack = [root]
    while stack:
        node = stack.pop()
        for child in children(node):
            parents[id(child)] = node
            stack.append(child)
    return parents


def _classify_use(node: Expr, parents: dict[int, Node], fn_ret: TypeDesc | None) -> str:
    """'const-ok', 'writes', or 'havoc' for one use of a candidate pointer."""
    parent = parents.get(id(node))
    child: Expr = node
    while isinstance(parent, Cast):
        target_t = parent.ctype
        if target_t is None or target_t.kind is not TK.POINTER:
            return "havoc"  # cast away from pointer land
        if target_t.pointee is not None and "const" in target_t.pointee.quals:
            return "const-ok"
        child = parent
        parent = parents.get(id(parent))
    if parent is None:
        return "const-ok"
    if (
        isinstance(parent, Deref)
        or (isinstance(parent, Index) and parent.base is child)
        or (isinstance(parent, Member) and parent.arrow and parent.base is child)
    ):
        return _classify_access(parent, parents)
    if isinstance(parent, AddrOf):
        return "havoc"
    if isinstance(parent, Call):
        if child in parent.args:
            position = parent.args.index(child)
            callee_t = parent.callee.ctype
            ft = callee_t.pointee if callee_t is not None and callee_t.kind is TK.POINTER else callee_t
            if ft is None or ft.kind is not TK.FUNCTION or ft.params is None:
                return "havoc"
            if position >= len(ft.params):
                return "havoc"  # variadic tail
            pt = ft.params[position]
            if pt.kind is TK.POINTER and pt.pointee is not None and "const" in pt.pointee.quals:
                return "const-ok"
            if pt.kind is TK.POINTER:
                return "writes"
            return "havoc"
        return "const-ok"  # callee position
    if isinstance(parent, Assign):
        if parent.target is child:
            return "const-ok"  # reassigning the pointer itself
        return _sink_verdict(parent.target.ctype)
    if isinstance(parent, Declaration):
        for entry in parent.entries:
            if entry.init is not None and _contains(entry.init, child):
                sink = entry.symbol.type if entry.symbol is not None else None
                return _sink_verdict(sink)
        return "const-ok"  # array-size or enum position: value-only use
    if isinstance(parent, Return):
        return _sink_verdict(fn_ret)
    if isinstance(parent, (CompoundAssign, IncDec)):
        return "const-ok"  # pointer arithmetic on the pointer itself
    if isinstance(parent, InitList):
        return "havoc"  # stored into an aggregate; tracking stops
    if isinstance(parent, (Binary, Unary, Member, Index, Comma, Conditional,
                           ExprStmt, Sizeof)):
        return "const-ok"
    return "havoc"


def _classify_access(access: Expr, parents: dict[int, Node]) -> str:
    """Classify a `*p` / `p[i]` / `p->m` lvalue built on the candidate."""
    while True:
        grand = parents.get(id(access))
        if isinstance(grand, Member) and not grand.arrow and grand.base is access:
            access = grand
            continue
        if isinstance(grand, Index) and grand.base is access:
            access = grand
            continue
        break
    if isinstance(grand, Assign) and grand.target is access:
        return "writes"
    if isinstance(grand, CompoundAssign) and grand.target is access:
        return "writes"
    if isinstance(grand, IncDec) and grand.operand is access:
        return "writes"
    if isinstance(grand, AddrOf):
        return "havoc"  # a fresh pointer into the pointee escapes
    return "const-ok"


def _sink_verdict(sink: TypeDesc | None) -> str:
    if sink is None:
        return "havoc"
    if sink.kind is TK.POINTER:
        if sink.pointee is not None and "const" in sink.pointee.quals:
            return "const-ok"
        return "writes"
    return "havoc"


def _contains(root: Expr, needle: Expr) -> bool:
    return any(n is needle for n in walk(root))


# ---- R14.1 / R14.2: loop counter discipline -----------------------------------------


def _clause_writes(expr: Expr | None) -> set[Symbol]:
    if expr is None:
        return set()
    return {
        ev.sym for ev in walk_effects(expr)
        if ev.kind == "write" and ev.sym is not None
    }


def _clause_reads(expr: Expr | None) -> set[Symbol]:
    if expr is None:
        return set()
    return {
        ev.sym for ev in walk_effects(expr)
        if ev.kind == "read" and ev.sym is not None
    }


def _loop_counter(node: For) -> Symbol | None:
    """The single variable written by the step and read by the condition."""
    candidates = _clause_writes(node.step) & _clause_reads(node.cond)
    if len(candidates) == 1:
        return candidates.pop()
    return None


def check_float_loop_counter(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for node in walk_tu(facts.tu):
        if not isinstance(node, For):
            continue
        counter = _loop_counter(node)
        if counter is None and isinstance(node.init, Declaration):
            # `for (float f = 0; ...)` declares the counter in the init.
            declared = {e.symbol for e in node.init.entries if e.symbol is not None}
            stepped = _clause_writes(node.step)
            overlap = declared & stepped
            counter = overlap.pop() if len(overlap) == 1 else None
        if counter is None:
            continue
        if counter.type.kind in (TK.FLOAT, TK.DOUBLE):
            out.append(Finding(
                "R14.1", node.span, Certainty.DEFINITE,
                f"loop counter '{counter.name}' has floating type",
                evidence=(Evidence(counter.def_span,
                                   f"'{counter.name}' is declared with type {counter.type!r}"),),
            ))
    return out


def check_for_loop_shape(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for node in walk_tu(facts.tu):
        if not isinstance(node, For):
            continue
        problem = _for_shape_problem(node)
        if problem is not None:
            out.append(Finding(
                "R14.2", node.span, Certainty.DEFINITE,
                f"for loop is not in the restricted form: {problem}",
                evidence=(Evidence(node.span, "init, condition, and step must "
                                              "manage exactly one loop counter"),),
            ))
    return out


def _for_shape_problem(node: For) -> str | None:
    init, cond, step = for_clauses(node)
    if init is None or cond is None or step is None:
        return "every clause (init, condition, step) must be present"
    if isinstance(init, Comma):
        return "the init clause initializes more than one object"
    if isinstance(init, Declaration):
        if len(init.entries) != 1 or init.entries[0].init is None:
            return "the init clause must initialize exactly the loop counter"
        init_targets = {init.entries[0].symbol}
    else:
        init_writes = _clause_writes(init)
        if len(init_writes) != 1:
            return "the init clause must assign exactly the loop counter"
        init_targets = init_writes
    step_writes = _clause_writes(step)
    if len(step_writes) != 1:
        return "the step clause must modify exactly one variable"
    counter = next(iter(step_writes))
    if init_targets != {counter}:
        return "init and step clauses do not agree on one loop counter"
    if counter not in _clause_reads(cond):
        return "the condition does not test the loop counter"
    body_writes = _clause_writes_body(node)
    if counter in body_writes:
        return f"the loop body modifies the counter '{counter.name}'"
    return None


def _clause_writes_body(node: For) -> set[Symbol]:
    written: set[Symbol] = set()
    for stmt in walk(node.body):
        if isinstance(stmt, Expr):
            continue
        for child in children(stmt):
            if isinstance(child, Expr):
                for ev in walk_effects(child):
                    if ev.kind in ("write", "addrof") and ev.sym is not None:
                        written.add(ev.sym)
    return written
