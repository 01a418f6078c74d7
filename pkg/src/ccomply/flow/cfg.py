"""Control-flow graph construction.

Short-circuit operators, the conditional operator, and comma chains
are lowered into explicit branch structure (with synthetic temporaries
for value contexts), so every item in a basic block is a straight-line
expression. Branches whose condition is a syntactic constant get only
the taken edge; the untaken side records why it was orphaned so the
unreachable-code checker can cite the condition.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from ccomply.errors import SemaError
from ccomply.parsing.astnodes import (
    AddrOf, Assign, Binary, Break, Call, Cast, Comma, CompoundAssign,
    CompoundStmt, Conditional, Constant, Continue, DeclEntry, Declaration,
    Deref, DoWhile, Expr, ExprStmt, For, FunctionDef, Goto, Identifier, If,
    IncDec, Index, InitList, Label, Member, Node, Return, Sizeof,
    StringLiteral, Switch, Unary, While,
)
from ccomply.sema.consteval import const_eval
from ccomply.sema.symbols import Linkage, Storage, SymKind, Symbol
from ccomply.sema.typesys import DEFAULT_MODEL, IntegerModel, make_int
from ccomply.source import Span


class EdgeKind(Enum):
    FALLTHROUGH = "fallthrough"
    TRUE = "true-branch"
    FALSE = "false-branch"
    CASE = "switch-case"
    JUMP = "jump"


@dataclass(eq=False)
class EvalItem:
    expr: Expr
    stmt: Node  # originating statement (or declaration entry)


@dataclass(eq=False)
class DeclItem:
    symbol: Symbol
    init: Expr | None
    entry: DeclEntry
    stmt: Node


Item = EvalItem | DeclItem


@dataclass(eq=False)
class TBranch:
    cond: Expr
    true_target: int
    false_target: int
    node: Node
    const_value: int | None = None  # folded condition, when syntactically constant


@dataclass(eq=False)
class TSwitch:
    expr: Expr
    cases: list[tuple[int, int]]  # (constant value, target block)
    default_target: int
    has_default: bool
    node: Node


@dataclass(eq=False)
class TJump:
    target: int
    kind: EdgeKind = EdgeKind.FALLTHROUGH


@dataclass(eq=False)
class TReturn:
    value: Expr | None
    node: Node


@dataclass(eq=False)
class Block:
    id: int
    items: list[Item] = field(default_factory=list)
    term: TBranch | TSwitch | TJump | TReturn | None = None
    span_hint: Span | None = None
    is_loop_head: bool = False
    unlinked_reason: tuple[Expr, int] | None = None  # (condition, folded value)
    preds: list[int] = field(default_factory=list)
    succs: list[tuple[int, EdgeKind]] = field(default_factory=list)
    reachable: bool = True

    def note_span(self, span: Span | None) -> None:
        if self.span_hint is None and span is not None:
            self.span_hint = span


@dataclass(eq=False)
class Cfg:
    fn: FunctionDef
    blocks: list[Block]
    entry: int
    exit: int

    def block(self, bid: int) -> Block:
        return self.blocks[bid]

    def points(self):
        """Iterate (block, index, item) over reachable blocks in id order."""
        for b in self.blocks:
            if not b.reachable:
                continue
            for i, item in enumerate(b.items):
                yield b, i, item

    def edges(self) -> list[tuple[int, int, EdgeKind]]:
        out = []
        for b in self.blocks:
            for target, kind in b.succs:
                out.append((b.id, target, kind))
        return out


@dataclass
class _LoopCtx:
    break_target: int
    continue_target: int


@dataclass
class _SwitchCtx:
    cases: list[tuple[int, int]]
    default_target: int | None
    break_target: int
    node: Switch


class CfgBuilder:
    def __init__(self, fn: FunctionDef, model: IntegerModel = DEFAULT_MODEL):
        self.fn = fn
        self.model = model
        self.blocks: list[Block] = []
        self.temp_count = 0
        self.loops: list[_LoopCtx] = []
        self.switches: list[_SwitchCtx] = []
        self.breakables: list[int] = []  # innermost-last break targets
        self.labels: dict[str, int] = {}
        self.pending_gotos: list[tuple[str, Block, Node]] = []

    # ---- plumbing -----------------------------------------------------------

    def new_block(self) -> Block:
        b = Block(len(self.blocks))
        self.blocks.append(b)
        return b

    def new_temp(self, ctype) -> Symbol:
        name = f"$t{self.temp_count}"
        self.temp_count += 1
        span = self.fn.span
        return Symbol(
            name, SymKind.OBJECT, ctype or make_int(self.model.int_bits, True),
            0, Storage.AUTO, Linkage.NONE, span, is_temp=True, uid=-1,
        )

    def temp_ref(self, temp: Symbol, span: Span) -> Identifier:
        ref = Identifier(temp.name, span=span)
        ref.symbol = temp
        ref.ctype = temp.type
        return ref

    def build(self) -> Cfg:
        entry = self.new_block()
        exit_block = self.new_block()
        self.exit_id = exit_block.id
        cur = self._stmt(self.fn.body, entry)
        if cur is not None:
            cur.term = TJump(self.exit_id, EdgeKind.FALLTHROUGH)
        for name, block, node in self.pending_gotos:
            target = self.labels.get(name)
            if target is None:
                raise SemaError(
                    f"goto to undefined label {name!r}",
                    node.span.start if node.span else None,
                )
            block.term = TJump(target, EdgeKind.JUMP)
        cfg = Cfg(self.fn, self.blocks, entry.id, self.exit_id)
        _materialize_edges(cfg)
        return cfg

    # ---- statements -----------------------------------------------------------

    def _stmt(self, node: Node, cur: Block | None) -> Block | None:
        """Lower one statement; returns the open block or None after a jump."""
        if cur is None:
            cur = self.new_block()  # unreachable continuation after a jump
        cur.note_span(node.span)

        if isinstance(node, CompoundStmt):
            for item in node.items:
                cur = self._stmt(item, cur)
            return cur

        if isinstance(node, Declaration):
            for entry in node.entries:
                if entry.symbol is None or entry.symbol.kind is not SymKind.OBJECT:
                    continue
                init = entry.init
                if init is not None and not isinstance(init, InitList):
                    init, cur = self._expr(init, cur)
                elif isinstance(init, InitList):
                    init, cur = self._init_list(init, cur)
                cur.items.append(DeclItem(entry.symbol, init, entry, node))
                cur.note_span(entry.span)
            return cur

        if isinstance(node, ExprStmt):
            if node.expr is None:
                return cur
            return self._expr_statement(node.expr, node, cur)

        if isinstance(node, If):
            then_b = self.new_block()
            else_b = self.new_block() if node.els is not None else None
            join = self.new_block()
            self._cond(node.cond, then_b.id, (else_b or join).id, cur, node)
            end_then = self._stmt(node.then, then_b)
            if end_then is not None:
                end_then.term = TJump(join.id, EdgeKind.FALLTHROUGH)
            if node.els is not None:
                end_else = self._stmt(node.els, else_b)
                if end_else is not None:
                    end_else.term = TJump(join.id, EdgeKind.FALLTHROUGH)
            return join

        if isinstance(node, While):
            head = self.new_block()
            head.is_loop_head = True
            head.note_span(node.cond.span)
            cur.term = TJump(head.id, EdgeKind.FALLTHROUGH)
            body_b = self.new_block()
            after = self.new_block()
            self._cond(node.cond, body_b.id, after.id, head, node)
            self.loops.append(_LoopCtx(after.id, head.id))
            self.breakables.append(after.id)
            end_body = self._stmt(node.body, body_b)
            self.breakables.pop()
            self.loops.pop()
            if end_body is not None:
                end_body.term = TJump(head.id, EdgeKind.JUMP)
            return after

        if isinstance(node, DoWhile):
            body_b = self.new_block()
            body_b.is_loop_head = True
            cond_b = self.new_block()
            after = self.new_block()
            cur.term = TJump(body_b.id, EdgeKind.FALLTHROUGH)
            self.loops.append(_LoopCtx(after.id, cond_b.id))
            self.breakables.append(after.id)
            end_body = self._stmt(node.body, body_b)
            self.breakables.pop()
            self.loops.pop()
            if end_body is not None:
                end_body.term = TJump(cond_b.id, EdgeKind.FALLTHROUGH)
            cond_b.note_span(node.cond.span)
            self._cond(node.cond, body_b.id, after.id, cond_b, node)
            return after

        if isinstance(node, For):
            if isinstance(node.init, Declaration):
                cur = self._stmt(node.init, cur)
            elif node.init is not None:
                cur = self._expr_statement(node.init, node, cur)
            head = self.new_block()
            head.is_loop_head = True
            head.note_span(node.cond.span if node.cond is not None else node.span)
            cur.term = TJump(head.id, EdgeKind.FALLTHROUGH)
            body_b = self.new_block()
            step_b = self.new_block()
            after = self.new_block()
            if node.cond is not None:
                self._cond(node.cond, body_b.id, after.id, head, node)
            else:
                head.term = TJump(body_b.id, EdgeKind.TRUE)
            self.loops.append(_LoopCtx(after.id, step_b.id))
            self.breakables.append(after.id)
            end_body = self._stmt(node.body, body_b)
            self.breakables.pop()
            self.loops.pop()
            if end_body is not None:
                end_body.term = TJump(step_b.id, EdgeKind.FALLTHROUGH)
            if node.step is not None:
                step_end = self._expr_statement(node.step, node, step_b)
            else:
                step_end = step_b
            if step_end is not None:
                step_end.term = TJump(head.id, EdgeKind.JUMP)
            return after

        if isinstance(node, Switch):
            expr, cur = self._expr(node.cond, cur)
            after = self.new_block()
            ctx = _SwitchCtx([], None, after.id, node)
            self.switches.append(ctx)
            self.breakables.append(after.id)
            body_b = self.new_block()
            end_body = self._stmt(node.body, body_b)
            self.breakables.pop()
            self.switches.pop()
            if end_body is not None:
                end_body.term = TJump(after.id, EdgeKind.FALLTHROUGH)
            default_target = ctx.default_target if ctx.default_target is not None else after.id
            cur.term = TSwitch(expr, ctx.cases, default_target,
                               ctx.default_target is not None, node)
            return after

        if isinstance(node, Label):
            target = self.new_block()
            target.note_span(node.span)
            if cur is not None:
                cur.term = TJump(target.id, EdgeKind.FALLTHROUGH)
            if node.kind == "named":
                if node.name in self.labels:
                    raise SemaError(f"duplicate label {node.name!r}",
                                    node.span.start if node.span else None)
                self.labels[node.name] = target.id
                target.is_loop_head = True  # goto may form a loop through here
            elif node.kind == "case":
                if not self.switches:
                    raise SemaError("'case' label outside switch",
                                    node.span.start if node.span else None)
                cv = const_eval(node.case_expr, self.model)
                if not cv.is_constant:
                    raise SemaError("case label requires a constant",
                                    node.span.start if node.span else None)
                self.switches[-1].cases.append((cv.value, target.id))
            else:
                if not self.switches:
                    raise SemaError("'default' label outside switch",
                                    node.span.start if node.span else None)
                self.switches[-1].default_target = target.id
            return self._stmt(node.stmt, target)

        if isinstance(node, Goto):
            self.pending_gotos.append((node.label, cur, node))
            return None

        if isinstance(node, Break):
            if not self.breakables:
                raise SemaError("'break' outside loop or switch",
                                node.span.start if node.span else None)
            cur.term = TJump(self.breakables[-1], EdgeKind.JUMP)
            return None

        if isinstance(node, Continue):
            if not self.loops:
                raise SemaError("'continue' outside loop",
                                node.span.start if node.span else None)
            cur.term = TJump(self.loops[-1].continue_target, EdgeKind.JUMP)
            return None

        if isinstance(node, Return):
            value = None
            if node.value is not None:
                value, cur = self._expr(node.value, cur)
            cur.term = TReturn(value, node)
            return None

        raise SemaError(f"cannot lower statement {type(node).__name__}")

    # ---- expressions ------------------------------------------------------------

    def _expr_statement(self, expr: Expr, stmt: Node, cur: Block) -> Block:
        # Statement-position comma chains and short-circuits need no value.
        if isinstance(expr, Comma):
            cur = self._expr_statement(expr.left, stmt, cur)
            return self._expr_statement(expr.right, stmt, cur)
        if isinstance(expr, Binary) and expr.op in ("&&", "||"):
            # Evaluate for control only: the right side runs conditionally.
            rhs_b = self.new_block()
            join = self.new_block()
            if expr.op == "&&":
                self._cond(expr.left, rhs_b.id, join.id, cur, stmt)
            else:
                self._cond(expr.left, join.id, rhs_b.id, cur, stmt)
            end = self._expr_statement(expr.right, stmt, rhs_b)
            end.term = TJump(join.id, EdgeKind.FALLTHROUGH)
            return join
        lowered, cur = self._expr(expr, cur)
        cur.items.append(EvalItem(lowered, stmt))
        cur.note_span(expr.span)
        return cur

    def _init_list(self, init: InitList, cur: Block) -> tuple[InitList, Block]:
        elements = []
        for e in init.elements:
            if isinstance(e, InitList):
                low, cur = self._init_list(e, cur)
            else:
                low, cur = self._expr(e, cur)
            elements.append(low)
        clone = replace(init, elements=elements)
        return clone, cur

    def _expr(self, e: Expr, cur: Block) -> tuple[Expr, Block]:
        """Lower an expression for value; returns a branch-free tree."""
        if isinstance(e, Binary) and e.op in ("&&", "||"):
            temp = self.new_temp(e.ctype)
            true_b = self.new_block()
            false_b = self.new_block()
            join = self.new_block()
            self._cond(e, true_b.id, false_b.id, cur, e)
            for blk, value in ((true_b, 1), (false_b, 0)):
                const = Constant(str(value), value, False, span=e.span)
                const.ctype = temp.type
                assign = Assign(self.temp_ref(temp, e.span), const, span=e.span)
                assign.ctype = temp.type
                blk.items.append(EvalItem(assign, e))
                blk.term = TJump(join.id, EdgeKind.FALLTHROUGH)
            return self.temp_ref(temp, e.span), join

        if isinstance(e, Conditional):
            temp = self.new_temp(e.ctype)
            then_b = self.new_block()
            else_b = self.new_block()
            join = self.new_block()
            self._cond(e.cond, then_b.id, else_b.id, cur, e)
            for blk, branch in ((then_b, e.then), (else_b, e.other)):
                value, end = self._expr(branch, blk)
                assign = Assign(self.temp_ref(temp, branch.span), value, span=branch.span)
                assign.ctype = temp.type
                end.items.append(EvalItem(assign, e))
                end.term = TJump(join.id, EdgeKind.FALLTHROUGH)
            return self.temp_ref(temp, e.span), join

        if isinstance(e, Comma):
            left, cur = self._expr(e.left, cur)
            cur.items.append(EvalItem(left, e))
            return self._expr(e.right, cur)

        # Structural recursion for everything else.
        if isinstance(e, Assign):
            target, cur = self._expr(e.target, cur)
            value, cur = self._expr(e.value, cur)
            return replace(e, target=target, value=value), cur
        if isinstance(e, CompoundAssign):
            target, cur = self._expr(e.target, cur)
            value, cur = self._expr(e.value, cur)
            return replace(e, target=target, value=value), cur
        if isinstance(e, Unary):
            operand, cur = self._expr(e.operand, cur)
            return replace(e, operand=operand), cur
        if isinstance(e, Binary):
            left, cur = self._expr(e.left, cur)
            right, cur = self._expr(e.right, cur)
            return replace(e, left=left, right=right), cur
        if isinstance(e, IncDec):
            operand, cur = self._expr(e.operand, cur)
            return replace(e, operand=operand), cur
        if isinstance(e, Call):
            callee, cur = self._expr(e.callee, cur)
            args = []
            for a in e.args:
                low, cur = self._expr(a, cur)
                args.append(low)
            return replace(e, callee=callee, args=args), cur
        if isinstance(e, Index):
            base, cur = self._expr(e.base, cur)
            index, cur = self._expr(e.index, cur)
            return replace(e, base=base, index=index), cur
        if isinstance(e, Member):
            base, cur = self._expr(e.base, cur)
            return replace(e, base=base), cur
        if isinstance(e, Deref):
            operand, cur = self._expr(e.operand, cur)
            return replace(e, operand=operand), cur
        if isinstance(e, AddrOf):
            operand, cur = self._expr(e.operand, cur)
            return replace(e, operand=operand), cur
        if isinstance(e, Cast):
            operand, cur = self._expr(e.operand, cur)
            return replace(e, operand=operand), cur
        if isinstance(e, (Identifier, Constant, StringLiteral, Sizeof, InitList)):
            return e, cur
        raise SemaError(f"cannot lower expression {type(e).__name__}")

    def _cond(self, e: Expr, true_t: int, false_t: int, cur: Block, node: Node) -> None:
        """Lower a boolean context; always terminates `cur`'s chain."""
        cur.note_span(e.span)
        if isinstance(e, Binary) and e.op == "&&":
            mid = self.new_block()
            self._cond(e.left, mid.id, false_t, cur, node)
            self._cond(e.right, true_t, false_t, mid, node)
            return
        if isinstance(e, Binary) and e.op == "||":
            mid = self.new_block()
            self._cond(e.left, true_t, mid.id, cur, node)
            self._cond(e.right, true_t, false_t, mid, node)
            return
        if isinstance(e, Unary) and e.op == "!":
            self._cond(e.operand, false_t, true_t, cur, node)
            return
        if isinstance(e, Comma):
            left, cur2 = self._expr(e.left, cur)
            cur2.items.append(EvalItem(left, node))
            self._cond(e.right, true_t, false_t, cur2, node)
            return
        if isinstance(e, Conditional):
            then_b = self.new_block()
            else_b = self.new_block()
            self._cond(e.cond, then_b.id, else_b.id, cur, node)
            self._cond(e.then, true_t, false_t, then_b, node)
            self._cond(e.other, true_t, false_t, else_b, node)
            return
        lowered, cur = self._expr(e, cur)
        cv = const_eval(lowered, self.model)
        const_value = cv.value if cv.is_constant else None
        cur.term = TBranch(lowered, true_t, false_t, node, const_value)


def _materialize_edges(cfg: Cfg) -> None:
    for b in cfg.blocks:
        term = b.term
        if term is None:
            continue
        if isinstance(term, TJump):
            b.succs.append((term.target, term.kind))
        elif isinstance(term, TReturn):
            b.succs.append((cfg.exit, EdgeKind.JUMP))
        elif isinstance(term, TBranch):
            if term.const_value is None:
                b.succs.append((term.true_target, EdgeKind.TRUE))
                b.succs.append((term.false_target, EdgeKind.FALSE))
            elif term.const_value != 0:
                b.succs.append((term.true_target, EdgeKind.TRUE))
                cfg.blocks[term.false_target].unlinked_reason = (term.cond, term.const_value)
            else:
                b.succs.append((term.false_target, EdgeKind.FALSE))
                cfg.blocks[term.true_target].unlinked_reason = (term.cond, term.const_value)
        elif isinstance(term, TSwitch):
            seen = set()
            for value, target in term.cases:
                if target not in seen:
                    b.succs.append((target, EdgeKind.CASE))
                    seen.add(target)
            if term.default_target not in seen:
                kind = EdgeKind.CASE if term.has_default else EdgeKind.FALLTHROUGH
                b.succs.append((term.default_target, kind))
    for b in cfg.blocks:
        for target, _ in b.succs:
            cfg.blocks[target].preds.append(b.id)
    # Reachability from entry.
    seen: set[int] = set()
    stack = [cfg.entry]
    while stack:
        bid = stack.pop()
        if bid in seen:
            continue
        seen.add(bid)
        for target, _ in cfg.blocks[bid].succs:
            stack.append(target)
    for b in cfg.blocks:
        b.reachable = b.id in seen


def build_cfg(fn: FunctionDef, model: IntegerModel = DEFAULT_MODEL) -> Cfg:
    """Build the control-flow graph for one resolved function."""
    return CfgBuilder(fn, model).build()
