"""Checkers backed by data-flow facts: R12.2, R9.1, R2.1, R2.2, R14.3, R1.3."""
from __future__ import annotations

from ccomply.flow.assign import AssignState
from ccomply.flow.cfg import Cfg, DeclItem, EvalItem, TBranch, TReturn, TSwitch
from ccomply.flow.effects import item_events, walk_effects
from ccomply.parsing.astnodes import (
    Binary, CompoundAssign, Constant, DoWhile, Expr, ExprStmt, For, If, While,
    walk,
)
from ccomply.rules.context import FunctionFacts, TUFacts
from ccomply.rules.findings import BehaviorClass, Certainty, Evidence, Finding
from ccomply.sema.consteval import const_eval
from ccomply.sema.typesys import is_integer, promoted_width, rvalue_type
from ccomply.source import Span


def _term_expr(block) -> Expr | None:
    term = block.term
    if isinstance(term, TBranch):
        return term.cond
    if isinstance(term, TSwitch):
        return term.expr
    if isinstance(term, TReturn):
        return term.value
    return None


def _point_exprs(cfg: Cfg):
    """(block id, index, expr) for every evaluated expression, in order."""
    for b, i, item in cfg.points():
        if isinstance(item, EvalItem):
            yield b.id, i, item.expr
        elif isinstance(item, DeclItem) and item.init is not None:
            yield b.id, i, item.init
    for b in cfg.blocks:
        if not b.reachable:
            continue
        te = _term_expr(b)
        if te is not None:
            yield b.id, len(b.items), te


# ---- R12.2: shift amount within the promoted width --------------------------


def check_shift_range(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for fn in facts.functions:
        for bid, idx, expr in _point_exprs(fn.cfg):
            env = fn.intervals.env_at(bid, idx)
            for node in walk(expr):
                shift = _shift_parts(node)
                if shift is None:
                    continue
                op, left, right = shift
                left_t = rvalue_type(left.ctype)
                if left_t is None or not is_integer(left_t):
                    continue
                width = promoted_width(left_t, facts.model)
                legal_lo, legal_hi = 0, width - 1
                cv = const_eval(right, facts.model)
                if cv.is_constant:
                    lo = hi = cv.value
                else:
                    iv = fn.intervals.eval_expr(right, env)
                    if iv is None:
                        continue
                    lo, hi = iv.lo, iv.hi
                if hi < legal_lo or lo > legal_hi:
                    out.append(Finding(
                        "R12.2", node.span, Certainty.DEFINITE,
                        f"right-hand operand of {op} is {_range_text(lo, hi)}, "
                        f"outside the legal range [0, {legal_hi}]",
                        behavior_class=BehaviorClass.UNDEFINED,
                        evidence=(
                            Evidence(right.span,
                                     f"right operand evaluates to {_range_text(lo, hi)}"),
                            Evidence(left.span,
                                     f"promoted width of the left operand is {width} bits"),
                        ),
                    ))
                elif lo < legal_lo or hi > legal_hi:
                    out.append(Finding(
                        "R12.2", node.span, Certainty.CAUTION,
                        f"right-hand operand of {op} may reach {_range_text(lo, hi)}, "
                        f"escaping the legal range [0, {legal_hi}]",
                        behavior_class=BehaviorClass.UNDEFINED,
                        evidence=(
                            Evidence(right.span,
                                     f"right operand range {_range_text(lo, hi)} "
                                     f"overlaps both sides of [0, {legal_hi}]"),
                        ),
                    ))
    return out


def _shift_parts(node) -> tuple[str, Expr, Expr] | None:
    if isinstance(node, Binary) and node.op in ("<<", ">>"):
        return node.op, node.left, node.right
    if isinstance(node, CompoundAssign) and node.op in ("<<", ">>"):
        return node.op + "=", node.target, node.value
    return None


def _range_text(lo: int, hi: int) -> str:
    return str(lo) if lo == hi else f"in [{lo}, {hi}]"


# ---- R9.1: no read of unset automatic storage --------------------------------


def check_uninitialized_read(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for fn in facts.functions:
        for ev in fn.assign.reads:
            if ev.sym.is_temp or ev.sym.is_param:
                continue
            if ev.state is AssignState.DEFINITELY_ASSIGNED:
                continue
            decl_span = fn.assign.decl_spans.get(ev.sym.uid)
            evidence = [Evidence(decl_span, f"'{ev.sym.name}' is declared here without an initializer")]
            if ev.state is AssignState.MAYBE_UNASSIGNED:
                out.append(Finding(
                    "R9.1", ev.node.span, Certainty.DEFINITE,
                    f"'{ev.sym.name}' is read before it is set on some path",
                    behavior_class=BehaviorClass.UNDEFINED,
                    evidence=tuple(evidence),
                ))
            else:
                evidence.append(Evidence(
                    None,
                    f"the address of '{ev.sym.name}' escapes before this read; "
                    "a callee or alias may or may not have set it "
                    "(analysis approximation, not rule undecidability alone)",
                ))
                out.append(Finding(
                    "R9.1", ev.node.span, Certainty.CAUTION,
                    f"'{ev.sym.name}' may be read before it is set",
                    behavior_class=BehaviorClass.UNDEFINED,
                    evidence=tuple(evidence),
                ))
    return out


# ---- R2.1: no unreachable code ------------------------------------------------


def check_unreachable(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for fn in facts.functions:
        cfg = fn.cfg
        graph_unreachable = {b.id for b in cfg.blocks if not b.reachable and b.id != cfg.exit}
        interval_unreachable = _interval_unreachable(fn) - graph_unreachable
        for region in _regions(cfg, graph_unreachable | interval_unreachable):
            span, block = _region_anchor(cfg, region)
            if span is None:
                continue
            evidence = []
            reason = _region_reason(cfg, region, fn)
            if reason is not None:
                cond, value = reason
                evidence.append(Evidence(
                    cond.span,
                    f"this condition always evaluates {'true' if value else 'false'}",
                ))
            else:
                evidence.append(Evidence(None, "no path from the function entry reaches this code"))
            out.append(Finding(
                "R2.1", span, Certainty.DEFINITE,
                "code is unreachable",
                evidence=tuple(evidence),
            ))
    return out


def _interval_unreachable(fn: FunctionFacts) -> set[int]:
    cfg = fn.cfg
    dead = fn.intervals.dead_edges
    if not dead:
        return set()
    seen: set[int] = set()
    stack = [cfg.entry]
    while stack:
        bid = stack.pop()
        if bid in seen:
            continue
        seen.add(bid)
        for target, _ in cfg.block(bid).succs:
            if (bid, target) in dead:
                continue
            stack.append(target)
    return {
        b.id for b in cfg.blocks
        if b.reachable and b.id not in seen and b.id != cfg.exit
    }


def _regions(cfg: Cfg, blocks: set[int]) -> list[set[int]]:
    regions: list[set[int]] = []
    remaining = set(blocks)
    while remaining:
        seed = min(remaining)
        region = {seed}
        frontier = [seed]
        while frontier:
            bid = frontier.pop()
            b = cfg.block(bid)
            neighbors = [t for t, _ in b.succs] + list(b.preds)
            for n in neighbors:
                if n in remaining and n not in region:
                    region.add(n)
                    frontier.append(n)
        regions.append(region)
        remaining -= region
    return regions


def _region_anchor(cfg: Cfg, region: set[int]) -> tuple[Span | None, int | None]:
    best: tuple[tuple[int, int], Span, int] | None = None
    for bid in region:
        b = cfg.block(bid)
        if not b.items and not isinstance(b.term, (TReturn, TBranch, TSwitch)):
            continue
        if b.span_hint is None:
            continue
        key = (b.span_hint.start.line, b.span_hint.start.column)
        if best is None or key < best[0]:
            best = (key, b.span_hint, bid)
    if best is None:
        return None, None
    return best[1], best[2]


def _region_reason(cfg: Cfg, region: set[int], fn: FunctionFacts):
    for bid in sorted(region):
        reason = cfg.block(bid).unlinked_reason
        if reason is not None:
            return reason
    for (src, dst) in sorted(fn.intervals.dead_edges):
        if dst in region and src not in region:
            term = cfg.block(src).term
            if isinstance(term, TBranch):
                kind = [k for t, k in cfg.block(src).succs if t == dst]
                value = 0 if kind and kind[0].value == "true-branch" else 1
                return (term.cond, value)
    return None


# ---- R2.2: no dead code ---------------------------------------------------------


def check_dead_code(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for fn in facts.functions:
        for b, idx, item in fn.cfg.points():
            if not isinstance(item, EvalItem) or not isinstance(item.stmt, ExprStmt):
                continue
            events = list(item_events(item))
            if any(ev.kind in ("call", "volatile", "deref_store") for ev in events):
                continue
            writes = [ev for ev in events if ev.kind == "write"]
            if any(ev.sym is None or not (ev.sym.is_local_object or ev.sym.is_param or ev.sym.is_temp)
                   for ev in writes):
                continue  # stores to globals or escaped objects may be observed
            if not writes:
                out.append(Finding(
                    "R2.2", item.expr.span, Certainty.DEFINITE,
                    "statement computes a value that is never used and has no side effects",
                    evidence=(Evidence(item.expr.span, "expression result is discarded"),),
                ))
                continue
            user_writes = [ev for ev in writes if not ev.sym.is_temp]
            if not user_writes:
                continue
            if all(not fn.live.is_live_after(b.id, idx, ev.sym.uid) for ev in user_writes):
                names = ", ".join(sorted({f"'{ev.sym.name}'" for ev in user_writes}))
                out.append(Finding(
                    "R2.2", item.expr.span, Certainty.DEFINITE,
                    f"value stored to {names} is never read",
                    evidence=(Evidence(item.expr.span,
                                       f"no later read of {names} on any path"),),
                ))
    return out


# ---- R14.3: no invariant controlling expressions ---------------------------------


def check_invariant_condition(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for fn in facts.functions:
        for stmt in walk(fn.fn.body):
            cond = None
            if isinstance(stmt, (If, While, DoWhile)):
                cond = stmt.cond
            elif isinstance(stmt, For):
                cond = stmt.cond
            if cond is None:
                continue
            if isinstance(stmt, While) and isinstance(cond, Constant) and cond.value == 1:
                continue  # exempt literal while(1)
            if isinstance(stmt, DoWhile) and isinstance(cond, Constant) and cond.value == 0:
                continue  # exempt literal do..while(0)
            bid = fn.intervals.cond_entry.get(id(stmt))
            if bid is None:
                continue  # condition block itself unreachable
            env = fn.intervals.term_env.get(bid, {})
            can_false, can_true = fn.intervals.truth_of(cond, env)
            if can_false and can_true:
                continue
            value = "true" if can_true else "false"
            out.append(Finding(
                "R14.3", cond.span, Certainty.DEFINITE,
                f"controlling expression is invariant: always {value}",
                evidence=(Evidence(cond.span,
                                   f"analysis shows every evaluation yields {value}"),),
            ))
    return out


# ---- R1.3 (string-literal-write instance): no writes through literals -------------


def check_literal_write(facts: TUFacts) -> list[Finding]:
    out: list[Finding] = []
    for fn in facts.functions:
        for bid, idx, expr in _point_exprs(fn.cfg):
            env = fn.points.env_at(bid, idx)
            for ev in walk_effects(expr):
                if ev.kind != "deref_store" or ev.pointer is None:
                    continue
                pts = fn.points.points_to(ev.pointer, env)
                if pts.is_unknown or not pts.has_literal():
                    continue
                node = ev.node if ev.node is not None else expr
                if pts.only_literals():
                    out.append(Finding(
                        "R1.3", node.span, Certainty.DEFINITE,
                        "write through a pointer to a string literal",
                        behavior_class=BehaviorClass.UNDEFINED,
                        evidence=(Evidence(ev.pointer.span,
                                           f"pointer targets {pts!r}"),),
                    ))
                else:
                    out.append(Finding(
                        "R1.3", node.span, Certainty.CAUTION,
                        "write through a pointer that may target a string literal",
                        behavior_class=BehaviorClass.UNDEFINED,
                        evidence=(Evidence(ev.pointer.span,
                                           f"pointer targets {pts!r}; some targets are writable"),),
                    ))
    return out
