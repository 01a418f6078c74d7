"""Flow-sensitive intraprocedural points-to sets for local pointers.

Targets are named objects, string-literal ids, or the absorbing
`unknown` top element. Direct assignments update strongly; joins take
set union (with unknown absorbing); calls and stores through pointers
havoc every address-taken pointer.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ccomply.flow.cfg import Cfg, DeclItem, TBranch, TReturn, TSwitch
from ccomply.flow.effects import addr_taken_syms
from ccomply.parsing.astnodes import (
    AddrOf, Assign, Binary, Call, Cast, Comma, CompoundAssign, Conditional,
    Constant, Deref, Expr, Identifier, IncDec, Index, InitList, Member,
    Sizeof, StringLiteral, Unary,
)
from ccomply.sema.symbols import SymKind, Symbol
from ccomply.sema.typesys import TK


@dataclass(frozen=True)
class Target:
    kind: str                 # 'obj' | 'lit' | 'unknown'
    uid: int = -1             # symbol uid for 'obj', literal id for 'lit'
    label: str = ""           # variable name or literal preview

    def __repr__(self):
        if self.kind == "obj":
            return f"&{self.label}"
        if self.kind == "lit":
            return f'"{self.label}"'
        return "<unknown>"


UNKNOWN = Target("unknown")


@dataclass(frozen=True)
class PointsToSet:
    targets: frozenset[Target]

    def __post_init__(self):
        assert self.targets, "points-to sets are never empty"

    @property
    def is_unknown(self) -> bool:
        return UNKNOWN in self.targets

    def union(self, other: "PointsToSet") -> "PointsToSet":
        if self.is_unknown or other.is_unknown:
            return UNKNOWN_SET  # unknown absorbs
        return PointsToSet(self.targets | other.targets)

    def only_literals(self) -> bool:
        return all(t.kind == "lit" for t in self.targets)

    def has_literal(self) -> bool:
        return any(t.kind == "lit" for t in self.targets)

    def __repr__(self):
        return "{" + ", ".join(sorted(map(repr, self.targets))) + "}"


UNKNOWN_SET = PointsToSet(frozenset({UNKNOWN}))

PtEnv = dict[int, PointsToSet]


def _is_pointer_var(sym: Symbol | None) -> bool:
    return (
        sym is not None
        and sym.kind is SymKind.OBJECT
        and sym.type.kind is TK.POINTER
        and (sym.is_local_object or sym.is_param or sym.is_temp)
    )


@dataclass
class PointsToResult:
    pre: dict[tuple[int, int], PtEnv] = field(default_factory=dict)
    iterations: int = 0
    _evaluator: "_PtEval | None" = None

    def env_at(self, bid: int, idx: int) -> PtEnv:
        return self.pre.get((bid, idx), {})

    def points_to(self, expr: Expr, env: PtEnv) -> PointsToSet:
        assert self._evaluator is not None
        return self._evaluator.eval(expr, dict(env), mutate=False)


class _PtEval:
    def __init__(self, addr_taken: set[int]):
        self.addr_taken = addr_taken

    def eval(self, e: Expr, env: PtEnv, mutate: bool = True) -> PointsToSet:
        if isinstance(e, Identifier) and isinstance(e.symbol, Symbol):
            sym = e.symbol
            if sym.type.kind is TK.ARRAY:
                return PointsToSet(frozenset({Target("obj", sym.uid, sym.name)}))
            if sym.kind is SymKind.FUNCTION:
                return PointsToSet(frozenset({Target("obj", sym.uid, sym.name)}))
            if _is_pointer_var(sym):
                return env.get(sym.uid, UNKNOWN_SET)
            return UNKNOWN_SET
        if isinstance(e, StringLiteral):
            preview = e.value if len(e.value) <= 24 else e.value[:21] + "..."
            return PointsToSet(frozenset({Target("lit", e.literal_id, preview)}))
        if isinstance(e, AddrOf):
            return self._address_of(e.operand, env, mutate)
        if isinstance(e, Cast):
            inner = self.eval(e.operand, env, mutate)
            operand_t = e.operand.ctype
            if operand_t is not None and operand_t.kind in (TK.POINTER, TK.ARRAY, TK.FUNCTION):
                return inner
            return UNKNOWN_SET  # integer-to-pointer and friends
        if isinstance(e, Binary) and e.op in ("+", "-"):
            # Pointer arithmetic stays within the pointed-to object.
            lt = e.left.ctype
            rt = e.right.ctype
            if lt is not None and lt.kind in (TK.POINTER, TK.ARRAY):
                return self.eval(e.left, env, mutate)
            if rt is not None and rt.kind in (TK.POINTER, TK.ARRAY):
                return self.eval(e.right, env, mutate)
            return UNKNOWN_SET
        if isinstance(e, Assign):
            value_set = self.eval(e.value, env, mutate)
            self.store(e.target, value_set, env, mutate)
            return value_set
        if isinstance(e, Call):
            if mutate:
                self.havoc(env)
            return UNKNOWN_SET
        if isinstance(e, (Deref, Index, Member)):
            return UNKNOWN_SET  # loads through memory are not tracked
        if isinstance(e, Comma):
            self.eval(e.left, env, mutate)
            return self.eval(e.right, env, mutate)
        if isinstance(e, Conditional):
            a = self.eval(e.then, env, False)
            b = self.eval(e.other, env, False)
            return a.union(b)
        return UNKNOWN_SET

    def _address_of(self, operand: Expr, env: PtEnv, mutate: bool) -> PointsToSet:
        if isinstance(operand, Identifier) and isinstance(operand.symbol, Symbol):
            sym = operand.symbol
            return PointsToSet(frozenset({Target("obj", sym.uid, sym.name)}))
        if isinstance(operand, Index):
            base_t = operand.base.ctype
            if base_t is not None and base_t.kind is TK.ARRAY:
                return self._address_of(operand.base, env, mutate)
            return self.eval(operand.base, env, mutate)
        if isinstance(operand, Member):
            if operand.arrow:
                return self.eval(operand.base, env, mutate)
            return self._address_of(operand.base, env, mutate)
        if isinstance(operand, Deref):
            return self.eval(operand.operand, env, mutate)
        return UNKNOWN_SET

    def store(self, target: Expr, value: PointsToSet, env: PtEnv, mutate: bool) -> None:
        if not mutate:
            return
        if isinstance(target, Identifier) and _is_pointer_var(target.symbol):
            env[target.symbol.uid] = value  # strong update
            return
        if isinstance(target, (Deref, Index)) or (isinstance(target, Member) and target.arrow):
            self.havoc(env)
            return
        if isinstance(target, Cast):
            self.store(target.operand, value, env, mutate)

    def havoc(self, env: PtEnv) -> None:
        for uid in list(env):
            if uid in self.addr_taken:
                env[uid] = UNKNOWN_SET


def _walk_stores(e: Expr, ev: _PtEval, env: PtEnv) -> None:
    """Apply all points-to effects of one lowered expression."""
    if isinstance(e, Assign):
        _walk_stores(e.value, ev, env)
        value_t = e.value.ctype
        target = e.target
        if isinstance(target, Identifier) and _is_pointer_var(target.symbol):
            env[target.symbol.uid] = ev.eval(e.value, env, mutate=False)
        else:
            ev.store(target, UNKNOWN_SET, env, mutate=True)
        return
    if isinstance(e, CompoundAssign):
        _walk_stores(e.value, ev, env)
        target = e.target
        if isinstance(target, Identifier) and _is_pointer_var(target.symbol):
            # p += n keeps pointing within the same object.
            return
        if isinstance(target, (Deref, Index)) or (isinstance(target, Member) and target.arrow):
            ev.havoc(env)
        return
    if isinstance(e, IncDec):
        return
    if isinstance(e, Call):
        _walk_stores(e.callee, ev, env)
        for a in e.args:
            _walk_stores(a, ev, env)
        ev.havoc(env)
        return
    if isinstance(e, (Identifier, Constant, StringLiteral, Sizeof)):
        return
    if isinstance(e, Unary):
        _walk_stores(e.operand, ev, env)
        return
    if isinstance(e, Binary):
        _walk_stores(e.left, ev, env)
        _walk_stores(e.right, ev, env)
        return
    if isinstance(e, Cast):
        _walk_stores(e.operand, ev, env)
        return
    if isinstance(e, (Deref, AddrOf)):
        _walk_stores(e.operand, ev, env)
        return
    if isinstance(e, Index):
        _walk_stores(e.base, ev, env)
        _walk_stores(e.index, ev, env)
        return
    if isinstance(e, Member):
        _walk_stores(e.base, ev, env)
        return
    if isinstance(e, InitList):
        for el in e.elements:
            _walk_stores(el, ev, env)
        return
    if isinstance(e, Comma):
        _walk_stores(e.left, ev, env)
        _walk_stores(e.right, ev, env)
        return


def _join_env(a: PtEnv, b: PtEnv) -> PtEnv:
    out: PtEnv = {}
    for uid in set(a) | set(b):
        sa = a.get(uid, UNKNOWN_SET)
        sb = b.get(uid, UNKNOWN_SET)
        out[uid] = sa.union(sb)
    return out


def local_points_to(cfg: Cfg) -> PointsToResult:
    result = PointsToResult()
    addr_taken = addr_taken_syms(cfg)
    ev = _PtEval(addr_taken)
    result._evaluator = ev

    def transfer_item(item, env: PtEnv) -> None:
        if isinstance(item, DeclItem):
            sym = item.symbol
            if item.init is not None:
                _walk_stores(item.init, ev, env)
                if _is_pointer_var(sym) and not isinstance(item.init, InitList):
                    env[sym.uid] = ev.eval(item.init, env, mutate=False)
        else:
            _walk_stores(item.expr, ev, env)

    def term_transfer(b, env: PtEnv) -> None:
        term = b.term
        expr = None
        if isinstance(term, TBranch):
            expr = term.cond
        elif isinstance(term, TSwitch):
            expr = term.expr
        elif isinstance(term, TReturn):
            expr = term.value
        if expr is not None:
            _walk_stores(expr, ev, env)

    in_states: dict[int, PtEnv] = {cfg.entry: {}}
    worklist = [cfg.entry]
    iterations = 0
    budget = len(cfg.blocks) * 8 + 64
    while worklist:
        bid = worklist.pop(0)
        iterations += 1
        if iterations > budget * 8 + 256:
            raise RuntimeError("points-to analysis failed to stabilize")
        b = cfg.block(bid)
        env = dict(in_states[bid])
        for item in b.items:
            transfer_item(item, env)
        term_transfer(b, env)
        for target, _kind in b.succs:
            if target not in in_states:
                in_states[target] = dict(env)
                worklist.append(target)
                continue
            joined = _join_env(in_states[target], env)
            if joined != in_states[target]:
                in_states[target] = joined
                if target not in worklist:
                    worklist.append(target)
    result.iterations = iterations

    for bid, entry_env in in_states.items():
        b = cfg.block(bid)
        env = dict(entry_env)
        for idx, item in enumerate(b.items):
            result.pre[(bid, idx)] = dict(env)
            transfer_item(item, env)
        result.pre[(bid, len(b.items))] = dict(env)
    return result
