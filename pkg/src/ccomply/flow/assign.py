"""Definite-assignment analysis for automatic storage.

Forward data-flow over the three-point lattice
MaybeUnassigned < AssignedByAlias < DefinitelyAssigned with pointwise
minimum at joins. Taking a variable's address raises it to
AssignedByAlias; so do calls and stores through pointers for
address-taken variables (an alias may have assigned them).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

from ccomply.flow.cfg import Cfg, DeclItem, TBranch, TReturn, TSwitch
from ccomply.flow.effects import addr_taken_syms, item_events, walk_effects
from ccomply.parsing.astnodes import Expr, Identifier
from ccomply.sema.symbols import Symbol


class AssignState(IntEnum):
    MAYBE_UNASSIGNED = 0
    ASSIGNED_BY_ALIAS = 1
    DEFINITELY_ASSIGNED = 2


@dataclass(frozen=True)
class ReadEvent:
    node: Identifier
    sym: Symbol
    state: AssignState
    block: int
    index: int  # item index; terminator reads use len(items)


@dataclass
class DefAssignResult:
    pre: dict[tuple[int, int], dict[int, AssignState]] = field(default_factory=dict)
    reads: list[ReadEvent] = field(default_factory=list)
    decl_spans: dict[int, object] = field(default_factory=dict)
    iterations: int = 0
    lattice_height: int = 3

    def state_at_read(self, node: Identifier) -> AssignState | None:
        for ev in self.reads:
            if ev.node is node:
                return ev.state
        return None


def _tracked(sym: Symbol | None) -> bool:
    # Parameters are tracked too: they start DefinitelyAssigned (the
    # default for variables absent from the state).
    return sym is not None and (sym.is_local_object or sym.is_temp)


def _join(a: dict[int, AssignState], b: dict[int, AssignState]) -> dict[int, AssignState]:
    out = dict(a)
    for uid, state in b.items():
        if uid in out:
            out[uid] = min(out[uid], state)
        else:
            out[uid] = state
    return out


def definite_assignment(cfg: Cfg) -> DefAssignResult:
    result = DefAssignResult()
    addr_taken = addr_taken_syms(cfg)

    def transfer_events(events, state: dict[int, AssignState], collect: bool, bid: int, idx: int) -> None:
        for ev in events:
            sym = ev.sym
            if ev.kind == "read" and _tracked(sym):
                current = state.get(sym.uid, AssignState.DEFINITELY_ASSIGNED)
                if collect:
                    result.reads.append(ReadEvent(ev.node, sym, current, bid, idx))
            elif ev.kind == "write" and _tracked(sym):
                state[sym.uid] = AssignState.DEFINITELY_ASSIGNED
            elif ev.kind == "addrof" and _tracked(sym):
                state[sym.uid] = max(
                    state.get(sym.uid, AssignState.DEFINITELY_ASSIGNED),
                    AssignState.ASSIGNED_BY_ALIAS,
                )
            elif ev.kind in ("call", "deref_store"):
                for uid in addr_taken:
                    if uid in state:
                        state[uid] = max(state[uid], AssignState.ASSIGNED_BY_ALIAS)

    def transfer_item(item, state, collect=False, bid=0, idx=0) -> None:
        if isinstance(item, DeclItem):
            if item.init is not None:
                transfer_events(walk_effects(item.init), state, collect, bid, idx)
                state[item.symbol.uid] = AssignState.DEFINITELY_ASSIGNED
            else:
                state[item.symbol.uid] = AssignState.MAYBE_UNASSIGNED
                result.decl_spans[item.symbol.uid] = item.entry.span
        else:
            transfer_events(item_events(item), state, collect, bid, idx)

    def term_expr(b) -> Expr | None:
        if isinstance(b.term, TBranch):
            return b.term.cond
        if isinstance(b.term, TSwitch):
            return b.term.expr
        if isinstance(b.term, TReturn):
            return b.term.value
        return None

    in_states: dict[int, dict[int, AssignState]] = {cfg.entry: {}}
    worklist = [cfg.entry]
    iterations = 0
    budget = len(cfg.blocks) * 3 + 32
    while worklist:
        bid = worklist.pop(0)
        iterations += 1
        if iterations > budget * 4:
            raise RuntimeError("definite assignment failed to stabilize")
        state = dict(in_states[bid])
        b = cfg.block(bid)
        for item in b.items:
            transfer_item(item, state)
        te = term_expr(b)
        if te is not None:
            transfer_events(walk_effects(te), state, False, bid, len(b.items))
        for target, _kind in b.succs:
            merged = _join(in_states[target], state) if target in in_states else dict(state)
            if target not in in_states or merged != in_states[target]:
                in_states[target] = merged
                if target not in worklist:
                    worklist.append(target)
    result.iterations = iterations

    # Final collection pass over the stabilized states.
    for bid, entry_state in in_states.items():
        b = cfg.block(bid)
        state = dict(entry_state)
        for idx, item in enumerate(b.items):
            result.pre[(bid, idx)] = dict(state)
            transfer_item(item, state, collect=True, bid=bid, idx=idx)
        result.pre[(bid, len(b.items))] = dict(state)
        te = term_expr(b)
        if te is not None:
            transfer_events(walk_effects(te), state, True, bid, len(b.items))
    return result
