"""Backward live-variable analysis over automatic storage.

A variable is live at a point iff some path reaches a read before any
write. Calls read every address-taken local (a saved pointer may be
used inside the callee), dereference reads do the same, and volatile
locals are always live, so dead-store reasoning stays sound.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ccomply.flow.cfg import Cfg, DeclItem, TBranch, TReturn, TSwitch
from ccomply.flow.effects import addr_taken_syms, item_events, walk_effects
from ccomply.sema.symbols import Symbol


@dataclass
class LivenessResult:
    live_after: dict[tuple[int, int], frozenset[int]] = field(default_factory=dict)
    live_in: dict[int, frozenset[int]] = field(default_factory=dict)
    addr_taken: frozenset[int] = frozenset()
    iterations: int = 0

    def is_live_after(self, bid: int, idx: int, uid: int) -> bool:
        return uid in self.live_after.get((bid, idx), frozenset())


def _tracked(sym: Symbol | None) -> bool:
    return sym is not None and (sym.is_local_object or sym.is_param or sym.is_temp)


def liveness(cfg: Cfg) -> LivenessResult:
    result = LivenessResult()
    addr_taken = frozenset(addr_taken_syms(cfg))
    result.addr_taken = addr_taken
    volatile_locals = frozenset(
        item.symbol.uid
        for _, _, item in cfg.points()
        if isinstance(item, DeclItem) and "volatile" in item.symbol.quals
    )
    always_live = addr_taken | volatile_locals

    def backward_events(events, live: set[int]) -> None:
        for ev in reversed(list(events)):
            sym = ev.sym
            if ev.kind == "write" and _tracked(sym):
                if sym.uid not in volatile_locals:
                    live.discard(sym.uid)
            elif ev.kind == "read" and _tracked(sym):
                live.add(sym.uid)
            elif ev.kind in ("call", "deref_read", "deref_store"):
                live.update(addr_taken)

    def item_backward(item, live: set[int]) -> None:
        if isinstance(item, DeclItem):
            if item.symbol.uid not in volatile_locals:
                live.discard(item.symbol.uid)
            if item.init is not None:
                backward_events(walk_effects(item.init), live)
        else:
            backward_events(item_events(item), live)

    def term_uses(b) -> list:
        term = b.term
        expr = None
        if isinstance(term, TBranch):
            expr = term.cond
        elif isinstance(term, TSwitch):
            expr = term.expr
        elif isinstance(term, TReturn):
            expr = term.value
        return list(walk_effects(expr)) if expr is not None else []

    live_out: dict[int, frozenset[int]] = {}
    order = [b.id for b in cfg.blocks if b.reachable]
    iterations = 0
    budget = (len(order) + 1) * (len(order) + 8)
    changed = True
    while changed:
        changed = False
        for bid in reversed(order):
            iterations += 1
            if iterations > budget * 4 + 64:
                raise RuntimeError("liveness failed to stabilize")
            b = cfg.block(bid)
            out: set[int] = set()
            if bid == cfg.exit:
                out |= always_live
            for target, _ in b.succs:
                out |= result.live_in.get(target, frozenset())
            live = set(out) | volatile_locals
            backward_events(term_uses(b), live)
            for item in reversed(b.items):
                item_backward(item, live)
            new_in = frozenset(live)
            if new_in != result.live_in.get(bid):
                result.live_in[bid] = new_in
                changed = True
            live_out[bid] = frozenset(out)
    result.iterations = iterations

    # Record per-item live-after sets from the stabilized solution.
    for bid in order:
        b = cfg.block(bid)
        live = set(live_out.get(bid, frozenset())) | volatile_locals
        if bid == cfg.exit:
            live |= always_live
        backward_events(term_uses(b), live)
        after: list[frozenset[int]] = []
        for item in reversed(b.items):
            after.append(frozenset(live))
            item_backward(item, live)
        after.reverse()
        for idx, live_set in enumerate(after):
            result.live_after[(bid, idx)] = live_set
    return result
