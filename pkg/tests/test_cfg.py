import pytest

from ccomply.errors import SemaError
from ccomply.flow.cfg import EdgeKind, EvalItem, TBranch, TJump, TSwitch
from ccomply.parsing import Call, Identifier
from flow_helpers import analyze_fn


def reachable_ids(cfg):
    return {b.id for b in cfg.blocks if b.reachable}


def test_if_else_produces_cond_then_else_join():
    cfg, _, _, _ = analyze_fn("void f(int a) { int x; if (a) x = 1; else x = 2; use(x); }")
    branch_blocks = [b for b in cfg.blocks if isinstance(b.term, TBranch)]
    assert len(branch_blocks) == 1
    cond = branch_blocks[0]
    then_id = cond.term.true_target
    else_id = cond.term.false_target
    assert then_id != else_id
    then_b, else_b = cfg.block(then_id), cfg.block(else_id)
    assert isinstance(then_b.term, TJump) and isinstance(else_b.term, TJump)
    join_id = then_b.term.target
    assert else_b.term.target == join_id
    # Four structural roles: condition, then, else, join.
    assert len({cond.id, then_id, else_id, join_id}) == 4
    kinds = {kind for _, kind in cond.succs}
    assert kinds == {EdgeKind.TRUE, EdgeKind.FALSE}


def test_while_true_leaves_no_exit_edge_and_return_unreachable():
    cfg, _, _, _ = analyze_fn("void f(void) { while (1) { g(); } return; }")
    heads = [b for b in cfg.blocks if b.is_loop_head]
    assert heads, "loop head expected"
    head = heads[0]
    # The constant-true condition materializes only the body edge.
    assert isinstance(head.term, TBranch) and head.term.const_value == 1
    assert [kind for _, kind in head.succs] == [EdgeKind.TRUE]
    after = cfg.block(head.term.false_target)
    assert not after.reachable
    assert after.unlinked_reason is not None


def test_short_circuit_call_guarded_by_true_branch():
    cfg, _, _, _ = analyze_fn("void f(int a) { a && get(); }")
    call_blocks = [
        b for b, i, item in cfg.points()
        if isinstance(item, EvalItem) and isinstance(item.expr, Call)
    ]
    assert len(call_blocks) == 1
    call_block = call_blocks[0]
    preds = call_block.preds
    assert len(preds) == 1
    pred = cfg.block(preds[0])
    assert isinstance(pred.term, TBranch)
    assert pred.term.true_target == call_block.id
    kind = [k for t, k in pred.succs if t == call_block.id][0]
    assert kind is EdgeKind.TRUE


def test_conditional_operator_lowered_with_temp():
    cfg, _, table, _ = analyze_fn("int f(int a) { int x = a ? 1 : 2; return x; }")
    assigns = [
        item.expr for _, _, item in cfg.points()
        if isinstance(item, EvalItem) and isinstance(item.expr, type(item.expr))
    ]
    temp_writes = [
        e for e in assigns
        if hasattr(e, "target") and isinstance(getattr(e, "target", None), Identifier)
        and e.target.name.startswith("$t")
    ]
    assert len(temp_writes) == 2  # one per branch


def test_switch_edges_and_implicit_default_fallthrough():
    cfg, _, _, _ = analyze_fn(
        "void f(int x) { switch (x) { case 1: g(); break; case 2: break; } use(x); }"
    )
    switches = [b for b in cfg.blocks if isinstance(b.term, TSwitch)]
    assert len(switches) == 1
    sw = switches[0]
    case_edges = [k for _, k in sw.succs if k is EdgeKind.CASE]
    fallthrough = [k for _, k in sw.succs if k is EdgeKind.FALLTHROUGH]
    assert len(case_edges) == 2
    assert len(fallthrough) == 1  # no default: implicit edge to join


def test_switch_with_default_has_no_fallthrough_edge():
    cfg, _, _, _ = analyze_fn(
        "void f(int x) { switch (x) { case 1: break; default: g(); } }"
    )
    sw = [b for b in cfg.blocks if isinstance(b.term, TSwitch)][0]
    assert all(k is EdgeKind.CASE for _, k in sw.succs)


def test_goto_resolves_and_undefined_label_errors():
    cfg, _, _, _ = analyze_fn(
        "void f(int a) { if (a) goto done; g(); done: use(a); }"
    )
    jump_edges = [k for _, _, k in cfg.edges() if k is EdgeKind.JUMP]
    assert jump_edges
    with pytest.raises(SemaError) as exc:
        analyze_fn("void f(void) { goto nowhere; }")
    assert "undefined label" in str(exc.value)


def test_statement_after_return_is_unreachable_block():
    cfg, _, _, _ = analyze_fn("void f(void) { return; g(); }")
    unreachable_with_items = [b for b in cfg.blocks if not b.reachable and b.items]
    assert len(unreachable_with_items) == 1


def test_do_while_back_edge():
    cfg, _, _, _ = analyze_fn("void f(int n) { int i = 0; do { i++; } while (i < n); }")
    heads = [b for b in cfg.blocks if b.is_loop_head]
    assert heads
    head = heads[0]
    assert any(t == head.id for b in cfg.blocks for t, _ in b.succs if b.id != head.id)


def test_for_loop_structure_continue_hits_step():
    cfg, _, _, _ = analyze_fn(
        "void f(int n) { int i; for (i = 0; i < n; ++i) { if (i == 2) continue; g(); } }"
    )
    assert any(b.is_loop_head for b in cfg.blocks)
    # continue produces a jump edge to the step block, which jumps to the head
    head = [b for b in cfg.blocks if b.is_loop_head][0]
    jump_preds = [p for p in head.preds if any(
        k is EdgeKind.JUMP for t, k in cfg.block(p).succs if t == head.id)]
    assert jump_preds, "step block should jump back to the loop head"


def test_entry_has_no_preds_every_block_owned():
    cfg, _, _, _ = analyze_fn(
        "void f(int a) { int x = 0; while (a) { x += 1; if (x == 3) break; } use(x); }"
    )
    assert cfg.block(cfg.entry).preds == []
    for b, i, item in cfg.points():
        assert cfg.blocks[b.id] is b
