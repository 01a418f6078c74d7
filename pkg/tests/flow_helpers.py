"""Helpers for driving the flow analyses in tests."""
from __future__ import annotations

from ccomply.flow import build_cfg
from ccomply.flow.cfg import Cfg, EvalItem
from ccomply.parsing import Call, FunctionDef, Identifier, parse
from ccomply.sema import resolve
from support import pp_text

PRELUDE = (
    "extern void probe(int);\n"
    "extern void use(int);\n"
    "extern void g(void);\n"
    "extern int get(void);\n"
)


def analyze_fn(text: str, name: str = "f", prelude: str = PRELUDE, path: str = "t.c"):
    toks, _, _, _ = pp_text(prelude + text, path=path)
    tu = parse(toks, path)
    table = resolve(tu)
    fn = [d for d in tu.decls if isinstance(d, FunctionDef) and d.name == name][0]
    cfg = build_cfg(fn)
    return cfg, fn, table, tu


def probe_points(cfg: Cfg, callee: str = "probe"):
    """(block id, item index, call node) for each probe(...) call item."""
    out = []
    for b, i, item in cfg.points():
        if isinstance(item, EvalItem) and isinstance(item.expr, Call):
            target = item.expr.callee
            if isinstance(target, Identifier) and target.name == callee:
                out.append((b.id, i, item.expr))
    return out


def sym_named(table, name: str):
    matches = [s for s in table.symbols if s.name == name]
    assert matches, f"no symbol {name!r}"
    return matches[-1]
