"""Run single rules over in-memory sources."""
from __future__ import annotations

from ccomply.flow import build_call_graph
from ccomply.parsing import parse
from ccomply.rules import compute_tu_facts, run_rules
from ccomply.sema import resolve
from support import make_manager

PRELUDE = (
    "extern void use(int);\n"
    "extern void useu(unsigned int);\n"
    "extern void usep(int *);\n"
    "extern void usecp(const int *);\n"
    "extern void usec(char);\n"
    "extern int get(void);\n"
)


def run_rule(text: str, rule: str, prelude: str = PRELUDE, path: str = "t.c"):
    findings, _ = run_rule_full(text, rule, prelude, path)
    return findings


def run_rule_full(text: str, rule: str, prelude: str = PRELUDE, path: str = "t.c"):
    from ccomply.frontend import preprocess

    mgr, entry = make_manager({path: prelude + text})
    tokens, _, _ = preprocess(entry, [], [], mgr)
    tu = parse(tokens, path)
    table = resolve(tu)
    facts = compute_tu_facts(tu, table, mgr)
    graph = build_call_graph([(tu, table)])
    findings = run_rules([facts], {rule}, call_graph=graph, manager=mgr)
    return findings, facts


def lines_of(findings):
    return sorted(f.span.start.line for f in findings)


def kinds_of(findings):
    return [(f.span.start.line, f.certainty.value) for f in sorted(findings, key=lambda f: f.sort_key())]
