"""Checker dispatch: run enabled guidelines over computed facts."""
from __future__ import annotations

from ccomply.errors import ConfigError
from ccomply.flow.callgraph import CallGraph
from ccomply.rules import checkers_ast, checkers_flow, checkers_system
from ccomply.rules.context import TUFacts
from ccomply.rules.findings import Evidence, Finding
from ccomply.rules.registry import REGISTRY, Scope
from ccomply.source import SourceManager, format_location

# Guideline id -> per-TU checker.
PER_TU_CHECKERS = {
    "R1.3": checkers_flow.check_literal_write,
    "R2.1": checkers_flow.check_unreachable,
    "R2.2": checkers_flow.check_dead_code,
    "R8.13": checkers_ast.check_const_pointer,
    "R9.1": checkers_flow.check_uninitialized_read,
    "R11.4": checkers_ast.check_int_pointer_conversion,
    "R12.2": checkers_flow.check_shift_range,
    "R13.1": checkers_ast.check_initializer_side_effects,
    "R13.2": checkers_ast.check_evaluation_order,
    "R13.5": checkers_ast.check_logical_operand_side_effects,
    "R14.1": checkers_ast.check_float_loop_counter,
    "R14.2": checkers_ast.check_for_loop_shape,
    "R14.3": checkers_flow.check_invariant_condition,
}

# Guidelines whose findings arrive only via the external import.
IMPORT_ONLY = frozenset({"D4.1"})

SYSTEM_CHECKERS = {
    "R17.2": checkers_system.check_recursion,
}


def checkable_ids() -> frozenset[str]:
    return frozenset(PER_TU_CHECKERS) | frozenset(SYSTEM_CHECKERS) | IMPORT_ONLY


def validate_enabled(enabled: set[str], system_mode: bool) -> None:
    unknown = sorted(g for g in enabled if g not in REGISTRY)
    if unknown:
        raise ConfigError(f"unknown guideline id(s): {', '.join(unknown)}")
    unimplemented = sorted(g for g in enabled if not REGISTRY[g].implemented)
    if unimplemented:
        raise ConfigError(
            "guideline(s) enabled but not implemented by this tool: "
            + ", ".join(unimplemented)
        )
    if not system_mode:
        system_scoped = sorted(
            g for g in enabled if REGISTRY[g].scope is Scope.SYSTEM
        )
        if system_scoped:
            raise ConfigError(
                "system-scope guideline(s) require --system (single-TU "
                "checking cannot find these violations): "
                + ", ".join(system_scoped)
            )


def run_rules(
    units: list[TUFacts],
    enabled: set[str],
    call_graph: CallGraph | None = None,
    manager: SourceManager | None = None,
) -> list[Finding]:
    """Run every enabled checker; returns findings in deterministic order."""
    findings: list[Finding] = []
    for gid in sorted(enabled):
        checker = PER_TU_CHECKERS.get(gid)
        if checker is None:
            continue
        for unit in units:
            findings.extend(checker(unit))
    system_enabled = sorted(set(enabled) & set(SYSTEM_CHECKERS))
    if system_enabled:
        if call_graph is None:
            raise ConfigError(
                "system-scope rules need the whole-program call graph: "
                + ", ".join(system_enabled)
            )
        for gid in system_enabled:
            findings.extend(SYSTEM_CHECKERS[gid](call_graph))
    if manager is not None:
        _fill_paths_and_expansions(findings, manager)
    findings.sort(key=lambda f: f.sort_key())
    return findings


def _fill_paths_and_expansions(findings: list[Finding], manager: SourceManager) -> None:
    for f in findings:
        if not f.path and manager.has(f.span.start.file):
            f.path = manager.path_of(f.span.start.file)
        if f.span.via:
            notes = tuple(
                Evidence(None, f"in expansion of {frame.macro} at "
                               f"{format_location(manager, frame.site)}")
                for frame in f.span.via
            )
            f.evidence = f.evidence + notes
