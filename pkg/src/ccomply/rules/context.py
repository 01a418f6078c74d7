"""Fact bundles handed to the rule checkers."""
from __future__ import annotations

from dataclasses import dataclass, field

from ccomply.flow import (
    Cfg, DefAssignResult, IntervalResult, LivenessResult, PointsToResult,
)
from ccomply.flow.effects import addr_taken_syms
from ccomply.parsing.astnodes import FunctionDef, TranslationUnitAst
from ccomply.sema.symbols import SymbolTable
from ccomply.sema.typesys import DEFAULT_MODEL, IntegerModel
from ccomply.source import SourceManager


@dataclass
class FunctionFacts:
    fn: FunctionDef
    cfg: Cfg
    assign: DefAssignResult
    intervals: IntervalResult
    live: LivenessResult
    points: PointsToResult
    addr_taken: frozenset[int] = frozenset()


@dataclass
class TUFacts:
    tu: TranslationUnitAst
    table: SymbolTable
    path: str
    functions: list[FunctionFacts] = field(default_factory=list)
    model: IntegerModel = DEFAULT_MODEL
    manager: SourceManager | None = None


def compute_tu_facts(
    tu: TranslationUnitAst,
    table: SymbolTable,
    manager: SourceManager | None = None,
    model: IntegerModel = DEFAULT_MODEL,
) -> TUFacts:
    from ccomply.flow import (
        build_cfg, definite_assignment, interval_analysis, liveness,
        local_points_to,
    )

    facts = TUFacts(tu, table, tu.path, model=model, manager=manager)
    for decl in tu.decls:
        if isinstance(decl, FunctionDef):
            cfg = build_cfg(decl, model)
            facts.functions.append(FunctionFacts(
                fn=decl,
                cfg=cfg,
                assign=definite_assignment(cfg),
                intervals=interval_analysis(cfg, model),
                live=liveness(cfg),
                points=local_points_to(cfg),
                addr_taken=frozenset(addr_taken_syms(cfg)),
            ))
    return facts
