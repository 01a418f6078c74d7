"""Control-flow graphs and data-flow analyses."""
from ccomply.flow.assign import AssignState, DefAssignResult, definite_assignment
from ccomply.flow.callgraph import CallGraph, build_call_graph, recursion_components
from ccomply.flow.cfg import Block, Cfg, DeclItem, EvalItem, build_cfg
from ccomply.flow.intervals import Interval, IntervalResult, interval_analysis
from ccomply.flow.liveness import LivenessResult, liveness
from ccomply.flow.pointsto import PointsToResult, PointsToSet, Target, local_points_to

__all__ = [
    "AssignState", "DefAssignResult", "definite_assignment",
    "CallGraph", "build_call_graph", "recursion_components",
    "Block", "Cfg", "DeclItem", "EvalItem", "build_cfg",
    "Interval", "IntervalResult", "interval_analysis",
    "LivenessResult", "liveness",
    "PointsToResult", "PointsToSet", "Target", "local_points_to",
]
