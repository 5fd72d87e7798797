"""Poincare-Reeb graphs of plane regions bounded by circles."""

from .geom import Axis, Circle, Point, Tolerance
from .grammar import GrammarParams, enumerate_family, generate, recognize, validate_params
from .ops import OpKind, Plan, SsccCase, mbcc, mbssc_pair, replay, sscc
from .planner import realize, verify
from .reeb import PRGraph, compute_pr_graph, is_tree
from .region import HalfConstraint, Side, SSRegion, validate
from .trees import Tree, canonical_code

__version__ = "0.1.0"

__all__ = [
    "Axis", "Circle", "Point", "Tolerance",
    "GrammarParams", "enumerate_family", "generate", "recognize", "validate_params",
    "OpKind", "Plan", "SsccCase", "mbcc", "mbssc_pair", "replay", "sscc",
    "realize", "verify",
    "PRGraph", "compute_pr_graph", "is_tree",
    "HalfConstraint", "Side", "SSRegion", "validate",
    "Tree", "canonical_code",
]
