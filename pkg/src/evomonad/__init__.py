"""Continuous-evolution components: timed trajectories, their composition algebra,
hybrid systems via strength, Zeno-aware feedback, a wiring DSL and a law checker."""

from .catalog import Registry, default_registry
from .combinators import (
    CompatibilityError,
    Component,
    FeedbackConfig,
    NonConvergent,
    NotPreDynamical,
    choice,
    copy,
    copy_delay,
    delta,
    feedback,
    iterate,
    kleisli_compose,
    lift,
    strict_pair,
    strict_product,
    sum_,
    sync_pair,
    sync_product,
    unroll,
)
from .dsl import DslError, ElaborationError, compile_source, elaborate, format_program, parse, parse_value
from .evolution import Evolution, concat, eta, fmap, is_predynamical, mu, theta
from .hybrid import HybridComponent, bouncing_ball, lift_hybrid, observe, strength_left, strength_right
from .laws import EqConfig, LawReport, component_approx_eq, run_law_suite
from .time_core import INF

__all__ = [
    "INF",
    "Evolution",
    "eta",
    "theta",
    "mu",
    "fmap",
    "concat",
    "is_predynamical",
    "Component",
    "CompatibilityError",
    "NonConvergent",
    "NotPreDynamical",
    "FeedbackConfig",
    "kleisli_compose",
    "copy",
    "copy_delay",
    "lift",
    "choice",
    "sum_",
    "strict_pair",
    "strict_product",
    "delta",
    "sync_pair",
    "sync_product",
    "iterate",
    "feedback",
    "unroll",
    "HybridComponent",
    "lift_hybrid",
    "observe",
    "strength_left",
    "strength_right",
    "bouncing_ball",
    "Registry",
    "default_registry",
    "DslError",
    "ElaborationError",
    "parse",
    "elaborate",
    "compile_source",
    "format_program",
    "parse_value",
    "EqConfig",
    "LawReport",
    "component_approx_eq",
    "run_law_suite",
]
