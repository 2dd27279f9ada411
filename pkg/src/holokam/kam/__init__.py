"""Min-plus weak KAM engine: Lax-Oleinik semigroup, critical value, fixed points."""

from ._backend import HAVE_EXTENSION
from .core import (
    CostKernel,
    FiniteMetricSpace,
    HypothesisReport,
    WeakKamSolution,
    critical_nodes,
    critical_value,
    fixed_point_residual,
    hypothesis_report,
    is_dominated,
    lax_oleinik,
    lipschitz_constant,
    minplus_power,
    single_step_dominated,
    solve_weak_kam,
)
from .io import load_kernel, read_matrix, write_matrix

__all__ = [
    "HAVE_EXTENSION",
    "CostKernel",
    "FiniteMetricSpace",
    "HypothesisReport",
    "WeakKamSolution",
    "critical_nodes",
    "critical_value",
    "fixed_point_residual",
    "hypothesis_report",
    "is_dominated",
    "lax_oleinik",
    "lipschitz_constant",
    "minplus_power",
    "single_step_dominated",
    "solve_weak_kam",
    "load_kernel",
    "read_matrix",
    "write_matrix",
]
