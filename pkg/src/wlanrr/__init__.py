"""Throughput rate regions of 802.11 WLANs.

Boundary geometry, maximal convex subsets, utility-optimal rate
allocation over meshes of contention cliques, and an independent
slot-level simulator for validation.
"""

from .errors import DomainError, InfeasibleError, PreconditionError, WlanRRError
from .mesh import (
    CliqueRecord,
    LinearConstraint,
    MeshNetwork,
    OperatingPointSet,
    assemble_polytope,
    symmetric_operating_points,
)
from .model import (
    WlanConfig,
    collision_probability,
    idle_probability,
    success_probability,
    tau_to_x,
    throughput,
    x_denominator,
    x_to_tau,
)
from .num import (
    ExampleOptimum,
    NumSolution,
    example_mesh,
    example_operating_points,
    example_rates,
    golden_section_max,
    outer_search,
    paper_example,
    solve_num,
)
from .region import (
    BoundaryPoint,
    boundary_h,
    boundary_scale,
    grid_directions,
    in_rate_region,
    orthogonality_check,
    sample_boundary,
    sample_directions,
    tangent_normal,
    tau_form_residual,
)
from .scenario import Scenario, load_scenario, validate_scenario
from .sim import SimConfig, SimResult, analytic_throughput, compare_to_model, simulate
from .subsets import (
    ConvexSubset,
    alpha_coefficients,
    complement_convexity_margin,
    convexity_margin_sweep,
    maximal_convex_subset,
    post_inequality_check,
    sample_post_inputs,
    subset_contains,
    subset_sample_points,
    symmetric_subset,
)
from .utilities import UtilityFunction, is_log_domain_concave

__version__ = "0.1.0"

__all__ = [
    "BoundaryPoint",
    "CliqueRecord",
    "ConvexSubset",
    "DomainError",
    "ExampleOptimum",
    "InfeasibleError",
    "LinearConstraint",
    "MeshNetwork",
    "NumSolution",
    "OperatingPointSet",
    "PreconditionError",
    "Scenario",
    "SimConfig",
    "SimResult",
    "UtilityFunction",
    "WlanConfig",
    "WlanRRError",
    "alpha_coefficients",
    "analytic_throughput",
    "assemble_polytope",
    "boundary_h",
    "boundary_scale",
    "collision_probability",
    "compare_to_model",
    "complement_convexity_margin",
    "convexity_margin_sweep",
    "example_mesh",
    "example_operating_points",
    "example_rates",
    "golden_section_max",
    "grid_directions",
    "idle_probability",
    "in_rate_region",
    "is_log_domain_concave",
    "load_scenario",
    "maximal_convex_subset",
    "orthogonality_check",
    "outer_search",
    "paper_example",
    "post_inequality_check",
    "sample_boundary",
    "sample_directions",
    "sample_post_inputs",
    "simulate",
    "solve_num",
    "subset_contains",
    "subset_sample_points",
    "success_probability",
    "symmetric_operating_points",
    "symmetric_subset",
    "tangent_normal",
    "tau_form_residual",
    "tau_to_x",
    "throughput",
    "validate_scenario",
    "x_denominator",
    "x_to_tau",
]
