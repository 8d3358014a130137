"""Spectral solver and density optimizer for the partially hinged plate.

The plate (0, pi) x (-ell, ell) is hinged on its short edges and free on
the long ones.  The package solves the weighted eigenproblem of the
bending operator, runs the rearrangement loop that minimizes the first
eigenvalue over two-material densities of fixed mass, and numerically
certifies the kernel positivity, edge-slope, series and polarization
properties that underpin the symmetry analysis of the optimal plate.
"""

__version__ = "0.1.0"

from .config import (
    AdmissibleWeightRule,
    PlateConfig,
    domain_area,
    load_config,
    sublevel_fraction,
)
from .grid import GridField, QuadratureGrid
from .basis import (
    SpectralBasis,
    SpectralField,
    build_basis,
    evaluate,
    evaluate_dx,
    evaluate_dy,
    evaluate_on_grid,
)
from .assembly import (
    StiffnessFactor,
    assemble_stiffness,
    assemble_weighted_mass,
    export_matrix_text,
)
from .eigensolve import Eigenpair, SolverError, rayleigh_quotient, solve_first
from .optimize import (
    DensityField,
    MonotonicityError,
    OptimizationTrace,
    PlateSystem,
    bang_bang_from_values,
    midline_slope_check,
    minimize,
    random_admissible_density,
    rearrange,
    strip_density,
    symmetry_classify,
    uniform_density,
)
from .green import (
    GreenOperator,
    apply,
    green_dx,
    green_matrix,
    quadratic_form,
    reflection_gap,
)
from .series import (
    CoefficientSequence,
    alternating_edge_slope_series,
    certify_S1_positive,
    certify_S2_negative,
    check_sine_lower_bound,
    constant_CN,
    constant_CbarN,
    edge_slope_series,
    pair_term_margin,
    ratio_crossing_angle,
    sequence_family,
)
from .polarization import (
    HalfPlaneReflection,
    polarization_energy_gap,
    polarize,
    polarized_density,
    theta1_quotient,
)
from .certify import CertificationReport, run_suite
