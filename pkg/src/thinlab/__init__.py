"""Numerical laboratory for the thin (lower-dimensional) obstacle problem.

The package solves the weighted variational inequality

    min  int_B |x_d|^(1-2s) |grad u|^2 dx   over  u >= 0 on {x_d = 0},
    u even in x_d, with Dirichlet data on the box boundary,

and provides the analysis toolchain around it: Almgren frequency function
N(u, x0, r) with monotonicity/scaling audits, homogeneous two-dimensional
reference profiles (closed forms at s = 1/2, spherical ODE shooting for
general s), blow-up rescalings with uniqueness/alignment diagnostics, and
frequency-based stratification of the free boundary.
"""

from thinlab.errors import (
    GridError,
    GeometryError,
    FieldFormatError,
    DegenerateFieldError,
    NumericalDivergenceError,
)
from thinlab.field import (
    GridSpec,
    ScalarField,
    make_grid,
    weight_at,
    interpolate,
    save_field,
    load_field,
)
from thinlab.solver import SolverConfig, SolveReport, solve, residuals, energy
from thinlab.frequency import (
    FrequencyProfile,
    dirichlet_integral,
    boundary_mass,
    frequency,
    frequency_limit,
    monotonicity_audit,
    scaling_check,
)
from thinlab.profiles import (
    ProfileClass,
    AngularProfile,
    AdmissibleSet,
    admissible_frequencies,
    profile_closed_form_s_half,
    sphere_ode_shoot,
    find_admissible,
    weighted_normal_derivative,
)
from thinlab.blowup import (
    BlowupDiagnostics,
    rescale,
    blowup_sequence,
    scalar_product_tracker,
    align_2d,
    invariance_check,
)
from thinlab.strata import (
    StratumLabel,
    coincidence_set,
    free_boundary,
    classify,
    tangent_plane,
    sp_diagnostic,
)

__version__ = "0.1.0"
