"""Verification workbench for rotationally symmetric biharmonic and f-biharmonic maps.

A map ``φ(r, θ) = (ρ(r), kθ)`` between warped surfaces ``dr² + σ(r)²dθ²`` and
``dρ² + λ(ρ)²dφ²`` is checked by evaluating its Euler-Lagrange residuals on
grids with Taylor jets, and cross-checked against a first-principles oracle.
"""

from .catalog import CASE_NAMES, BUILDER_NAMES, VerificationCase, build_case, list_cases, parameters
from .dsl import parse_expr, profile, to_source
from .errors import (ExprSyntaxError, FbiharmError, InvalidOverride, InversionError, NonBiharmonicInput,
                     NonPositiveFactor, OutOfDomain, SingularPoint, StepFailure, ToleranceNotMet,
                     UnknownCase, UnknownIdentifier, XVanishes)
from .geometry import (ConformalFactor, RotSymMap, TensionValue, WarpedSurface, bitension_radial,
                       conformal_bitension, f_bitension, gauss_curvature, tension_radial, theta_obstruction)
from .jets import Jet
from .ode import LinearODE2, reduction_of_order_factor, riccati_residual, solve_ivp, to_t_coordinates
from .oracle import oracle_bitension, oracle_conformal_bitension, oracle_tension, reparametrize
from .profiles import Interval, Profile
from .quadrature import InverseProfile, antiderivative
from .verify import Grid, ResidualReport, compare_oracle, emit_report, make_grid, sweep

__version__ = "0.1.0"
