"""Adaptive filtered schemes for first-order Hamilton-Jacobi equations.

A monotone scheme supplies convergence, a high-order scheme supplies
accuracy, and a per-step blend switches between them node by node, driven
by genuinely two-dimensional smoothness indicators and an automatically
tuned switching scale.
"""
from .grids import (BoundaryCondition, GHOST_REACH, Grid1D, Grid2D, GridField,
                    ghost_value, undiv_diff_1d, undiv_diff_2d, write_field_csv)
from .hamiltonians import (Hamiltonian, eikonal_hamiltonian, make_hamiltonian,
                           rotation_hamiltonian, shifted_quadratic_hamiltonian,
                           transport_hamiltonian)
from .indicators1d import (Indicator1DConfig, Smoothness1D, Variant1D,
                           beta_pm_1d, flagged_cells_1d, map_g, omega_1d,
                           omega_field_1d, phi_1d, smoothness_1d)
from .indicators2d import (Formula2D, Indicator2DConfig, PostMap,
                           QuadrantBetas, Smoothness2D, beta_quadrant_full,
                           beta_quadrant_partial, omega_2d, omega_field_2d,
                           omega_split, omega_split_field, phi_2d, smooth_phi,
                           quadrant_betas, quadrant_beta_fields, smoothness_2d)
from .monotone import (CflReport, CflViolation, MonotoneKind, MonotoneScheme,
                       cfl_check, h_eikonal, h_llf, monotone_step)
from .highorder import (SCHEME_ORDERS, hc_step, high_order_step, lw2_step,
                        lw_step, richtmyer_step, rkc4_step)
from .filtering import (Diagnostics, EpsVariant, EvolutionError, FilterState,
                        SolverConfig, af_evolve, af_step, epsilon_n, filter_F)
from .problems import (ALL_TEST_IDS, IndicatorCase, ProblemSpec, disc_min,
                       hopf_lax_min_1d, level_set_error, make_test)
from .reporting import (RunReport, RunRow, error_norms, observed_order,
                        parse_report_csv)
from .harness import (CliConfig, IndicatorRunConfig, run_convergence,
                      run_indicators)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
