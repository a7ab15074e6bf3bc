"""Constants for the monotone Kolmogorov toolkit."""

from config.parameter_manager import default_manager

_tolerances = default_manager.get_category_parameters('tolerances')
_solver = default_manager.get_category_parameters('solver')
_poly = default_manager.get_category_parameters('poly')
_verify = default_manager.get_category_parameters('verify')

# Relative tolerances
FEASIBILITY_TOL = float(_tolerances['feasibility'])
INNER_RESIDUAL_TOL = float(_tolerances['inner_residual'])
OUTER_STEP_TOL = float(_tolerances['outer_step'])
SOLVE_RESIDUAL_TOL = float(_tolerances['solve_residual'])
WITNESS_MATCH_TOL = float(_tolerances['witness_match'])
MEMBERSHIP_TOL = float(_tolerances['membership'])
CONTINUITY_TOL = float(_tolerances['continuity'])
BREAKPOINT_MERGE_TOL = float(_tolerances['breakpoint_merge'])
TOL_FLOOR = float(_tolerances['tol_floor'])

# Root finding
MAX_BISECTIONS = int(_solver['max_bisections'])
BRACKET_CAP = 2.0 ** int(_solver['bracket_cap_exponent'])

# Critical point search for segments of degree >= 5
CRITICAL_POINT_GRID = int(_poly['critical_point_grid'])

# Verification oracle
QUAD_GRID_PER_SEGMENT = int(_verify['quad_grid_per_segment'])
GAUSS_NODES = int(_verify['gauss_nodes'])
QUAD_PANELS = int(_verify['quad_panels'])
MEMBERSHIP_GRID = int(_verify['membership_grid'])
DEFAULT_ATOMS = int(_verify['default_atoms'])
SWEEP_R_RANGE = (int(_verify['sweep_r_min']), int(_verify['sweep_r_max']))

# Random member ranges: (low, high); log-uniform unless noted
SCALE_RANGE = (0.1, 10.0)
PEAK_FRACTION_MAX = 0.9  # b uniform in [0, 0.9 a]
OFFSET_RANGE = (0.0, 10.0)  # uniform

# CLI exit codes
EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
