"""All tunable defaults in one place.

Every numeric default used by the solver, the lambda searches, the
integrator, and the audits lives here so experiment configs have a single
source of truth.  CLI configs (JSON) override these per run.
"""

# ---- interior-point solver -------------------------------------------------
# Convergence declares optimal when relative primal/dual infeasibility and
# relative duality gap are all below these.  The infeasibility threshold
# matches the reporting gate used for all shipped results; the gap tolerance
# and iteration cap are our own choices and are surfaced here on purpose.
SOLVER_GAP_TOL = 1e-8
SOLVER_FEAS_TOL = 5e-7
SOLVER_MAX_ITER = 200
SOLVER_STEP_FRACTION = 0.98     # fraction-to-boundary step damping
SOLVER_SCHUR_REG = 1e-12        # diagonal regularization on the Schur complement

# ---- lambda (decay-rate) search --------------------------------------------
# Global problems: bracket on [1/d, LAMBDA_MAX] (model may widen), coarse
# geometric scan for bracketing, then golden-section refinement.
LAMBDA_MAX_DEFAULT = 8.0
LAMBDA_SCAN_POINTS_GLOBAL = 12
LAMBDA_GOLDEN_REL_TOL = 2e-3
# Regional problems: dependence on lambda is non-convex, so scan a wide
# logarithmic grid first and refine around the best point.
LAMBDA_REGIONAL_GRID = (1e-2, 1e3, 40)   # (lo, hi, points), log-spaced
# Quadratic Lyapunov lower bounds on the third Lorenz coordinate are feasible
# only at the isolated decay rate 3/8, so sweeps always include it.
LAMBDA_EXTRA_SCAN_POINTS_LORENZ_LOWER = (0.375,)

# ---- integration ------------------------------------------------------------
RK4_STEP = 0.005
RK4_DIVERGENCE_CAP = 1e8         # truncate trajectories whose norm exceeds this
TRANSIENT_DISCARD_RANDOM = 0.1   # initial fraction dropped for random starts
TRANSIENT_DISCARD_MANIFOLD = 0.0
MANIFOLD_PERTURBATION = 1e-6

# ---- certificate audits ------------------------------------------------------
AUDIT_BOX_HALFWIDTH = 1.5        # sampling box in rescaled coordinates
AUDIT_SAMPLES = 100_000
AUDIT_SEED = 20240801
AUDIT_MARGIN_TOL = 1e-6

# ---- misc ---------------------------------------------------------------------
DEFAULT_SEED = 12345
