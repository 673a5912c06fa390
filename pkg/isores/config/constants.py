MIN_DIMENSION = 2
MAX_DIMENSION = 8
SOLVER_DIMENSIONS = (2, 3)

MEMBERSHIP_SLACK = 1e-9
UNIT_TOL = 1e-12
SUPPORT_CHECK_TOL = 1e-7
ORTHONORMAL_TOL = 1e-12
RANK_REL_TOL = 1e-8
RANK_GAP_WARNING = 10.0

GENERATOR_SAMPLES = 100
MAX_CONSTRAINTS = 64

# asymptotic dimension
EXTENT_THRESHOLD = 0.05
STABLE_RUN = 3
DEFAULT_SCHEDULE = (1e2, 1e3, 1e4, 1e5, 1e6)
DEFAULT_GAMMAS = (0.5, 1.0)
ORACLE_CHAINS = 64
ORACLE_STEPS = 24
RECESSION_REACH = 1e6

# construction
CUBE_PITCH_DIVISOR = 200

# grid solver
MAX_CELLS_PER_AXIS = 512
DEFAULT_CELLS_PER_LENGTH = 48
DEFAULT_GAP_TARGET = 1e-3
DEFAULT_RELAX_ITERATIONS = 3000
DEFAULT_BINARIZE_ROUNDS = 4
DEFAULT_ANNEAL_SWEEPS = 120
DEFAULT_ANNEAL_T0 = 0.3
DEFAULT_ANNEAL_COOLING = 0.95
DEFAULT_SEED = 0
ASYMMETRY_SEEDS = 8

# residue ladders
LADDER_LENGTH = 8
LADDER_RATIO = 4.0
SLOPE_SLACK = 0.06
MIN_FIT_POINTS = 5
MIN_FIT_DECADES = 2.0
PROFILE_TOLERANCE = 0.05
CGR_TOLERANCE = 0.03
FREE_RATIO_FLOOR = 0.93

DEFAULT_THREADS = 4

# Crofton perimeter stencils (undirected; 3D uses all 13 lattice neighbours)
CROFTON_DIRECTIONS_2D = ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (2, -1), (1, 2), (1, -2))
GAP_CHECK_EVERY = 50
CURVATURE_SMOOTHING = 1.5
LAMBDA_FLIP_RADIUS = 2.0
