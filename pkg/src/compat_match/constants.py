"""document, CSV and CLI constants"""
FORMAT_VERSION = 1

# instance document keys
DOC_FORMAT_VERSION = 'format-version'
DOC_POINTS = 'points'
DOC_EDGES = 'edges'
DOC_MATCHING = 'matching'
DOC_METADATA = 'metadata'

# certificate claim keys
CLAIM_N = 'n'
CLAIM_M = 'm'
CLAIM_MATCHING_SIZE = 'matching-size'
CLAIM_MAXIMAL = 'matching-maximal'
CLAIM_CLASS = 'graph-class'
CLAIM_PERFECT_COUNT = 'perfect-count'
CLAIM_FORCED_PAIRS = 'forced-pairs'
META_GENERATOR = 'generator'
META_SEED = 'seed'
META_PARAMS = 'params'
META_ROLES = 'roles'

# graph classes
CLASS_POINT_SET = '0-regular'
CLASS_MATCHING = '1-regular'
CLASS_CYCLES = '2-regular'
CLASS_POLYGON = 'polygon'
CLASS_OTHER = 'other'

# bound report classes
BOUND_POINT_SET = 'point-set'
BOUND_PERFECT_MATCHING = 'perfect-matching'
BOUND_DISJOINT_POLYGONS = 'disjoint-polygons'
BOUND_POLYGON = 'polygon'
BOUND_OTHER = 'other'

# solve statuses
STATUS_OPTIMAL = 'optimal'
STATUS_FEASIBLE = 'feasible'
STATUS_INFEASIBLE = 'infeasible'
STATUS_BUDGET = 'budget-exceeded'

# greedy orderings
ORDER_LEXICOGRAPHIC = 'lexicographic'
ORDER_SHORTEST = 'shortest-edge-first'
ORDER_LONGEST = 'longest-edge-first'
ORDER_RANDOM = 'seeded-random'
GREEDY_ORDERINGS = [ORDER_LEXICOGRAPHIC, ORDER_SHORTEST, ORDER_LONGEST, ORDER_RANDOM]

# generator families
FAMILIES = ['convex-polygon', 'points-tight', 'matching-tight', 'cycles-tight',
            'polygon-tight', 'lemma4', 'twin-peaks', 'random-polygon',
            'random-points', 'random-segments', 'random-cycles']

# solve modes
SOLVE_MODES = ['greedy', 'min-maximal', 'max', 'perfect', 'enumerate']

# experiment suites
SUITES = ['lemma1-sweep', 'bounds-sweep', 'oracle-equivalence', 'perfect-corpus', 'families']

# experiment CSV columns, in ExperimentRow order
EXPERIMENT_COLUMNS = ['instance-id', 'class', 'n', 'm', 'mm', 'd', 'greedy-size',
                      'lower-bound', 'lemma1-slack', 'status']

# exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERTIFICATE = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4
EXIT_NOT_MAXIMAL = 5
EXIT_VIOLATIONS = 6

BUDGET_ENV_VAR = 'COMPAT_MATCH_BUDGET'
