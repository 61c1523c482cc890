'''
Named constants shared across the package.

'''

# Projection modes, in priority order for the parallel strategy.
SIMPLE = 'simple'
RECURSIVE = 'recursive'
MULTI = 'multi'
ALL = 'all'

PROJECTION_MODES = [SIMPLE, RECURSIVE, MULTI]
PROOF_MODES = PROJECTION_MODES + [ALL]

# What marks an argument as kept: its Pos variable, or a positive weight.
POS_GUARD = 'pos'
WEIGHT_GUARD = 'weight'
GUARDS = [POS_GUARD, WEIGHT_GUARD]

# Verdicts, named after the columns of the experiments table.
YES = 'YES'
MAYBE = 'MAYBE'
TIMEOUT = 'TIMEOUT'

VERDICT_EXIT_CODES = {YES: 0,
                      MAYBE: 1,
                      TIMEOUT: 2,
                      }

EXIT_USAGE = 3
EXIT_UNREADABLE = 4
EXIT_PARSE_ERROR = 5
EXIT_INTERNAL_ERROR = 6

# Solver answers.
SAT = 'sat'
UNSAT = 'unsat'
UNKNOWN = 'unknown'
TIMED_OUT = 'timeout'

INTERNAL_SOLVER = 'internal'
SOLVER_ENV_VAR = 'PYSUBTERM_SOLVER'
FILE_PLACEHOLDER = '{file}'

DEFAULT_TIMEOUT = 60.0
DEFAULT_WEIGHT_BOUND = 2
MAX_INTERNAL_POSITIONS = 20
BRUTEFORCE_LIMIT = 12

# TPDB legacy format.
VAR_BLOCK = 'VAR'
RULES_BLOCK = 'RULES'
COMMENT_BLOCK = 'COMMENT'
UNSUPPORTED_BLOCKS = ['THEORY',  # AC annotations
                      'STRATEGY',  # innermost, context-sensitive
                      'EQUATIONS',
                      ]

MARK_SUFFIX = '#'

# Deepest term nesting the reader accepts; the term algorithms recurse on
# the structure.
MAX_TERM_DEPTH = 100
