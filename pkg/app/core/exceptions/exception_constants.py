# instance files
MISSING_SECTION = "Instance file is missing the [{section}] section"
DUPLICATE_SECTION = "Section [{section}] appears more than once"
UNKNOWN_SECTION = "Unknown section [{section}]"
CONTENT_OUTSIDE_SECTION = "Content found before the first section header"
BUDGET_NOT_INTEGER = "Budget must be a single integer, got '{value}'"
GENERALIZED_NOT_EMPTY = "The [generalized] section takes no content"
PROVENANCE_MALFORMED = "Provenance line must read '#! key: value'"

# newick
NEWICK_UNEXPECTED_TOKEN = "Unexpected {found} in tree, expected {expected}"
NEWICK_UNEXPECTED_END = "Tree text ended early, expected {expected}"
NEWICK_MISSING_LENGTH = "Edge above node '{node}' has no branch length"
NEWICK_NEGATIVE_LENGTH = "Branch length {value} is negative"
NEWICK_NON_INTEGER_LENGTH = "Branch length {value} is not an integer"
NEWICK_ROOT_LENGTH = "The root node cannot carry a branch length"
NEWICK_TRAILING_TEXT = "Unexpected text after the closing ';'"
NEWICK_UNNAMED_LEAF = "Every leaf needs a name"

# tree / web / instance structure
TREE_ARITY = "Tree node '{node}' has {children} child(ren); inner nodes need at least 2"
TREE_DUPLICATE_NAME = "Tree node name '{name}' is used more than once"
TREE_NOT_A_TREE = "Tree edges do not form a single rooted tree"
WEB_ARC_MALFORMED = "Web line must read 'FROM TO' or 'AND NAME'"
WEB_UNKNOWN_SPECIES = "Unknown species '{name}' in food web"
WEB_SELF_LOOP = "Species '{name}' cannot depend on itself"
WEB_CYCLE = "Food web contains a cycle: {cycle}"
WEB_AND_ON_STANDARD = "AND tags are only allowed on generalized instances"
INSTANCE_SPECIES_MISMATCH = "Tree leaves and food web species differ"
INSTANCE_INVALID = "Instance failed validation: {reason}"

# species sets
UNKNOWN_SPECIES = "Unknown species '{name}'"
SPECIES_INDEX_OUT_OF_RANGE = "Species index {index} is outside 0..{upper}"

# viability / solvers
AND_NODE_UNSUPPORTED = "Generalized (AND) food webs are not supported by {operation}"
EXTENSION_INFEASIBLE = "No viable extension exists; the food web is corrupted"
CAPACITY_EXCEEDED = "{limit} exceeded: {bound} > {cap}"
DEADLINE_EXCEEDED = "Wall-time limit of {cap}s exceeded"
ORIGIN_NOT_VIABLE = "Decomposition needs a viable set"
ORIGIN_OVER_BUDGET = "Decomposition input has {size} species, above the budget {budget}"
INVALID_PARAMETER = "Parameter {name} must be {requirement}"

# reduction sources
SOURCE_EMPTY = "Source file holds no {kind} data"
SOURCE_LINE_MALFORMED = "Cannot read {kind} line: '{line}'"
SOURCE_INVALID = "Source input failed validation: {reason}"
DIMACS_HEADER = "DIMACS input needs a 'p cnf <vars> <clauses>' header"
DIMACS_COUNT_MISMATCH = "DIMACS header announces {expected} clauses but {found} were read"
FILE_UNREADABLE = "Cannot read {path}: {reason}"
FILE_NOT_UTF8 = "{path} is not UTF-8 text"
