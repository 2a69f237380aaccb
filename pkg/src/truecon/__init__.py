"""truecon: event-identifier logic over stable configuration structures.

Model checking with forward and reverse event modalities, deciders for the
history-preserving bisimulation family (IB, WH, H, HWH, HH), synthesis of
characteristic and distinguishing formulas, and a brute-force
cross-validation harness.
"""

from .equivalences import (
    GameSolution,
    StateSpace,
    Verdict,
    build_state_space,
    check_equivalence,
    solve_game,
)
from .errors import TrueconError
from .formulas import char_formula, distinguishing_formula, theta_closed, theta_open
from .frontend import (
    parse_formula,
    parse_structure,
    parse_structure_file,
    parse_term,
    render_formula,
    render_structure_file,
)
from .harness import (
    CrossReport,
    EnumBudget,
    cross_validate,
    enumerate_structures,
    naive_game_hh,
    naive_satisfies,
    validate_bisimulation,
)
from .logic import (
    Environment,
    Formula,
    classify_sublogic,
    expand_derived,
    free_identifiers,
    modal_depth,
    satisfies,
    substitute,
)
from .structures import (
    ConfigStructure,
    LabeledPoset,
    poset_isomorphisms,
    validate_stable,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigStructure",
    "CrossReport",
    "EnumBudget",
    "Environment",
    "Formula",
    "GameSolution",
    "LabeledPoset",
    "StateSpace",
    "TrueconError",
    "Verdict",
    "build_state_space",
    "char_formula",
    "check_equivalence",
    "classify_sublogic",
    "cross_validate",
    "distinguishing_formula",
    "enumerate_structures",
    "expand_derived",
    "free_identifiers",
    "modal_depth",
    "naive_game_hh",
    "naive_satisfies",
    "parse_formula",
    "parse_structure",
    "parse_structure_file",
    "parse_term",
    "poset_isomorphisms",
    "render_formula",
    "render_structure_file",
    "satisfies",
    "solve_game",
    "substitute",
    "theta_closed",
    "theta_open",
    "validate_bisimulation",
    "validate_stable",
    "__version__",
]
