"""Rainbow-index toolkit for complete graphs.

Computes the analytic thresholds governing when k colors suffice to give
every k-set of vertices many internally disjoint rainbow trees, searches
for and certifies explicit edge-colorings, and cross-checks the theory
against exact combinatorial oracles and Monte Carlo experiments.
"""

from .bounds import (
    BoundReport,
    N2Kind,
    RamseyQuery,
    averaging_bound,
    binomial_tail_below,
    binomial_upper_vs_union,
    chernoff_theta,
    combined_N,
    ell_min,
    expected_X_upper,
    multicolor_ramsey_upper,
    n1_bound,
    n2_bound,
    n_threshold,
    rainbow_star_prob,
    union_bound_failure,
)
from .colorings import (
    BudgetExceededError,
    ColorDegreeTable,
    ColoringFormatError,
    CompleteGraphColoring,
    SeededStream,
    color_degrees,
    enumerate_colorings,
    random_coloring,
    read_coloring,
    write_coloring,
)
from .montecarlo import (
    TrialConfig,
    TrialSummary,
    chernoff_tail_bound,
    empirical_threshold,
    estimate_AS_all,
    estimate_BS,
    wilson_interval,
)
from .trees import (
    DisjointFamily,
    OracleMode,
    STree,
    TreeClass,
    VertexSet,
    classify_stree,
    internal_tree_packing,
    is_rainbow,
    max_disjoint_rainbow_trees,
    rainbow_star_count,
    star_tree,
    verify_coloring,
)

__version__ = "0.1.0"
