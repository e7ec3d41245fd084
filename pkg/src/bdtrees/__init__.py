"""Subtree occurrence statistics in unlabeled trees of bounded maximum degree."""

from .counting import CountingBundle, SingularityEstimate, counting_series, find_x0
from .occurrences import (
    OccurrenceTable, brute_force_occurrences, occurrence_distribution, occurrences, occurrences_containing_root,
    occurrences_spanning_join,
)
from .series import (
    ExtrapolationFit, SeriesError, TruncatedBiSeries, TruncatedUniSeries, cycle_index_multiset, eval_lower_bound,
    multiset_directional_derivative, sqrt_extrapolate,
)
from .spectral import eigenvalues, estrada, moment_degree_check, walk_moments, zagreb
from .stats import asymptotic_checks, estrada_survey, linear_fit, table_moments
from .system import (
    ClassSystem, ResourceCapError, SingularityReport, build_system, check_strong_connectivity, compute_mu,
    enumerate_classes, jacobian_column_sum, mean_variance_series, solve_series,
)
from .trees import (
    FreeTree, ParseError, RootedTree, canonical_code, diameter, enumerate_trees, format_tree, parse_tree,
    truncate_depth,
)

__version__ = "0.1.0"
