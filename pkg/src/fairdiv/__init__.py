"""fairdiv: exact inequality indices and mechanisms for indivisible goods.

The package is organized around a small exact core:

* :mod:`fairdiv.model` - rational-valued instances and allocations
* :mod:`fairdiv.indices` - the Gini, subjective Gini and envy indices,
  welfare measures, envy-freeness and Pareto predicates
* :mod:`fairdiv.solvers` - exhaustive and branch-and-bound offline optima,
  the square-instance matching fast path, index prices
* :mod:`fairdiv.online` - the three greedy online randomized mechanisms
* :mod:`fairdiv.experiment` - random instances and the CSV pipeline
"""

from .model import (
    UNALLOCATED,
    Allocation,
    DimensionMismatch,
    FairDivError,
    IndexOutOfRange,
    Instance,
    MalformedRational,
    NegativeValue,
    allocation_from_list,
    bundle_utility,
    load_allocation,
    load_instance,
    make_instance,
    parse_rational,
    save_allocation,
    save_instance,
    validate_instance,
)
from .indices import (
    DEFAULT_ENVY_NORM,
    EnvyNormalization,
    IndexKind,
    IndexReport,
    MechanismKind,
    SearchSpaceTooLarge,
    egalitarian_welfare,
    envy_index,
    gini_index,
    index_report,
    index_value,
    is_envy_free,
    is_pareto_efficient,
    pareto_dominates,
    subjective_gini_index,
    utilitarian_welfare,
)
from .solvers import (
    EgalitarianResult,
    MinimizationResult,
    NotSquare,
    PriceReport,
    enumerate_complete_allocations,
    envy_free_allocations,
    expected_utility_under_minimizer,
    matching_minimizer_square,
    max_egalitarian,
    max_utilitarian,
    minimize_index,
    pareto_efficient_allocations,
    price_of_index,
)
from .online import (
    OnlineMetrics,
    RunStep,
    RunTrace,
    SupportTooLarge,
    expected_true_utilities,
    feasible_set,
    format_trace,
    mechanism_support,
    run_mechanism,
    sample_online_metrics,
    write_trace,
)
from .experiment import (
    ExperimentConfig,
    ExperimentRow,
    desk_scale_config,
    generate_instance,
    load_config,
    paper_scale_config,
    read_csv,
    run_experiment,
    save_config,
    write_csv,
)
from . import instances


__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
