"""Discrete convex resource allocation on laminar trees, with warm starts
learned from past optimal solutions."""

__version__ = "0.1.0"

from .errors import (
    BudgetError,
    ConsistencyError,
    DomainError,
    InfeasibleError,
    InputError,
    StructuralError,
    TreeAllocError,
)
from .extint import NEG_INF, POS_INF
from .convex import AbsDev, ConvexFn, PiecewiseLinear, Quadratic, Reciprocal, ZERO, Zero
from .model import (
    Instance,
    LaminarTree,
    Node,
    binarize_tree,
    evaluate_objective,
    instance_from_json,
    instance_to_json,
    is_feasible,
    l1_distance,
    load_instance,
    node_sums,
    save_instance,
)
from .projection import (
    AbsForm,
    clamp_form,
    convolve_forms,
    make_form,
    project,
    round_prediction,
)
from .greedy import DirectionOracle, SolveReport, greedy_minimize, solve_instance
from .descent_dp import (
    ExchangeTree,
    LaminarDpOracle,
    build_exchange_tree,
    scan_improving_pair,
    steepest_direction_dp,
)
from .descent_heap import BoxHeapOracle, IndexedMinHeap, init_box_oracle, is_box_instance
from .predictor import (
    OnlineL1Learner,
    cold_prediction,
    l1_subgradient,
    project_onto_sum_simplex,
)
from .mconvex import (
    GenericDirectionOracle,
    MConvexOracle,
    SubmodularOracle,
    box_rho,
    brute_sfm,
    generic_steepest_direction,
    laminar_mconvex,
    project_to_base,
    verify_submodularity,
)
from .bruteforce import (
    BruteMin,
    EnumerationBudget,
    brute_minimize,
    brute_projection,
    brute_steepest,
    enumerate_feasible,
    leaf_ranges,
)
from .generator import (
    ExperimentRecord,
    GeneratorConfig,
    aggregate_series,
    gen_staff_instance,
    run_experiment,
    stream_rng,
)
