"""Differential Evolution with fitness- and design-space parent selection."""
from .benchmarks import ObjectiveFunction, load_shift_file, make_function, suite
from .core import (
    Bounds,
    ConfigurationError,
    ContractError,
    Individual,
    Population,
    clamp_or_resample,
    init_population,
    make_rng,
)
from .engine import RunConfig, RunResult, binomial_crossover, run
from .mutation import MutationStrategy, ParentRoles, make_donor, select_parents
from .params import JdeConfig, ParamPolicy, commit_parameters, propose_parameters
from .selection import (
    DistanceMatrix,
    RankWeights,
    build_distance_matrix,
    build_rank_weights,
    probability_row,
    roulette_select,
    update_after_replacement,
)
from .stats import PairedSample, WilcoxonResult, mean_error, wilcoxon_signed_rank, win_tie_lose

__version__ = "0.1.0"
