"""Graph-built cooperative nonlocal games.

Build games from vertex graphs, compute exact classical values by reduced
exhaustive search, lower-bound quantum values by optimizing entangled-pair
measurement strategies, classify games for quantum advantage from their
sharing structure, and simulate referee sessions reproducibly.
"""

from .classical import (
    ClosedFormParams,
    DeterministicStrategy,
    StrategySpaceError,
    check_injective,
    classical_value,
    closed_form_shared_classical,
    closed_form_star_classical,
    gyni_classical_bound,
    strategy_value,
    target_classical_value,
    target_value_from_tables,
)
from .classification import (
    COMMON_INTERSECTION,
    PAIRWISE_CLIQUE,
    Classification,
    SharingStructure,
    classify,
    independence_number,
    players_sharing_with,
    sharing_index,
    sharing_structure,
    tuple_level_nonempty,
)
from .model import (
    AssignmentMap,
    ConsistencyPayoff,
    Graph,
    GraphGameError,
    GraphicGame,
    IIDDistribution,
    JointDistribution,
    OutputAssignment,
    PayoffBreakdown,
    TargetFunction,
    TargetPayoff,
    Violation,
    evaluate_payoff,
    evaluate_target_payoff,
    input_probability,
    input_vectors,
    shared_region,
    validate_game,
)
from .quantum import (
    MultiwaySharedVertexError,
    OptimizeOptions,
    PairBudgetError,
    PairModel,
    QuantumStrategy,
    QuantumValueResult,
    build_pair_model,
    build_strategy,
    closed_form_star_quantum,
    deterministic_as_quantum,
    epr_correlator,
    exact_quantum_value,
    optimize_quantum,
    pair_outcome_distribution,
    target_quantum_probe,
    trig_power_mean_holds,
    unbalanced_chsh_has_advantage,
)
from .runner import RoundRecord, SessionConfig, SessionStats, replay_round, run_session

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
