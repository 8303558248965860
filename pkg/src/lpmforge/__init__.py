"""lpmforge: local process model mining over event logs.

Small behavioral patterns (sequence, choice, concurrency, loop) are mined from
event logs, counted by alignment-based non-overlapping instance detection,
ranked by a weighted quality aggregate, and reduced to a non-redundant set via
a merged global evaluation model.
"""

from .align import (
    INSTANCE_COUNTING,
    STANDARD,
    Alignment,
    CostPolicy,
    Instance,
    InstanceMultiset,
    ReplayProfile,
    align,
    extract_instances,
    replay_profile,
)
from .chaotic import FilterReport, FilterVariant, activity_entropy, filter_chaotic, log_entropy
from .eventlog import (
    CsvMapping,
    Event,
    EventLog,
    FollowsStats,
    LogError,
    Trace,
    compute_follows_stats,
    parse_csv,
    parse_xes,
    project,
    serialize_csv,
    serialize_xes,
)
from .gaps import (
    DynamicExtractionCache,
    GapConstraint,
    GapKind,
    Strategy,
    constrained_instances,
    constrained_support,
    event_gap,
    extract_dynamic,
    extract_static,
    instance_satisfies,
    time_gap,
)
from .mining import MinerConfig, MiningResult, Pruning, enumerate_all, expand, mine
from .petri import (
    AcceptingPetriNet,
    Transition,
    enabled,
    fire,
    merge_global,
    net_bounded_language,
    serialize_pnml,
    to_instance_counter,
    to_petri_net,
)
from .projections import (
    ProjectionSet,
    entropy_projections,
    markov_projections,
    mine_projected,
    mrig_projections,
)
from .quality import (
    EvaluatedPattern,
    QualityVector,
    RankingWeights,
    abf_fitness,
    etc_precision,
    evaluate,
    ndcg_at_k,
    rank,
    recall_at_k,
    rft_fitness,
)
from .selection import (
    LpmSetScore,
    diversity_filter,
    score_set,
    select_alignment,
    select_greedy,
    select_greedy_fscore,
)
from .tree import (
    BudgetExceededError,
    ProcessTree,
    TreeParseError,
    activity,
    and_,
    bounded_language,
    loop,
    parse_tree,
    seq,
    serialize_tree,
    start_activities,
    xor,
)

__version__ = "0.1.0"
