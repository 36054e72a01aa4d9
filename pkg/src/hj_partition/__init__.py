from .cograph import (
    CoSplit,
    Cotree,
    DisjointUnion,
    Empty,
    Join,
    Leaf,
    cograph_split,
    complement_cotree,
    height,
    is_cograph,
    is_universal_bruteforce,
    realize,
    universal_cograph,
)
from .config import Budgets
from .decorators import (
    error_handler,
    get_error_handlers,
    invoke_error_handler,
    run_command,
)
from .engine import (
    DrivenPartition,
    NormalizationRecord,
    PairPartition,
    PieceState,
    SplitChoice,
    corresponding_set,
    disconnected_partition,
    normalize_pair,
    pair_bound,
    partition_pair,
    phi,
    two_graphs_partition,
)
from .errors import (
    BudgetExceeded,
    HeroBudgetExceeded,
    HJPartitionError,
    HypothesisViolation,
    InputError,
    InvariantViolation,
    Witness,
)
from .graph import (
    Embedding,
    Graph,
    anticomponents,
    blocks,
    complement,
    components,
    contains_induced,
    induced,
)
from .oracles import (
    Certificate,
    FPartition,
    PartitionClass,
    SplitWitness,
    exists_partition,
    is_split,
    verify_partition,
)
from .tournament import (
    Tournament,
    compose,
    contains_subtournament,
    hero_color,
    transitive_partition,
    two_tourn_partition,
)

__all__ = [
    "Budgets",
    "BudgetExceeded",
    "Certificate",
    "CoSplit",
    "Cotree",
    "DisjointUnion",
    "DrivenPartition",
    "Embedding",
    "Empty",
    "FPartition",
    "Graph",
    "HJPartitionError",
    "HeroBudgetExceeded",
    "HypothesisViolation",
    "InputError",
    "InvariantViolation",
    "Join",
    "Leaf",
    "NormalizationRecord",
    "PairPartition",
    "PartitionClass",
    "PieceState",
    "SplitChoice",
    "SplitWitness",
    "Tournament",
    "Witness",
    "anticomponents",
    "blocks",
    "cograph_split",
    "complement",
    "complement_cotree",
    "components",
    "compose",
    "contains_induced",
    "contains_subtournament",
    "corresponding_set",
    "disconnected_partition",
    "error_handler",
    "exists_partition",
    "get_error_handlers",
    "height",
    "hero_color",
    "induced",
    "invoke_error_handler",
    "is_cograph",
    "is_split",
    "is_universal_bruteforce",
    "normalize_pair",
    "pair_bound",
    "partition_pair",
    "phi",
    "realize",
    "run_command",
    "transitive_partition",
    "two_graphs_partition",
    "two_tourn_partition",
    "universal_cograph",
    "verify_partition",
]
