"""Sparse link-delay tomography with matching-based hub selection.

A maximum matching of the network, grown into a connected edge set, serves as
the hub (a connected dominating set of the line graph).  Probes measure the
hub together with random subsets of the remaining links; subtracting the hub
sum yields a Bernoulli sensing matrix for sparse recovery.  The hub can be
maintained under single link insertions and deletions.
"""

from .dynamic import DynamicEvent, DynamicState, apply_delete, apply_insert, initial_state, rerun_baseline
from .errors import (
    DisconnectedError,
    DominationError,
    EventError,
    GraphFormatError,
    HubtomoError,
    InvalidHubError,
    ParameterError,
    RecoveryError,
    StructureError,
)
from .graph import (
    LineGraph,
    Network,
    bfs_tree,
    eccentricity_center,
    generate_ba,
    is_connected,
    line_graph,
    read_edge_list,
    write_edge_list,
)
from .hub import HubSet, bfs_baseline_hub, cds_certify, connect_matching, independent_set_check, matching_hub
from .matching import Matching, augment, augmenting_path, max_matching
from .measurements import (
    DelaySignal,
    MeasurementPlan,
    MeasurementVector,
    build_plan,
    effective_system,
    gen_signal,
    h1_violations,
    measure,
)
from .recovery import RecoveryResult, assemble, judge, recover, recover_l1, recover_omp

__version__ = "0.1.0"

__all__ = [
    "DelaySignal", "DisconnectedError", "DominationError", "DynamicEvent", "DynamicState", "EventError",
    "GraphFormatError", "HubSet", "HubtomoError", "InvalidHubError", "LineGraph", "Matching",
    "MeasurementPlan", "MeasurementVector", "Network", "ParameterError", "RecoveryError",
    "RecoveryResult", "StructureError", "apply_delete", "apply_insert", "assemble", "augment",
    "augmenting_path", "bfs_baseline_hub", "bfs_tree", "build_plan", "cds_certify", "connect_matching",
    "eccentricity_center", "effective_system", "gen_signal", "generate_ba", "h1_violations",
    "independent_set_check", "initial_state", "is_connected", "judge", "line_graph", "matching_hub",
    "max_matching", "measure", "read_edge_list", "recover", "recover_l1", "recover_omp",
    "rerun_baseline", "write_edge_list",
]
