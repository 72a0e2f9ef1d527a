"""Role classification of hosts from observed connection patterns."""
from .correlation import (
    CorrelationConfig,
    CorrelationResult,
    align_snapshots,
    apply_correlation,
    compute_h_same,
    correlate,
    correlated_ids,
    pair_neighbors,
    time_varying_similarity,
)
from .errors import AlignmentError, HostRolesError, ParseError, ValidationError
from .evaluation import DiffReport, RandCounts, partition_diff, rand_statistic
from .formation import FormationConfig, FormationEvent, Group, Partitioning, form_groups, resolve_bcc_membership
from .graph import (
    ConnectionSnapshot,
    ConnGraph,
    NeighborhoodGraph,
    avg_similarity,
    build_conn_graph,
    build_k_nbh_graph,
    find_bccs,
    pair_similarity,
)
from .merging import (
    GroupGraph,
    MergeConfig,
    build_group_graph,
    group_avg_connections,
    group_similarity,
    meets_connection_req,
    meets_similarity_req,
    merge_pass,
)
from .io import (
    format_rand_csv,
    format_report,
    parse_edge_list,
    partitioning_document,
    read_partitioning,
    write_edge_list,
)
from .pipeline import group_hosts
from .sweep import sweep
from .synth import SynthSpec, figure1, figure1_changed, generate, ground_truth, roles, synth_generate

__version__ = "0.1.0"
