"""Formation followed by merging, the usual way to group a snapshot."""
from __future__ import annotations

from .formation import FormationConfig, Partitioning, form_groups
from .graph import ConnectionSnapshot
from .merging import MergeConfig, merge_pass


def group_hosts(snapshot: ConnectionSnapshot, formation: FormationConfig | None = None,
                merge: MergeConfig | None = None, skip_merge: bool = False) -> Partitioning:
    partitioning = form_groups(snapshot, formation)
    if skip_merge:
        return partitioning
    return merge_pass(partitioning, snapshot, merge)
