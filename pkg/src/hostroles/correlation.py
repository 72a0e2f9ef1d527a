"""Correlating group ids between two grouping runs taken at different times.

The idea: a current group keeps a prior group's id when the hosts around it
are connected to it the way the prior group's neighbors were.  Hosts whose
connection sets did not change anchor the comparison; other neighbors are
paired by connection-set size.  Groups left over are compared through their
already-correlated neighbor groups, round after round.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import AlignmentError, ValidationError
from .formation import Group, Partitioning, as_fraction
from .graph import ConnectionSnapshot
from .merging import build_group_graph, profile_similarity

__all__ = [
    "CorrelationConfig",
    "CorrelationResult",
    "align_snapshots",
    "apply_correlation",
    "compute_h_same",
    "correlate",
    "correlated_ids",
    "group_neighbors",
    "pair_neighbors",
    "time_varying_similarity",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorrelationConfig:
    """``t_hi`` is a fraction (0.3 means 30%); ``step2_threshold`` is on the 0-100 scale."""

    t_hi: float = 0.3
    sim_threshold: float = 0.5
    step2_threshold: float = 55.0

    def __post_init__(self):
        if not 0 <= self.t_hi <= 1:
            raise ValidationError(f"t_hi must lie in [0, 1], got {self.t_hi}")
        if not 0 <= self.sim_threshold <= 1:
            raise ValidationError(f"sim_threshold must lie in [0, 1], got {self.sim_threshold}")
        if not 0 <= self.step2_threshold <= 100:
            raise ValidationError(f"step2_threshold must lie in [0, 100], got {self.step2_threshold}")


@dataclass(frozen=True)
class CorrelationResult:
    mapping: Mapping
    new_groups: frozenset
    retired_groups: frozenset
    h_same: frozenset
    matched_by: Mapping = field(default_factory=dict, compare=False)


def align_snapshots(prev: ConnectionSnapshot, curr: ConnectionSnapshot):
    """Restrict both snapshots to the hosts present in both."""
    common = prev.hosts & curr.hosts
    if not common:
        raise AlignmentError("snapshots share no hosts; nothing to correlate")
    return prev.restrict(common), curr.restrict(common)


def compute_h_same(prev: ConnectionSnapshot, curr: ConnectionSnapshot) -> frozenset:
    """Hosts in both snapshots whose connection sets are identical."""
    return frozenset(h for h in prev.hosts & curr.hosts if prev.neighbors(h) == curr.neighbors(h))


def group_neighbors(group: Group, snapshot: ConnectionSnapshot) -> dict:
    """Map each host outside ``group`` to its number of connections into it."""
    out: dict = {}
    for h in group.members:
        for n in snapshot.neighbors(h):
            if n not in group.members:
                out[n] = out.get(n, 0) + 1
    return out


def _total_avg(cp: Mapping, size: int) -> Fraction:
    return Fraction(sum(cp.values()), size)


def pair_neighbors(g_curr: Group, g_prev: Group, h_same, prev: ConnectionSnapshot,
                   curr: ConnectionSnapshot, t_hi) -> list[tuple[str, str]]:
    """Pair neighbors of a current group with neighbors of a prior group.

    Same-id neighbors that kept their connection set pair with themselves.
    Every other current neighbor (taken in token order) pairs with the unused
    prior neighbor whose degree is closest to its own, lowest token first on
    ties, provided the gap is within ``t_hi`` of the current degree.  Hosts
    with an unchanged connection set never pair with a different host.
    """
    t_hi = as_fraction(t_hi)
    n_curr = set(group_neighbors(g_curr, curr))
    n_prev = set(group_neighbors(g_prev, prev))
    pairs = []
    for h in sorted(n_curr & n_prev & set(h_same)):
        pairs.append((h, h))
    used_prev = {p for _, p in pairs}
    rest_prev = sorted(h for h in n_prev - used_prev if h not in h_same)
    for h in sorted(n_curr - used_prev):
        if h in h_same or not rest_prev:
            continue
        d = curr.degree(h)
        best = min(rest_prev, key=lambda p: (abs(prev.degree(p) - d), p))
        if abs(prev.degree(best) - d) <= t_hi * d:
            pairs.append((h, best))
            rest_prev.remove(best)
    return pairs


def time_varying_similarity(g_curr: Group, g_prev: Group, pairs, prev: ConnectionSnapshot,
                            curr: ConnectionSnapshot) -> Fraction:
    """Score in [0, 1] for how alike the two groups' neighborhoods are.

    Each neighbor pair contributes the smaller of its two per-member
    connection counts; the sum is divided by the larger of the two groups'
    total per-member external connection counts.
    """
    cp_curr = group_neighbors(g_curr, curr)
    cp_prev = group_neighbors(g_prev, prev)
    tot = max(_total_avg(cp_curr, len(g_curr)), _total_avg(cp_prev, len(g_prev)))
    if not cp_curr or not cp_prev or tot == 0:
        return Fraction(0)
    raw = sum(
        (min(Fraction(cp_curr[a], len(g_curr)), Fraction(cp_prev[b], len(g_prev))) for a, b in pairs),
        Fraction(0),
    )
    return raw / tot


def _avg_degree(group: Group, snapshot: ConnectionSnapshot) -> Fraction:
    return Fraction(sum(snapshot.degree(h) for h in group.members), len(group))


def correlate(prev_run, curr_run, config: CorrelationConfig | None = None) -> CorrelationResult:
    """Map current group ids onto prior group ids.

    ``prev_run`` and ``curr_run`` are ``(snapshot, partitioning)`` pairs.

    Step 1 accepts, for each current group, the prior group with the unique
    highest time-varying similarity when it reaches ``sim_threshold`` and the
    mean member degrees are within ``t_hi``; clashes go to the higher score,
    then the smaller current id.  Step 2 repeats until stable: remaining
    groups are compared by their profiles over neighbor groups already
    correlated, accepting scores of at least ``step2_threshold``; ties favor
    groups of closer size, then the pair sharing more hosts.  Finally a leftover current group whose
    surviving hosts are exactly a leftover prior group's hosts is matched.
    """
    config = config or CorrelationConfig()
    prev, p_prev = prev_run
    curr, p_curr = curr_run
    p_prev.check_covers(prev)
    p_curr.check_covers(curr)
    a_prev, a_curr = align_snapshots(prev, curr)
    h_same = compute_h_same(a_prev, a_curr)
    common = a_prev.hosts
    t_hi = as_fraction(config.t_hi)
    sim_threshold = as_fraction(config.sim_threshold)

    prev_groups = list(p_prev.groups)
    curr_groups = list(p_curr.groups)
    mapping: dict = {}
    matched_by: dict = {}

    # step 1
    proposals = []
    for gt in curr_groups:
        scores = []
        for gp in prev_groups:
            pairs = pair_neighbors(gt, gp, h_same, prev, curr, t_hi)
            scores.append((time_varying_similarity(gt, gp, pairs, prev, curr), gp))
        if not scores:
            continue
        best = max(s for s, _ in scores)
        winners = [gp for s, gp in scores if s == best]
        if best == 0 or best < sim_threshold or len(winners) != 1:
            continue
        gp = winners[0]
        a_t, a_p = _avg_degree(gt, curr), _avg_degree(gp, prev)
        if abs(a_t - a_p) > t_hi * a_p:
            continue
        proposals.append((-best, gt.id, gp.id))
    claimed = set()
    for _, t, p in sorted(proposals):
        if p not in claimed:
            mapping[t] = p
            claimed.add(p)
            matched_by[t] = "time_varying"

    # step 2
    gg_prev = build_group_graph(p_prev, prev)
    gg_curr = build_group_graph(p_curr, curr)
    prev_by_id = p_prev.by_id()
    curr_by_id = p_curr.by_id()
    threshold = as_fraction(config.step2_threshold)
    while True:
        free_t = [g.id for g in curr_groups if g.id not in mapping]
        free_p = [g.id for g in prev_groups if g.id not in claimed]
        if not free_t or not free_p:
            break
        prof_t = {}
        for t in free_t:
            prof_t[t] = {mapping[n]: c for n, c in gg_curr.profile(t).items() if n in mapping}
        prof_p = {}
        for p in free_p:
            prof_p[p] = {n: c for n, c in gg_prev.profile(p).items() if n in claimed}
        candidates = []
        for t in free_t:
            if not prof_t[t]:
                continue
            members_t = curr_by_id[t].members & common
            for p in free_p:
                if not prof_p[p]:
                    continue
                s = profile_similarity(prof_t[t], prof_p[p], len(curr_by_id[t]), len(prev_by_id[p]))
                if s > 0 and s >= threshold:
                    gap = abs(len(curr_by_id[t]) - len(prev_by_id[p]))
                    overlap = len(members_t & prev_by_id[p].members)
                    candidates.append((-s, gap, -overlap, t, p))
        accepted = False
        for *_, t, p in sorted(candidates):
            if t in mapping or p in claimed:
                continue
            mapping[t] = p
            claimed.add(p)
            matched_by[t] = "neighbor_groups"
            accepted = True
        if not accepted:
            break

    # leftover groups whose surviving hosts did not change
    by_members = {}
    for g in prev_groups:
        if g.id not in claimed:
            key = g.members & common
            if key:
                by_members.setdefault(key, g.id)
    for g in curr_groups:
        if g.id in mapping:
            continue
        key = g.members & common
        p = by_members.get(key) if key else None
        if p is not None and p not in claimed and key == prev_by_id[p].members & common:
            mapping[g.id] = p
            claimed.add(p)
            matched_by[g.id] = "members"

    new = frozenset(g.id for g in curr_groups if g.id not in mapping)
    retired = frozenset(g.id for g in prev_groups if g.id not in claimed)
    log.debug("correlated %d groups, %d new, %d retired", len(mapping), len(new), len(retired))
    return CorrelationResult(dict(sorted(mapping.items())), new, retired, h_same, dict(sorted(matched_by.items())))


def correlated_ids(curr: Partitioning, result: CorrelationResult, prev: Partitioning) -> dict:
    """Current id -> output id; new groups get ids above every prior id, in current-id order."""
    next_id = max((g.id for g in prev.groups), default=-1) + 1
    out = {}
    for g in curr.groups:
        if g.id in result.mapping:
            out[g.id] = result.mapping[g.id]
        else:
            out[g.id] = next_id
            next_id += 1
    return out


def apply_correlation(curr: Partitioning, result: CorrelationResult, prev: Partitioning) -> Partitioning:
    """Rename current groups to their prior ids; new groups get ids above every prior id."""
    ids = correlated_ids(curr, result, prev)
    groups = [Group(ids[g.id], g.k_value, g.members) for g in curr.groups]
    return Partitioning(tuple(groups), curr.snapshot_label)
