"""Greedy merging of formed groups with similar connection profiles.

A group's *profile* maps each neighboring group to the mean number of
connections a member has with it.  Two groups merge when their profiles are
similar enough (with a stricter threshold for groups of high cohesion K) and
their members have comparable degrees.  The most similar qualifying pair is
merged first, then profiles are updated and the search repeats.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import ValidationError
from .formation import Group, Partitioning, as_fraction
from .graph import ConnectionSnapshot

__all__ = [
    "GroupGraph",
    "MergeConfig",
    "build_group_graph",
    "group_avg_connections",
    "group_similarity",
    "meets_connection_req",
    "meets_similarity_req",
    "merge_pass",
    "profile_similarity",
]

log = logging.getLogger(__name__)

SIMILARITY_FORMULAS = ("jaccard", "neighbor_host")


@dataclass(frozen=True)
class MergeConfig:
    """Merge thresholds.

    ``similarity`` selects the group similarity: ``"jaccard"`` (default) is
    the weighted Jaccard index of the two per-member profiles,
    ``sum(min) / (c1 + c2 - sum(min))``.  ``"neighbor_host"`` divides each
    common-group term by the number of distinct neighbor hosts and averages
    ``s/c1`` and ``s/c2``; it is kept for comparison.
    """

    beta: float = 0.5
    s_hi: float = 80.0
    s_lo: float = 55.0
    k_hi: int = 7
    similarity: str = "jaccard"

    def __post_init__(self):
        if not 0 <= self.beta <= 1:
            raise ValidationError(f"beta must lie in [0, 1], got {self.beta}")
        if not 0 <= self.s_lo < self.s_hi <= 100:
            raise ValidationError(f"need 0 <= s_lo < s_hi <= 100, got s_lo={self.s_lo}, s_hi={self.s_hi}")
        if int(self.k_hi) != self.k_hi or self.k_hi < 0:
            raise ValidationError(f"k_hi must be a non-negative integer, got {self.k_hi}")
        if self.similarity not in SIMILARITY_FORMULAS:
            raise ValidationError(f"unknown similarity {self.similarity!r}; choose from {SIMILARITY_FORMULAS}")


@dataclass(frozen=True)
class GroupGraph:
    """Group-level view of a snapshot under a partitioning.

    ``cp[(a, b)]`` is the number of host-level connections between groups a
    and b (stored in both orders).  ``neighbor_hosts[g]`` is the set of hosts
    outside g connected to one of its members.
    """

    partitioning: Partitioning
    groups: Mapping
    neighbor_sets: Mapping
    cp: Mapping
    neighbor_hosts: Mapping
    host_degree: Mapping

    def profile(self, gid: int) -> dict:
        return {n: self.cp[(gid, n)] for n in self.neighbor_sets[gid]}

    def external(self, gid: int) -> int:
        return sum(self.cp[(gid, n)] for n in self.neighbor_sets[gid])


def build_group_graph(partitioning: Partitioning, snapshot: ConnectionSnapshot) -> GroupGraph:
    partitioning.check_covers(snapshot)
    owner = partitioning.owner()
    groups = partitioning.by_id()
    cp: dict = {}
    nbrs = {g: set() for g in groups}
    nhosts = {g: set() for g in groups}
    for a, b in snapshot.connections:
        ga, gb = owner[a], owner[b]
        if ga == gb:
            continue
        cp[(ga, gb)] = cp.get((ga, gb), 0) + 1
        cp[(gb, ga)] = cp.get((gb, ga), 0) + 1
        nbrs[ga].add(gb)
        nbrs[gb].add(ga)
        nhosts[ga].add(b)
        nhosts[gb].add(a)
    return GroupGraph(
        partitioning=partitioning,
        groups=groups,
        neighbor_sets={g: frozenset(s) for g, s in nbrs.items()},
        cp=cp,
        neighbor_hosts={g: frozenset(s) for g, s in nhosts.items()},
        host_degree={h: snapshot.degree(h) for h in snapshot.hosts},
    )


def group_avg_connections(group: Group, snapshot: ConnectionSnapshot) -> Fraction:
    """Mean degree of the group's members."""
    return Fraction(sum(snapshot.degree(h) for h in group.members), len(group.members))


def _within(a1: Fraction, a2: Fraction, beta: Fraction) -> bool:
    return abs(a1 - a2) <= beta * max(a1, a2)


def meets_connection_req(g1: Group, g2: Group, snapshot: ConnectionSnapshot, beta) -> bool:
    """True when the two mean member degrees differ by at most ``beta`` of the larger."""
    a1 = group_avg_connections(g1, snapshot)
    a2 = group_avg_connections(g2, snapshot)
    return _within(a1, a2, as_fraction(beta))


def profile_similarity(prof1: Mapping, prof2: Mapping, size1: int, size2: int,
                       nh1: int = 0, nh2: int = 0, exclude=(), formula: str = "jaccard") -> Fraction:
    """Similarity in [0, 100] of two groups described by their raw CP profiles.

    ``prof`` maps neighbor key -> connection count; ``size`` is the member
    count and ``nh`` the number of distinct neighbor hosts (used only by the
    ``"neighbor_host"`` formula).  Keys in ``exclude`` never count as common
    neighbors.
    """
    ext1 = sum(prof1.values())
    ext2 = sum(prof2.values())
    if not ext1 or not ext2:
        return Fraction(0)
    common = [n for n in prof1 if n in prof2 and n not in exclude]
    if formula == "jaccard":
        # everything scaled by size1 * size2 so the sums stay integral
        s = sum(min(prof1[n] * size2, prof2[n] * size1) for n in common)
        return Fraction(100 * s, ext1 * size2 + ext2 * size1 - s)
    c1 = Fraction(ext1, size1)
    c2 = Fraction(ext2, size2)
    s = sum((min(Fraction(prof1[n], nh1), Fraction(prof2[n], nh2)) for n in common), Fraction(0))
    return min(Fraction(100), 100 * (s / c1 + s / c2) / 2)


def group_similarity(g1: int, g2: int, gg: GroupGraph, formula: str = "jaccard") -> Fraction:
    if g1 == g2:
        raise ValidationError("group_similarity needs two distinct groups")
    return profile_similarity(
        gg.profile(g1), gg.profile(g2),
        len(gg.groups[g1]), len(gg.groups[g2]),
        len(gg.neighbor_hosts[g1]), len(gg.neighbor_hosts[g2]),
        exclude=(g1, g2), formula=formula,
    )


def _similarity_ok(kmax: int, s, config: MergeConfig) -> bool:
    if kmax >= config.k_hi:
        return s >= as_fraction(config.s_hi)
    return s >= as_fraction(config.s_lo)


def meets_similarity_req(g1: int, g2: int, gg: GroupGraph, config: MergeConfig) -> bool:
    kmax = max(gg.groups[g1].k_value, gg.groups[g2].k_value)
    return _similarity_ok(kmax, group_similarity(g1, g2, gg, config.similarity), config)


class _MergeState:
    """Incrementally maintained group profiles for :func:`merge_pass`."""

    def __init__(self, partitioning: Partitioning, snapshot: ConnectionSnapshot, config: MergeConfig):
        gg = build_group_graph(partitioning, snapshot)
        self.config = config
        self.s_hi = as_fraction(config.s_hi)
        self.s_lo = as_fraction(config.s_lo)
        self.beta = as_fraction(config.beta)
        self.degree = gg.host_degree
        self.members = {g.id: set(g.members) for g in partitioning.groups}
        self.k = {g.id: g.k_value for g in partitioning.groups}
        self.degsum = {g: sum(self.degree[h] for h in m) for g, m in self.members.items()}
        self.prof = {g: gg.profile(g) for g in self.members}
        self.nhosts = {g: set(gg.neighbor_hosts[g]) for g in self.members}
        self.merged = set()

    def similarity(self, a: int, b: int) -> Fraction:
        return profile_similarity(
            self.prof[a], self.prof[b], len(self.members[a]), len(self.members[b]),
            len(self.nhosts[a]), len(self.nhosts[b]), exclude=(a, b), formula=self.config.similarity,
        )

    def degrees_close(self, a: int, b: int) -> bool:
        # |d1/n1 - d2/n2| <= beta * max(...), cross-multiplied to stay in integers
        x = self.degsum[a] * len(self.members[b])
        y = self.degsum[b] * len(self.members[a])
        den, num = self.beta.denominator, self.beta.numerator
        return abs(x - y) * den <= num * max(x, y)

    def qualifies(self, a: int, b: int, s) -> bool:
        if not self.degrees_close(a, b):
            return False
        if max(self.k[a], self.k[b]) >= self.config.k_hi:
            return s >= self.s_hi
        return s >= self.s_lo

    def partners(self, a: int) -> set:
        """Groups sharing at least one neighbor group with ``a``."""
        out = set()
        for n in self.prof[a]:
            out.update(self.prof[n])
        out.discard(a)
        return out

    def merge(self, a: int, b: int) -> None:
        members = self.members[a] | self.members.pop(b)
        self.members[a] = members
        self.k[a] = min(self.degree[h] for h in members)
        self.degsum[a] += self.degsum.pop(b)
        del self.k[b]
        pa, pb = self.prof[a], self.prof.pop(b)
        merged = {}
        for n, c in list(pa.items()) + list(pb.items()):
            if n in (a, b):
                continue
            merged[n] = merged.get(n, 0) + c
        self.prof[a] = merged
        for n, c in merged.items():
            pn = self.prof[n]
            pn.pop(a, None)
            pn.pop(b, None)
            pn[a] = c
        self.nhosts[a] = (self.nhosts[a] | self.nhosts.pop(b)) - members
        self.merged.add(a)


def merge_pass(partitioning: Partitioning, snapshot: ConnectionSnapshot,
               config: MergeConfig | None = None) -> Partitioning:
    """Repeatedly merge the most similar qualifying pair of groups.

    Ties on similarity go to the lexicographically smallest (min id, max id)
    pair.  The merged group keeps the smaller id and takes as K the smallest
    member degree; groups never merged keep their K.
    """
    config = config or MergeConfig()
    state = _MergeState(partitioning, snapshot, config)
    valid: dict = {}
    keys_of: dict = {}
    heap: list = []

    def drop(key) -> None:
        if valid.pop(key, None) is not None:
            for g in key:
                keys_of[g].discard(key)

    def refresh(key) -> None:
        a, b = key
        s = None
        if state.degrees_close(a, b):
            s = state.similarity(a, b)
        if s and state.qualifies(a, b, s):
            valid[key] = s
            keys_of.setdefault(a, set()).add(key)
            keys_of.setdefault(b, set()).add(key)
            heapq.heappush(heap, (-s, a, b))
        else:
            drop(key)

    for a in sorted(state.members):
        for b in sorted(state.partners(a)):
            if a < b:
                refresh((a, b))

    zero_ok = as_fraction(config.s_lo) == 0
    while True:
        pick = None
        while heap:
            neg, a, b = heap[0]
            if valid.get((a, b)) == -neg:
                pick = (a, b, -neg)
                break
            heapq.heappop(heap)
        if pick is None and zero_ok:
            pick = _first_zero_pair(state)
        if pick is None:
            break
        a, b, s = pick
        log.debug("merge %d <- %d (similarity %.2f)", a, b, float(s))
        touched = (set(state.prof[a]) | set(state.prof[b])) - {a, b}
        for key in list(keys_of.get(b, ())) + list(keys_of.get(a, ())):
            drop(key)
        keys_of.pop(b, None)
        state.merge(a, b)
        # Only the merged group's pairs and pairs of its former neighbors can
        # change: every other profile, size and degree sum is untouched.
        todo = {(a, y) if a < y else (y, a) for y in state.partners(a)}
        ordered = sorted(touched)
        for i, x in enumerate(ordered):
            for y in ordered[i + 1:]:
                todo.add((x, y))
        for key in sorted(todo):
            refresh(key)

    groups = [Group(g, state.k[g], frozenset(m)) for g, m in state.members.items()]
    return Partitioning(tuple(groups), partitioning.snapshot_label)


def _first_zero_pair(state: _MergeState):
    """With s_lo = 0 a pair sharing no neighbor group still qualifies on the low-K branch."""
    ids = sorted(state.members)
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            s = state.similarity(a, b)
            if s == 0 and state.qualifies(a, b, s):
                return a, b, s
    return None
