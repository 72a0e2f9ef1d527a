"""Group formation: descending-k extraction of biconnected components."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ValidationError
from .graph import ConnectionSnapshot, PairWeights, build_conn_graph, find_bccs

__all__ = [
    "FormationConfig",
    "FormationEvent",
    "Group",
    "Partitioning",
    "form_groups",
    "resolve_bcc_membership",
]

log = logging.getLogger(__name__)


def as_fraction(value) -> Fraction:
    """Exact rational for a config value; floats go through their shortest repr."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class Group:
    id: int
    k_value: int
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            raise ValidationError(f"group {self.id} has no members")
        if self.id < 0 or self.k_value < 0:
            raise ValidationError(f"group {self.id}: id and k_value must be non-negative")

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class Partitioning:
    """Disjoint groups covering a snapshot's hosts, kept sorted by id."""

    groups: tuple
    snapshot_label: str = ""

    def __post_init__(self):
        groups = tuple(sorted(self.groups, key=lambda g: g.id))
        seen_ids = set()
        owner = {}
        for g in groups:
            if g.id in seen_ids:
                raise ValidationError(f"duplicate group id {g.id}")
            seen_ids.add(g.id)
            for h in g.members:
                if h in owner:
                    raise ValidationError(f"host {h!r} is in groups {owner[h]} and {g.id}")
                owner[h] = g.id
        object.__setattr__(self, "groups", groups)

    @property
    def hosts(self) -> frozenset:
        return frozenset(h for g in self.groups for h in g.members)

    def owner(self) -> dict:
        """Map host -> group id."""
        return {h: g.id for g in self.groups for h in g.members}

    def by_id(self) -> dict:
        return {g.id: g for g in self.groups}

    def check_covers(self, snapshot: ConnectionSnapshot) -> None:
        hosts = self.hosts
        if hosts != snapshot.hosts:
            missing = sorted(snapshot.hosts - hosts)
            extra = sorted(hosts - snapshot.hosts)
            raise ValidationError(f"partitioning does not cover snapshot: missing {missing}, extra {extra}")

    def __len__(self):
        return len(self.groups)


@dataclass(frozen=True)
class FormationConfig:
    alpha: float = 0.6

    def __post_init__(self):
        if not 0 <= self.alpha <= 1:
            raise ValidationError(f"alpha must lie in [0, 1], got {self.alpha}")


class FormationEvent(NamedTuple):
    """One group creation; ``reason`` is "bcc", "bootstrap" or "sweep"."""

    k: int
    group_id: int
    members: tuple
    reason: str


def resolve_bcc_membership(bccs: Iterable) -> list[frozenset]:
    """Make overlapping components disjoint.

    A host found in several components stays in the largest one; among equal
    sizes the component with the lexicographically least member wins.  Sets
    left with fewer than two hosts are dissolved.
    """
    ranked = sorted((frozenset(b) for b in bccs), key=lambda b: (-len(b), sorted(b)))
    owner = {}
    for pos, bcc in enumerate(ranked):
        for h in bcc:
            owner.setdefault(h, pos)
    kept = {}
    for h, pos in owner.items():
        kept.setdefault(pos, set()).add(h)
    return sorted((frozenset(s) for s in kept.values() if len(s) >= 2), key=sorted)


def form_groups(
    snapshot: ConnectionSnapshot,
    config: FormationConfig | None = None,
    trace: list | None = None,
) -> Partitioning:
    """Partition the snapshot's hosts by descending common-neighbor strength.

    For every k from the largest host degree down to 1, biconnected components
    of the k-neighborhood graph (ungrouped hosts only) become groups labeled
    with k, repeatedly until nothing new forms at that k.  A host still alone
    whose degree satisfies ``k < alpha * degree`` then becomes a singleton
    group.  Whatever is left at the end becomes a singleton with K = 0.

    Pass a list as ``trace`` to receive one :class:`FormationEvent` per group.
    """
    config = config or FormationConfig()
    alpha = as_fraction(config.alpha)
    conn = build_conn_graph(snapshot)
    weights = PairWeights(snapshot)
    hosts = weights.hosts
    degree = np.array([snapshot.degree(h) for h in hosts], dtype=np.int64)
    # k < alpha * degree, in integers
    bootstrap_at = alpha.numerator * degree
    ungrouped = np.ones(len(hosts), dtype=bool)
    groups = []

    def create(members, k, reason):
        gid = len(groups)
        members = sorted(members)
        groups.append(Group(gid, k, frozenset(members)))
        conn.absorb(members, gid)
        for h in members:
            ungrouped[weights.index[h]] = False
        if trace is not None:
            trace.append(FormationEvent(k, gid, tuple(members), reason))
        log.debug("k=%d: group %d (%s) <- %s", k, gid, reason, members)

    k_max = int(degree.max()) if len(degree) else 0
    for k in range(k_max, 0, -1):
        while True:
            u, _, _ = weights.select(k, ungrouped)
            if not len(u):
                break
            sets = resolve_bcc_membership(find_bccs(weights.graph(k, ungrouped)))
            if not sets:
                break
            for members in sets:
                create(members, k, "bcc")
            weights.drop_grouped(ungrouped)
        for i in np.flatnonzero(ungrouped & (k * alpha.denominator < bootstrap_at)).tolist():
            create([hosts[i]], k, "bootstrap")
    for i in np.flatnonzero(ungrouped).tolist():
        create([hosts[i]], 0, "sweep")
    return Partitioning(tuple(groups), snapshot.label)
