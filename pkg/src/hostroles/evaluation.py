"""Partition quality: the Rand statistic and diffs between correlated runs."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .correlation import CorrelationResult
from .errors import ValidationError
from .formation import Partitioning

__all__ = ["DiffReport", "GroupChange", "RandCounts", "partition_diff", "rand_statistic"]


def _pairs(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class RandCounts:
    """Host-pair counts; the first letter refers to the reference partitioning.

    ss: same group in both; sd: same in the reference, different in the
    candidate; ds: the reverse; dd: different in both.
    """

    ss: int
    sd: int
    ds: int
    dd: int

    @property
    def total(self) -> int:
        return self.ss + self.sd + self.ds + self.dd

    @property
    def r(self) -> float:
        if self.total == 0:
            return 1.0
        return float(Fraction(self.ss + self.dd, self.total))


def rand_statistic(p: Partitioning, p_star: Partitioning) -> RandCounts:
    """Compare a produced partitioning ``p`` against the reference ``p_star``."""
    if p.hosts != p_star.hosts:
        diff = sorted(p.hosts ^ p_star.hosts)
        raise ValidationError(f"partitionings cover different hosts: {diff}")
    own = p.owner()
    cells = Counter()
    for g in p_star.groups:
        for h in g.members:
            cells[(g.id, own[h])] += 1
    ss = sum(_pairs(n) for n in cells.values())
    same_star = sum(_pairs(len(g)) for g in p_star.groups)
    same_p = sum(_pairs(len(g)) for g in p.groups)
    sd = same_star - ss
    ds = same_p - ss
    dd = _pairs(len(p.hosts)) - ss - sd - ds
    return RandCounts(ss, sd, ds, dd)


@dataclass(frozen=True)
class GroupChange:
    prev_id: int
    curr_id: int
    added: tuple
    removed: tuple
    k_before: int
    k_after: int


@dataclass(frozen=True)
class DiffReport:
    changed: tuple = ()
    new_groups: tuple = ()
    retired_groups: tuple = ()

    def is_empty(self) -> bool:
        return not (self.changed or self.new_groups or self.retired_groups)

    def lines(self) -> list[str]:
        out = []
        for c in self.changed:
            out.append(f"group {c.prev_id} (current {c.curr_id}): K {c.k_before} -> {c.k_after}")
            for h in c.added:
                out.append(f"  + {h}")
            for h in c.removed:
                out.append(f"  - {h}")
        for gid, members in self.new_groups:
            out.append(f"new group {gid}: {' '.join(members)}")
        for gid, members in self.retired_groups:
            out.append(f"retired group {gid}: {' '.join(members)}")
        return out


def partition_diff(prev: Partitioning, curr: Partitioning, corr: CorrelationResult) -> DiffReport:
    """Membership and K changes for every correlated group, plus new and retired groups."""
    prev_by = prev.by_id()
    curr_by = curr.by_id()
    changed = []
    for t, p in sorted(corr.mapping.items(), key=lambda kv: kv[1]):
        gt, gp = curr_by[t], prev_by[p]
        added = tuple(sorted(gt.members - gp.members))
        removed = tuple(sorted(gp.members - gt.members))
        if added or removed or gt.k_value != gp.k_value:
            changed.append(GroupChange(p, t, added, removed, gp.k_value, gt.k_value))
    new = tuple((g, tuple(sorted(curr_by[g].members))) for g in sorted(corr.new_groups))
    retired = tuple((g, tuple(sorted(prev_by[g].members))) for g in sorted(corr.retired_groups))
    return DiffReport(tuple(changed), new, retired)
