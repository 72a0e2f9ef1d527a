"""Score a grouping against known roles with the Rand statistic.

The synthetic roles generator also returns the partitioning it was built
from, so the grouping can be checked pair by pair.
"""
from hostroles import group_hosts, rand_statistic, roles
from hostroles.io import format_rand_csv

for share in (0.0, 0.05, 0.2):
    snapshot, truth = roles(10, (8, 14), seed=7, share_prob=share)
    found = group_hosts(snapshot)
    counts = rand_statistic(found, truth)
    print(f"share_prob={share}: {len(found)} groups vs {len(truth)} true")
    print(format_rand_csv(counts))
