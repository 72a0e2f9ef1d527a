"""Carry group ids across a change in the network.

Between the two snapshots the department servers trade names, Web is
replaced by Web-2, Sales-3 leaves and Sales-4 arrives.  Correlation still
links every new group to the group playing the same role before.
"""
from hostroles import correlate, correlated_ids, figure1, figure1_changed, group_hosts
from hostroles.evaluation import partition_diff

before, _ = figure1(3, 3)
after = figure1_changed()
p_before, p_after = group_hosts(before), group_hosts(after)

result = correlate((before, p_before), (after, p_after))
ids = correlated_ids(p_after, result, p_before)
old = p_before.by_id()

print(f"hosts with unchanged connections: {sorted(result.h_same)}\n")
for g in p_after.groups:
    prior = result.mapping.get(g.id)
    was = sorted(old[prior].members) if prior is not None else "new"
    print(f"{sorted(g.members)}\n    -> id {ids[g.id]}, was {was}")
print(f"\nretired: {sorted(result.retired_groups)}  new: {sorted(result.new_groups)}\n")

for line in partition_diff(p_before, p_after, result).lines():
    print(line)
