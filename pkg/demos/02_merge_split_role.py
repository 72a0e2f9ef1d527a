"""One missing connection splits the sales clients; merging puts them back.

Sales-1 never talks to Web, so it shares only two servers with the other
sales hosts and ends up in its own group.  Its profile still looks like
theirs, and the merge step reunites them.
"""
from hostroles import figure1, form_groups, merge_pass
from hostroles.merging import build_group_graph, group_similarity

snapshot, _ = figure1(3, 3, "modified")
formed = form_groups(snapshot)


def show(title, p):
    print(title)
    for g in p.groups:
        print(f"  {g.id} (K={g.k_value}) {sorted(g.members)}")


show("after formation:", formed)

owner = formed.owner()
gg = build_group_graph(formed, snapshot)
s = group_similarity(owner["Sales-1"], owner["Sales-2"], gg)
print(f"\nsimilarity of the two sales groups: {float(s):.1f} (threshold 55)\n")

show("after merging:", merge_pass(formed, snapshot))
