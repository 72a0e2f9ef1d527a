"""Group the ten-host department network and print the trace and report.

    python demos/01_group_figure1.py
"""
from hostroles import figure1, form_groups, group_hosts
from hostroles.io import format_report, partitioning_document

snapshot, _ = figure1(3, 3)
print(f"{len(snapshot.hosts)} hosts, {len(snapshot.connections)} connections\n")

trace = []
form_groups(snapshot, trace=trace)
print("formation order:")
for event in trace:
    print(f"  k={event.k:<2} {event.reason:<10} {', '.join(event.members)}")

# Merging leaves this network alone: no two groups are similar enough.
doc = partitioning_document(group_hosts(snapshot), snapshot)
print("\n" + format_report(doc), end="")
