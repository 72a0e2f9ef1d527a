"""How the low similarity threshold controls the number of groups.

With 8 clients per department the two department servers are similar
enough to collapse together when the threshold is low.
"""
from hostroles import figure1, roles
from hostroles.sweep import sweep

nets = {"figure1(8,8)": figure1(8, 8)[0]}
nets.update({f"roles seed {s}": roles(8, (6, 12), seed=s, share_prob=0.2)[0] for s in range(3)})

print(f"{'network':<16}" + "".join(f"{v:>5}" for v in range(5, 76, 10)))
for name, snapshot in nets.items():
    counts = [n for _, n in sweep(snapshot, "s_lo", 5, 75, 10)]
    print(f"{name:<16}" + "".join(f"{n:>5}" for n in counts))
