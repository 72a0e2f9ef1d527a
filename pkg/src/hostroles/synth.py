"""Synthetic enterprise networks.

``figure1`` is the textbook two-department network: sales and engineering
clients share a mail and a web server and each department has its own
server.  ``roles`` builds larger seeded networks of client roles, each with
dedicated servers, some servers also used by other roles, plus a little
noise.  Both return a ground-truth partitioning alongside the snapshot.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .formation import Group, Partitioning
from .graph import ConnectionSnapshot

__all__ = ["SynthSpec", "figure1", "roles", "synth_generate", "ground_truth", "generate", "figure1_changed"]

MAIL, WEB, SALES_DB, SOURCE_CONTROL = "Mail", "Web", "SalesDatabase", "SourceRevisionControl"


@dataclass(frozen=True)
class SynthSpec:
    generator: str = "figure1"
    m: int = 3
    n: int = 3
    variant: str = "standard"
    n_roles: int = 10
    hosts_per_role: tuple = (20, 30)
    servers_per_role: int = 2
    share_prob: float = 0.02
    keep_prob: float = 0.9
    noise_prob: float = 0.05
    seed: int = 0


def figure1(m: int = 3, n: int = 3, variant: str = "standard", label: str = "figure1"):
    """``m`` sales hosts and ``n`` engineering hosts.

    ``variant="modified"`` drops the Sales-1 to Web connection.
    Returns ``(snapshot, truth)``.
    """
    if m < 1 or n < 1:
        raise ValidationError(f"figure1 needs m, n >= 1, got m={m}, n={n}")
    if variant not in ("standard", "modified"):
        raise ValidationError(f"unknown figure1 variant {variant!r}")
    sales = [f"Sales-{i}" for i in range(1, m + 1)]
    eng = [f"Eng-{j}" for j in range(1, n + 1)]
    pairs = []
    for h in sales:
        pairs += [(h, MAIL), (h, WEB), (h, SALES_DB)]
    for h in eng:
        pairs += [(h, MAIL), (h, WEB), (h, SOURCE_CONTROL)]
    if variant == "modified":
        pairs.remove(("Sales-1", WEB))
    snapshot = ConnectionSnapshot.from_pairs(pairs, label=label)
    truth = Partitioning((
        Group(0, 0, {MAIL, WEB}),
        Group(1, 0, sales),
        Group(2, 0, eng),
        Group(3, 0, {SALES_DB}),
        Group(4, 0, {SOURCE_CONTROL}),
    ), label)
    return snapshot, truth


def figure1_changed(m: int = 3, n: int = 3, removed: str | None = None, added: str | None = None,
                    label: str = "figure1-changed") -> ConnectionSnapshot:
    """``figure1(m, n)`` after a round of typical network changes.

    The two department servers swap names, the web server is replaced by a
    new host ``Web-2``, host ``removed`` (default the last sales host) leaves
    and host ``added`` (default ``Sales-<m+1>``) joins.  The newcomer's
    department comes from its name prefix, ``Sales-`` or ``Eng-``.
    """
    removed = removed if removed is not None else f"Sales-{m}"
    added = added if added is not None else f"Sales-{m + 1}"
    base, _ = figure1(m, n)
    if removed not in base.hosts or removed in (MAIL, WEB, SALES_DB, SOURCE_CONTROL):
        raise ValidationError(f"removed host must be a client of figure1({m},{n}), got {removed!r}")
    if added in base.hosts:
        raise ValidationError(f"added host {added!r} already exists")
    if added.startswith("Sales-"):
        dept = SALES_DB
    elif added.startswith("Eng-"):
        dept = SOURCE_CONTROL
    else:
        raise ValidationError(f"added host must be named Sales-* or Eng-*, got {added!r}")
    rename = {SALES_DB: SOURCE_CONTROL, SOURCE_CONTROL: SALES_DB, WEB: "Web-2"}
    pairs = [(rename.get(a, a), rename.get(b, b)) for a, b in sorted(base.connections) if removed not in (a, b)]
    pairs += [(added, MAIL), (added, "Web-2"), (added, rename[dept])]
    return ConnectionSnapshot.from_pairs(pairs, label=label)


def roles(n_roles: int = 10, hosts_per_role=(20, 30), servers_per_role: int = 2,
          share_prob: float = 0.02, seed: int = 0, keep_prob: float = 0.9,
          noise_prob: float = 0.05, label: str | None = None):
    """Seeded role-structured network; returns ``(snapshot, truth)``.

    Role ``r`` has between ``hosts_per_role[0]`` and ``hosts_per_role[1]``
    clients named ``rNNN-cNN`` and ``servers_per_role`` servers ``rNNN-sN``.
    Each role also uses every other role's servers with probability
    ``share_prob``.  A client keeps each server link with probability
    ``keep_prob`` and, with probability ``noise_prob``, talks to one random
    server anywhere.  The truth has one group per role's clients and one
    per role's servers.
    """
    lo, hi = hosts_per_role
    if n_roles < 0 or lo < 1 or hi < lo or servers_per_role < 1:
        raise ValidationError("roles needs n_roles >= 0, 1 <= min hosts <= max hosts, servers >= 1")
    for name, p in (("share_prob", share_prob), ("keep_prob", keep_prob), ("noise_prob", noise_prob)):
        if not 0 <= p <= 1:
            raise ValidationError(f"{name} must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    width = max(3, len(str(max(n_roles - 1, 0))))
    clients, servers = [], []
    for r in range(n_roles):
        count = int(rng.integers(lo, hi + 1))
        clients.append([f"r{r:0{width}d}-c{i:02d}" for i in range(count)])
        servers.append([f"r{r:0{width}d}-s{j}" for j in range(servers_per_role)])
    uses = [[r] + [o for o in range(n_roles) if o != r and rng.random() < share_prob] for r in range(n_roles)]
    all_servers = [s for group in servers for s in group]
    pairs = set()
    for r in range(n_roles):
        targets = [s for o in uses[r] for s in servers[o]]
        for c in clients[r]:
            linked = [s for s in targets if rng.random() < keep_prob]
            if not linked:
                linked = [servers[r][0]]
            if rng.random() < noise_prob:
                linked.append(all_servers[int(rng.integers(len(all_servers)))])
            pairs.update((c, s) for s in linked)
    label = label if label is not None else f"roles-{seed}"
    everyone = [h for group in clients + servers for h in group]
    snapshot = ConnectionSnapshot.from_pairs(sorted(pairs), hosts=everyone, label=label)
    truth = []
    for r in range(n_roles):
        truth.append(Group(2 * r, 0, clients[r]))
        truth.append(Group(2 * r + 1, 0, servers[r]))
    return snapshot, Partitioning(tuple(truth), label)


def generate(spec: SynthSpec):
    """``(snapshot, truth)`` for a spec."""
    if spec.generator == "figure1":
        return figure1(spec.m, spec.n, spec.variant)
    if spec.generator == "roles":
        return roles(spec.n_roles, spec.hosts_per_role, spec.servers_per_role, spec.share_prob,
                     spec.seed, spec.keep_prob, spec.noise_prob)
    raise ValidationError(f"unknown generator {spec.generator!r}; choose figure1 or roles")


def synth_generate(spec: SynthSpec) -> ConnectionSnapshot:
    return generate(spec)[0]


def ground_truth(spec: SynthSpec) -> Partitioning:
    return generate(spec)[1]
