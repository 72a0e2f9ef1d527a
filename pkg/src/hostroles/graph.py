"""Host/connection data model, neighborhood graphs and biconnected components.

Hosts are opaque text tokens.  A :class:`ConnectionSnapshot` is the set of
undirected connections seen during one capture period; every algorithm in
the package starts from one.  Similarity between two hosts is the number of
hosts both of them talk to.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

import numpy as np
import scipy.sparse as sp

from .errors import ValidationError

__all__ = [
    "ConnectionSnapshot",
    "ConnGraph",
    "GroupNode",
    "NeighborhoodGraph",
    "avg_similarity",
    "build_conn_graph",
    "build_k_nbh_graph",
    "canonical_pair",
    "check_host_id",
    "find_bccs",
    "pair_similarity",
    "PairWeights",
]

_WHITESPACE = re.compile(r"\s")


def check_host_id(token) -> str:
    if not isinstance(token, str) or not token or _WHITESPACE.search(token):
        raise ValidationError(f"invalid host id {token!r}: must be a non-empty token without whitespace")
    return token


def canonical_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class ConnectionSnapshot:
    """Observed undirected host-to-host connections for one capture period.

    Connections are stored as lexicographically ordered pairs, so ``(b, a)``
    and ``(a, b)`` are the same connection.  ``hosts`` may contain hosts that
    have no connection at all.
    """

    hosts: frozenset
    connections: frozenset
    label: str = ""
    _adjacency: Mapping = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        hosts = frozenset(self.hosts)
        for h in sorted(hosts):
            check_host_id(h)
        pairs = set()
        for record in self.connections:
            a, b = record
            if a == b:
                raise ValidationError(f"self-connection {a},{b} is not allowed")
            for end in (a, b):
                if end not in hosts:
                    raise ValidationError(f"connection {a},{b} references unknown host {end!r}")
            pairs.add(canonical_pair(a, b))
        adjacency = {h: set() for h in hosts}
        for a, b in pairs:
            adjacency[a].add(b)
            adjacency[b].add(a)
        object.__setattr__(self, "hosts", hosts)
        object.__setattr__(self, "connections", frozenset(pairs))
        object.__setattr__(self, "_adjacency", {h: frozenset(n) for h, n in adjacency.items()})

    @classmethod
    def from_pairs(cls, pairs: Iterable, hosts: Iterable = (), label: str = "") -> "ConnectionSnapshot":
        """Build a snapshot whose host set is the endpoints plus ``hosts``."""
        pairs = [tuple(p) for p in pairs]
        all_hosts = set(hosts)
        for a, b in pairs:
            all_hosts.add(a)
            all_hosts.add(b)
        return cls(frozenset(all_hosts), frozenset(pairs), label)

    def neighbors(self, host: str) -> frozenset:
        """The connection set of ``host``."""
        try:
            return self._adjacency[host]
        except KeyError:
            raise KeyError(f"unknown host {host!r}") from None

    def degree(self, host: str) -> int:
        return len(self.neighbors(host))

    @property
    def adjacency(self) -> Mapping:
        return self._adjacency

    def restrict(self, hosts: Iterable, label: str | None = None) -> "ConnectionSnapshot":
        """Copy limited to ``hosts``; connections touching other hosts are dropped."""
        keep = frozenset(hosts) & self.hosts
        pairs = frozenset(p for p in self.connections if p[0] in keep and p[1] in keep)
        return ConnectionSnapshot(keep, pairs, self.label if label is None else label)

    def __len__(self):
        return len(self.hosts)


def pair_similarity(snapshot: ConnectionSnapshot, h1: str, h2: str) -> int:
    """Number of hosts that both ``h1`` and ``h2`` have connections with."""
    if h1 == h2:
        raise ValidationError("pair_similarity needs two distinct hosts")
    return len(snapshot.neighbors(h1) & snapshot.neighbors(h2))


def avg_similarity(snapshot: ConnectionSnapshot, host: str, group: Iterable) -> Fraction:
    """Mean pair similarity between ``host`` and the members of ``group``.

    When ``host`` belongs to ``group`` its own term is skipped and the divisor
    is one smaller.
    """
    others = [h for h in set(group) if h != host]
    if not others:
        raise ValidationError("average similarity is undefined for an empty group")
    snapshot.neighbors(host)
    total = sum(pair_similarity(snapshot, host, h) for h in others)
    return Fraction(total, len(others))


class GroupNode(NamedTuple):
    """Stand-in node for a formed group inside a :class:`ConnGraph`."""

    id: int


@dataclass
class ConnGraph:
    """Connectivity graph whose hosts are progressively replaced by group nodes.

    ``host_adjacency`` never changes; ``grouped`` records which hosts have been
    absorbed into which group node.
    """

    host_adjacency: Mapping
    grouped: dict = field(default_factory=dict)

    @property
    def ungrouped(self) -> frozenset:
        return frozenset(h for h in self.host_adjacency if h not in self.grouped)

    @property
    def nodes(self) -> frozenset:
        return self.ungrouped | frozenset(GroupNode(g) for g in self.grouped.values())

    def absorb(self, members: Iterable, group_id: int) -> None:
        members = list(members)
        for h in members:
            if h in self.grouped:
                raise ValidationError(f"host {h!r} already belongs to group {self.grouped[h]}")
            if h not in self.host_adjacency:
                raise KeyError(f"unknown host {h!r}")
        for h in members:
            self.grouped[h] = group_id

    def node_neighbors(self, node) -> frozenset:
        """Neighbors of a host or group node in the current (partly grouped) graph."""
        if isinstance(node, GroupNode):
            hosts = [h for h, g in self.grouped.items() if g == node.id]
        else:
            hosts = [node]
        out = set()
        for h in hosts:
            for n in self.host_adjacency[h]:
                out.add(GroupNode(self.grouped[n]) if n in self.grouped else n)
        out.discard(node)
        return frozenset(out)


def build_conn_graph(snapshot: ConnectionSnapshot) -> ConnGraph:
    return ConnGraph(host_adjacency=snapshot.adjacency)


@dataclass(frozen=True)
class NeighborhoodGraph:
    """Ungrouped hosts joined when they share at least ``k`` neighbors.

    ``weights`` maps canonical host pairs to their common-neighbor count.
    """

    k: int
    nodes: frozenset
    weights: Mapping

    def adjacency(self) -> dict:
        adj = {n: [] for n in self.nodes}
        for a, b in self.weights:
            adj[a].append(b)
            adj[b].append(a)
        for n in adj:
            adj[n].sort()
        return adj


class PairWeights:
    """Common-neighbor counts for every host pair that shares a neighbor.

    Computed once with a sparse integer product and kept sorted by weight,
    heaviest first, so the pairs reaching a threshold form a prefix.
    """

    def __init__(self, snapshot: ConnectionSnapshot):
        self.hosts = sorted(snapshot.hosts)
        self.index = {h: i for i, h in enumerate(self.hosts)}
        n = len(self.hosts)
        if snapshot.connections:
            rows = np.fromiter((self.index[a] for a, _ in snapshot.connections), dtype=np.int64)
            cols = np.fromiter((self.index[b] for _, b in snapshot.connections), dtype=np.int64)
            data = np.ones(2 * len(rows), dtype=np.int64)
            adj = sp.csr_matrix(
                (data, (np.concatenate([rows, cols]), np.concatenate([cols, rows]))), shape=(n, n)
            )
            common = sp.triu(adj @ adj, k=1).tocoo()
            keep = common.data > 0
            u, v, w = common.row[keep], common.col[keep], common.data[keep]
            order = np.lexsort((v, u, -w))
            self.u = u[order].astype(np.int64)
            self.v = v[order].astype(np.int64)
            self.w = w[order].astype(np.int64)
        else:
            self.u = self.v = self.w = np.zeros(0, dtype=np.int64)

    def max_weight(self) -> int:
        return int(self.w[0]) if len(self.w) else 0

    def select(self, k: int, ungrouped: np.ndarray):
        """Index arrays of pairs with weight >= k and both ends ungrouped."""
        end = int(np.searchsorted(-self.w, -k, side="right"))
        u, v, w = self.u[:end], self.v[:end], self.w[:end]
        mask = ungrouped[u] & ungrouped[v]
        return u[mask], v[mask], w[mask]

    def drop_grouped(self, ungrouped: np.ndarray) -> None:
        mask = ungrouped[self.u] & ungrouped[self.v]
        self.u, self.v, self.w = self.u[mask], self.v[mask], self.w[mask]

    def graph(self, k: int, ungrouped: np.ndarray) -> NeighborhoodGraph:
        u, v, w = self.select(k, ungrouped)
        hosts = self.hosts
        weights = {(hosts[a], hosts[b]): int(c) for a, b, c in zip(u.tolist(), v.tolist(), w.tolist())}
        nodes = frozenset(hosts[i] for i in np.flatnonzero(ungrouped).tolist())
        return NeighborhoodGraph(k=k, nodes=nodes, weights=weights)


def build_k_nbh_graph(snapshot: ConnectionSnapshot, conn_graph: ConnGraph, k: int) -> NeighborhoodGraph:
    """k-neighborhood graph over the hosts of ``conn_graph`` not yet grouped.

    Weights always count common neighbors on the original host-level
    adjacency, whether or not those neighbors have been grouped since.
    """
    if int(k) != k or k < 1:
        raise ValidationError(f"k must be a positive integer, got {k!r}")
    pw = PairWeights(snapshot)
    ungrouped = np.array([h not in conn_graph.grouped for h in pw.hosts], dtype=bool)
    return pw.graph(int(k), ungrouped)


def find_bccs(graph: NeighborhoodGraph) -> list[frozenset]:
    """Vertex sets of all biconnected components of ``graph``.

    A lone edge counts as a two-node component; isolated vertices are not
    reported.  Cut vertices show up in every component they belong to.  The
    result is sorted by member tokens so it does not depend on hash order.
    """
    adj = graph.adjacency()
    index: dict = {}
    low: dict = {}
    comps = []
    counter = 0
    for root in sorted(adj):
        if root in index or not adj[root]:
            continue
        index[root] = low[root] = counter
        counter += 1
        edges = []
        stack = [(root, None, iter(adj[root]))]
        while stack:
            v, parent, it = stack[-1]
            descended = False
            for w in it:
                if w == parent:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    edges.append((v, w))
                    stack.append((w, v, iter(adj[w])))
                    descended = True
                    break
                if index[w] < index[v]:
                    low[v] = min(low[v], index[w])
                    edges.append((v, w))
            if descended:
                continue
            stack.pop()
            if not stack:
                continue
            u = stack[-1][0]
            low[u] = min(low[u], low[v])
            if low[v] >= index[u]:
                comp = set()
                while True:
                    e = edges.pop()
                    comp.update(e)
                    if e == (u, v):
                        break
                comps.append(frozenset(comp))
    return sorted(comps, key=sorted)
