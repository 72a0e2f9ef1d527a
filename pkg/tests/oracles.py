"""Slow, straightforward reference implementations used only by the tests.

None of these import the algorithmic modules of the package; they work
from plain dicts and sets so that agreement with the library means
something.
"""
from __future__ import annotations

import itertools
from fractions import Fraction


def adjacency(nodes, edges):
    adj = {n: set() for n in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _component(adj, start, banned):
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen and w != banned:
                seen.add(w)
                todo.append(w)
    return seen


def bcc_bruteforce(nodes, edges):
    """Blocks via the pair relation "adjacent, or joined by two vertex-disjoint paths".

    By Menger, two non-adjacent vertices have two internally disjoint paths
    iff they are connected and no single third vertex separates them.  The
    blocks are then the maximal sets of pairwise related vertices.
    """
    nodes = sorted(nodes)
    adj = adjacency(nodes, edges)
    reach = {x: {v: _component(adj, v, x) for v in nodes if v != x} for x in nodes}
    full = {v: _component(adj, v, None) for v in nodes}

    def related(u, v):
        if v in adj[u]:
            return True
        if v not in full[u]:
            return False
        return all(v in reach[x][u] for x in nodes if x not in (u, v))

    rel = {(u, v) for u, v in itertools.combinations(nodes, 2) if related(u, v)}
    cliques = []
    n = len(nodes)
    for mask in range(1, 1 << n):
        members = [nodes[i] for i in range(n) if mask >> i & 1]
        if len(members) < 2:
            continue
        if all((a, b) in rel for a, b in itertools.combinations(members, 2)):
            cliques.append(frozenset(members))
    maximal = [c for c in cliques if not any(c < d for d in cliques)]
    return sorted(maximal, key=sorted)


def common_neighbors(adj, a, b):
    return len(adj[a] & adj[b])


def resolve(bccs):
    ranked = sorted(bccs, key=lambda b: (-len(b), sorted(b)))
    taken = set()
    out = []
    for b in ranked:
        rest = set(b) - taken
        taken |= rest
        if len(rest) >= 2:
            out.append(frozenset(rest))
        else:
            taken -= rest
    return sorted(out, key=sorted)


def naive_formation(hosts, edges, alpha=Fraction(3, 5)):
    """Replay of the descending-k loop with fresh pairwise intersections every step.

    Returns ``(groups, snapshots)`` where ``groups`` is a list of
    ``(id, k, members)`` and ``snapshots`` records the k-graph edges seen
    when each BCC group was created.
    """
    adj = adjacency(hosts, edges)
    deg = {h: len(adj[h]) for h in hosts}
    ungrouped = set(hosts)
    groups = []
    witness = {}
    kmax = max(deg.values(), default=0)
    for k in range(kmax, 0, -1):
        while True:
            nodes = sorted(ungrouped)
            kedges = [(a, b) for a, b in itertools.combinations(nodes, 2) if common_neighbors(adj, a, b) >= k]
            if not kedges:
                break
            touched = {x for e in kedges for x in e}
            sets = resolve(bcc_bruteforce(touched, kedges) if len(touched) <= 12 else _bcc_tarjan_free(touched, kedges))
            if not sets:
                break
            for s in sets:
                gid = len(groups)
                groups.append((gid, k, frozenset(s)))
                witness[gid] = kedges
                ungrouped -= s
        for h in sorted(ungrouped):
            if k < alpha * deg[h]:
                groups.append((len(groups), k, frozenset([h])))
                ungrouped.discard(h)
    for h in sorted(ungrouped):
        groups.append((len(groups), 0, frozenset([h])))
    return groups, witness


def _bcc_tarjan_free(nodes, edges):
    """Edge-equivalence blocks for graphs too large for the subset oracle.

    Two edges are in one block iff they lie on a common cycle; found here by
    checking, for every edge (u, v), which other edges stay connected to it
    after deleting each single vertex.  Quadratic-ish but independent.
    """
    edges = [tuple(sorted(e)) for e in edges]
    adj = adjacency(nodes, edges)
    parent = list(range(len(edges)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # edges sharing a vertex x are in one block iff their far ends connect avoiding x
    for x in nodes:
        inc = [i for i, e in enumerate(edges) if x in e]
        for i, j in itertools.combinations(inc, 2):
            a = edges[i][0] if edges[i][1] == x else edges[i][1]
            b = edges[j][0] if edges[j][1] == x else edges[j][1]
            if b in _component(adj, a, x):
                parent[find(i)] = find(j)
    blocks = {}
    for i, e in enumerate(edges):
        blocks.setdefault(find(i), set()).update(e)
    return sorted((frozenset(b) for b in blocks.values()), key=sorted)


def naive_merge(groups, edges, beta=Fraction(1, 2), s_hi=80, s_lo=55, k_hi=7):
    """Greedy merging that rebuilds every group profile from scratch each round.

    ``groups`` is a list of ``(id, k, members)``.  Similarity is the weighted
    Jaccard of per-member connection profiles over common neighbor groups.
    """
    hosts = sorted({h for _, _, m in groups for h in m})
    adj = adjacency(hosts, edges)
    deg = {h: len(adj[h]) for h in hosts}
    cur = {gid: (k, set(m)) for gid, k, m in groups}
    beta, s_hi, s_lo = Fraction(beta), Fraction(s_hi), Fraction(s_lo)
    while True:
        owner = {h: g for g, (_, m) in cur.items() for h in m}
        cp = {}
        for a, b in edges:
            ga, gb = owner[a], owner[b]
            if ga != gb:
                cp[(ga, gb)] = cp.get((ga, gb), 0) + 1
                cp[(gb, ga)] = cp.get((gb, ga), 0) + 1
        nbr = {g: {y for (x, y) in cp if x == g} for g in cur}

        def sim(a, b):
            sa, sb = len(cur[a][1]), len(cur[b][1])
            c1 = Fraction(sum(cp[(a, n)] for n in nbr[a]), sa)
            c2 = Fraction(sum(cp[(b, n)] for n in nbr[b]), sb)
            if c1 == 0 or c2 == 0:
                return Fraction(0)
            s = sum((min(Fraction(cp[(a, n)], sa), Fraction(cp[(b, n)], sb))
                     for n in (nbr[a] & nbr[b]) - {a, b}), Fraction(0))
            return 100 * s / (c1 + c2 - s)

        best = None
        for a, b in itertools.combinations(sorted(cur), 2):
            (ka, ma), (kb, mb) = cur[a], cur[b]
            a1 = Fraction(sum(deg[h] for h in ma), len(ma))
            a2 = Fraction(sum(deg[h] for h in mb), len(mb))
            if abs(a1 - a2) > beta * max(a1, a2):
                continue
            s = sim(a, b)
            need = s_hi if max(ka, kb) >= k_hi else s_lo
            if s < need or (s == 0 and s_lo != 0):
                continue
            if best is None or s > best[0]:
                best = (s, a, b)
        if best is None:
            break
        _, a, b = best
        members = cur[a][1] | cur.pop(b)[1]
        cur[a] = (min(deg[h] for h in members), members)
    return sorted((g, k, frozenset(m)) for g, (k, m) in cur.items())


def rand_pairs(p_star_labels, p_labels):
    """O(n^2) pair classification; arguments map host -> group label."""
    ss = sd = ds = dd = 0
    for a, b in itertools.combinations(sorted(p_star_labels), 2):
        same_star = p_star_labels[a] == p_star_labels[b]
        same_p = p_labels[a] == p_labels[b]
        if same_star and same_p:
            ss += 1
        elif same_star:
            sd += 1
        elif same_p:
            ds += 1
        else:
            dd += 1
    return ss, sd, ds, dd
