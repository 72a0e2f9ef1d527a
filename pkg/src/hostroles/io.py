"""Reading and writing edge lists, partitioning documents and reports.

Every writer produces UTF-8 text that ends in a newline and is byte-stable:
the same inputs always give the same bytes.  JSON documents use sorted keys.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable

from .correlation import CorrelationResult
from .errors import ParseError, ValidationError
from .evaluation import DiffReport, RandCounts
from .formation import FormationConfig, Group, Partitioning
from .graph import ConnectionSnapshot, check_host_id
from .merging import MergeConfig, build_group_graph

__all__ = [
    "format_rand_csv",
    "format_report",
    "parse_edge_list",
    "partitioning_document",
    "read_partitioning",
    "correlation_document",
    "dumps",
    "write_edge_list",
]

HOST_DIRECTIVE = "#host"


def parse_edge_list(text: str, label: str = "") -> ConnectionSnapshot:
    """Parse ``src,dst`` lines.

    Blank lines and lines starting with ``#`` are skipped, except
    ``#host <id>`` which declares a host that may have no connections.
    Duplicate pairs, in either order, collapse to one connection.
    """
    pairs = set()
    declared = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line.split()
            if parts[0] == HOST_DIRECTIVE:
                if len(parts) != 2:
                    raise ParseError(f"expected '#host <id>', got {raw!r}", lineno)
                declared.add(parts[1])
            continue
        fields = line.split(",")
        if len(fields) != 2:
            raise ParseError(f"expected 'src,dst', got {raw!r}", lineno)
        a, b = (f.strip() for f in fields)
        try:
            check_host_id(a)
            check_host_id(b)
        except ValidationError as exc:
            raise ParseError(str(exc), lineno) from None
        if a == b:
            raise ParseError(f"self-connection {a},{b} is not allowed", lineno)
        pairs.add((a, b) if a < b else (b, a))
    return ConnectionSnapshot.from_pairs(sorted(pairs), hosts=declared, label=label)


def write_edge_list(snapshot: ConnectionSnapshot) -> str:
    """Canonical edge list; isolated hosts become ``#host`` lines."""
    lines = [f"{a},{b}" for a, b in sorted(snapshot.connections)]
    lines += [f"{HOST_DIRECTIVE} {h}" for h in sorted(snapshot.hosts) if not snapshot.degree(h)]
    return "".join(line + "\n" for line in lines)


def dumps(document) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _num(x: Fraction) -> float:
    return round(float(x), 6)


def config_echo(formation: FormationConfig | None = None, merge: MergeConfig | None = None,
                merged: bool = True) -> dict:
    formation = formation or FormationConfig()
    merge = merge or MergeConfig()
    return {
        "alpha": formation.alpha,
        "beta": merge.beta,
        "s_hi": merge.s_hi,
        "s_lo": merge.s_lo,
        "k_hi": merge.k_hi,
        "merge": merged,
        "similarity": merge.similarity,
    }


def partitioning_document(partitioning: Partitioning, snapshot: ConnectionSnapshot,
                          config: dict | None = None) -> dict:
    """Document for a grouping run.

    Besides the groups it records, for every pair of neighbor groups in both
    directions, the mean number of connections a member of ``id_a`` has with
    ``id_b``, and every host's connection count so reports can be rebuilt
    from the document alone.
    """
    gg = build_group_graph(partitioning, snapshot)
    groups = []
    for g in partitioning.groups:
        total = sum(snapshot.degree(h) for h in g.members)
        groups.append({
            "id": g.id,
            "k_value": g.k_value,
            "members": sorted(g.members),
            "avg_connections": _num(Fraction(total, len(g))),
        })
    inter = []
    for a in sorted(gg.groups):
        for b in sorted(gg.neighbor_sets[a]):
            inter.append({"id_a": a, "id_b": b, "avg_connections": _num(Fraction(gg.cp[(a, b)], len(gg.groups[a])))})
    return {
        "snapshot_label": partitioning.snapshot_label or snapshot.label,
        "config": config if config is not None else config_echo(),
        "groups": groups,
        "inter_group": inter,
        "host_connections": {h: snapshot.degree(h) for h in sorted(snapshot.hosts)},
    }


def read_partitioning(text: str) -> tuple[Partitioning, dict]:
    """Parse a partitioning document; returns the partitioning and the raw document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a partitioning document: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("groups"), list):
        raise ValidationError("partitioning document needs a 'groups' list")
    groups = []
    for entry in doc["groups"]:
        try:
            gid, k, members = entry["id"], entry["k_value"], entry["members"]
        except (KeyError, TypeError):
            raise ValidationError(f"group entry needs id, k_value and members: {entry!r}") from None
        if not isinstance(gid, int) or not isinstance(k, int) or not isinstance(members, list):
            raise ValidationError(f"malformed group entry {entry!r}")
        for h in members:
            check_host_id(h)
        groups.append(Group(gid, k, frozenset(members)))
    return Partitioning(tuple(groups), doc.get("snapshot_label", "")), doc


def correlation_document(result: CorrelationResult, renamed: dict, diff: DiffReport | None = None) -> dict:
    """``renamed`` maps each current group id to the id it was given."""
    doc = {
        "mapping": [
            {"current": t, "prior": p, "matched_by": result.matched_by.get(t, "")}
            for t, p in sorted(result.mapping.items())
        ],
        "new_groups": [{"current": t, "assigned": renamed[t]} for t in sorted(result.new_groups)],
        "retired_groups": sorted(result.retired_groups),
        "h_same": sorted(result.h_same),
    }
    if diff is not None:
        doc["changes"] = [
            {"prior": c.prev_id, "current": c.curr_id, "added": list(c.added), "removed": list(c.removed),
             "k_before": c.k_before, "k_after": c.k_after}
            for c in diff.changed
        ]
    return doc


def format_rand_csv(counts: RandCounts) -> str:
    return f"ss,sd,ds,dd,r\n{counts.ss},{counts.sd},{counts.ds},{counts.dd},{counts.r:.4f}\n"


def format_report(doc: dict) -> str:
    """Plain-text group listing from a partitioning document.

    Each group starts with ``Group <id> (<K>)``, lists its members with their
    connection counts, then one ``comm with <id>: <avg>`` line per neighbor
    group.
    """
    degree = doc.get("host_connections", {})
    comm: dict = {}
    for e in doc.get("inter_group", []):
        comm.setdefault(e["id_a"], []).append((e["id_b"], e["avg_connections"]))
    out = []
    for g in sorted(doc.get("groups", []), key=lambda g: g["id"]):
        out.append(f"Group {g['id']} ({g['k_value']})")
        for h in sorted(g["members"]):
            out.append(f"  {h} {degree.get(h, '?')}")
        for other, avg in sorted(comm.get(g["id"], [])):
            out.append(f"  comm with {other}: {avg:.1f}")
    return "".join(line + "\n" for line in out)


def lines_to_text(lines: Iterable[str]) -> str:
    return "".join(line + "\n" for line in lines)
