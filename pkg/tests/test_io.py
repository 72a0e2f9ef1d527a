import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hostroles import ConnectionSnapshot, ParseError, ValidationError, figure1, group_hosts, roles
from hostroles.evaluation import RandCounts
from hostroles.io import (
    dumps,
    format_rand_csv,
    format_report,
    parse_edge_list,
    partitioning_document,
    read_partitioning,
    write_edge_list,
)
from hostroles.sweep import format_sweep_csv, sweep, sweep_points
from hostroles.synth import SynthSpec, generate, ground_truth, synth_generate

GOLDEN = Path(__file__).parent / "golden"


# edge lists

def test_parse_basic():
    s = parse_edge_list("a,b\nb,c")
    assert len(s.hosts) == 3 and len(s.connections) == 2


def test_parse_dedups_reversed_pair():
    assert len(parse_edge_list("a,b\nb,a\n").connections) == 1


def test_parse_self_pair_reports_line():
    with pytest.raises(ParseError, match="line 1"):
        parse_edge_list("a,a")
    with pytest.raises(ValidationError, match="line 3"):
        parse_edge_list("a,b\n# note\nc,c\n")


@pytest.mark.parametrize("text,line", [("a,b,c", 1), ("a,b\nonly", 2), ("a,\n", 1), ("a b,c", 1), ("#host\n", 1)])
def test_parse_malformed(text, line):
    with pytest.raises(ParseError, match=f"line {line}:"):
        parse_edge_list(text)


def test_parse_comments_blank_lines_and_host_directive():
    s = parse_edge_list("# header\n\n a , b \n#host lonely\n#hostile comment\n")
    assert s.hosts == {"a", "b", "lonely"}
    assert s.degree("lonely") == 0


def test_write_edge_list_keeps_isolated_hosts():
    s = ConnectionSnapshot.from_pairs([("b", "a")], hosts=["z"])
    text = write_edge_list(s)
    assert text == "a,b\n#host z\n"
    assert parse_edge_list(text) == s


def test_parse_golden_figure1():
    s = parse_edge_list((GOLDEN / "figure1_edges.csv").read_text())
    want = figure1(3, 3)[0]
    assert (s.hosts, s.connections) == (want.hosts, want.connections)
    assert parse_edge_list("a,b", label="x").label == "x"


snapshots = st.lists(
    st.tuples(st.sampled_from("abcdefgh"), st.sampled_from("abcdefgh")).filter(lambda t: t[0] != t[1]), max_size=20
).map(lambda ps: ConnectionSnapshot.from_pairs(ps, hosts=["iso"]))


@settings(max_examples=60, deadline=None)
@given(snapshots)
def test_edge_list_round_trip_is_idempotent(s):
    once = parse_edge_list(write_edge_list(s))
    assert once == s
    assert write_edge_list(once) == write_edge_list(s)


# partitioning documents

def test_document_round_trip():
    s, _ = roles(5, (4, 9), seed=2)
    p = group_hosts(s)
    text = dumps(partitioning_document(p, s))
    back, doc = read_partitioning(text)
    assert back == p
    assert text.endswith("\n")
    assert list(json.loads(text)) == sorted(json.loads(text))
    assert dumps(partitioning_document(back, s)) == text


def test_document_contents_figure1():
    s, _ = figure1(3, 3)
    doc = partitioning_document(group_hosts(s), s)
    assert doc["config"] == {"alpha": 0.6, "beta": 0.5, "s_hi": 80.0, "s_lo": 55.0, "k_hi": 7, "merge": True,
                             "similarity": "jaccard"}
    mw = doc["groups"][0]
    assert mw == {"id": 0, "k_value": 6, "members": ["Mail", "Web"], "avg_connections": 6.0}
    assert {"id_a": 0, "id_b": 1, "avg_connections": 3.0} in doc["inter_group"]
    assert {"id_a": 1, "id_b": 0, "avg_connections": 2.0} in doc["inter_group"]
    assert doc["host_connections"]["Mail"] == 6


def test_empty_document():
    s = ConnectionSnapshot.from_pairs([])
    doc = partitioning_document(group_hosts(s), s)
    assert doc["groups"] == [] and doc["inter_group"] == []
    assert format_report(doc) == ""


@pytest.mark.parametrize("text", ["not json", "[]", '{"groups": [{"id": 0}]}', '{"groups": [{"id": "x", "k_value": 0, "members": ["a"]}]}'])
def test_read_rejects_malformed(text):
    with pytest.raises(ValidationError):
        read_partitioning(text)


def test_read_rejects_overlapping_groups():
    text = '{"groups": [{"id": 0, "k_value": 0, "members": ["a"]}, {"id": 1, "k_value": 0, "members": ["a"]}]}'
    with pytest.raises(ValidationError, match="groups 0 and 1"):
        read_partitioning(text)


# reports and CSV

def test_report_golden():
    s, _ = figure1(3, 3)
    doc = partitioning_document(group_hosts(s), s)
    assert format_report(doc) == (GOLDEN / "figure1_report.txt").read_text()


def test_report_singleton_group():
    s = ConnectionSnapshot.from_pairs([], hosts=["solo"])
    doc = partitioning_document(group_hosts(s), s)
    assert format_report(doc) == "Group 0 (0)\n  solo 0\n"


def test_rand_csv():
    assert format_rand_csv(RandCounts(452, 710, 133, 3856)) == "ss,sd,ds,dd,r\n452,710,133,3856,0.8363\n"
    assert format_rand_csv(RandCounts(0, 3, 0, 0)).endswith(",0.0000\n")


# sweeps

def test_sweep_golden():
    s, _ = figure1(3, 3)
    rows = sweep(s, "s_lo", 5, 75, 10)
    assert format_sweep_csv("s_lo", rows) == (GOLDEN / "figure1_sweep.csv").read_text()


def test_sweep_matches_independent_runs():
    from hostroles import MergeConfig
    s, _ = roles(4, (5, 8), seed=1, share_prob=0.3)
    for v, n in sweep(s, "s_lo", 10, 70, 20):
        assert n == len(group_hosts(s, merge=MergeConfig(s_lo=v)))
    for v, n in sweep(s, "k_hi", 0, 6, 3):
        assert n == len(group_hosts(s, merge=MergeConfig(k_hi=v)))


def test_sweep_single_point_and_points():
    s, _ = figure1(3, 3)
    assert len(sweep(s, "k_hi", 4, 4, 1)) == 1
    assert sweep_points(0, 1, 0.1)[-1] == 1.0
    assert len(sweep_points(0, 1, 0.1)) == 11


def test_k_hi_irrelevant_when_nothing_reaches_s_lo():
    s, _ = figure1(3, 3)
    counts = {n for _, n in sweep(s, "k_hi", 0, 10, 1)}
    # every pair is at most 50% similar, below s_lo = 55 and s_hi = 80
    assert counts == {5}


@pytest.mark.parametrize("args", [("s_lo", 50, 90, 10), ("s_lo", 5, 1, 1), ("s_lo", 0, 10, 0),
                                  ("k_hi", 0, 3, 0.5), ("alpha", 0, 1, 1)])
def test_sweep_validation(args):
    s, _ = figure1(3, 3)
    with pytest.raises(ValidationError):
        sweep(s, *args)


# synthetic generators

def test_figure1_size():
    s, truth = figure1(3, 3)
    assert len(s.hosts) == 10
    assert len(s.connections) == 18
    assert len(truth) == 5
    truth.check_covers(s)


def test_figure1_bad_parameters():
    with pytest.raises(ValidationError):
        figure1(0, 3)
    with pytest.raises(ValidationError):
        figure1(3, 3, "other")


def test_roles_deterministic_and_covered():
    a, ta = roles(6, seed=9)
    b, tb = roles(6, seed=9)
    assert a == b and ta == tb
    ta.check_covers(a)
    assert roles(6, seed=10)[0] != a


def test_roles_zero_roles_is_empty():
    s, t = roles(0)
    assert len(s.hosts) == 0 and len(t) == 0


def test_roles_validation():
    with pytest.raises(ValidationError):
        roles(3, (5, 2))
    with pytest.raises(ValidationError):
        roles(3, share_prob=1.5)


def test_generator_dispatch():
    spec = SynthSpec(generator="roles", n_roles=3, seed=4)
    assert synth_generate(spec) == generate(spec)[0]
    assert ground_truth(spec) == generate(spec)[1]
    with pytest.raises(ValidationError):
        generate(SynthSpec(generator="mesh"))
