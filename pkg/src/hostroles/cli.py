"""Command line: ``hostroles group|correlate|evaluate|report|sweep|synth``.

Exit codes: 0 success, 1 invalid input, 2 file errors, 3 snapshots that
cannot be aligned.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .correlation import CorrelationConfig, apply_correlation, correlate, correlated_ids
from .errors import HostRolesError
from .evaluation import partition_diff, rand_statistic
from .formation import FormationConfig
from .io import (
    config_echo,
    correlation_document,
    dumps,
    format_rand_csv,
    format_report,
    parse_edge_list,
    partitioning_document,
    read_partitioning,
    write_edge_list,
)
from .merging import MergeConfig
from .pipeline import group_hosts
from .sweep import SWEEP_PARAMS, format_sweep_csv, sweep
from .synth import SynthSpec, generate

log = logging.getLogger("hostroles")

EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    """Usage errors count as invalid input (exit 1); 2 is reserved for file errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _label(path: str) -> str:
    return "stdin" if path == "-" else Path(path).name


def _snapshot(path: str):
    return parse_edge_list(_read(path), label=_label(path))


def _configs(args):
    formation = FormationConfig(alpha=args.alpha)
    merge = MergeConfig(beta=args.beta, s_hi=args.s_hi, s_lo=args.s_lo, k_hi=args.k_hi, similarity=args.similarity)
    return formation, merge


def cmd_group(args) -> int:
    snapshot = _snapshot(args.edges)
    formation, merge = _configs(args)
    p = group_hosts(snapshot, formation, merge, skip_merge=args.no_merge)
    doc = partitioning_document(p, snapshot, config_echo(formation, merge, not args.no_merge))
    _write(args.output, dumps(doc))
    return 0


def cmd_correlate(args) -> int:
    prev = _snapshot(args.prev_edges)
    p_prev, _ = read_partitioning(_read(args.prev_partitioning))
    curr = _snapshot(args.curr_edges)
    formation, merge = _configs(args)
    p_curr = group_hosts(curr, formation, merge, skip_merge=args.no_merge)
    cfg = CorrelationConfig(t_hi=args.t_hi, sim_threshold=args.sim_threshold, step2_threshold=args.step2_threshold)
    result = correlate((prev, p_prev), (curr, p_curr), cfg)
    renamed_p = apply_correlation(p_curr, result, p_prev)
    renamed = correlated_ids(p_curr, result, p_prev)
    diff = partition_diff(p_prev, p_curr, result)
    part_doc = partitioning_document(renamed_p, curr, config_echo(formation, merge, not args.no_merge))
    corr_doc = correlation_document(result, renamed, diff)
    corr_out = args.correlation_output
    to_stdout = (args.output in (None, "-")) and (corr_out in (None, "-"))
    if to_stdout:
        _write(None, dumps({"partitioning": part_doc, "correlation": corr_doc}))
        return 0
    _write(args.output, dumps(part_doc))
    _write(corr_out, dumps(corr_doc))
    return 0


def cmd_evaluate(args) -> int:
    p, _ = read_partitioning(_read(args.partitioning))
    truth, _ = read_partitioning(_read(args.truth))
    _write(args.output, format_rand_csv(rand_statistic(p, truth)))
    return 0


def cmd_report(args) -> int:
    _, doc = read_partitioning(_read(args.partitioning))
    _write(args.output, format_report(doc))
    return 0


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def cmd_sweep(args) -> int:
    snapshot = _snapshot(args.edges)
    formation, merge = _configs(args)
    rows = sweep(snapshot, args.param, args.start, args.stop, args.step, formation, merge)
    _write(args.output, format_sweep_csv(args.param, rows))
    return 0


def cmd_synth(args) -> int:
    spec = SynthSpec(
        generator=args.generator, m=args.m, n=args.n, variant=args.variant,
        n_roles=args.roles, hosts_per_role=(args.hosts_min, args.hosts_max),
        servers_per_role=args.servers, share_prob=args.share_prob,
        keep_prob=args.keep_prob, noise_prob=args.noise_prob, seed=args.seed,
    )
    snapshot, truth = generate(spec)
    _write(args.output, write_edge_list(snapshot))
    if args.truth:
        _write(args.truth, dumps(partitioning_document(truth, snapshot, {})))
    return 0


def _grouping_flags(p: argparse.ArgumentParser) -> None:
    d_f, d_m = FormationConfig(), MergeConfig()
    g = p.add_argument_group("grouping")
    g.add_argument("--alpha", type=float, default=d_f.alpha)
    g.add_argument("--beta", type=float, default=d_m.beta)
    g.add_argument("--s-hi", type=float, default=d_m.s_hi)
    g.add_argument("--s-lo", type=float, default=d_m.s_lo)
    g.add_argument("--k-hi", type=int, default=d_m.k_hi)
    g.add_argument("--similarity", choices=("jaccard", "neighbor_host"), default=d_m.similarity)
    g.add_argument("--no-merge", action="store_true", help="stop after group formation")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hostroles", description="Classify hosts into roles from connection data.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    parser.add_argument("--seed", type=int, default=0, help="seed for synth")
    parser.add_argument("-v", "--verbose", action="store_true")
    common = _Parser(add_help=False)
    common.add_argument("--output", "-o", default=argparse.SUPPRESS, help="output file (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", parents=[common], help="group hosts of an edge list")
    p.add_argument("edges")
    _grouping_flags(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("correlate", parents=[common], help="group a new edge list and keep prior group ids")
    p.add_argument("prev_edges")
    p.add_argument("prev_partitioning")
    p.add_argument("curr_edges")
    _grouping_flags(p)
    d_c = CorrelationConfig()
    p.add_argument("--t-hi", type=float, default=d_c.t_hi)
    p.add_argument("--sim-threshold", type=float, default=d_c.sim_threshold)
    p.add_argument("--step2-threshold", type=float, default=d_c.step2_threshold)
    p.add_argument("--correlation-output", default=None, help="file for the correlation document")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("evaluate", parents=[common], help="Rand statistic against a reference partitioning")
    p.add_argument("partitioning")
    p.add_argument("truth")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", parents=[common], help="text report of a partitioning document")
    p.add_argument("partitioning")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("sweep", parents=[common], help="group counts over a threshold range")
    p.add_argument("edges")
    p.add_argument("--param", choices=SWEEP_PARAMS, default="s_lo")
    p.add_argument("--start", type=_number, required=True)
    p.add_argument("--stop", type=_number, required=True)
    p.add_argument("--step", type=_number, default=1)
    _grouping_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic edge list")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--generator", choices=("figure1", "roles"), default="figure1")
    p.add_argument("--m", type=int, default=3, help="figure1 sales hosts")
    p.add_argument("--n", type=int, default=3, help="figure1 engineering hosts")
    p.add_argument("--variant", choices=("standard", "modified"), default="standard")
    p.add_argument("--roles", type=int, default=10)
    p.add_argument("--hosts-min", type=int, default=20)
    p.add_argument("--hosts-max", type=int, default=30)
    p.add_argument("--servers", type=int, default=2)
    p.add_argument("--share-prob", type=float, default=0.02)
    p.add_argument("--keep-prob", type=float, default=0.9)
    p.add_argument("--noise-prob", type=float, default=0.05)
    p.add_argument("--truth", default=None, help="also write the reference partitioning document here")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except HostRolesError as exc:
        print(f"hostroles: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hostroles: error: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "), file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
