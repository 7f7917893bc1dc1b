"""Command-line surface: analyze, sweep, and the per-module subcommands."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .criticality import (
    classify,
    maximal_splitting_pair,
    sharp_critical_pairs,
)
from .extremal import DegenerateInstance
from .linext import VARIANTS, count_extensions, decompose, iter_extensions
from .poset import ParseError, instance_to_json, load_instance
from .ranges import profile
from .report import emit, full_report, render_report_figures, render_sweep_summary
from .sweep import ALL_CHECKS, DEFAULT_MAX_N, CapExceeded, SweepSpec, summarize, sweep
from .transforms import closure, split


def _parser():
    top = argparse.ArgumentParser(prog="stanext", description=__doc__)
    top.add_argument("--version", action="version", version=__version__)
    top.add_argument("--format", choices=("json", "tsv"), default="json")
    top.add_argument("--no-closure", action="store_true",
                     help="analyze the poset as given, without closing it first")
    top.add_argument("--jobs", type=int, default=1)
    top.add_argument("--seed", type=int, default=0, help="sampling seed")
    top.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    sub = top.add_subparsers(dest="command", required=True)

    cmd = sub.add_parser("analyze", help="full report for one instance file")
    cmd.add_argument("path")
    cmd.add_argument("--figures", metavar="DIR", help="render figures into DIR")

    cmd = sub.add_parser("sweep", help="exhaustive or sampled verification")
    cmd.add_argument("--n", type=int, nargs="+", required=True)
    cmd.add_argument("--k", type=int, nargs="+")
    cmd.add_argument("--positions", type=int, nargs="+",
                     help="fix the position vector instead of sweeping all")
    cmd.add_argument("--ell", type=int, help="fix the moving index")
    cmd.add_argument("--dedup", choices=("canonical", "labeled"), default="canonical")
    cmd.add_argument("--checks", nargs="+", choices=ALL_CHECKS, default=list(ALL_CHECKS))
    cmd.add_argument("--sample", type=int,
                     help="random instances instead of exhaustive enumeration")
    cmd.add_argument("--exhaustive", action="store_true",
                     help="force full enumeration past the desk-scale sizes")
    cmd.add_argument("--emit-all", action="store_true",
                     help="emit every finding, not just anomalies")
    cmd.add_argument("--figures", metavar="DIR")

    cmd = sub.add_parser("linext", help="list or count pinned extensions")
    cmd.add_argument("action", choices=("list", "count"))
    cmd.add_argument("path")
    cmd.add_argument("--variant", choices=VARIANTS)

    cmd = sub.add_parser("criticality", help="criticality class of an instance")
    cmd.add_argument("action", choices=("classify",))
    cmd.add_argument("path")

    cmd = sub.add_parser("transform", help="closure or split of an instance")
    cmd.add_argument("action", choices=("closure", "split"))
    cmd.add_argument("path")
    cmd.add_argument("--pair", type=int, nargs=2, metavar=("R", "S"))

    cmd = sub.add_parser("range", help="placement bounds per element")
    cmd.add_argument("action", choices=("profile",))
    cmd.add_argument("path")

    cmd = sub.add_parser("geometry", help="verified extreme directions")
    cmd.add_argument("action", choices=("extreme-dirs",))
    cmd.add_argument("path")
    return top


def _load(path):
    try:
        return load_instance(path)
    except ParseError as exc:
        where = ""
        if exc.line is not None:
            where = f" (line {exc.line}, column {exc.column})"
        print(f"parse error{where}: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _cmd_analyze(args):
    inst = _load(args.path)
    doc = full_report(inst, auto_closure=not args.no_closure)
    emit(doc, args.format)
    if args.figures:
        for path in render_report_figures(inst, doc, args.figures):
            print(f"wrote {path}", file=sys.stderr)
    return 0


DEFAULT_N7_SAMPLE = 100_000


def _cmd_sweep(args):
    sample = args.sample
    if sample is None and not args.exhaustive and any(n >= 7 for n in args.n):
        # seven elements means millions of labeled posets: sample by default
        sample = DEFAULT_N7_SAMPLE
        print(
            f"n >= 7 without --exhaustive: sampling {sample} instances "
            f"(seed {args.seed})",
            file=sys.stderr,
        )
    spec = SweepSpec(
        n_values=tuple(args.n),
        k_values=tuple(args.k) if args.k else None,
        positions=tuple(args.positions) if args.positions else None,
        ell=args.ell,
        dedup=args.dedup,
        checks=tuple(args.checks),
        sample=sample,
        seed=args.seed,
        max_n=args.max_n,
        jobs=args.jobs,
        emit_all=args.emit_all,
    )
    anomalies = 0
    findings = []
    try:
        for finding in sweep(spec):
            findings.append(finding)
            if finding.anomaly:
                anomalies += 1
            if finding.anomaly or spec.emit_all:
                print(json.dumps(finding.as_json()))
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 2
    summary = summarize(findings)
    print(json.dumps({"summary": summary}))
    if args.figures:
        import os

        os.makedirs(args.figures, exist_ok=True)
        path = os.path.join(args.figures, "sweep_summary.png")
        render_sweep_summary(summary, path)
        print(f"wrote {path}", file=sys.stderr)
    return 1 if anomalies else 0


def _cmd_linext(args):
    inst = _load(args.path)
    p, c = inst.poset, inst.config
    variants = (args.variant,) if args.variant else VARIANTS
    if args.action == "list":
        for v in variants:
            for place in iter_extensions(p, c, v):
                print(inst.word(place))
        return 0
    doc = {v: count_extensions(p, c, v) for v in VARIANTS}
    if c.ell is not None:
        doc["table"] = decompose(p, c).as_json()
    emit(doc, args.format)
    return 0


def _cmd_criticality(args):
    inst = _load(args.path)
    p, c = inst.poset, inst.config
    try:
        tag = classify(p, c)
    except DegenerateInstance:
        tag = None
    maximal = maximal_splitting_pair(p, c) if tag else None
    doc = {
        "class": tag,
        "sharp_critical_pairs": [list(pair) for pair in sharp_critical_pairs(p, c)]
        if tag
        else [],
        "maximal_pair": list(maximal) if maximal else None,
    }
    emit(doc, args.format)
    return 0


def _cmd_transform(args):
    inst = _load(args.path)
    p, c = inst.poset, inst.config
    if args.action == "closure":
        result = closure(p, c)
        from .poset import Instance

        doc = {
            "instance": instance_to_json(Instance(result.closed, c, inst.labels)),
            "added_relations": [list(pair) for pair in result.added_relations],
        }
        emit(doc, args.format)
        return 0
    if not args.pair:
        print("split needs --pair R S", file=sys.stderr)
        return 2
    result = split(p, c, tuple(args.pair))
    from .poset import Instance

    doc = {
        "case": result.case,
        "part1": instance_to_json(Instance(*result.part1)),
        "part2": instance_to_json(Instance(*result.part2)),
        "provenance": {
            "part1": {new: inst.label(old) for new, old in result.to_parent_1.items()},
            "part2": {new: inst.label(old) for new, old in result.to_parent_2.items()},
            "compressed": result.compressed,
            "compressed_members": [
                inst.label(old)
                for old in sorted(set(range(p.n)) - set(result.to_parent_2.values()))
            ],
        },
    }
    emit(doc, args.format)
    return 0


def _cmd_range(args):
    inst = _load(args.path)
    doc = {
        inst.label(y): row for y, row in profile(inst.poset, inst.config).items()
    }
    emit(doc, args.format)
    return 0


def _cmd_geometry(args):
    inst = _load(args.path)
    p, c = inst.poset, inst.config
    from .geometry import certified_directions, is_extreme

    if c.ell is None:
        emit([], args.format)
        return 0
    maximal = maximal_splitting_pair(p, c)
    doc = [
        {
            "direction": list(d),
            "clauses": clauses,
            "passes_rank_test": is_extreme(p, c, d),
        }
        for d, clauses in sorted(
            certified_directions(p, c, maximal_pair=maximal).items(),
            key=lambda kv: str(kv[0]),
        )
    ]
    emit(doc, args.format)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "sweep": _cmd_sweep,
    "linext": _cmd_linext,
    "criticality": _cmd_criticality,
    "transform": _cmd_transform,
    "range": _cmd_range,
    "geometry": _cmd_geometry,
}


def main(argv=None):
    from .poset import PosetError

    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PosetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
